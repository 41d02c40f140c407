#include "fracridge/types.hpp"

#include "fracridge/error.hpp"

#include <cmath>

namespace fracridge {

void require_finite(const Matrix& m, const std::string& what) {
    if (!m.allFinite()) throw InvalidInput(what + " contains non-finite values");
}

DesignMatrix::DesignMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1)
        throw InvalidInput("design matrix must have at least one row and one column");
    require_finite(values_, "design matrix");
}

TargetBlock::TargetBlock(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1)
        throw InvalidInput("target block must have at least one row and one column");
    require_finite(values_, "target block");
}

FractionGrid::FractionGrid(std::vector<double> fractions) : fractions_(std::move(fractions)) {
    if (fractions_.empty()) throw InvalidInput("fraction grid is empty");
    for (std::size_t i = 0; i < fractions_.size(); ++i) {
        const double g = fractions_[i];
        if (!(g >= 0.0 && g <= 1.0))
            throw InvalidInput("fraction " + std::to_string(g) + " is outside [0, 1]");
        if (i > 0 && !(g > fractions_[i - 1]))
            throw InvalidInput("fractions must be strictly increasing");
    }
}

FractionGrid FractionGrid::range(double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw InvalidInput("fraction step must be positive");
    if (!(stop >= start)) throw InvalidInput("fraction range stop precedes start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> values;
    values.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        // Snap to 12 decimals so 0.05 * 20 lands on exactly 1.0.
        const double v = start + static_cast<double>(k) * step;
        values.push_back(std::round(v * 1e12) / 1e12);
    }
    return FractionGrid(std::move(values));
}

FractionGrid FractionGrid::standard() { return range(0.05, 1.0, 0.05); }

}  // namespace fracridge
