#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fracridge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Stand-in for an unbounded penalty (all coefficients zero).
inline constexpr double kInfiniteAlpha = std::numeric_limits<double>::infinity();

/// Marks alpha / achieved fraction for targets with zero OLS norm.
inline constexpr double kUnsetValue = std::numeric_limits<double>::quiet_NaN();

/// d x p predictor matrix. Construction rejects empty or non-finite input.
class DesignMatrix {
public:
    explicit DesignMatrix(Matrix values);

    const Matrix& values() const noexcept { return values_; }
    Index n_points() const noexcept { return values_.rows(); }
    Index n_predictors() const noexcept { return values_.cols(); }

private:
    Matrix values_;
};

/// d x t block of regression targets, one column per target.
class TargetBlock {
public:
    explicit TargetBlock(Matrix values);

    const Matrix& values() const noexcept { return values_; }
    Index n_points() const noexcept { return values_.rows(); }
    Index n_targets() const noexcept { return values_.cols(); }

private:
    Matrix values_;
};

/// Requested norm fractions: strictly increasing, each in [0, 1], non-empty.
class FractionGrid {
public:
    explicit FractionGrid(std::vector<double> fractions);

    /// `start`, `start + step`, ... up to and including `stop`.
    static FractionGrid range(double start, double stop, double step);

    /// 0.05, 0.10, ..., 1.00
    static FractionGrid standard();

    const std::vector<double>& values() const noexcept { return fractions_; }
    std::size_t size() const noexcept { return fractions_.size(); }
    double operator[](std::size_t i) const { return fractions_[i]; }

private:
    std::vector<double> fractions_;
};

/// Throws InvalidInput naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, const std::string& what);

}  // namespace fracridge
