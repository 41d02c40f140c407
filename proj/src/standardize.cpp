#include "fracridge/standardize.hpp"

#include "fracridge/error.hpp"

#include <cmath>
#include <string>

namespace fracridge {

std::string_view to_string(Standardization mode) {
    switch (mode) {
        case Standardization::none: return "none";
        case Standardization::center: return "center";
        case Standardization::zscore: return "zscore";
    }
    return "none";
}

Standardization parse_standardization(std::string_view text) {
    if (text == "none") return Standardization::none;
    if (text == "center") return Standardization::center;
    if (text == "zscore") return Standardization::zscore;
    throw InvalidInput("unknown standardization mode '" + std::string(text) +
                       "' (expected none, center or zscore)");
}

StandardizedData standardize(const Matrix& X, const Matrix& Y, Standardization mode) {
    if (X.rows() != Y.rows()) throw InvalidInput("design and targets have different row counts");
    const Index d = X.rows();
    const Index p = X.cols();

    StandardizedData out{X, Y, {}};
    StandardizationRecord& rec = out.record;
    rec.mode = mode;
    rec.column_means = Vector::Zero(p);
    rec.column_scales = Vector::Ones(p);
    rec.target_means = Vector::Zero(Y.cols());
    if (mode == Standardization::none) return out;

    rec.column_means = X.colwise().mean().transpose();
    rec.target_means = Y.colwise().mean().transpose();
    out.X.rowwise() -= rec.column_means.transpose();
    out.Y.rowwise() -= rec.target_means.transpose();

    if (mode == Standardization::zscore) {
        for (Index j = 0; j < p; ++j) {
            const double sd = std::sqrt(out.X.col(j).squaredNorm() / static_cast<double>(d));
            if (!(sd > 0.0))
                throw InvalidInput("predictor column " + std::to_string(j) +
                                   " is constant and cannot be z-scored");
            rec.column_scales[j] = sd;
            out.X.col(j) /= sd;
        }
    }
    return out;
}

Matrix apply_standardization(const Matrix& X, const StandardizationRecord& record) {
    if (X.cols() != record.column_means.size())
        throw InvalidInput("standardization record does not match predictor count");
    if (record.mode == Standardization::none) return X;
    Matrix out = X.rowwise() - record.column_means.transpose();
    return out.array().rowwise() / record.column_scales.transpose().array();
}

RestoredCoefficients restore_coefficients(const Matrix& standardized,
                                          const StandardizationRecord& record) {
    const Index p = record.column_means.size();
    const Index t = record.target_means.size();
    if (standardized.rows() != p)
        throw InvalidInput("coefficient rows do not match the standardization record");
    if (t == 0 || standardized.cols() % t != 0)
        throw InvalidInput("coefficient columns are not a multiple of the target count");

    RestoredCoefficients out;
    out.coefficients = standardized.array().colwise() / record.column_scales.array();
    out.intercepts.resize(standardized.cols());
    for (Index c = 0; c < standardized.cols(); ++c)
        out.intercepts[c] = record.target_means[c % t] - out.coefficients.col(c).dot(record.column_means);
    return out;
}

}  // namespace fracridge
