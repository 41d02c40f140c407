#pragma once

#include "fracridge/types.hpp"

#include <string_view>

namespace fracridge {

enum class Standardization { none, center, zscore };

std::string_view to_string(Standardization mode);
/// Accepts "none", "center", "zscore"; throws InvalidInput otherwise.
Standardization parse_standardization(std::string_view text);

/// Column statistics needed to map a fit on standardized data back to the
/// original units. With mode none the means are zero and the scales one.
struct StandardizationRecord {
    Standardization mode = Standardization::none;
    Vector column_means;   // p
    Vector column_scales;  // p, population standard deviations under zscore
    Vector target_means;   // t
};

struct StandardizedData {
    Matrix X;
    Matrix Y;
    StandardizationRecord record;
};

/// Centers (and under zscore scales) the predictors; centers each target
/// whenever mode != none. Throws InvalidInput naming the first constant
/// column under zscore.
StandardizedData standardize(const Matrix& X, const Matrix& Y, Standardization mode);

/// Applies a previously computed record to new rows of predictors.
Matrix apply_standardization(const Matrix& X, const StandardizationRecord& record);

struct RestoredCoefficients {
    Matrix coefficients;  // p x k, original units
    Vector intercepts;    // k
};

/// beta_j = beta'_j / scale_j and intercept = target_mean - sum_j beta_j mean_j.
/// Column c of `standardized` belongs to target c % t, which matches the
/// fraction-major layout used throughout the library.
RestoredCoefficients restore_coefficients(const Matrix& standardized,
                                          const StandardizationRecord& record);

}  // namespace fracridge
