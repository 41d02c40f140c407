#pragma once

#include "fracridge/frr.hpp"
#include "fracridge/standardize.hpp"
#include "fracridge/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fracridge {

struct HoldoutSplit {
    std::vector<Index> train;
    std::vector<Index> test;
};

/// Seeded uniform shuffle of 0..d-1; the first round(d * train_fraction)
/// indices train, the rest test. Both lists are returned sorted.
HoldoutSplit split_holdout(Index d, double train_fraction, std::uint64_t seed);

/// What R^2 compares the residual sum of squares against.
enum class R2Baseline {
    test_mean,  ///< 1 - SSE / sum (y - mean(y))^2
    zero,       ///< 1 - SSE / sum y^2
};

/// Coefficient of determination. May be negative. Throws UndefinedScore when
/// the baseline sum of squares is zero and InvalidInput for mismatched or
/// too-short inputs.
double r_squared(std::span<const double> y_true, std::span<const double> y_pred,
                 R2Baseline baseline = R2Baseline::test_mean);

struct TargetCvResult {
    Index target = 0;
    bool scored = true;  ///< false when R^2 is undefined on the test split
    std::string note;
    std::vector<double> r2_by_fraction;
    double best_fraction = kUnsetValue;
    double best_r2 = kUnsetValue;
    double best_alpha = kUnsetValue;
};

struct CvReport {
    std::vector<double> fractions;
    std::vector<TargetCvResult> per_target;
    std::vector<Index> degenerate_targets;  ///< zero OLS norm on the training split
    Index n_train = 0;
    Index n_test = 0;
};

struct CvOptions {
    Standardization standardization = Standardization::none;
    R2Baseline baseline = R2Baseline::test_mean;
    double tolerance = kDefaultTruncationTolerance;
    unsigned threads = 1;
};

/// Fits on the training rows, scores every (fraction, target) on the test
/// rows and picks the best fraction per target. Ties go to the smallest
/// fraction. Targets with zero test variance are reported unscored.
CvReport cross_validate(const Matrix& X, const Matrix& Y, const FractionGrid& fractions,
                        const HoldoutSplit& split, const CvOptions& options = {});

/// Rows of `m` listed in `rows`, in order.
Matrix select_rows(const Matrix& m, std::span<const Index> rows);

}  // namespace fracridge
