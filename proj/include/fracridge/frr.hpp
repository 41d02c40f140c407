#pragma once

#include "fracridge/linalg.hpp"
#include "fracridge/standardize.hpp"
#include "fracridge/types.hpp"

#include <optional>
#include <vector>

namespace fracridge {

/// Spacing of the internal alpha candidates, in log10 units.
inline constexpr double kAlphaLogStep = 0.2;
/// The candidates run from 10^-3 * lambda_min^2 to 10^3 * lambda_max^2.
inline constexpr double kAlphaDecadesBelow = 3.0;
inline constexpr double kAlphaDecadesAbove = 3.0;

/// Candidate penalties: an exact 0 followed by log-spaced values starting at
/// 10^log_low and stepping by 10^log_step until 10^log_high is covered.
struct AlphaGrid {
    std::vector<double> alphas;
    double log_step = kAlphaLogStep;
    double log_low = 0.0;   // log10 of the first positive candidate
    double log_high = 0.0;  // log10 of the nominal upper end

    std::size_t size() const noexcept { return alphas.size(); }
};

/// ytilde_ij / lambda_i for every retained component and target.
Matrix ols_rotated(const RotatedProblem& rp);

AlphaGrid build_alpha_grid(const Vector& singular_values);

/// lambda_i^2 / (lambda_i^2 + alpha_j), r x |grid|.
Matrix shrinkage_factors(const Vector& singular_values, const AlphaGrid& grid);

/// Norm fraction reached at each grid alpha for one target's OLS solution in
/// the rotated basis. Returns nullopt when the OLS norm is zero.
std::optional<Vector> gamma_curve(const Vector& ols_column, const Matrix& shrinkage);

/// Maps requested fractions to penalties for one target.
///
/// log10(alpha) is interpolated linearly in gamma between grid points. Between
/// the alpha = 0 point and the first positive candidate alpha is interpolated
/// linearly instead, since log10(0) is undefined. gamma = 1 gives exactly 0;
/// gamma = 0, or anything at or below the fraction reached by the largest
/// candidate, gives kInfiniteAlpha.
///
/// Throws InternalInvariant if `gammas` increases anywhere along the grid.
std::vector<double> interpolate_alphas(const Vector& gammas, const AlphaGrid& grid,
                                       const FractionGrid& requested);

/// sum_i lambda_i^2 / (lambda_i^2 + alpha); 0 for kInfiniteAlpha.
double effective_dof(const Vector& singular_values, double alpha);

/// Closed form for a flat spectrum: lambda^2 (1/gamma - 1).
double flat_spectrum_alpha(double lambda, double gamma);

struct FrrOptions {
    double tolerance = kDefaultTruncationTolerance;
    Standardization standardization = Standardization::none;
    DecompositionPath path = DecompositionPath::automatic;
    unsigned threads = 1;
};

/// Result of a fractional ridge fit.
///
/// Coefficients are stored fraction-major: column `f * n_targets + t` holds
/// predictor weights for fraction f and target t. `alphas` and
/// `achieved_fractions` are n_fractions x n_targets; degenerate targets carry
/// kUnsetValue there and all-zero coefficients.
struct FrrSolution {
    Matrix coefficients;
    Matrix alphas;
    Matrix achieved_fractions;
    Matrix intercepts;  // zero unless the fit was standardized
    std::vector<Index> degenerate_targets;
    std::vector<double> fractions;

    Index effective_rank = 0;
    double applied_tolerance = 0.0;
    DecompositionPath path = DecompositionPath::direct;
    Standardization standardization = Standardization::none;

    Index n_predictors() const noexcept { return coefficients.rows(); }
    Index n_fractions() const noexcept { return alphas.rows(); }
    Index n_targets() const noexcept { return alphas.cols(); }

    auto coefficient(Index fraction, Index target) const {
        return coefficients.col(fraction * n_targets() + target);
    }
    /// p x t block for one fraction.
    auto coefficients_for_fraction(Index fraction) const {
        return coefficients.middleCols(fraction * n_targets(), n_targets());
    }
};

/// Rotated-space part of the fit: penalties, achieved fractions and the
/// shrunken coefficients in the singular basis (r x f*t, fraction-major).
struct RotatedFrrFit {
    Matrix beta_rotated;
    Matrix alphas;
    Matrix achieved_fractions;
    std::vector<Index> degenerate_targets;
};

RotatedFrrFit solve_rotated_frr(const RotatedProblem& rp, const FractionGrid& fractions,
                                unsigned threads = 1);

/// Full pipeline: optional standardization, factorization, per-target
/// interpolation of the penalty, shrinkage and back-rotation.
FrrSolution solve_frr(const DesignMatrix& X, const TargetBlock& Y, const FractionGrid& fractions,
                      const FrrOptions& options = {});

/// X * coefficients plus intercepts, n x f*t in the same fraction-major layout.
Matrix predict(const FrrSolution& sol, const Matrix& X);

}  // namespace fracridge
