#pragma once

#include "fracridge/types.hpp"

namespace fracridge {

/// Relative singular-value cutoff used when none is given.
inline constexpr double kDefaultTruncationTolerance = 1e-10;

/// How the design is factorized.
enum class DecompositionPath {
    automatic,  ///< Gram route when d > p, direct SVD otherwise
    direct,     ///< thin SVD of X
    gram,       ///< eigendecomposition of X^t X
};

/// Design factorization with the targets already rotated into the
/// singular basis. U is not kept: it is only needed to form U^t Y.
struct RotatedProblem {
    Vector singular_values;  ///< descending, strictly positive
    Matrix right_basis;      ///< V, p x r, orthonormal columns
    Matrix rotated_targets;  ///< U^t Y, r x t
    double truncation_tolerance = kDefaultTruncationTolerance;  ///< cutoff actually applied
    DecompositionPath path = DecompositionPath::direct;          ///< route actually taken

    Index effective_rank() const noexcept { return singular_values.size(); }
    Index n_predictors() const noexcept { return right_basis.rows(); }
    Index n_targets() const noexcept { return rotated_targets.cols(); }
};

/// Factorizes X, drops singular values below `tol * lambda_1`, and rotates Y.
///
/// The Gram route squares the condition number, so eigenvalues of X^t X below
/// p * eps * lambda_1^2 are indistinguishable from rounding noise. On that
/// route the cutoff is raised to sqrt(p * eps) whenever `tol` is smaller; the
/// value applied is reported in `truncation_tolerance`.
///
/// Throws InvalidInput for incompatible shapes or tol outside (0, 1), and
/// DegenerateDesign when nothing survives the cutoff.
RotatedProblem decompose_design(const DesignMatrix& X, const TargetBlock& Y,
                                double tol = kDefaultTruncationTolerance,
                                DecompositionPath path = DecompositionPath::automatic,
                                unsigned threads = 1);

/// V * beta_rotated. `beta_rotated` has effective_rank rows.
Matrix unrotate_coefficients(const RotatedProblem& basis, const Matrix& beta_rotated,
                             unsigned threads = 1);

/// lhs * rhs (or lhs^t * rhs), evaluated over fixed-width zero-padded column
/// panels of rhs. Each output column is bitwise independent of which other
/// columns are present and of its position, which keeps per-target results
/// identical whether targets are solved alone or in a batch.
Matrix column_stable_product(const Matrix& lhs, const Matrix& rhs, unsigned threads = 1);
Matrix column_stable_product_transposed(const Matrix& lhs, const Matrix& rhs,
                                        unsigned threads = 1);

/// Panel width used by the column-stable products.
inline constexpr Index kProductPanelWidth = 64;

}  // namespace fracridge
