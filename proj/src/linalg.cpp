#include "fracridge/linalg.hpp"

#include "fracridge/error.hpp"
#include "fracridge/parallel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace fracridge {
namespace {

template <bool Transposed>
Matrix panel_product(const Matrix& lhs, const Matrix& rhs, unsigned threads) {
    const Index inner = Transposed ? lhs.rows() : lhs.cols();
    const Index out_rows = Transposed ? lhs.cols() : lhs.rows();
    if (rhs.rows() != inner)
        throw InvalidInput("product dimension mismatch: " + std::to_string(inner) + " vs " +
                           std::to_string(rhs.rows()));

    const Index n = rhs.cols();
    Matrix out(out_rows, n);
    const Index panels = (n + kProductPanelWidth - 1) / kProductPanelWidth;
    parallel_for(static_cast<std::size_t>(panels), threads, [&](std::size_t b, std::size_t e) {
        Matrix padded(inner, kProductPanelWidth);
        Matrix result(out_rows, kProductPanelWidth);
        for (auto panel = static_cast<Index>(b); panel < static_cast<Index>(e); ++panel) {
            const Index first = panel * kProductPanelWidth;
            const Index width = std::min(kProductPanelWidth, n - first);
            padded.setZero();
            padded.leftCols(width) = rhs.middleCols(first, width);
            if constexpr (Transposed)
                result.noalias() = lhs.transpose() * padded;
            else
                result.noalias() = lhs * padded;
            out.middleCols(first, width) = result.leftCols(width);
        }
    });
    return out;
}

Index retained_count(const Vector& descending, double cutoff) {
    Index r = 0;
    while (r < descending.size() && descending[r] > 0.0 && descending[r] >= cutoff) ++r;
    return r;
}

RotatedProblem decompose_direct(const Matrix& X, const Matrix& Y, double tol, unsigned threads) {
    Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    if (s.size() == 0 || !(s[0] > 0.0)) throw DegenerateDesign("design matrix is numerically zero");
    const Index r = retained_count(s, tol * s[0]);

    RotatedProblem rp;
    rp.path = DecompositionPath::direct;
    rp.truncation_tolerance = tol;
    rp.singular_values = s.head(r);
    rp.right_basis = svd.matrixV().leftCols(r);
    rp.rotated_targets = column_stable_product_transposed(svd.matrixU().leftCols(r), Y, threads);
    return rp;
}

RotatedProblem decompose_gram(const Matrix& X, const Matrix& Y, double tol, unsigned threads) {
    const Index p = X.cols();
    Matrix gram(p, p);
    gram.noalias() = X.transpose() * X;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    if (eig.info() != Eigen::Success) throw DegenerateDesign("eigendecomposition of X^t X failed");

    // Eigen returns ascending eigenvalues; flip to descending singular values.
    const Vector mu = eig.eigenvalues().reverse();
    Vector s = mu.cwiseMax(0.0).cwiseSqrt();
    if (!(s[0] > 0.0)) throw DegenerateDesign("design matrix is numerically zero");

    const double noise_floor =
        std::sqrt(static_cast<double>(p) * std::numeric_limits<double>::epsilon());
    const double applied = std::max(tol, noise_floor);
    const Index r = retained_count(s, applied * s[0]);

    RotatedProblem rp;
    rp.path = DecompositionPath::gram;
    rp.truncation_tolerance = applied;
    rp.singular_values = s.head(r);
    rp.right_basis = eig.eigenvectors().rowwise().reverse().leftCols(r);

    // U = X V S^-1, so U^t Y = S^-1 V^t (X^t Y).
    const Matrix xty = column_stable_product_transposed(X, Y, threads);
    rp.rotated_targets = column_stable_product_transposed(rp.right_basis, xty, threads);
    for (Index i = 0; i < r; ++i) rp.rotated_targets.row(i) /= rp.singular_values[i];
    return rp;
}

}  // namespace

Matrix column_stable_product(const Matrix& lhs, const Matrix& rhs, unsigned threads) {
    return panel_product<false>(lhs, rhs, threads);
}

Matrix column_stable_product_transposed(const Matrix& lhs, const Matrix& rhs, unsigned threads) {
    return panel_product<true>(lhs, rhs, threads);
}

RotatedProblem decompose_design(const DesignMatrix& X, const TargetBlock& Y, double tol,
                                DecompositionPath path, unsigned threads) {
    if (X.n_points() != Y.n_points())
        throw InvalidInput("design has " + std::to_string(X.n_points()) + " rows but targets have " +
                           std::to_string(Y.n_points()));
    if (!(tol > 0.0 && tol < 1.0)) throw InvalidInput("truncation tolerance must lie in (0, 1)");

    if (path == DecompositionPath::automatic)
        path = X.n_points() > X.n_predictors() ? DecompositionPath::gram : DecompositionPath::direct;
    RotatedProblem rp = path == DecompositionPath::gram
                            ? decompose_gram(X.values(), Y.values(), tol, threads)
                            : decompose_direct(X.values(), Y.values(), tol, threads);
    if (rp.effective_rank() == 0) throw DegenerateDesign("no singular value survives truncation");
    return rp;
}

Matrix unrotate_coefficients(const RotatedProblem& basis, const Matrix& beta_rotated,
                             unsigned threads) {
    if (beta_rotated.rows() != basis.effective_rank())
        throw InvalidInput("rotated coefficients have " + std::to_string(beta_rotated.rows()) +
                           " rows, expected effective rank " +
                           std::to_string(basis.effective_rank()));
    return column_stable_product(basis.right_basis, beta_rotated, threads);
}

}  // namespace fracridge
