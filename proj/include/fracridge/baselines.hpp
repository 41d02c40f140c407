#pragma once

#include "fracridge/linalg.hpp"
#include "fracridge/types.hpp"

#include <vector>

namespace fracridge {

/// User-chosen penalties: non-empty, finite, non-negative.
class AlphaList {
public:
    explicit AlphaList(std::vector<double> alphas);

    /// Optional 0 followed by 10^low_exp, 10^(low_exp + step), ... up to
    /// 10^high_exp inclusive.
    static AlphaList log_spaced(double low_exp, double high_exp, double step, bool include_zero);

    /// `count` exponents evenly spaced from low_exp to high_exp.
    static AlphaList log_linspace(double low_exp, double high_exp, std::size_t count);

    const std::vector<double>& values() const noexcept { return alphas_; }
    std::size_t size() const noexcept { return alphas_.size(); }

private:
    std::vector<double> alphas_;
};

/// Evaluates (X^t X + alpha I)^-1 X^t Y from scratch for every alpha,
/// normal equations included. alpha = 0 goes through a complete orthogonal
/// decomposition, giving the minimum-norm solution on rank-deficient designs;
/// positive alphas use a Cholesky factorization.
///
/// Output is alpha-major: column `a * t + j` is alpha a, target j.
Matrix solve_ridge_naive(const DesignMatrix& X, const TargetBlock& Y, const AlphaList& alphas);

/// One factorization shared by every alpha; coefficients are
/// lambda_i / (lambda_i^2 + alpha) * ytilde_i, rotated back by V.
/// Same alpha-major layout as solve_ridge_naive.
Matrix solve_ridge_rotated(const RotatedProblem& rp, const AlphaList& alphas, unsigned threads = 1);

/// Rotated-space coefficients only (r x a*t), before back-rotation.
Matrix ridge_rotated_coefficients(const RotatedProblem& rp, const AlphaList& alphas);

}  // namespace fracridge
