#include "fracridge/baselines.hpp"

#include "fracridge/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>

namespace fracridge {

AlphaList::AlphaList(std::vector<double> alphas) : alphas_(std::move(alphas)) {
    if (alphas_.empty()) throw InvalidInput("alpha list is empty");
    for (const double a : alphas_)
        if (!std::isfinite(a) || a < 0.0) throw InvalidInput("alphas must be finite and non-negative");
}

AlphaList AlphaList::log_spaced(double low_exp, double high_exp, double step, bool include_zero) {
    if (!(step > 0.0) || !(high_exp >= low_exp)) throw InvalidInput("invalid log-spaced alpha range");
    std::vector<double> alphas;
    if (include_zero) alphas.push_back(0.0);
    const auto count = static_cast<std::size_t>(std::floor((high_exp - low_exp) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k)
        alphas.push_back(std::pow(10.0, low_exp + static_cast<double>(k) * step));
    return AlphaList(std::move(alphas));
}

AlphaList AlphaList::log_linspace(double low_exp, double high_exp, std::size_t count) {
    if (count == 0) throw InvalidInput("alpha count must be positive");
    std::vector<double> alphas;
    alphas.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double frac = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        alphas.push_back(std::pow(10.0, low_exp + frac * (high_exp - low_exp)));
    }
    return AlphaList(std::move(alphas));
}

Matrix solve_ridge_naive(const DesignMatrix& X, const TargetBlock& Y, const AlphaList& alphas) {
    if (X.n_points() != Y.n_points()) throw InvalidInput("design and targets have different row counts");
    const Matrix& x = X.values();
    const Matrix& y = Y.values();
    const Index p = X.n_predictors();
    const Index t = Y.n_targets();

    Matrix out(p, static_cast<Index>(alphas.size()) * t);
    Matrix gram(p, p);
    Matrix xty(p, t);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        const double alpha = alphas.values()[a];
        gram.noalias() = x.transpose() * x;
        gram.diagonal().array() += alpha;
        xty.noalias() = x.transpose() * y;
        auto block = out.middleCols(static_cast<Index>(a) * t, t);
        if (alpha > 0.0) {
            Eigen::LLT<Matrix> llt(gram);
            if (llt.info() == Eigen::Success) {
                block = llt.solve(xty);
                continue;
            }
        }
        block = Eigen::CompleteOrthogonalDecomposition<Matrix>(gram).solve(xty);
    }
    return out;
}

Matrix ridge_rotated_coefficients(const RotatedProblem& rp, const AlphaList& alphas) {
    const Index r = rp.effective_rank();
    const Index t = rp.n_targets();
    const Vector& s = rp.singular_values;
    Matrix beta(r, static_cast<Index>(alphas.size()) * t);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        const double alpha = alphas.values()[a];
        const Vector gain = (s.array() / (s.array().square() + alpha)).matrix();
        beta.middleCols(static_cast<Index>(a) * t, t) = gain.asDiagonal() * rp.rotated_targets;
    }
    return beta;
}

Matrix solve_ridge_rotated(const RotatedProblem& rp, const AlphaList& alphas, unsigned threads) {
    return unrotate_coefficients(rp, ridge_rotated_coefficients(rp, alphas), threads);
}

}  // namespace fracridge
