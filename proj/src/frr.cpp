#include "fracridge/frr.hpp"

#include "fracridge/error.hpp"
#include "fracridge/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace fracridge {
namespace {

// Squared norm fractions for one target. Accumulated in a fixed sequential
// order so each column sum is monotone in its terms: the curve can never
// tick upward through rounding where shrinkage factors plateau.
Vector squared_gamma_curve(const Vector& ols_sq, double ols_norm_sq, const Matrix& shrinkage_sq) {
    const Index r = shrinkage_sq.rows();
    const Index m = shrinkage_sq.cols();
    Vector g2(m);
    for (Index k = 0; k < m; ++k) {
        const double* sf = shrinkage_sq.col(k).data();
        double acc = 0.0;
        for (Index i = 0; i < r; ++i) acc += sf[i] * ols_sq[i];
        g2[k] = acc / ols_norm_sq;
    }
    return g2;
}

Vector gammas_from_squared(const Vector& g2) {
    Vector g = g2.cwiseMin(1.0).cwiseSqrt();
    g[0] = 1.0;  // alpha = 0 leaves the OLS solution untouched
    return g;
}

}  // namespace

Matrix ols_rotated(const RotatedProblem& rp) {
    if (rp.effective_rank() < 1) throw InvalidInput("rotated problem has no retained components");
    return rp.singular_values.cwiseInverse().asDiagonal() * rp.rotated_targets;
}

AlphaGrid build_alpha_grid(const Vector& singular_values) {
    if (singular_values.size() == 0) throw InvalidInput("alpha grid needs at least one singular value");
    const double largest = singular_values.maxCoeff();
    const double smallest = singular_values.minCoeff();
    if (!(smallest > 0.0)) throw InvalidInput("singular values must be positive");

    AlphaGrid grid;
    grid.log_low = -kAlphaDecadesBelow + 2.0 * std::log10(smallest);
    grid.log_high = kAlphaDecadesAbove + 2.0 * std::log10(largest);
    const double span = (grid.log_high - grid.log_low) / grid.log_step;
    const auto steps = static_cast<std::size_t>(std::ceil(span - 1e-9));

    grid.alphas.reserve(steps + 2);
    grid.alphas.push_back(0.0);
    for (std::size_t k = 0; k <= steps; ++k)
        grid.alphas.push_back(std::pow(10.0, grid.log_low + static_cast<double>(k) * grid.log_step));
    return grid;
}

Matrix shrinkage_factors(const Vector& singular_values, const AlphaGrid& grid) {
    const Index r = singular_values.size();
    const auto m = static_cast<Index>(grid.size());
    Matrix sf(r, m);
    for (Index j = 0; j < m; ++j) {
        const double alpha = grid.alphas[static_cast<std::size_t>(j)];
        for (Index i = 0; i < r; ++i) {
            const double l2 = singular_values[i] * singular_values[i];
            sf(i, j) = l2 / (l2 + alpha);
        }
    }
    return sf;
}

std::optional<Vector> gamma_curve(const Vector& ols_column, const Matrix& shrinkage) {
    if (ols_column.size() != shrinkage.rows())
        throw InvalidInput("OLS column length does not match shrinkage rows");
    const Vector ols_sq = ols_column.array().square();
    const double norm_sq = ols_sq.sum();
    if (norm_sq == 0.0) return std::nullopt;
    const Matrix sf_sq = shrinkage.array().square();
    return gammas_from_squared(squared_gamma_curve(ols_sq, norm_sq, sf_sq));
}

std::vector<double> interpolate_alphas(const Vector& gammas, const AlphaGrid& grid,
                                       const FractionGrid& requested) {
    const auto m = static_cast<Index>(grid.size());
    if (gammas.size() != m) throw InvalidInput("gamma curve length does not match alpha grid");
    if (m < 2) throw InvalidInput("alpha grid needs at least two candidates");
    for (Index k = 1; k < m; ++k)
        if (gammas[k] > gammas[k - 1])
            throw InternalInvariant("gamma curve increases at grid index " + std::to_string(k));

    const double floor_gamma = gammas[m - 1];
    std::vector<double> out;
    out.reserve(requested.size());
    for (const double target : requested.values()) {
        if (target >= 1.0) {
            out.push_back(0.0);
            continue;
        }
        if (target <= 0.0 || target <= floor_gamma) {
            out.push_back(kInfiniteAlpha);
            continue;
        }
        // Last grid index whose fraction still reaches the target.
        Index lo = 0, hi = m - 1;
        while (hi - lo > 1) {
            const Index mid = lo + (hi - lo) / 2;
            if (gammas[mid] >= target)
                lo = mid;
            else
                hi = mid;
        }
        const double g_lo = gammas[lo];
        const double g_hi = gammas[lo + 1];
        const double t = (g_lo - target) / (g_lo - g_hi);
        const double a_lo = grid.alphas[static_cast<std::size_t>(lo)];
        const double a_hi = grid.alphas[static_cast<std::size_t>(lo + 1)];
        if (lo == 0) {
            out.push_back(t * a_hi);
        } else {
            const double la = std::log10(a_lo);
            out.push_back(std::pow(10.0, la + t * (std::log10(a_hi) - la)));
        }
    }
    return out;
}

double effective_dof(const Vector& singular_values, double alpha) {
    if (!(alpha >= 0.0)) throw InvalidInput("alpha must be non-negative");
    if (std::isinf(alpha)) return 0.0;
    double dof = 0.0;
    for (Index i = 0; i < singular_values.size(); ++i) {
        const double l2 = singular_values[i] * singular_values[i];
        dof += l2 / (l2 + alpha);
    }
    return dof;
}

double flat_spectrum_alpha(double lambda, double gamma) {
    if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidInput("gamma must lie in [0, 1]");
    if (gamma == 0.0) return kInfiniteAlpha;
    return lambda * lambda * (1.0 / gamma - 1.0);
}

RotatedFrrFit solve_rotated_frr(const RotatedProblem& rp, const FractionGrid& fractions,
                                unsigned threads) {
    const Index r = rp.effective_rank();
    const Index t = rp.n_targets();
    const auto f = static_cast<Index>(fractions.size());

    const Matrix ols = ols_rotated(rp);
    const AlphaGrid grid = build_alpha_grid(rp.singular_values);
    const Matrix sf_sq = shrinkage_factors(rp.singular_values, grid).array().square();
    const Vector lambda_sq = rp.singular_values.array().square();

    RotatedFrrFit fit;
    fit.beta_rotated = Matrix::Zero(r, f * t);
    fit.alphas = Matrix::Constant(f, t, kUnsetValue);
    fit.achieved_fractions = Matrix::Constant(f, t, kUnsetValue);
    std::vector<char> degenerate(static_cast<std::size_t>(t), 0);

    // Shared inputs are read-only; each target owns its own output columns.
    parallel_for(static_cast<std::size_t>(t), threads, [&](std::size_t begin, std::size_t end) {
        for (auto j = static_cast<Index>(begin); j < static_cast<Index>(end); ++j) {
            const Vector ols_j = ols.col(j);
            const Vector ols_sq = ols_j.array().square();
            const double norm_sq = ols_sq.sum();
            if (norm_sq == 0.0) {
                degenerate[static_cast<std::size_t>(j)] = 1;
                continue;
            }
            const double norm = std::sqrt(norm_sq);
            const Vector gammas = gammas_from_squared(squared_gamma_curve(ols_sq, norm_sq, sf_sq));
            const std::vector<double> alphas = interpolate_alphas(gammas, grid, fractions);

            for (Index fi = 0; fi < f; ++fi) {
                const double alpha = alphas[static_cast<std::size_t>(fi)];
                fit.alphas(fi, j) = alpha;
                if (std::isinf(alpha)) {
                    fit.achieved_fractions(fi, j) = 0.0;
                    continue;
                }
                const Vector shrunk =
                    (ols_j.array() * (lambda_sq.array() / (lambda_sq.array() + alpha))).matrix();
                fit.achieved_fractions(fi, j) = shrunk.norm() / norm;
                fit.beta_rotated.col(fi * t + j) = shrunk;
            }
        }
    });

    for (Index j = 0; j < t; ++j)
        if (degenerate[static_cast<std::size_t>(j)]) fit.degenerate_targets.push_back(j);
    return fit;
}

FrrSolution solve_frr(const DesignMatrix& X, const TargetBlock& Y, const FractionGrid& fractions,
                      const FrrOptions& options) {
    if (X.n_points() != Y.n_points())
        throw InvalidInput("design has " + std::to_string(X.n_points()) + " rows but targets have " +
                           std::to_string(Y.n_points()));

    FrrSolution sol;
    sol.fractions = fractions.values();
    sol.standardization = options.standardization;

    auto finish = [&](const DesignMatrix& design, const TargetBlock& targets) {
        const RotatedProblem rp =
            decompose_design(design, targets, options.tolerance, options.path, options.threads);
        RotatedFrrFit fit = solve_rotated_frr(rp, fractions, options.threads);
        sol.coefficients = unrotate_coefficients(rp, fit.beta_rotated, options.threads);
        sol.alphas = std::move(fit.alphas);
        sol.achieved_fractions = std::move(fit.achieved_fractions);
        sol.degenerate_targets = std::move(fit.degenerate_targets);
        sol.effective_rank = rp.effective_rank();
        sol.applied_tolerance = rp.truncation_tolerance;
        sol.path = rp.path;
    };

    const auto f = static_cast<Index>(fractions.size());
    const Index t = Y.n_targets();
    if (options.standardization == Standardization::none) {
        finish(X, Y);
        sol.intercepts = Matrix::Zero(f, t);
        return sol;
    }

    StandardizedData sd = standardize(X.values(), Y.values(), options.standardization);
    finish(DesignMatrix(std::move(sd.X)), TargetBlock(std::move(sd.Y)));
    RestoredCoefficients restored = restore_coefficients(sol.coefficients, sd.record);
    sol.coefficients = std::move(restored.coefficients);
    sol.intercepts = Eigen::Map<const Matrix>(restored.intercepts.data(), t, f).transpose();
    return sol;
}

Matrix predict(const FrrSolution& sol, const Matrix& X) {
    if (X.cols() != sol.n_predictors())
        throw InvalidInput("prediction input has " + std::to_string(X.cols()) + " columns, fit has " +
                           std::to_string(sol.n_predictors()) + " predictors");
    Matrix out = X * sol.coefficients;
    const Matrix per_target = sol.intercepts.transpose();  // column f holds fraction f
    out.rowwise() += Eigen::Map<const Vector>(per_target.data(), out.cols()).transpose();
    return out;
}

}  // namespace fracridge
