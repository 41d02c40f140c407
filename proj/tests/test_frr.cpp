#include "fracridge/baselines.hpp"
#include "fracridge/error.hpp"
#include "fracridge/frr.hpp"
#include "fracridge/simulate.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fracridge;
using fracridge::testing::flat_spectrum_design;
using fracridge::testing::gaussian_matrix;
using fracridge::testing::relative_error;

namespace {

RotatedProblem make_rotated(const Vector& lambda, const Matrix& ytilde) {
    RotatedProblem rp;
    rp.singular_values = lambda;
    rp.right_basis = Matrix::Identity(lambda.size(), lambda.size());
    rp.rotated_targets = ytilde;
    return rp;
}

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

struct Problem {
    Matrix X;
    Matrix Y;
};

Problem correlated_problem(Index d, Index p, Index t, std::uint64_t seed) {
    SimulationSpec spec;
    spec.d = d;
    spec.p = p;
    spec.t = t;
    spec.seed = seed;
    const Matrix X = simulate_design(spec);
    return {X, simulate_targets(X, spec).Y};
}

}  // namespace

TEST(OlsRotated, Examples) {
    EXPECT_EQ(ols_rotated(make_rotated(vec({1, 1}), vec({3, 4}))), Matrix(vec({3, 4})));
    EXPECT_EQ(ols_rotated(make_rotated(vec({2, 1}), vec({1, 1}))), Matrix(vec({0.5, 1.0})));
    EXPECT_EQ(ols_rotated(make_rotated(vec({2, 1}), vec({0, 0}))), Matrix(vec({0, 0})));
}

TEST(AlphaGrid, UnitSpectrum) {
    const AlphaGrid grid = build_alpha_grid(vec({1.0}));
    ASSERT_EQ(grid.size(), 32u);
    EXPECT_EQ(grid.alphas[0], 0.0);
    EXPECT_NEAR(grid.alphas[1], 1e-3, 1e-15);
    EXPECT_NEAR(grid.alphas.back() / 1e3, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(grid.log_step, 0.2);
}

TEST(AlphaGrid, TwoValueSpectrum) {
    const AlphaGrid grid = build_alpha_grid(vec({2.0, 1.0}));
    EXPECT_NEAR(grid.alphas[1], 1e-3, 1e-15);
    EXPECT_LE(grid.alphas[grid.size() - 2], 4e3);
    EXPECT_GE(grid.alphas.back() * (1 + 1e-12), 4e3);
}

TEST(AlphaGrid, LargeSingularValueDoesNotOverflow) {
    const AlphaGrid grid = build_alpha_grid(vec({1e6}));
    EXPECT_NEAR(grid.alphas[1] / 1e9, 1.0, 1e-12);
    EXPECT_NEAR(grid.alphas.back() / 1e15, 1.0, 1e-12);
    for (double a : grid.alphas) EXPECT_TRUE(std::isfinite(a));
}

TEST(AlphaGrid, ConstantRatioAndCoverage) {
    for (const Vector& lambda : {vec({3.7, 0.2, 0.01}), vec({5.0, 5.0}), vec({123.0, 1e-4})}) {
        const AlphaGrid grid = build_alpha_grid(lambda);
        const double lo = 1e-3 * lambda.minCoeff() * lambda.minCoeff();
        const double hi = 1e3 * lambda.maxCoeff() * lambda.maxCoeff();
        EXPECT_EQ(grid.alphas[0], 0.0);
        EXPECT_NEAR(grid.alphas[1] / lo, 1.0, 1e-12);
        EXPECT_GE(grid.alphas.back() * (1 + 1e-12), hi);
        EXPECT_LT(grid.alphas[grid.size() - 2], hi);
        for (std::size_t k = 2; k < grid.size(); ++k)
            EXPECT_NEAR(grid.alphas[k] / grid.alphas[k - 1], std::pow(10.0, 0.2), 1e-12);
    }
}

TEST(AlphaGrid, RejectsEmpty) { EXPECT_THROW(build_alpha_grid(Vector()), InvalidInput); }

TEST(Shrinkage, Examples) {
    AlphaGrid grid;
    grid.alphas = {0.0, 1.0};
    const Matrix one = shrinkage_factors(vec({1.0}), grid);
    EXPECT_EQ(one(0, 0), 1.0);
    EXPECT_EQ(one(0, 1), 0.5);
    const Matrix two = shrinkage_factors(vec({2.0, 1.0}), grid);
    EXPECT_DOUBLE_EQ(two(0, 1), 0.8);
    EXPECT_DOUBLE_EQ(two(1, 1), 0.5);
}

TEST(Shrinkage, RangeAndMonotonicity) {
    const Vector lambda = vec({9.0, 2.0, 0.3});
    const AlphaGrid grid = build_alpha_grid(lambda);
    const Matrix sf = shrinkage_factors(lambda, grid);
    EXPECT_EQ(Vector(sf.col(0)), Vector::Ones(3));
    for (Index i = 0; i < sf.rows(); ++i)
        for (Index j = 1; j < sf.cols(); ++j) {
            EXPECT_GT(sf(i, j), 0.0);
            EXPECT_LE(sf(i, j), 1.0);
            EXPECT_LE(sf(i, j), sf(i, j - 1));
        }
}

TEST(GammaCurve, WorkedExample) {
    AlphaGrid grid;
    grid.alphas = {0.0, 1.0};
    const Matrix sf = shrinkage_factors(vec({2.0, 1.0}), grid);
    const auto g = gamma_curve(vec({0.5, 1.0}), sf);
    ASSERT_TRUE(g);
    EXPECT_EQ((*g)[0], 1.0);
    const double oracle = std::sqrt((0.4 * 0.4 + 0.5 * 0.5) / 1.25);
    EXPECT_NEAR((*g)[1], oracle, 1e-15);
    EXPECT_NEAR((*g)[1], 0.57271, 1e-5);
}

TEST(GammaCurve, ZeroNormIsDegenerate) {
    AlphaGrid grid;
    grid.alphas = {0.0, 1.0};
    EXPECT_FALSE(gamma_curve(vec({0.0, 0.0}), shrinkage_factors(vec({2.0, 1.0}), grid)).has_value());
}

TEST(GammaCurve, FlatSpectrumIgnoresTargets) {
    const double lambda = 1.7;
    const Vector lam = Vector::Constant(5, lambda);
    const AlphaGrid grid = build_alpha_grid(lam);
    const Matrix sf = shrinkage_factors(lam, grid);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto g = gamma_curve(gaussian_matrix(5, 1, seed).col(0), sf);
        ASSERT_TRUE(g);
        for (std::size_t k = 0; k < grid.size(); ++k)
            EXPECT_NEAR((*g)[static_cast<Index>(k)], lambda * lambda / (lambda * lambda + grid.alphas[k]), 1e-14);
    }
}

TEST(GammaCurve, DecreasingAlongGrid) {
    const Vector lambda = vec({50.0, 3.0, 1.0, 0.02});
    const AlphaGrid grid = build_alpha_grid(lambda);
    const Matrix sf = shrinkage_factors(lambda, grid);
    const auto g = gamma_curve(vec({1.0, -2.0, 0.5, 3.0}), sf);
    ASSERT_TRUE(g);
    for (Index k = 1; k < g->size(); ++k) EXPECT_LT((*g)[k], (*g)[k - 1]);
}

TEST(Interpolate, Endpoints) {
    const Vector lambda = vec({1.0});
    const AlphaGrid grid = build_alpha_grid(lambda);
    const auto g = gamma_curve(vec({1.0}), shrinkage_factors(lambda, grid));
    const auto alphas = interpolate_alphas(*g, grid, FractionGrid({0.0, 1.0}));
    EXPECT_EQ(alphas[0], kInfiniteAlpha);
    EXPECT_EQ(alphas[1], 0.0);
}

TEST(Interpolate, FlatSpectrumHalf) {
    const Vector lambda = vec({1.0});
    const AlphaGrid grid = build_alpha_grid(lambda);
    const auto g = gamma_curve(vec({1.0}), shrinkage_factors(lambda, grid));
    const double alpha = interpolate_alphas(*g, grid, FractionGrid({0.5}))[0];
    const double achieved = 1.0 / (1.0 + alpha);
    EXPECT_LE(std::abs(achieved - 0.5), 0.01);
    EXPECT_NEAR(alpha, 1.0, 0.02);
}

TEST(Interpolate, BelowGridFloorIsUnbounded) {
    const Vector lambda = vec({1.0});
    const AlphaGrid grid = build_alpha_grid(lambda);
    const auto g = gamma_curve(vec({1.0}), shrinkage_factors(lambda, grid));
    const double floor_gamma = (*g)[g->size() - 1];
    const auto alphas = interpolate_alphas(*g, grid, FractionGrid({floor_gamma * 0.5, floor_gamma}));
    EXPECT_EQ(alphas[0], kInfiniteAlpha);
    EXPECT_EQ(alphas[1], kInfiniteAlpha);
}

TEST(Interpolate, RejectsIncreasingCurve) {
    AlphaGrid grid;
    grid.alphas = {0.0, 1.0, 10.0};
    Vector g = vec({1.0, 0.4, 0.6});
    EXPECT_THROW(interpolate_alphas(g, grid, FractionGrid({0.5})), InternalInvariant);
}

TEST(Interpolate, AlphaDecreasesWithFraction) {
    const Vector lambda = vec({10.0, 4.0, 1.0, 0.1});
    const AlphaGrid grid = build_alpha_grid(lambda);
    const auto g = gamma_curve(vec({0.3, 1.0, -0.7, 2.0}), shrinkage_factors(lambda, grid));
    const auto alphas = interpolate_alphas(*g, grid, FractionGrid::standard());
    for (std::size_t k = 1; k < alphas.size(); ++k) EXPECT_LT(alphas[k], alphas[k - 1]);
}

TEST(EffectiveDof, Examples) {
    EXPECT_EQ(effective_dof(vec({1, 1, 1}), 0.0), 3.0);
    EXPECT_DOUBLE_EQ(effective_dof(vec({2, 1}), 1.0), 1.3);
    EXPECT_EQ(effective_dof(vec({2, 1}), kInfiniteAlpha), 0.0);
    EXPECT_THROW(effective_dof(vec({1}), -1.0), InvalidInput);
}

TEST(FlatSpectrumAlpha, Examples) {
    EXPECT_EQ(flat_spectrum_alpha(1.0, 0.5), 1.0);
    EXPECT_EQ(flat_spectrum_alpha(1.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(flat_spectrum_alpha(3.0, 0.25), 27.0);
    EXPECT_EQ(flat_spectrum_alpha(2.0, 0.0), kInfiniteAlpha);
    EXPECT_THROW(flat_spectrum_alpha(0.0, 0.5), InvalidInput);
    EXPECT_THROW(flat_spectrum_alpha(1.0, 1.5), InvalidInput);
}

TEST(SolveFrr, IdentityDesignHalfFraction) {
    Matrix y(2, 1);
    y << 3, 4;
    const FrrSolution sol = solve_frr(DesignMatrix(Matrix::Identity(2, 2)), TargetBlock(y), FractionGrid({0.5}));
    EXPECT_NEAR(sol.alphas(0, 0), 1.0, 0.02);
    const double shrink = 1.0 / (1.0 + sol.alphas(0, 0));
    EXPECT_NEAR(sol.coefficient(0, 0)[0], 3.0 * shrink, 1e-12);
    EXPECT_NEAR(sol.coefficient(0, 0)[1], 4.0 * shrink, 1e-12);
    EXPECT_NEAR(sol.coefficient(0, 0)[0], 1.5, 0.03);
    EXPECT_NEAR(sol.coefficient(0, 0)[1], 2.0, 0.04);
}

TEST(SolveFrr, FullFractionIsOls) {
    for (auto [d, p] : {std::pair<Index, Index>{40, 10}, {10, 10}}) {
        const Matrix X = gaussian_matrix(d, p, 5);
        const Matrix Y = gaussian_matrix(d, 3, 6);
        const FrrSolution sol = solve_frr(DesignMatrix(X), TargetBlock(Y), FractionGrid({0.5, 1.0}));
        const Matrix ols = X.completeOrthogonalDecomposition().solve(Y);
        EXPECT_LT(relative_error(sol.coefficients_for_fraction(1), ols), 1e-8);
        for (Index j = 0; j < 3; ++j) EXPECT_EQ(sol.alphas(1, j), 0.0);
    }
}

TEST(SolveFrr, MatchesNaiveRidgeAtResolvedAlpha) {
    const Problem pr = correlated_problem(100, 10, 5, 42);
    const FractionGrid fracs = FractionGrid::standard();
    const FrrSolution sol = solve_frr(DesignMatrix(pr.X), TargetBlock(pr.Y), fracs);
    for (Index fi = 0; fi < sol.n_fractions(); ++fi)
        for (Index j = 0; j < sol.n_targets(); ++j) {
            const double alpha = sol.alphas(fi, j);
            ASSERT_TRUE(std::isfinite(alpha));
            const Matrix naive = solve_ridge_naive(DesignMatrix(pr.X), TargetBlock(pr.Y.col(j)), AlphaList({alpha}));
            EXPECT_LT(relative_error(sol.coefficient(fi, j), naive), 1e-6) << "fraction " << fi << " target " << j;
            EXPECT_LE(std::abs(sol.achieved_fractions(fi, j) - fracs[static_cast<std::size_t>(fi)]), 0.01);
        }
}

TEST(SolveFrr, AchievedFractionMatchesCoefficientNorms) {
    const Problem pr = correlated_problem(60, 20, 4, 3);
    const FrrSolution sol = solve_frr(DesignMatrix(pr.X), TargetBlock(pr.Y), FractionGrid::standard());
    const Index last = sol.n_fractions() - 1;
    for (Index fi = 0; fi < sol.n_fractions(); ++fi)
        for (Index j = 0; j < sol.n_targets(); ++j)
            EXPECT_NEAR(sol.coefficient(fi, j).norm() / sol.coefficient(last, j).norm(), sol.achieved_fractions(fi, j),
                        1e-10);
}

TEST(SolveFrr, ShrinkageIdentityInRotatedSpace) {
    const Problem pr = correlated_problem(50, 12, 3, 8);
    const RotatedProblem rp = decompose_design(DesignMatrix(pr.X), TargetBlock(pr.Y));
    const RotatedFrrFit fit = solve_rotated_frr(rp, FractionGrid::standard());
    const Matrix ols = ols_rotated(rp);
    const Index t = rp.n_targets();
    for (Index fi = 0; fi < fit.alphas.rows(); ++fi)
        for (Index j = 0; j < t; ++j)
            for (Index i = 0; i < rp.effective_rank(); ++i) {
                const double l2 = rp.singular_values[i] * rp.singular_values[i];
                EXPECT_EQ(fit.beta_rotated(i, fi * t + j), ols(i, j) * (l2 / (l2 + fit.alphas(fi, j))));
            }
}

TEST(SolveFrr, AlphaNonIncreasingInFraction) {
    const Problem pr = correlated_problem(100, 100, 10, 17);
    const FrrSolution sol = solve_frr(DesignMatrix(pr.X), TargetBlock(pr.Y), FractionGrid::standard());
    for (Index j = 0; j < sol.n_targets(); ++j)
        for (Index fi = 1; fi < sol.n_fractions(); ++fi) EXPECT_LE(sol.alphas(fi, j), sol.alphas(fi - 1, j));
}

TEST(SolveFrr, ZeroFractionGivesZeroCoefficients) {
    const Problem pr = correlated_problem(30, 8, 2, 5);
    const FrrSolution sol = solve_frr(DesignMatrix(pr.X), TargetBlock(pr.Y), FractionGrid({0.0, 0.5}));
    EXPECT_TRUE(sol.coefficients_for_fraction(0).isZero(0.0));
    EXPECT_EQ(sol.alphas(0, 0), kInfiniteAlpha);
    EXPECT_EQ(sol.achieved_fractions(0, 1), 0.0);
}

TEST(SolveFrr, DegenerateTargetIsZeroFilled) {
    const Matrix X = gaussian_matrix(20, 5, 1);
    Matrix Y = gaussian_matrix(20, 3, 2);
    Y.col(1).setZero();
    const FrrSolution sol = solve_frr(DesignMatrix(X), TargetBlock(Y), FractionGrid::standard());
    ASSERT_EQ(sol.degenerate_targets, std::vector<Index>{1});
    for (Index fi = 0; fi < sol.n_fractions(); ++fi) {
        EXPECT_TRUE(sol.coefficient(fi, 1).isZero(0.0));
        EXPECT_TRUE(std::isnan(sol.alphas(fi, 1)));
        EXPECT_TRUE(std::isnan(sol.achieved_fractions(fi, 1)));
        EXPECT_FALSE(std::isnan(sol.alphas(fi, 0)));
    }
}

TEST(SolveFrr, TargetsAreBitwiseIndependent) {
    const Problem pr = correlated_problem(120, 30, 70, 23);
    const FractionGrid fracs = FractionGrid::standard();
    FrrOptions opts;
    opts.threads = 3;
    const FrrSolution batch = solve_frr(DesignMatrix(pr.X), TargetBlock(pr.Y), fracs, opts);
    for (Index j : {0, 1, 33, 64, 69}) {
        const FrrSolution one = solve_frr(DesignMatrix(pr.X), TargetBlock(pr.Y.col(j)), fracs);
        EXPECT_EQ(Vector(one.alphas.col(0)), Vector(batch.alphas.col(j))) << "target " << j;
        for (Index fi = 0; fi < batch.n_fractions(); ++fi)
            EXPECT_EQ(Vector(one.coefficient(fi, 0)), Vector(batch.coefficient(fi, j))) << "target " << j;
    }
}

TEST(SolveFrr, ThreadCountDoesNotChangeResults) {
    const Problem pr = correlated_problem(80, 90, 40, 29);
    FrrOptions serial;
    FrrOptions threaded;
    threaded.threads = 4;
    const FrrSolution a = solve_frr(DesignMatrix(pr.X), TargetBlock(pr.Y), FractionGrid::standard(), serial);
    const FrrSolution b = solve_frr(DesignMatrix(pr.X), TargetBlock(pr.Y), FractionGrid::standard(), threaded);
    EXPECT_EQ(a.coefficients, b.coefficients);
    EXPECT_EQ(a.alphas, b.alphas);
}

TEST(SolveFrr, FlatSpectrumMatchesClosedForm) {
    const double lambda = 2.5;
    const Matrix X = flat_spectrum_design(64, 16, lambda, 4);
    const Matrix Y = gaussian_matrix(64, 6, 5);
    const FractionGrid fracs = FractionGrid::standard();
    const FrrSolution sol = solve_frr(DesignMatrix(X), TargetBlock(Y), fracs);
    for (Index fi = 0; fi < sol.n_fractions(); ++fi) {
        const double gamma = fracs[static_cast<std::size_t>(fi)];
        for (Index j = 0; j < sol.n_targets(); ++j) {
            const double alpha = sol.alphas(fi, j);
            // gamma(alpha) = lambda^2 / (lambda^2 + alpha) exactly on a flat spectrum.
            EXPECT_LE(std::abs(lambda * lambda / (lambda * lambda + alpha) - gamma), 0.01);
            EXPECT_NEAR(sol.achieved_fractions(fi, j), lambda * lambda / (lambda * lambda + alpha), 1e-9);
            if (gamma < 1.0) {
                const double exact = flat_spectrum_alpha(lambda, gamma);
                const double lo = flat_spectrum_alpha(lambda, std::min(1.0, gamma + 0.01));
                const double hi = flat_spectrum_alpha(lambda, gamma - 0.01);
                EXPECT_GE(alpha, lo) << gamma << " analytic " << exact;
                EXPECT_LE(alpha, hi) << gamma << " analytic " << exact;
            }
        }
    }
}

TEST(SolveFrr, StandardizedFitPredictsLikeInterceptModel) {
    const Problem pr = correlated_problem(60, 6, 2, 77);
    Matrix X = pr.X * 3.0;
    X.rowwise() += Eigen::RowVectorXd::LinSpaced(6, -2.0, 5.0);
    Matrix Y = pr.Y.array() + 4.0;
    FrrOptions opts;
    opts.standardization = Standardization::zscore;
    const FrrSolution sol = solve_frr(DesignMatrix(X), TargetBlock(Y), FractionGrid({1.0}), opts);
    // At fraction 1 this is OLS with an unpenalized intercept.
    Matrix Xa(X.rows(), X.cols() + 1);
    Xa << X, Vector::Ones(X.rows());
    const Matrix full = Xa.colPivHouseholderQr().solve(Y);
    const Matrix pred = (X * sol.coefficients_for_fraction(0)).rowwise() + sol.intercepts.row(0);
    EXPECT_LT(relative_error(pred, Xa * full), 1e-8);
}

TEST(Predict, MatchesPerColumnProducts) {
    const Problem pr = correlated_problem(40, 5, 3, 12);
    FrrOptions opts;
    opts.standardization = Standardization::center;
    const FrrSolution sol = solve_frr(DesignMatrix(pr.X), TargetBlock(pr.Y), FractionGrid({0.3, 0.9}), opts);
    const Matrix Xnew = gaussian_matrix(7, 5, 13);
    const Matrix pred = predict(sol, Xnew);
    ASSERT_EQ(pred.cols(), 6);
    for (Index fi = 0; fi < 2; ++fi)
        for (Index j = 0; j < 3; ++j) {
            const Vector want = (Xnew * sol.coefficient(fi, j)).array() + sol.intercepts(fi, j);
            EXPECT_LT((pred.col(fi * 3 + j) - want).norm(), 1e-12);
        }
    EXPECT_THROW(predict(sol, Matrix::Ones(2, 4)), InvalidInput);
}

TEST(SolveFrr, RejectsMismatchedRows) {
    EXPECT_THROW(solve_frr(DesignMatrix(Matrix::Ones(5, 2)), TargetBlock(Matrix::Ones(4, 1)), FractionGrid({0.5})),
                 InvalidInput);
}

TEST(FractionGridType, Validation) {
    EXPECT_THROW(FractionGrid({}), InvalidInput);
    EXPECT_THROW(FractionGrid({0.5, 0.5}), InvalidInput);
    EXPECT_THROW(FractionGrid({0.5, 0.2}), InvalidInput);
    EXPECT_THROW(FractionGrid({1.1}), InvalidInput);
    EXPECT_THROW(FractionGrid({-0.1}), InvalidInput);
    const FractionGrid g = FractionGrid::standard();
    ASSERT_EQ(g.size(), 20u);
    EXPECT_EQ(g[0], 0.05);
    EXPECT_EQ(g[19], 1.0);
    EXPECT_EQ(g[6], 0.35);
    EXPECT_EQ(FractionGrid::range(0.0, 1.0, 0.1).size(), 11u);
}
