#include "fracridge/error.hpp"
#include "fracridge/random.hpp"
#include "fracridge/simulate.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace fracridge;

namespace {

SimulationSpec spec_of(Index d, Index p, Index t, std::uint64_t seed) {
    SimulationSpec s;
    s.d = d;
    s.p = p;
    s.t = t;
    s.seed = seed;
    return s;
}

double population_sd(const Vector& v) {
    const double mean = v.mean();
    return std::sqrt((v.array() - mean).square().mean());
}

}  // namespace

TEST(Rng, KnownStream) {
    // splitmix64(0) seeds; the first outputs are fixed forever.
    Rng a(0), b(0), c(1);
    const std::uint64_t first = a.next();
    EXPECT_EQ(first, b.next());
    EXPECT_NE(first, c.next());
    double sum = 0.0, sq = 0.0;
    Rng r(5);
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.02);
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        EXPECT_LT(r.uniform_index(7), 7u);
    }
}

TEST(SimulateDesign, ZeroRoundsStandardizedColumns) {
    SimulationSpec s = spec_of(200, 6, 1, 3);
    s.correlation_rounds = 0;
    const Matrix X = simulate_design(s);
    for (Index j = 0; j < X.cols(); ++j) {
        EXPECT_NEAR(X.col(j).mean(), 0.0, 1e-12);
        EXPECT_NEAR(population_sd(X.col(j)), 1.0, 1e-12);
    }
    EXPECT_LT(mean_abs_column_correlation(X), 0.15);
}

TEST(SimulateDesign, Deterministic) {
    const SimulationSpec s = spec_of(30, 7, 2, 99);
    EXPECT_EQ(simulate_design(s), simulate_design(s));
    EXPECT_NE(simulate_design(s), simulate_design(spec_of(30, 7, 2, 100)));
}

TEST(SimulateDesign, RoundsIncreaseCorrelation) {
    int greater = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SimulationSpec base = spec_of(100, 100, 1, seed);
        base.correlation_rounds = 0;
        const SimulationSpec mixed = spec_of(100, 100, 1, seed);
        if (mean_abs_column_correlation(simulate_design(mixed)) > mean_abs_column_correlation(simulate_design(base)))
            ++greater;
    }
    EXPECT_GE(greater, 19);
}

TEST(SimulateDesign, DefaultRoundsAreTwiceP) { EXPECT_EQ(spec_of(10, 13, 1, 0).rounds(), 26); }

TEST(SimulateDesign, Validation) {
    EXPECT_THROW(spec_of(0, 3, 1, 0).validate(), InvalidInput);
    EXPECT_THROW(spec_of(5, 1, 1, 0).validate(), InvalidInput);  // one predictor cannot be paired
    SimulationSpec ok = spec_of(5, 1, 1, 0);
    ok.correlation_rounds = 0;
    EXPECT_NO_THROW(ok.validate());
    SimulationSpec neg = spec_of(5, 3, 1, 0);
    neg.noise_scale = -1.0;
    EXPECT_THROW(neg.validate(), InvalidInput);
}

TEST(SimulateTargets, NoiselessIsExact) {
    SimulationSpec s = spec_of(40, 5, 3, 8);
    s.noise_scale = 0.0;
    const Matrix X = simulate_design(s);
    const SimulatedTargets t = simulate_targets(X, s);
    EXPECT_EQ(t.Y, X * t.beta_true);
    EXPECT_EQ(t.beta_true.rows(), 5);
    EXPECT_EQ(t.beta_true.cols(), 3);
}

TEST(SimulateTargets, MatchedNoiseScale) {
    SimulationSpec s = spec_of(10000, 10, 4, 12);
    s.noise = NoiseMode::match_signal_sd;
    const Matrix X = simulate_design(s);
    const SimulatedTargets t = simulate_targets(X, s);
    const Matrix signal = X * t.beta_true;
    for (Index j = 0; j < 4; ++j) {
        const Vector noise = t.Y.col(j) - signal.col(j);
        EXPECT_NEAR(population_sd(noise) / population_sd(signal.col(j)), 1.0, 0.1);
    }
}

TEST(SimulateTargets, Deterministic) {
    const SimulationSpec s = spec_of(25, 4, 2, 1);
    const Matrix X = simulate_design(s);
    const SimulatedTargets a = simulate_targets(X, s);
    const SimulatedTargets b = simulate_targets(X, s);
    EXPECT_EQ(a.Y, b.Y);
    EXPECT_EQ(a.beta_true, b.beta_true);
}

TEST(NoiseMode, Parse) {
    EXPECT_EQ(parse_noise_mode("unit"), NoiseMode::unit);
    EXPECT_EQ(parse_noise_mode("match_signal_sd"), NoiseMode::match_signal_sd);
    EXPECT_THROW(parse_noise_mode("loud"), InvalidInput);
}
