#include "fracridge/simulate.hpp"

#include "fracridge/error.hpp"
#include "fracridge/random.hpp"

#include <cmath>
#include <string>

namespace fracridge {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr std::uint64_t kDesignStream = 1;
constexpr std::uint64_t kTargetStream = 2;

double population_sd(const Eigen::Ref<const Vector>& v) {
    const double mean = v.mean();
    return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size()));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t Rng::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::uniform_index(std::uint64_t n) {
    if (n == 0) throw InvalidInput("uniform_index needs a positive bound");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed ^ (stream * 0xd1b54a32d192ed03ULL);
    return splitmix64(state);
}

std::string_view to_string(NoiseMode mode) {
    return mode == NoiseMode::unit ? "unit" : "match_signal_sd";
}

NoiseMode parse_noise_mode(std::string_view text) {
    if (text == "unit") return NoiseMode::unit;
    if (text == "match_signal_sd" || text == "match") return NoiseMode::match_signal_sd;
    throw InvalidInput("unknown noise mode '" + std::string(text) + "' (expected unit or match_signal_sd)");
}

void SimulationSpec::validate() const {
    if (d < 1 || p < 1 || t < 1) throw InvalidInput("simulation dimensions must be at least 1");
    if (rounds() < 0) throw InvalidInput("correlation rounds must be non-negative");
    if (rounds() > 0 && p < 2) throw InvalidInput("correlating predictors needs p >= 2");
    if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale))
        throw InvalidInput("noise scale must be finite and non-negative");
}

Matrix simulate_design(const SimulationSpec& spec) {
    spec.validate();
    Rng rng(derive_seed(spec.seed, kDesignStream));
    Matrix X(spec.d, spec.p);
    for (Index j = 0; j < spec.p; ++j)
        for (Index i = 0; i < spec.d; ++i) X(i, j) = rng.normal();

    const auto p = static_cast<std::uint64_t>(spec.p);
    for (Index round = 0; round < spec.rounds(); ++round) {
        const auto a = static_cast<Index>(rng.uniform_index(p));
        auto b = static_cast<Index>(rng.uniform_index(p - 1));
        if (b >= a) ++b;
        for (Index i = 0; i < spec.d; ++i) X(i, a) = X(i, a) + X(i, b) + rng.normal();
    }

    for (Index j = 0; j < spec.p; ++j) {
        auto col = X.col(j);
        col.array() -= col.mean();
        const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(spec.d));
        if (sd > 0.0) col /= sd;
    }
    return X;
}

SimulatedTargets simulate_targets(const Matrix& X, const SimulationSpec& spec) {
    spec.validate();
    require_finite(X, "design matrix");
    if (X.cols() != spec.p) throw InvalidInput("design column count does not match the simulation spec");
    Rng rng(derive_seed(spec.seed, kTargetStream));

    SimulatedTargets out;
    out.beta_true.resize(spec.p, spec.t);
    for (Index j = 0; j < spec.t; ++j)
        for (Index i = 0; i < spec.p; ++i) out.beta_true(i, j) = rng.normal();

    out.Y = X * out.beta_true;
    for (Index j = 0; j < spec.t; ++j) {
        double sd = spec.noise_scale;
        if (spec.noise == NoiseMode::match_signal_sd) sd *= population_sd(out.Y.col(j));
        for (Index i = 0; i < X.rows(); ++i) {
            const double eps = rng.normal();
            out.Y(i, j) += sd * eps;
        }
    }
    return out;
}

double mean_abs_column_correlation(const Matrix& X) {
    const Index p = X.cols();
    if (p < 2) return 0.0;
    Matrix centered = X.rowwise() - X.colwise().mean();
    const Vector norms = centered.colwise().norm();
    double total = 0.0;
    Index pairs = 0;
    for (Index a = 0; a < p; ++a)
        for (Index b = a + 1; b < p; ++b) {
            if (norms[a] == 0.0 || norms[b] == 0.0) continue;
            total += std::abs(centered.col(a).dot(centered.col(b)) / (norms[a] * norms[b]));
            ++pairs;
        }
    return pairs ? total / static_cast<double>(pairs) : 0.0;
}

}  // namespace fracridge
