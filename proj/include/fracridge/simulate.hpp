#pragma once

#include "fracridge/types.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace fracridge {

enum class NoiseMode {
    unit,             ///< standard-normal noise (times noise_scale)
    match_signal_sd,  ///< per-target noise sd equal to the sd of X * beta
};

std::string_view to_string(NoiseMode mode);
NoiseMode parse_noise_mode(std::string_view text);

struct SimulationSpec {
    Index d = 100;
    Index p = 10;
    Index t = 1;
    NoiseMode noise = NoiseMode::unit;
    /// Pairwise mixing rounds; unset means 2p.
    std::optional<Index> correlation_rounds;
    /// Multiplies the noise; 0 gives noiseless targets.
    double noise_scale = 1.0;
    std::uint64_t seed = 0;

    Index rounds() const { return correlation_rounds.value_or(2 * p); }
    void validate() const;
};

/// Standard-normal design, then `rounds()` times: pick two distinct columns
/// a, b uniformly and set col(a) = col(a) + col(b) + N(0, 1) noise, updating
/// in place. Finally each column is z-scored (population sd).
/// Draws fill the matrix column by column.
Matrix simulate_design(const SimulationSpec& spec);

struct SimulatedTargets {
    Matrix Y;          // d x t
    Matrix beta_true;  // p x t
};

/// beta ~ N(0, 1); Y = X beta + noise. Uses a stream separate from the design.
SimulatedTargets simulate_targets(const Matrix& X, const SimulationSpec& spec);

/// Mean absolute off-diagonal Pearson correlation between columns.
double mean_abs_column_correlation(const Matrix& X);

}  // namespace fracridge
