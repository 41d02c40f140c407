#pragma once

#include "fracridge/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fracridge {

enum class BenchMethod { naive, rotated, frr };

std::string_view to_string(BenchMethod method);
BenchMethod parse_bench_method(std::string_view text);

/// One timed configuration. `t` is the number of targets, `f` the number of
/// regularization levels. `sweep` names the factor varied from the base case
/// ("base", "d", "p", "f" or "t") and only labels the output.
struct BenchScenario {
    Index d = 1000;
    Index p = 1000;
    Index t = 1000;
    Index f = 20;
    BenchMethod method = BenchMethod::frr;
    int repeats = 1;
    std::string sweep = "base";

    void validate() const;
};

struct BenchRecord {
    BenchScenario scenario;
    bool ok = true;
    std::string error;
    double wall_time_seconds = 0.0;        ///< mean over repeats
    double peak_extra_memory_bytes = 0.0;  ///< max over repeats
    double mean_extra_memory_bytes = 0.0;  ///< time-averaged, mean over repeats
    unsigned threads = 1;
    std::string memory_mechanism;
    std::string coefficient_digest;  ///< FNV-1a of the first repeat's coefficients
    bool repeats_identical = true;   ///< every repeat produced the same digest
};

struct BenchOptions {
    unsigned threads = 1;
    double sample_interval_ms = 2.0;
};

/// For every entry of `sweeps`, one scenario per listed value with only that
/// factor changed from `base`, repeated for each method. With no sweeps the
/// result is just `base` for each method.
std::vector<BenchScenario> sweep_scenarios(const BenchScenario& base,
                                           const std::map<std::string, std::vector<Index>>& sweeps,
                                           const std::vector<BenchMethod>& methods);

/// Runs scenarios sequentially. Problem generation is excluded from timing;
/// problems are shared between methods with the same (d, p, t). Allocation
/// failures are recorded on the scenario and the run continues.
///
/// naive/rotated use f penalties log-spaced from 1e-4 to 1e5; frr uses the
/// fractions 1/f, 2/f, ..., 1.
std::vector<BenchRecord> run_benchmark(const std::vector<BenchScenario>& scenarios, std::uint64_t seed,
                                       const BenchOptions& options = {});

/// Writes bench.csv (one row per record, long format) and bench.json.
void emit_bench_report(const std::vector<BenchRecord>& records, const std::filesystem::path& dir);

/// Reads back the CSV written by emit_bench_report.
std::vector<BenchRecord> read_bench_csv(const std::filesystem::path& path);

/// Header row of bench.csv.
const std::vector<std::string>& bench_csv_header();

/// Ordinary least-squares slope of ys against xs.
double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// 64-bit FNV-1a over the raw bytes of a matrix, as 16 hex digits.
std::string matrix_digest(const Matrix& m);

}  // namespace fracridge
