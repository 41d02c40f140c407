#include "fracridge/bench.hpp"

#include "fracridge/baselines.hpp"
#include "fracridge/error.hpp"
#include "fracridge/frr.hpp"
#include "fracridge/linalg.hpp"
#include "fracridge/matrix_io.hpp"
#include "fracridge/random.hpp"
#include "fracridge/simulate.hpp"

#include "json.hpp"

#include <atomic>
#include <mutex>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <new>
#include <optional>
#include <sstream>
#include <thread>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace fracridge {
namespace {

#if defined(__GLIBC__) && (__GLIBC__ > 2 || (__GLIBC__ == 2 && __GLIBC_MINOR__ >= 33))
constexpr const char* kMemoryMechanism = "mallinfo2-sampled";
double allocated_bytes() {
    const struct mallinfo2 mi = mallinfo2();
    return static_cast<double>(mi.uordblks) + static_cast<double>(mi.hblkhd);
}
#else
constexpr const char* kMemoryMechanism = "rss-sampled";
double allocated_bytes() {
    long pages = 0, resident = 0;
    if (std::FILE* f = std::fopen("/proc/self/statm", "r")) {
        if (std::fscanf(f, "%ld %ld", &pages, &resident) != 2) resident = 0;
        std::fclose(f);
    }
    return static_cast<double>(resident) * 4096.0;
}
#endif

/// Polls the allocator from a background thread while a fit runs.
class MemorySampler {
public:
    explicit MemorySampler(double interval_ms)
        : interval_(std::chrono::duration<double, std::milli>(interval_ms)), baseline_(allocated_bytes()) {
        worker_ = std::jthread([this](std::stop_token st) {
            while (!st.stop_requested()) {
                record(allocated_bytes());
                std::this_thread::sleep_for(interval_);
            }
        });
    }

    /// Stops sampling; returns {peak, mean} above the starting level.
    std::pair<double, double> finish() {
        record(allocated_bytes());
        worker_.request_stop();
        worker_.join();
        return {peak_, count_ ? sum_ / static_cast<double>(count_) : 0.0};
    }

private:
    void record(double bytes) {
        const double extra = std::max(0.0, bytes - baseline_);
        std::lock_guard lock(mutex_);
        peak_ = std::max(peak_, extra);
        sum_ += extra;
        ++count_;
    }

    std::chrono::duration<double, std::milli> interval_;
    double baseline_;
    std::mutex mutex_;
    double peak_ = 0.0;
    double sum_ = 0.0;
    std::size_t count_ = 0;
    std::jthread worker_;
};

struct Problem {
    Index d = 0, p = 0, t = 0;
    Matrix X, Y;
};

Problem make_problem(const BenchScenario& s, std::uint64_t seed) {
    SimulationSpec spec;
    spec.d = s.d;
    spec.p = s.p;
    spec.t = s.t;
    spec.noise = NoiseMode::match_signal_sd;
    spec.correlation_rounds = 0;
    spec.seed = derive_seed(seed, static_cast<std::uint64_t>(s.d) * 1000003ULL +
                                      static_cast<std::uint64_t>(s.p) * 1009ULL +
                                      static_cast<std::uint64_t>(s.t));
    Problem prob{s.d, s.p, s.t, simulate_design(spec), {}};
    prob.Y = simulate_targets(prob.X, spec).Y;
    return prob;
}

Matrix fit_once(const BenchScenario& s, const Problem& prob, unsigned threads) {
    const DesignMatrix X(prob.X);
    const TargetBlock Y(prob.Y);
    switch (s.method) {
        case BenchMethod::naive:
            return solve_ridge_naive(X, Y, AlphaList::log_linspace(-4.0, 5.0, static_cast<std::size_t>(s.f)));
        case BenchMethod::rotated: {
            const RotatedProblem rp = decompose_design(X, Y, kDefaultTruncationTolerance,
                                                       DecompositionPath::automatic, threads);
            return solve_ridge_rotated(rp, AlphaList::log_linspace(-4.0, 5.0, static_cast<std::size_t>(s.f)),
                                       threads);
        }
        case BenchMethod::frr: {
            std::vector<double> fracs;
            for (Index k = 1; k <= s.f; ++k) fracs.push_back(static_cast<double>(k) / static_cast<double>(s.f));
            FrrOptions opts;
            opts.threads = threads;
            return solve_frr(X, Y, FractionGrid(std::move(fracs)), opts).coefficients;
        }
    }
    throw InternalInvariant("unknown benchmark method");
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
    return out + "\"";
}

std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    return fields;
}

}  // namespace

std::string_view to_string(BenchMethod method) {
    switch (method) {
        case BenchMethod::naive: return "naive";
        case BenchMethod::rotated: return "rotated";
        case BenchMethod::frr: return "frr";
    }
    return "frr";
}

BenchMethod parse_bench_method(std::string_view text) {
    if (text == "naive") return BenchMethod::naive;
    if (text == "rotated") return BenchMethod::rotated;
    if (text == "frr") return BenchMethod::frr;
    throw InvalidInput("unknown benchmark method '" + std::string(text) + "' (expected naive, rotated or frr)");
}

void BenchScenario::validate() const {
    if (d < 1 || p < 1 || t < 1 || f < 1 || repeats < 1)
        throw InvalidInput("benchmark dimensions and repeats must be at least 1");
}

std::vector<BenchScenario> sweep_scenarios(const BenchScenario& base,
                                           const std::map<std::string, std::vector<Index>>& sweeps,
                                           const std::vector<BenchMethod>& methods) {
    std::vector<BenchScenario> out;
    auto add = [&](BenchScenario s) {
        for (const BenchMethod m : methods) {
            s.method = m;
            s.validate();
            out.push_back(s);
        }
    };
    if (sweeps.empty()) {
        BenchScenario s = base;
        s.sweep = "base";
        add(s);
        return out;
    }
    for (const auto& [factor, values] : sweeps) {
        for (const Index v : values) {
            BenchScenario s = base;
            s.sweep = factor;
            if (factor == "d") s.d = v;
            else if (factor == "p") s.p = v;
            else if (factor == "t") s.t = v;
            else if (factor == "f") s.f = v;
            else throw InvalidInput("unknown sweep factor '" + factor + "' (expected d, p, t or f)");
            add(s);
        }
    }
    return out;
}

std::string matrix_digest(const Matrix& m) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
    const std::size_t n = static_cast<std::size_t>(m.size()) * sizeof(double);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<BenchRecord> run_benchmark(const std::vector<BenchScenario>& scenarios, std::uint64_t seed,
                                       const BenchOptions& options) {
    std::vector<BenchRecord> records;
    std::optional<Problem> cached;
    for (const BenchScenario& s : scenarios) {
        BenchRecord rec;
        rec.scenario = s;
        rec.threads = options.threads;
        rec.memory_mechanism = kMemoryMechanism;
        try {
            s.validate();
            if (!cached || cached->d != s.d || cached->p != s.p || cached->t != s.t) {
                cached.reset();
                cached = make_problem(s, seed);
            }
            double total_time = 0.0, total_mean = 0.0, peak = 0.0;
            for (int rep = 0; rep < s.repeats; ++rep) {
                MemorySampler sampler(options.sample_interval_ms);
                const auto start = std::chrono::steady_clock::now();
                Matrix coef = fit_once(s, *cached, options.threads);
                const auto stop = std::chrono::steady_clock::now();
                const auto [rep_peak, rep_mean] = sampler.finish();
                total_time += std::chrono::duration<double>(stop - start).count();
                total_mean += rep_mean;
                peak = std::max(peak, rep_peak);
                const std::string digest = matrix_digest(coef);
                if (rep == 0)
                    rec.coefficient_digest = digest;
                else if (digest != rec.coefficient_digest)
                    rec.repeats_identical = false;
            }
            rec.wall_time_seconds = total_time / s.repeats;
            rec.mean_extra_memory_bytes = std::min(peak, total_mean / s.repeats);
            rec.peak_extra_memory_bytes = peak;
        } catch (const std::bad_alloc&) {
            cached.reset();
            rec.ok = false;
            rec.error = "out of memory";
        } catch (const Error& e) {
            rec.ok = false;
            rec.error = e.what();
        }
        records.push_back(std::move(rec));
    }
    return records;
}

const std::vector<std::string>& bench_csv_header() {
    static const std::vector<std::string> header = {
        "sweep", "method", "d", "p", "t", "f", "repeats", "ok", "wall_time_seconds",
        "peak_extra_memory_bytes", "mean_extra_memory_bytes", "threads", "memory_mechanism",
        "coefficient_digest", "repeats_identical", "error"};
    return header;
}

void emit_bench_report(const std::vector<BenchRecord>& records, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

    std::ostringstream csv;
    const auto& header = bench_csv_header();
    for (std::size_t i = 0; i < header.size(); ++i) csv << (i ? "," : "") << header[i];
    csv << '\n';

    nlohmann::json doc;
    doc["schema"] = "fracridge-bench/1";
    doc["records"] = nlohmann::json::array();
    for (const BenchRecord& r : records) {
        const BenchScenario& s = r.scenario;
        csv << s.sweep << ',' << to_string(s.method) << ',' << s.d << ',' << s.p << ',' << s.t << ',' << s.f << ','
            << s.repeats << ',' << (r.ok ? "true" : "false") << ',' << format_double(r.wall_time_seconds) << ','
            << format_double(r.peak_extra_memory_bytes) << ',' << format_double(r.mean_extra_memory_bytes) << ','
            << r.threads << ',' << r.memory_mechanism << ',' << r.coefficient_digest << ','
            << (r.repeats_identical ? "true" : "false") << ',' << csv_escape(r.error) << '\n';

        nlohmann::json j;
        j["sweep"] = s.sweep;
        j["method"] = std::string(to_string(s.method));
        j["d"] = s.d;
        j["p"] = s.p;
        j["t"] = s.t;
        j["f"] = s.f;
        j["repeats"] = s.repeats;
        j["ok"] = r.ok;
        j["wall_time_seconds"] = r.wall_time_seconds;
        j["peak_extra_memory_bytes"] = r.peak_extra_memory_bytes;
        j["mean_extra_memory_bytes"] = r.mean_extra_memory_bytes;
        j["threads"] = r.threads;
        j["memory_mechanism"] = r.memory_mechanism;
        j["coefficient_digest"] = r.coefficient_digest;
        j["repeats_identical"] = r.repeats_identical;
        j["error"] = r.error;
        doc["records"].push_back(std::move(j));
    }

    std::ofstream csv_out(dir / "bench.csv", std::ios::trunc);
    std::ofstream json_out(dir / "bench.json", std::ios::trunc);
    if (!csv_out || !json_out) throw IoError("cannot write benchmark report into '" + dir.string() + "'");
    csv_out << csv.str();
    json_out << doc.dump(2) << '\n';
}

std::vector<BenchRecord> read_bench_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(is, line) || parse_csv_line(line) != bench_csv_header())
        throw IoError("'" + path.string() + "' does not carry the benchmark header");

    std::vector<BenchRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = parse_csv_line(line);
        if (f.size() != bench_csv_header().size()) throw IoError("malformed benchmark row in '" + path.string() + "'");
        BenchRecord r;
        try {
            r.scenario.sweep = f[0];
            r.scenario.method = parse_bench_method(f[1]);
            r.scenario.d = std::stoll(f[2]);
            r.scenario.p = std::stoll(f[3]);
            r.scenario.t = std::stoll(f[4]);
            r.scenario.f = std::stoll(f[5]);
            r.scenario.repeats = std::stoi(f[6]);
            r.threads = static_cast<unsigned>(std::stoul(f[11]));
        } catch (const std::logic_error&) {
            throw IoError("malformed benchmark row in '" + path.string() + "'");
        }
        r.ok = f[7] == "true";
        r.wall_time_seconds = parse_double(f[8]);
        r.peak_extra_memory_bytes = parse_double(f[9]);
        r.mean_extra_memory_bytes = parse_double(f[10]);
        r.memory_mechanism = f[12];
        r.coefficient_digest = f[13];
        r.repeats_identical = f[14] == "true";
        r.error = f[15];
        out.push_back(std::move(r));
    }
    return out;
}

double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw InvalidInput("slope fit needs two or more paired points");
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0) throw InvalidInput("slope fit needs distinct x values");
    return sxy / sxx;
}

}  // namespace fracridge
