// fracridge command-line front-end.
//
// Exit codes: 0 success, 1 unexpected failure, 2 bad arguments,
// 3 input parse/shape error, 4 degenerate design. Errors go to stderr as a
// single line prefixed with "error[<exit code>]:".

#include "fracridge/bench.hpp"
#include "fracridge/cv.hpp"
#include "fracridge/error.hpp"
#include "fracridge/frr.hpp"
#include "fracridge/matrix_io.hpp"
#include "fracridge/report.hpp"
#include "fracridge/simulate.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace fracridge;

namespace {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kBadArguments = 2,
    kBadInput = 3,
    kDegenerate = 4,
};

/// Carries an exit code through to main.
struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw CliError{code, message}; }

std::string one_line(std::string s) {
    for (char& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

FractionGrid parse_fractions(const std::string& text) {
    try {
        if (text.find(':') != std::string::npos) {
            std::vector<double> parts;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ':')) parts.push_back(parse_double(item));
            if (parts.size() != 3) fail(kBadArguments, "--fracs range must be START:STOP:STEP");
            return FractionGrid::range(parts[0], parts[1], parts[2]);
        }
        std::vector<double> values;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) values.push_back(parse_double(item));
        return FractionGrid(std::move(values));
    } catch (const Error& e) {
        fail(kBadArguments, std::string("--fracs: ") + e.what());
    }
}

unsigned thread_count(unsigned flag_value) {
    if (const char* env = std::getenv("FRACSOLVE_THREADS"); env && *env) {
        try {
            const long v = std::stol(env);
            if (v < 0) throw std::out_of_range("negative");
            return static_cast<unsigned>(v);
        } catch (const std::logic_error&) {
            fail(kBadArguments, "FRACSOLVE_THREADS must be a non-negative integer");
        }
    }
    return flag_value;
}

template <class Fn>
auto as_argument(Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        fail(kBadArguments, e.what());
    }
}

/// Reads X and Y, mapping any failure to the input exit code.
std::pair<Matrix, Matrix> load_problem(const std::string& design, const std::string& targets) {
    try {
        Matrix X = read_matrix(design);
        Matrix Y = read_matrix(targets);
        if (X.rows() != Y.rows())
            fail(kBadInput, "design has " + std::to_string(X.rows()) + " rows but targets have " +
                                std::to_string(Y.rows()));
        require_finite(X, "design matrix");
        require_finite(Y, "target block");
        return {std::move(X), std::move(Y)};
    } catch (const Error& e) {
        fail(kBadInput, e.what());
    }
}

/// Runs a computation, classifying library errors into exit codes.
template <class Fn>
auto compute(Fn&& fn) {
    try {
        return fn();
    } catch (const DegenerateDesign& e) {
        fail(kDegenerate, e.what());
    } catch (const InvalidInput& e) {
        fail(kBadInput, e.what());
    } catch (const IoError& e) {
        fail(kBadInput, e.what());
    } catch (const std::bad_alloc&) {
        fail(kFailure, "out of memory");
    }
}

template <class Fn>
void write_outputs(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        fail(kFailure, e.what());
    }
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    std::string design, targets, out;
    std::string fracs = "0.05:1.0:0.05";
    double tol = kDefaultTruncationTolerance;
    std::string standardize = "none";
    unsigned threads = 0;
};

void run_fit(const FitArgs& a) {
    const FractionGrid fractions = parse_fractions(a.fracs);
    FrrOptions opts;
    opts.tolerance = a.tol;
    opts.standardization = as_argument([&] { return parse_standardization(a.standardize); });
    opts.threads = thread_count(a.threads);
    if (!(a.tol > 0.0 && a.tol < 1.0)) fail(kBadArguments, "--tol must lie in (0, 1)");

    auto [X, Y] = load_problem(a.design, a.targets);
    const auto start = std::chrono::steady_clock::now();
    const FrrSolution sol = compute([&] {
        return solve_frr(DesignMatrix(std::move(X)), TargetBlock(std::move(Y)), fractions, opts);
    });
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    write_outputs([&] { write_fit_artifacts(sol, a.out, {a.tol, opts.threads, elapsed}); });
}

// ---------------------------------------------------------------- cv

struct CvArgs {
    std::string design, targets, out;
    std::string fracs = "0.05:1.0:0.05";
    double train_frac = 0.5;
    std::uint64_t seed = 0;
    double tol = kDefaultTruncationTolerance;
    std::string standardize = "none";
    std::string baseline = "test_mean";
    unsigned threads = 0;
};

void run_cv(const CvArgs& a) {
    const FractionGrid fractions = parse_fractions(a.fracs);
    CvOptions opts;
    opts.tolerance = a.tol;
    opts.standardization = as_argument([&] { return parse_standardization(a.standardize); });
    opts.threads = thread_count(a.threads);
    if (a.baseline == "test_mean")
        opts.baseline = R2Baseline::test_mean;
    else if (a.baseline == "zero")
        opts.baseline = R2Baseline::zero;
    else
        fail(kBadArguments, "--r2-baseline must be test_mean or zero");
    if (!(a.train_frac > 0.0 && a.train_frac < 1.0)) fail(kBadArguments, "--train-frac must lie in (0, 1)");
    if (!(a.tol > 0.0 && a.tol < 1.0)) fail(kBadArguments, "--tol must lie in (0, 1)");

    auto [X, Y] = load_problem(a.design, a.targets);
    const HoldoutSplit split = compute([&] { return split_holdout(X.rows(), a.train_frac, a.seed); });
    const CvReport report = compute([&] { return cross_validate(X, Y, fractions, split, opts); });
    write_outputs([&] {
        write_cv_artifacts(report, a.out, {a.train_frac, a.seed, opts.standardization, opts.baseline});
    });
}

// ---------------------------------------------------------------- simulate

struct SimArgs {
    Index d = 100, p = 10, t = 1;
    std::string noise = "unit";
    double noise_scale = 1.0;
    long long rounds = -1;
    std::uint64_t seed = 0;
    std::string format = "csv";
    std::string out;
};

void run_simulate(const SimArgs& a) {
    SimulationSpec spec;
    spec.d = a.d;
    spec.p = a.p;
    spec.t = a.t;
    spec.noise = as_argument([&] { return parse_noise_mode(a.noise); });
    spec.noise_scale = a.noise_scale;
    if (a.rounds >= 0) spec.correlation_rounds = static_cast<Index>(a.rounds);
    spec.seed = a.seed;
    as_argument([&] {
        spec.validate();
        return 0;
    });
    if (a.format != "csv" && a.format != "binary") fail(kBadArguments, "--format must be csv or binary");

    const Matrix X = simulate_design(spec);
    const SimulatedTargets sim = simulate_targets(X, spec);
    const std::string ext = a.format == "csv" ? ".csv" : ".frmx";

    write_outputs([&] {
        std::error_code ec;
        fs::create_directories(a.out, ec);
        if (ec) throw IoError("cannot create '" + a.out + "': " + ec.message());
        const fs::path dir(a.out);
        write_matrix(dir / ("X" + ext), X);
        write_matrix(dir / ("Y" + ext), sim.Y);
        write_matrix(dir / ("beta_true" + ext), sim.beta_true);
        nlohmann::json j;
        j["version"] = FRACRIDGE_VERSION;
        j["d"] = spec.d;
        j["p"] = spec.p;
        j["t"] = spec.t;
        j["noise"] = std::string(to_string(spec.noise));
        j["noise_scale"] = spec.noise_scale;
        j["correlation_rounds"] = spec.rounds();
        j["seed"] = spec.seed;
        j["prng"] = "xoshiro256** seeded by splitmix64; normals by Marsaglia polar method";
        j["files"] = {"X" + ext, "Y" + ext, "beta_true" + ext};
        std::ofstream os(dir / "simulation.json", std::ios::trunc);
        if (!os) throw IoError("cannot write simulation.json");
        os << j.dump(2) << '\n';
    });
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    Index d = 1000, p = 1000, t = 1000, f = 20;
    std::vector<std::string> sweeps;
    std::string methods = "naive,rotated,frr";
    int repeats = 1;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out;
};

void run_bench(const BenchArgs& a) {
    BenchScenario base;
    base.d = a.d;
    base.p = a.p;
    base.t = a.t;
    base.f = a.f;
    base.repeats = a.repeats;

    std::vector<BenchMethod> methods;
    std::map<std::string, std::vector<Index>> sweeps;
    const auto scenarios = as_argument([&] {
        std::stringstream ms(a.methods);
        std::string item;
        while (std::getline(ms, item, ',')) methods.push_back(parse_bench_method(item));
        for (const auto& sweep : a.sweeps) {
            const auto eq = sweep.find('=');
            if (eq == std::string::npos) throw InvalidInput("--sweep expects FACTOR=V1,V2,...");
            std::vector<Index>& values = sweeps[sweep.substr(0, eq)];
            std::stringstream vs(sweep.substr(eq + 1));
            while (std::getline(vs, item, ',')) {
                try {
                    values.push_back(std::stoll(item));
                } catch (const std::logic_error&) {
                    throw InvalidInput("--sweep value '" + item + "' is not an integer");
                }
            }
        }
        return sweep_scenarios(base, sweeps, methods);
    });

    BenchOptions opts;
    opts.threads = thread_count(a.threads);
    const auto records = run_benchmark(scenarios, a.seed, opts);
    write_outputs([&] { emit_bench_report(records, a.out); });
    for (const auto& r : records) {
        const auto& s = r.scenario;
        std::cout << to_string(s.method) << " d=" << s.d << " p=" << s.p << " t=" << s.t << " f=" << s.f << ": "
                  << (r.ok ? std::to_string(r.wall_time_seconds) + " s" : "failed (" + r.error + ")") << '\n';
    }
}

// ---------------------------------------------------------------- report

struct ReportArgs {
    std::string cv_curves, fit_dir, bench_csv, out;
    Index target = 0;
};

void run_report(const ReportArgs& a) {
    if (a.cv_curves.empty() && a.fit_dir.empty() && a.bench_csv.empty())
        fail(kBadArguments, "report needs at least one of --cv-curves, --fit, --bench");
    std::vector<fs::path> written;
    auto append = [&](std::vector<fs::path> files) { written.insert(written.end(), files.begin(), files.end()); };
    compute([&] {
        if (!a.cv_curves.empty()) append(render_cv_report(a.cv_curves, a.out));
        if (!a.fit_dir.empty()) append(render_fit_report(a.fit_dir, a.out, a.target));
        if (!a.bench_csv.empty()) append(render_bench_report(a.bench_csv, a.out));
        return 0;
    });
    for (const auto& f : written) std::cout << f.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional ridge regression toolkit"};
    app.set_version_flag("--version", FRACRIDGE_VERSION);
    app.require_subcommand(1);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit ridge solutions at requested norm fractions");
    fit_cmd->add_option("--design", fit.design, "Design matrix (CSV or .frmx)")->required();
    fit_cmd->add_option("--targets", fit.targets, "Target matrix (CSV or .frmx)")->required();
    fit_cmd->add_option("--fracs", fit.fracs, "START:STOP:STEP or comma list")->capture_default_str();
    fit_cmd->add_option("--tol", fit.tol, "Relative singular-value cutoff")->capture_default_str();
    fit_cmd->add_option("--standardize", fit.standardize, "none, center or zscore")->capture_default_str();
    fit_cmd->add_option("--threads", fit.threads, "Worker threads, 0 = all cores")->capture_default_str();
    fit_cmd->add_option("--out", fit.out, "Output directory")->required();

    CvArgs cv;
    auto* cv_cmd = app.add_subcommand("cv", "Holdout cross-validation over norm fractions");
    cv_cmd->add_option("--design", cv.design)->required();
    cv_cmd->add_option("--targets", cv.targets)->required();
    cv_cmd->add_option("--fracs", cv.fracs)->capture_default_str();
    cv_cmd->add_option("--train-frac", cv.train_frac, "Share of rows used for training")->capture_default_str();
    cv_cmd->add_option("--seed", cv.seed, "Split seed")->capture_default_str();
    cv_cmd->add_option("--tol", cv.tol)->capture_default_str();
    cv_cmd->add_option("--standardize", cv.standardize)->capture_default_str();
    cv_cmd->add_option("--r2-baseline", cv.baseline, "test_mean or zero")->capture_default_str();
    cv_cmd->add_option("--threads", cv.threads)->capture_default_str();
    cv_cmd->add_option("--out", cv.out)->required();

    SimArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Generate a seeded synthetic regression problem");
    sim_cmd->add_option("--d", sim.d, "Data points")->capture_default_str();
    sim_cmd->add_option("--p", sim.p, "Predictors")->capture_default_str();
    sim_cmd->add_option("--t", sim.t, "Targets")->capture_default_str();
    sim_cmd->add_option("--noise", sim.noise, "unit or match_signal_sd")->capture_default_str();
    sim_cmd->add_option("--noise-scale", sim.noise_scale, "Noise multiplier")->capture_default_str();
    sim_cmd->add_option("--rounds", sim.rounds, "Correlation rounds, default 2p");
    sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
    sim_cmd->add_option("--format", sim.format, "csv or binary")->capture_default_str();
    sim_cmd->add_option("--out", sim.out)->required();

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time naive, rotated and fractional ridge solvers");
    bench_cmd->add_option("--d", bench.d)->capture_default_str();
    bench_cmd->add_option("--p", bench.p)->capture_default_str();
    bench_cmd->add_option("--t", bench.t)->capture_default_str();
    bench_cmd->add_option("--f", bench.f)->capture_default_str();
    bench_cmd->add_option("--sweep", bench.sweeps, "FACTOR=V1,V2,... (d, p, t or f); repeatable");
    bench_cmd->add_option("--methods", bench.methods)->capture_default_str();
    bench_cmd->add_option("--repeats", bench.repeats)->capture_default_str();
    bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
    bench_cmd->add_option("--threads", bench.threads)->capture_default_str();
    bench_cmd->add_option("--out", bench.out)->required();

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "Render plot-ready tables and SVG charts");
    report_cmd->add_option("--cv-curves", report.cv_curves, "cv_curves.csv from the cv command");
    report_cmd->add_option("--fit", report.fit_dir, "Output directory of the fit command");
    report_cmd->add_option("--target", report.target, "Target for coefficient paths")->capture_default_str();
    report_cmd->add_option("--bench", report.bench_csv, "bench.csv from the bench command");
    report_cmd->add_option("--out", report.out)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error[" << kBadArguments << "]: " << one_line(e.what()) << '\n';
        return kBadArguments;
    }

    try {
        if (*fit_cmd) run_fit(fit);
        else if (*cv_cmd) run_cv(cv);
        else if (*sim_cmd) run_simulate(sim);
        else if (*bench_cmd) run_bench(bench);
        else if (*report_cmd) run_report(report);
    } catch (const CliError& e) {
        std::cerr << "error[" << e.code << "]: " << one_line(e.message) << '\n';
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error[" << kFailure << "]: " << one_line(e.what()) << '\n';
        return kFailure;
    }
    return kOk;
}
