#include "fracridge/report.hpp"

#include "fracridge/bench.hpp"
#include "fracridge/error.hpp"
#include "fracridge/matrix_io.hpp"
#include "fracridge/svg.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fracridge {
namespace fs = std::filesystem;
namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::trunc | std::ios::binary);
    if (!os) throw IoError("cannot write '" + path.string() + "'");
    os << text;
    if (!os) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::string> target_header(Index t) {
    std::vector<std::string> h;
    for (Index j = 0; j < t; ++j) h.push_back("target_" + std::to_string(j));
    return h;
}

std::string_view path_name(DecompositionPath p) {
    switch (p) {
        case DecompositionPath::automatic: return "automatic";
        case DecompositionPath::direct: return "direct";
        case DecompositionPath::gram: return "gram";
    }
    return "direct";
}

nlohmann::json read_json(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path.string() + "'");
    try {
        return nlohmann::json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

}  // namespace

nlohmann::json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

nlohmann::json fit_summary(const FrrSolution& sol, const FitRunInfo& info) {
    nlohmann::json j;
    j["version"] = FRACRIDGE_VERSION;
    j["dimensions"] = {{"n_predictors", sol.n_predictors()},
                       {"n_targets", sol.n_targets()},
                       {"n_fractions", sol.n_fractions()}};
    j["effective_rank"] = sol.effective_rank;
    j["truncation_tolerance"] = {{"requested", info.requested_tolerance}, {"applied", sol.applied_tolerance}};
    j["decomposition"] = std::string(path_name(sol.path));
    j["standardization"] = std::string(to_string(sol.standardization));
    j["fractions"] = sol.fractions;
    j["degenerate_targets"] = sol.degenerate_targets;
    j["coefficient_layout"] = {{"file", "coefficients.frmx"},
                               {"rows", sol.n_predictors()},
                               {"cols", sol.n_fractions() * sol.n_targets()},
                               {"order", "fraction-major"},
                               {"column_index", "fraction * n_targets + target"}};
    j["alpha_encoding"] = {{"unbounded", "inf"}, {"unset", "nan"}};
    j["threads"] = info.threads;
    j["wall_time_seconds"] = info.wall_time_seconds;
    return j;
}

void write_fit_artifacts(const FrrSolution& sol, const fs::path& dir, const FitRunInfo& info) {
    ensure_dir(dir);
    write_matrix_binary(dir / "coefficients.frmx", sol.coefficients);
    write_matrix_csv(dir / "alphas.csv", sol.alphas, target_header(sol.n_targets()));
    write_matrix_csv(dir / "achieved_fractions.csv", sol.achieved_fractions, target_header(sol.n_targets()));
    if (sol.standardization != Standardization::none)
        write_matrix_csv(dir / "intercepts.csv", sol.intercepts, target_header(sol.n_targets()));
    write_text(dir / "summary.json", fit_summary(sol, info).dump(2) + "\n");
}

nlohmann::json cv_report_json(const CvReport& report, const CvRunInfo& info) {
    nlohmann::json j;
    j["version"] = FRACRIDGE_VERSION;
    j["fractions"] = report.fractions;
    j["n_train"] = report.n_train;
    j["n_test"] = report.n_test;
    j["train_fraction"] = info.train_fraction;
    j["seed"] = info.seed;
    j["standardization"] = std::string(to_string(info.standardization));
    j["r2_baseline"] = info.baseline == R2Baseline::test_mean ? "test_mean" : "zero";
    j["degenerate_targets"] = report.degenerate_targets;
    j["targets"] = nlohmann::json::array();
    for (const auto& t : report.per_target) {
        nlohmann::json e;
        e["target"] = t.target;
        e["scored"] = t.scored;
        if (!t.note.empty()) e["note"] = t.note;
        e["best_fraction"] = json_number(t.best_fraction);
        e["best_r2"] = json_number(t.best_r2);
        e["best_alpha"] = json_number(t.best_alpha);
        nlohmann::json curve = nlohmann::json::array();
        for (const double r2 : t.r2_by_fraction) curve.push_back(json_number(r2));
        e["r2_by_fraction"] = std::move(curve);
        j["targets"].push_back(std::move(e));
    }
    return j;
}

void write_cv_artifacts(const CvReport& report, const fs::path& dir, const CvRunInfo& info) {
    ensure_dir(dir);
    std::ostringstream csv;
    csv << "target,fraction,r2\n";
    for (const auto& t : report.per_target)
        for (std::size_t k = 0; k < report.fractions.size(); ++k)
            csv << t.target << ',' << format_double(report.fractions[k]) << ','
                << format_double(t.r2_by_fraction[k]) << '\n';
    write_text(dir / "cv_curves.csv", csv.str());
    write_text(dir / "cv_report.json", cv_report_json(report, info).dump(2) + "\n");
}

std::vector<CurvePoint> read_cv_curves(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(is, line) || line.rfind("target,fraction,r2", 0) != 0)
        throw IoError("'" + path.string() + "' does not carry the target,fraction,r2 header");
    std::vector<CurvePoint> pts;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw IoError("malformed row in '" + path.string() + "'");
        CurvePoint pt;
        pt.target = static_cast<Index>(parse_double(line.substr(0, c1)));
        pt.fraction = parse_double(line.substr(c1 + 1, c2 - c1 - 1));
        pt.r2 = parse_double(line.substr(c2 + 1));
        pts.push_back(pt);
    }
    return pts;
}

std::vector<fs::path> render_cv_report(const fs::path& cv_curves, const fs::path& out_dir) {
    const auto pts = read_cv_curves(cv_curves);
    ensure_dir(out_dir);
    std::map<Index, ChartSeries> by_target;
    std::ostringstream long_csv;
    long_csv << "panel,target,x,y\n";
    for (const auto& pt : pts) {
        auto& s = by_target[pt.target];
        s.name = "target " + std::to_string(pt.target);
        s.x.push_back(pt.fraction);
        s.y.push_back(pt.r2);
        long_csv << "r2_vs_fraction," << pt.target << ',' << format_double(pt.fraction) << ','
                 << format_double(pt.r2) << '\n';
    }
    LineChart chart{"Cross-validated R^2", "fraction (gamma)", "R^2", false, {}};
    for (auto& [_, s] : by_target) chart.series.push_back(std::move(s));

    const fs::path svg = out_dir / "r2_vs_fraction.svg";
    const fs::path table = out_dir / "r2_vs_fraction_long.csv";
    write_text(svg, render_svg(chart));
    write_text(table, long_csv.str());
    return {svg, table};
}

std::vector<fs::path> render_fit_report(const fs::path& fit_dir, const fs::path& out_dir, Index target) {
    const nlohmann::json summary = read_json(fit_dir / "summary.json");
    const Matrix coef = read_matrix_binary(fit_dir / "coefficients.frmx");
    std::vector<double> fractions;
    Index t = 0;
    try {
        fractions = summary.at("fractions").get<std::vector<double>>();
        t = summary.at("dimensions").at("n_targets").get<Index>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("summary.json is missing fields: " + std::string(e.what()));
    }
    const auto f = static_cast<Index>(fractions.size());
    if (t < 1 || coef.cols() != f * t) throw IoError("coefficients.frmx does not match summary.json");
    if (target < 0 || target >= t) throw InvalidInput("report target index out of range");
    ensure_dir(out_dir);

    std::ostringstream norms_csv, paths_csv;
    norms_csv << "target,fraction,l2_norm\n";
    paths_csv << "target,fraction,predictor,coefficient\n";
    LineChart norms{"Coefficient L2-norm", "fraction (gamma)", "||beta||_2", false, {}};
    for (Index j = 0; j < t; ++j) {
        ChartSeries s{"target " + std::to_string(j), {}, {}};
        for (Index fi = 0; fi < f; ++fi) {
            const double n = coef.col(fi * t + j).norm();
            s.x.push_back(fractions[static_cast<std::size_t>(fi)]);
            s.y.push_back(n);
            norms_csv << j << ',' << format_double(fractions[static_cast<std::size_t>(fi)]) << ','
                      << format_double(n) << '\n';
        }
        norms.series.push_back(std::move(s));
    }
    LineChart paths{"Coefficient paths, target " + std::to_string(target), "fraction (gamma)", "beta", false, {}};
    for (Index i = 0; i < coef.rows(); ++i) {
        ChartSeries s{"predictor " + std::to_string(i), {}, {}};
        for (Index fi = 0; fi < f; ++fi) {
            const double b = coef(i, fi * t + target);
            s.x.push_back(fractions[static_cast<std::size_t>(fi)]);
            s.y.push_back(b);
            paths_csv << target << ',' << format_double(fractions[static_cast<std::size_t>(fi)]) << ',' << i << ','
                      << format_double(b) << '\n';
        }
        paths.series.push_back(std::move(s));
    }
    const std::vector<fs::path> files = {out_dir / "norm_vs_fraction.svg", out_dir / "norm_vs_fraction_long.csv",
                                         out_dir / "coefficient_paths.svg", out_dir / "coefficient_paths_long.csv"};
    write_text(files[0], render_svg(norms));
    write_text(files[1], norms_csv.str());
    write_text(files[2], render_svg(paths));
    write_text(files[3], paths_csv.str());
    return files;
}

std::vector<fs::path> render_bench_report(const fs::path& bench_csv, const fs::path& out_dir) {
    const auto records = read_bench_csv(bench_csv);
    ensure_dir(out_dir);
    std::ostringstream long_csv;
    long_csv << "sweep,method,x,wall_time_seconds,peak_extra_memory_bytes,mean_extra_memory_bytes\n";

    std::map<std::string, std::map<std::string, ChartSeries>> time_by_sweep, mem_by_sweep;
    for (const auto& r : records) {
        if (!r.ok) continue;
        const auto& s = r.scenario;
        const std::string factor = s.sweep == "base" ? "f" : s.sweep;
        const Index x = factor == "d" ? s.d : factor == "p" ? s.p : factor == "t" ? s.t : s.f;
        const std::string method(to_string(s.method));
        long_csv << s.sweep << ',' << method << ',' << x << ',' << format_double(r.wall_time_seconds) << ','
                 << format_double(r.peak_extra_memory_bytes) << ',' << format_double(r.mean_extra_memory_bytes)
                 << '\n';
        auto& ts = time_by_sweep[factor][method];
        ts.name = method;
        ts.x.push_back(static_cast<double>(x));
        ts.y.push_back(r.wall_time_seconds);
        auto& peak = mem_by_sweep[factor][method + " peak"];
        peak.name = method + " peak";
        peak.x.push_back(static_cast<double>(x));
        peak.y.push_back(r.peak_extra_memory_bytes / 1048576.0);
        auto& mean = mem_by_sweep[factor][method + " mean"];
        mean.name = method + " mean";
        mean.x.push_back(static_cast<double>(x));
        mean.y.push_back(r.mean_extra_memory_bytes / 1048576.0);
    }

    std::vector<fs::path> files;
    const fs::path table = out_dir / "bench_long.csv";
    write_text(table, long_csv.str());
    files.push_back(table);
    for (auto& [factor, series] : time_by_sweep) {
        LineChart c{"Execution time vs " + factor, factor, "seconds", false, {}};
        for (auto& [_, s] : series) c.series.push_back(std::move(s));
        files.push_back(out_dir / ("bench_time_" + factor + ".svg"));
        write_text(files.back(), render_svg(c));
    }
    for (auto& [factor, series] : mem_by_sweep) {
        LineChart c{"Extra memory vs " + factor, factor, "MiB", false, {}};
        for (auto& [_, s] : series) c.series.push_back(std::move(s));
        files.push_back(out_dir / ("bench_memory_" + factor + ".svg"));
        write_text(files.back(), render_svg(c));
    }
    return files;
}

}  // namespace fracridge
