#pragma once

#include "fracridge/cv.hpp"
#include "fracridge/frr.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace fracridge {

/// Run settings recorded next to fit outputs.
struct FitRunInfo {
    double requested_tolerance = kDefaultTruncationTolerance;
    unsigned threads = 1;
    double wall_time_seconds = 0.0;
};

/// Writes into `dir` (created if needed):
///   coefficients.frmx       p x (f*t), column fraction * t + target
///   alphas.csv              f x t, "inf" for the unbounded penalty, "nan" if unset
///   achieved_fractions.csv  f x t
///   intercepts.csv          f x t, only for standardized fits
///   summary.json
void write_fit_artifacts(const FrrSolution& sol, const std::filesystem::path& dir, const FitRunInfo& info);

nlohmann::json fit_summary(const FrrSolution& sol, const FitRunInfo& info);

struct CvRunInfo {
    double train_fraction = 0.5;
    std::uint64_t seed = 0;
    Standardization standardization = Standardization::none;
    R2Baseline baseline = R2Baseline::test_mean;
};

/// cv_report.json plus cv_curves.csv (target, fraction, r2).
void write_cv_artifacts(const CvReport& report, const std::filesystem::path& dir, const CvRunInfo& info);

nlohmann::json cv_report_json(const CvReport& report, const CvRunInfo& info);

struct CurvePoint {
    Index target = 0;
    double fraction = 0.0;
    double r2 = 0.0;
};

std::vector<CurvePoint> read_cv_curves(const std::filesystem::path& path);

/// Fraction/alpha as JSON: numbers, "inf" for the unbounded sentinel, null when unset.
nlohmann::json json_number(double v);

/// Plot-ready outputs written by `report`. Each returns the files it created.
std::vector<std::filesystem::path> render_cv_report(const std::filesystem::path& cv_curves,
                                                    const std::filesystem::path& out_dir);
std::vector<std::filesystem::path> render_fit_report(const std::filesystem::path& fit_dir,
                                                     const std::filesystem::path& out_dir, Index target);
std::vector<std::filesystem::path> render_bench_report(const std::filesystem::path& bench_csv,
                                                       const std::filesystem::path& out_dir);

}  // namespace fracridge
