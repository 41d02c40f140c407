#include "fracridge/cv.hpp"

#include "fracridge/error.hpp"
#include "fracridge/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fracridge {

HoldoutSplit split_holdout(Index d, double train_fraction, std::uint64_t seed) {
    if (d < 2) throw InvalidInput("a holdout split needs at least two rows");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidInput("train fraction must lie in (0, 1)");
    const auto n_train = static_cast<Index>(std::llround(static_cast<double>(d) * train_fraction));
    if (n_train < 1 || n_train >= d)
        throw InvalidInput("train fraction leaves one side of the split empty");

    std::vector<Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Index{0});
    Rng rng(seed);
    for (std::size_t i = order.size() - 1; i > 0; --i)
        std::swap(order[i], order[rng.uniform_index(i + 1)]);

    HoldoutSplit split;
    split.train.assign(order.begin(), order.begin() + n_train);
    split.test.assign(order.begin() + n_train, order.end());
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

double r_squared(std::span<const double> y_true, std::span<const double> y_pred, R2Baseline baseline) {
    if (y_true.size() != y_pred.size()) throw InvalidInput("R^2 inputs differ in length");
    if (y_true.size() < 2) throw InvalidInput("R^2 needs at least two observations");
    double center = 0.0;
    if (baseline == R2Baseline::test_mean)
        center = std::accumulate(y_true.begin(), y_true.end(), 0.0) / static_cast<double>(y_true.size());
    double sse = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double e = y_true[i] - y_pred[i];
        const double c = y_true[i] - center;
        sse += e * e;
        sst += c * c;
    }
    if (sst == 0.0) throw UndefinedScore("test target has zero variance; R^2 is undefined");
    return 1.0 - sse / sst;
}

Matrix select_rows(const Matrix& m, std::span<const Index> rows) {
    Matrix out(static_cast<Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < 0 || rows[i] >= m.rows()) throw InvalidInput("split index out of range");
        out.row(static_cast<Index>(i)) = m.row(rows[i]);
    }
    return out;
}

CvReport cross_validate(const Matrix& X, const Matrix& Y, const FractionGrid& fractions,
                        const HoldoutSplit& split, const CvOptions& options) {
    if (X.rows() != Y.rows()) throw InvalidInput("design and targets have different row counts");
    if (split.train.empty() || split.test.empty()) throw InvalidInput("split has an empty side");

    const Matrix x_test = select_rows(X, split.test);
    const Matrix y_test = select_rows(Y, split.test);

    FrrOptions frr;
    frr.tolerance = options.tolerance;
    frr.standardization = options.standardization;
    frr.threads = options.threads;
    const FrrSolution fit = solve_frr(DesignMatrix(select_rows(X, split.train)),
                                      TargetBlock(select_rows(Y, split.train)), fractions, frr);

    const Index f = fit.n_fractions();
    const Index t = fit.n_targets();
    CvReport report;
    report.fractions = fractions.values();
    report.degenerate_targets = fit.degenerate_targets;
    report.n_train = static_cast<Index>(split.train.size());
    report.n_test = static_cast<Index>(split.test.size());
    report.per_target.resize(static_cast<std::size_t>(t));

    for (Index j = 0; j < t; ++j) {
        TargetCvResult& res = report.per_target[static_cast<std::size_t>(j)];
        res.target = j;
        res.r2_by_fraction.assign(static_cast<std::size_t>(f), kUnsetValue);
        const Vector truth = y_test.col(j);
        try {
            for (Index fi = 0; fi < f; ++fi) {
                const Vector pred =
                    (x_test * fit.coefficient(fi, j)).array() + fit.intercepts(fi, j);
                res.r2_by_fraction[static_cast<std::size_t>(fi)] =
                    r_squared({truth.data(), static_cast<std::size_t>(truth.size())},
                              {pred.data(), static_cast<std::size_t>(pred.size())}, options.baseline);
            }
        } catch (const UndefinedScore& e) {
            res.scored = false;
            res.note = e.what();
            res.r2_by_fraction.assign(static_cast<std::size_t>(f), kUnsetValue);
            continue;
        }
        Index best = 0;
        for (Index fi = 1; fi < f; ++fi)
            if (res.r2_by_fraction[static_cast<std::size_t>(fi)] >
                res.r2_by_fraction[static_cast<std::size_t>(best)])
                best = fi;
        res.best_fraction = report.fractions[static_cast<std::size_t>(best)];
        res.best_r2 = res.r2_by_fraction[static_cast<std::size_t>(best)];
        res.best_alpha = fit.alphas(best, j);
    }
    return report;
}

}  // namespace fracridge
