#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sgf/common.hpp"

namespace sgf::verification {

struct Resolution {
    int N = 0;
    int M = 0;
    int K = 0;

    friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// Ladder (N,M,K) -> (2N,2M,2K) -> ..., with M >= 2N checked at every rung.
inline std::vector<Resolution> make_ladder(Resolution base, int rungs) {
    require(rungs >= 1, "make_ladder: need at least one rung");
    std::vector<Resolution> out;
    for (int r = 0; r < rungs; ++r) {
        require(base.M >= 2 * base.N && base.K >= 2 && base.N >= 1, "make_ladder: rung violates M >= 2N, K >= 2");
        out.push_back(base);
        base = {2 * base.N, 2 * base.M, 2 * base.K};
    }
    return out;
}

struct ResidualReport {
    std::string suite;
    std::string case_name;
    std::string metric;
    Resolution resolution;
    double residual = 0.0;
    double normalization = 0.0;
    double normalized = 0.0;
    bool degenerate = false;            ///< 0 over 0, reported as 0
    std::optional<double> tolerance;    ///< set for pass/fail checks
    bool passed = true;
};

/// normalized = residual / normalization; an exact 0/0 is reported as 0 and
/// flagged, a nonzero residual over a zero normalization is rejected.
inline ResidualReport make_report(std::string suite, std::string case_name, std::string metric, Resolution res,
                                  double residual, double normalization) {
    require(residual >= 0.0 && normalization >= 0.0 && std::isfinite(residual) && std::isfinite(normalization),
            "report: residual and normalization must be finite and nonnegative");
    ResidualReport r;
    r.suite = std::move(suite);
    r.case_name = std::move(case_name);
    r.metric = std::move(metric);
    r.resolution = res;
    r.residual = residual;
    r.normalization = normalization;
    if (normalization == 0.0) {
        require(residual == 0.0, "report: nonzero residual with zero normalization (" + r.metric + ")");
        r.degenerate = true;
        r.normalized = 0.0;
    } else {
        r.normalized = residual / normalization;
    }
    return r;
}

/// Attaches a tolerance to the normalized value.
inline ResidualReport with_tolerance(ResidualReport r, double tol) {
    r.tolerance = tol;
    r.passed = r.normalized <= tol;
    return r;
}

struct ConvergenceTable {
    std::string suite;
    std::string case_name;
    std::string metric;
    std::vector<ResidualReport> rows;
    std::vector<std::optional<double>> orders;  ///< log2 ratio to the previous row
    std::string trend;                          ///< "decreasing", "zero" or "flagged: ..."
    std::optional<double> required_order;       ///< set for pass/fail order studies
    bool passed = true;

    [[nodiscard]] std::optional<double> last_order() const { return orders.empty() ? std::nullopt : orders.back(); }
};

/// Orders between consecutive rows and the monotonicity flag.
inline ConvergenceTable make_table(std::string suite, std::string case_name, std::string metric,
                                   std::vector<ResidualReport> rows) {
    ConvergenceTable t;
    t.suite = std::move(suite);
    t.case_name = std::move(case_name);
    t.metric = std::move(metric);
    t.rows = std::move(rows);
    bool all_zero = true;
    bool monotone = true;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const double v = t.rows[i].normalized;
        all_zero = all_zero && v == 0.0;
        if (i == 0) {
            t.orders.emplace_back();
            continue;
        }
        const double prev = t.rows[i - 1].normalized;
        if (prev > 0.0 && v > 0.0) {
            t.orders.emplace_back(std::log2(prev / v));
        } else {
            t.orders.emplace_back();
        }
        monotone = monotone && v <= prev;
    }
    if (all_zero) {
        t.trend = "zero";
    } else if (monotone) {
        t.trend = "decreasing";
    } else {
        t.trend = "flagged: not monotone under refinement";
    }
    return t;
}

/// Every order between consecutive rows must reach q.
inline ConvergenceTable with_required_order(ConvergenceTable t, double q) {
    t.required_order = q;
    t.passed = t.rows.size() >= 2;
    for (std::size_t i = 1; i < t.orders.size(); ++i) {
        t.passed = t.passed && t.orders[i].has_value() && *t.orders[i] >= q;
    }
    return t;
}

struct EstimateCase {
    std::string id;
    Resolution resolution;
    double pressure_ratio = 0.0;  ///< int sum ||dp/dx_i||^2 / int sum ||w_i||^2
    double sobolev_ratio = 0.0;   ///< ||u||_{W_2^{2,1}} / ||w||
};

struct EstimateReport {
    std::string corpus_id;
    std::vector<Resolution> resolutions;
    std::vector<EstimateCase> cases;
    std::vector<double> sup_pressure;  ///< per resolution
    std::vector<double> sup_sobolev;   ///< per resolution
    double pressure_spread = 0.0;      ///< relative spread of the sup ratios across resolutions
    double sobolev_spread = 0.0;
    std::optional<double> tolerance;   ///< bound on both spreads
    bool passed = true;
};

/// Relative spread (max - min) / max of positive values.
inline double relative_spread(const std::vector<double>& v) {
    if (v.empty()) {
        return 0.0;
    }
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
}

/// Output of one suite: single reports, ladders and estimate reports.
struct SuiteResult {
    std::vector<ResidualReport> reports;
    std::vector<ConvergenceTable> tables;
    std::vector<EstimateReport> estimates;

    [[nodiscard]] bool passed() const {
        return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; }) &&
               std::all_of(tables.begin(), tables.end(), [](const auto& t) { return t.passed; }) &&
               std::all_of(estimates.begin(), estimates.end(), [](const auto& e) { return e.passed; });
    }

    void append(SuiteResult other) {
        for (auto& r : other.reports) {
            reports.push_back(std::move(r));
        }
        for (auto& t : other.tables) {
            tables.push_back(std::move(t));
        }
        for (auto& e : other.estimates) {
            estimates.push_back(std::move(e));
        }
    }
};

}  // namespace sgf::verification
