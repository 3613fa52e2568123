#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgf/verification/reports.hpp"

namespace sgf::io {

/// One row of suite,case,N,M,K,metric,value,normalization,order_estimate.
struct CsvRow {
    std::string suite;
    std::string case_name;
    std::optional<verification::Resolution> resolution;
    std::string metric;
    double value = 0.0;
    std::optional<double> normalization;
    std::optional<double> order;
};

inline constexpr const char* kCsvHeader = "suite,case,N,M,K,metric,value,normalization,order_estimate";

namespace detail {

/// Shortest representation that reads back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

inline std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace detail

inline CsvRow row_of(const verification::ResidualReport& r, std::optional<double> order = std::nullopt) {
    return {r.suite, r.case_name, r.resolution, r.metric, r.normalized, r.normalization, order};
}

/// Reports first, then table rows with their orders, then estimate rows: one
/// per case and ratio, the sup ratio per resolution and the two spreads.
inline std::vector<CsvRow> rows_of(const verification::SuiteResult& s) {
    std::vector<CsvRow> out;
    for (const auto& r : s.reports) {
        out.push_back(row_of(r));
    }
    for (const auto& t : s.tables) {
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            out.push_back(row_of(t.rows[i], t.orders[i]));
        }
    }
    for (const auto& e : s.estimates) {
        for (const auto& c : e.cases) {
            out.push_back({"energy_estimate", c.id, c.resolution, "pressure_ratio", c.pressure_ratio, {}, {}});
            out.push_back({"energy_estimate", c.id, c.resolution, "sobolev_ratio", c.sobolev_ratio, {}, {}});
        }
        for (std::size_t i = 0; i < e.resolutions.size(); ++i) {
            out.push_back({"energy_estimate", e.corpus_id, e.resolutions[i], "sup_pressure_ratio", e.sup_pressure[i],
                           {}, {}});
            out.push_back({"energy_estimate", e.corpus_id, e.resolutions[i], "sup_sobolev_ratio", e.sup_sobolev[i],
                           {}, {}});
        }
        out.push_back({"energy_estimate", e.corpus_id, {}, "pressure_spread", e.pressure_spread, {}, {}});
        out.push_back({"energy_estimate", e.corpus_id, {}, "sobolev_spread", e.sobolev_spread, {}, {}});
    }
    return out;
}

inline void write_csv(std::ostream& os, const std::vector<CsvRow>& rows) {
    using detail::format_double;
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        os << detail::quote(r.suite) << ',' << detail::quote(r.case_name) << ',';
        if (r.resolution) {
            os << r.resolution->N << ',' << r.resolution->M << ',' << r.resolution->K;
        } else {
            os << ",,";
        }
        os << ',' << detail::quote(r.metric) << ',' << format_double(r.value) << ',';
        if (r.normalization) os << format_double(*r.normalization);
        os << ',';
        if (r.order) os << format_double(*r.order);
        os << '\n';
    }
}

inline void write_csv(const std::filesystem::path& path, const std::vector<CsvRow>& rows) {
    std::ofstream out(path, std::ios::trunc);
    write_csv(out, rows);
    if (!out) {
        throw std::runtime_error("csv: cannot write " + path.string());
    }
}

/// Largest relative difference |a - b| / max(|a|, |b|) of values and
/// normalizations over matching rows, and absolute difference of orders; +inf
/// if the row sets differ in shape or labels.
inline double max_relative_difference(const std::vector<CsvRow>& a, const std::vector<CsvRow>& b) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (a.size() != b.size()) {
        return inf;
    }
    auto rel = [](double x, double y) {
        const double s = std::max(std::abs(x), std::abs(y));
        return s == 0.0 ? 0.0 : std::abs(x - y) / s;
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& x = a[i];
        const auto& y = b[i];
        if (x.suite != y.suite || x.case_name != y.case_name || x.metric != y.metric ||
            x.resolution != y.resolution || x.normalization.has_value() != y.normalization.has_value() ||
            x.order.has_value() != y.order.has_value()) {
            return inf;
        }
        worst = std::max(worst, rel(x.value, y.value));
        if (x.normalization) worst = std::max(worst, rel(*x.normalization, *y.normalization));
        if (x.order) worst = std::max(worst, std::abs(*x.order - *y.order));
    }
    return worst;
}

}  // namespace sgf::io
