// Acceptance run: one PASS/FAIL line per criterion at the desk-scale
// configuration (unit cube, rho = 1, N = 12, M = 32, K = 128, t_final = 0.5).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sgf/io/commands.hpp"

using namespace sgf;
using namespace sgf::verification;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
};

int failures = 0;

void print(int id, const std::string& title, const Outcome& o, double seconds) {
    std::printf("criterion %d (%s): %s  [%s; %.1f s]\n", id, title.c_str(), o.passed ? "PASS" : "FAIL",
                o.detail.c_str(), seconds);
    std::fflush(stdout);
    failures += o.passed ? 0 : 1;
}

template <class Fn>
void criterion(int id, const std::string& title, Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    print(id, title, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

/// Pass/fail verdict of a suite plus the first failing check.
Outcome suite_outcome(const SuiteResult& r) {
    Outcome o{r.passed(), ""};
    int checks = 0;
    for (const auto& line : io::summarize(r)) {
        if (line.starts_with("PASS") || line.starts_with("FAIL")) ++checks;
        if (line.starts_with("FAIL") && o.detail.empty()) o.detail = line;
    }
    if (o.passed) o.detail = std::to_string(checks) + " checks within tolerance";
    return o;
}

const std::vector<std::string> kClaimSuites{"v_heat_identity",  "inverse_laplacian_identity", "integral_equation",
                                            "pressure_poisson", "pressure_regularity",        "manufactured"};

SuiteResult run_claims(const HarnessSettings& s) {
    SuiteResult all;
    for (const auto& name : kClaimSuites) {
        all.append(run_suite(name, s));
    }
    return all;
}

bool has_table(const SuiteResult& r, const std::string& suite, const std::string& metric) {
    for (const auto& t : r.tables) {
        if (t.suite == suite && t.metric == metric && t.rows.size() >= 3 && !t.trend.empty()) return true;
    }
    return false;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    const HarnessSettings s;
    set_thread_count(1);

    criterion(1, "basis exactness", [&] { return suite_outcome(run_suite("basis", s)); });
    criterion(2, "kernel agreement", [&] { return suite_outcome(run_suite("kernel", s)); });
    criterion(3, "heat calculus", [&] { return suite_outcome(run_suite("heat", s)); });
    SuiteResult pipeline_1;
    criterion(4, "pipeline consistency", [&] {
        pipeline_1 = run_suite("pipeline", s);
        return suite_outcome(pipeline_1);
    });

    SuiteResult claims_1;
    criterion(5, "claim reports", [&] {
        claims_1 = run_claims(s);
        const SuiteResult rerun = run_claims(s);
        const double diff = io::max_relative_difference(io::rows_of(claims_1), io::rows_of(rerun));
        std::vector<std::string> missing;
        const std::vector<std::pair<std::string, std::string>> required{
            {"v_heat_identity", "T_Vp"},
            {"inverse_laplacian_identity", "T_invLap_Vp"},
            {"integral_equation", "residual"},
            {"pressure_poisson", "lap_p_minus_div_w"},
            {"pressure_poisson", "lap_p_plus_div_w"},
            {"manufactured", "div_u_over_grad_u"},
            {"manufactured", "grad_p_error"},
            {"manufactured", "velocity_error"}};
        for (const auto& [suite, metric] : required) {
            if (!has_table(claims_1, suite, metric)) missing.push_back(suite + "/" + metric);
        }
        bool trends = true;
        int flagged = 0;
        for (const auto& t : claims_1.tables) {
            trends = trends && (t.trend == "zero" || t.trend == "decreasing" || t.trend.starts_with("flagged"));
            flagged += t.trend.starts_with("flagged") ? 1 : 0;
        }
        Outcome o;
        o.passed = missing.empty() && trends && diff <= 1e-13;
        o.detail = std::to_string(claims_1.tables.size()) + " ladders (" + std::to_string(flagged) + " flagged), " +
                   std::to_string(claims_1.reports.size()) + " reports, rerun difference " + fmt(diff);
        for (const auto& m : missing) o.detail += ", missing " + m;
        return o;
    });

    criterion(6, "estimate constants", [&] {
        const SuiteResult r = run_suite("energy_estimate", s);
        const EstimateReport& e = r.estimates.at(0);
        bool finite = e.cases.size() == 20 && e.resolutions.size() == 2;
        for (const auto& c : e.cases) {
            finite = finite && std::isfinite(c.pressure_ratio) && std::isfinite(c.sobolev_ratio);
        }
        Outcome o;
        o.passed = finite && e.pressure_spread <= 0.10 && e.sobolev_spread <= 0.10;
        o.detail = "sup pressure ratio " + fmt(e.sup_pressure[0]) + " -> " + fmt(e.sup_pressure[1]) + " (spread " +
                   fmt(e.pressure_spread) + "), sup Sobolev ratio " + fmt(e.sup_sobolev[0]) + " -> " +
                   fmt(e.sup_sobolev[1]) + " (spread " + fmt(e.sobolev_spread) + ")";
        return o;
    });

    criterion(7, "reproducibility", [&] {
        namespace fs = std::filesystem;
        const fs::path root = fs::temp_directory_path() / "sgf_acceptance";
        fs::remove_all(root);

        // Suites at 8 threads against the 1-thread results above.
        set_thread_count(8);
        SuiteResult again = run_suite("pipeline", s);
        again.append(run_claims(s));
        set_thread_count(1);
        SuiteResult reference = pipeline_1;
        reference.append(claims_1);
        const double suite_diff = io::max_relative_difference(io::rows_of(reference), io::rows_of(again));

        // solve at 1 and 8 threads: byte-identical snapshots and norms.
        std::string bytes[2];
        for (int pass = 0; pass < 2; ++pass) {
            io::RunConfig c = io::parse_config("forcing.kind = random\noutput.time_stride = 16\n");
            c.output_dir = (root / ("solve_" + std::to_string(pass))).string();
            set_thread_count(pass == 0 ? 1 : 8);
            std::ostringstream log;
            io::cmd_solve(c, log);
            for (const char* name : {"p.sgf", "grad_p.sgf", "u.sgf", "norms.csv"}) {
                bytes[pass] += slurp(fs::path(c.output_dir) / name);
            }
        }
        set_thread_count(1);
        const bool solve_same = !bytes[0].empty() && bytes[0] == bytes[1];

        // Write, read back, compare bits.
        const fs::path dir = root / "solve_0";
        bool round_trip = true;
        for (const char* name : {"p.sgf", "grad_p.sgf", "u.sgf"}) {
            const io::FieldSnapshot snap = io::read_snapshot(dir / name);
            io::write_snapshot(dir / "copy.sgf", snap);
            const io::FieldSnapshot back = io::read_snapshot(dir / "copy.sgf");
            round_trip = round_trip && back.data.size() == snap.data.size() &&
                         std::memcmp(back.data.data(), snap.data.data(), 8 * snap.data.size()) == 0 &&
                         slurp(dir / "copy.sgf") == slurp(dir / name);
        }
        {
            const TimeGrid time(s.t_final, 8);
            const SineBasis basis(SpatialGrid(s.domain, s.base.M));
            const ModalField f = scalar_field(random_field(s.seed, 7, 4, 1), s.domain, time, s.base.N);
            const io::FieldSnapshot snap = io::snapshot_of({&f}, basis);
            io::write_snapshot(root / "field.sgf", snap);
            const io::FieldSnapshot back = io::read_snapshot(root / "field.sgf");
            round_trip = round_trip && back.ntimes == snap.ntimes && back.points == snap.points &&
                         std::memcmp(back.data.data(), snap.data.data(), 8 * snap.data.size()) == 0;
        }
        fs::remove_all(root);

        Outcome o;
        o.passed = suite_diff <= 1e-13 && solve_same && round_trip;
        o.detail = "threads 1 vs 8: suite difference " + fmt(suite_diff) + ", solve outputs " +
                   (solve_same ? "identical" : "DIFFER") + "; snapshot round trip " +
                   (round_trip ? "bit-exact" : "NOT bit-exact");
        return o;
    });

    std::printf("%s\n", failures == 0 ? "acceptance: all criteria PASS"
                                      : ("acceptance: " + std::to_string(failures) + " criteria FAIL").c_str());
    return failures == 0 ? 0 : 1;
}
