#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sgf/io/config.hpp"
#include "sgf/io/csv.hpp"
#include "sgf/io/manifest.hpp"
#include "sgf/io/snapshot.hpp"

namespace sgf::io {

/// Sine coefficients of the configured forcing at truncation N on the time
/// grid; manufactured forcing is analyzed on the M-point grid.
inline std::array<ModalHistory, 3> forcing_histories(const RunConfig& c, int N, int M, const TimeGrid& time) {
    using namespace verification;
    switch (c.kind) {
        case ForcingKind::Modes: {
            std::array<ModalHistory, 3> w{ModalHistory(kSineSignature, N, time.knots()),
                                          ModalHistory(kSineSignature, N, time.knots()),
                                          ModalHistory(kSineSignature, N, time.knots())};
            for (const auto& m : c.modes) {
                require(*std::max_element(m.index.begin(), m.index.end()) <= N,
                        "forcing: mode index above the truncation N=" + std::to_string(N));
                w[static_cast<std::size_t>(m.component - 1)] += single_mode(time, N, m.index, m.amplitude, m.profile);
            }
            return w;
        }
        case ForcingKind::Manufactured: {
            const ManufacturedCase mc = manufactured_case(c);
            const SineBasis basis(SpatialGrid(c.domain(), M));
            return manufactured_source(mc, basis, N, time).input;
        }
        case ForcingKind::Random:
            return realize_vector(random_field(c.seed, 0, c.random_band()), N, time);
    }
    throw InvalidArgument("forcing: unknown kind");
}

inline std::string forcing_case_name(const RunConfig& c) {
    switch (c.kind) {
        case ForcingKind::Modes: return c.modes.empty() ? "zero" : "modes";
        case ForcingKind::Manufactured: return c.manufactured;
        case ForcingKind::Random: return "random_0";
    }
    return {};
}

/// Modes of [1,N]^3 by increasing eigenvalue (ties in index order).
inline void cmd_modes(const RunConfig& c, std::ostream& os) {
    const BoxDomain d = c.domain();
    auto modes = enumerate_modes(d, c.N);
    std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) { return a.lambda < b.lambda; });
    os << std::setw(4) << "n1" << std::setw(4) << "n2" << std::setw(4) << "n3" << std::setw(24) << "lambda"
       << std::setw(24) << "rho*lambda" << '\n';
    os << std::setprecision(15);
    for (const auto& m : modes) {
        os << std::setw(4) << m.index[0] << std::setw(4) << m.index[1] << std::setw(4) << m.index[2] << std::setw(24)
           << m.lambda << std::setw(24) << d.rho() * m.lambda << '\n';
    }
}

/// Pressure, its gradient and the velocity for the configured forcing:
/// p.sgf, grad_p.sgf, u.sgf, norms.csv and manifest.json in the output dir.
inline int cmd_solve(const RunConfig& c, std::ostream& log) {
    using namespace verification;
    namespace fs = std::filesystem;
    const fs::path dir = c.output_dir;
    fs::create_directories(dir);
    const BoxDomain d = c.domain();
    const TimeGrid time(c.t_final, c.K);
    const SineBasis basis(SpatialGrid(d, c.M));
    const Resolution res{c.N, c.M, c.K};
    const std::string name = forcing_case_name(c);

    const PressureResult r = pressure(decompose_source(forcing_histories(c, c.N, c.M, time), d, time));
    const ModalVector grad = pressure_gradient(r);
    const ModalVector u = velocity(r).velocity;

    write_snapshot(dir / "p.sgf", snapshot_of({&r.pressure}, basis, c.time_stride));
    write_snapshot(dir / "grad_p.sgf", snapshot_of({&grad[0], &grad[1], &grad[2]}, basis, c.time_stride));
    write_snapshot(dir / "u.sgf", snapshot_of({&u[0], &u[1], &u[2]}, basis, c.time_stride));

    auto norm = [&](const std::string& metric, double v) { return CsvRow{"solve", name, res, metric, v, {}, {}}; };
    std::vector<CsvRow> rows{norm("w_L2", std::sqrt(forcing_energy(r.source))),
                             norm("p_L2", l2_norm_spacetime(r.pressure)), norm("grad_p_L2", l2_norm_spacetime(grad)),
                             norm("u_L2", l2_norm_spacetime(u)), norm("u_W221", sobolev_norm_W221(u))};
    const DivergenceDiagnostic div = divergence_ratio(u);
    auto report = [&](const std::string& metric, double num, double den) {
        return row_of(make_report("solve", name, metric, res, num, den));
    };
    rows.push_back(report("div_u_over_grad_u", div.divergence_norm, div.gradient_norm));
    const auto [mom, wn] = momentum_residual_galerkin(r, u);
    rows.push_back(report("momentum_residual_galerkin", mom, wn));
    if (c.kind == ForcingKind::Manufactured) {
        const ManufacturedCase mc = manufactured_case(c);
        const auto [ge, gn] = verification::detail::sampled_error(grad, mc.grad_p, basis);
        rows.push_back(report("grad_p_error", ge, gn));
        const auto [ue, un] = verification::detail::sampled_error(u, mc.u, basis);
        rows.push_back(report("velocity_error", ue, un));
    }
    write_csv(dir / "norms.csv", rows);
    write_manifest(dir, "solve", c, {"p.sgf", "grad_p.sgf", "u.sgf", "norms.csv"}, true);
    log << "solve: wrote p.sgf, grad_p.sgf, u.sgf, norms.csv to " << dir.string() << '\n';
    return 0;
}

/// One line per check: PASS/FAIL for checks with a tolerance or required
/// order, REPORT otherwise.
inline std::vector<std::string> summarize(const verification::SuiteResult& s) {
    std::vector<std::string> out;
    auto num = [](double v) {
        std::ostringstream os;
        os << std::setprecision(6) << v;
        return os.str();
    };
    for (const auto& r : s.reports) {
        std::string line = r.tolerance ? (r.passed ? "PASS   " : "FAIL   ") : "REPORT ";
        line += r.suite + " " + r.case_name + " " + r.metric + " = " + num(r.normalized);
        if (r.tolerance) line += " (tol " + num(*r.tolerance) + ")";
        if (r.degenerate) line += " (0/0)";
        out.push_back(std::move(line));
    }
    for (const auto& t : s.tables) {
        std::string line = t.required_order ? (t.passed ? "PASS   " : "FAIL   ") : "REPORT ";
        line += t.suite + " " + t.case_name + " " + t.metric + " [";
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            line += (i ? ", " : "") + num(t.rows[i].normalized);
        }
        line += "] orders [";
        for (std::size_t i = 1; i < t.orders.size(); ++i) {
            line += (i > 1 ? ", " : "") + (t.orders[i] ? num(*t.orders[i]) : std::string("-"));
        }
        line += "] " + t.trend;
        if (t.required_order) line += " (required order " + num(*t.required_order) + ")";
        out.push_back(std::move(line));
    }
    for (const auto& e : s.estimates) {
        std::string line = e.tolerance ? (e.passed ? "PASS   " : "FAIL   ") : "REPORT ";
        line += "energy_estimate " + e.corpus_id + " sup pressure ratio [";
        for (std::size_t i = 0; i < e.sup_pressure.size(); ++i) {
            line += (i ? ", " : "") + num(e.sup_pressure[i]);
        }
        line += "] spread " + num(e.pressure_spread) + ", sup Sobolev ratio [";
        for (std::size_t i = 0; i < e.sup_sobolev.size(); ++i) {
            line += (i ? ", " : "") + num(e.sup_sobolev[i]);
        }
        line += "] spread " + num(e.sobolev_spread);
        if (e.tolerance) line += " (tol " + num(*e.tolerance) + ")";
        out.push_back(std::move(line));
    }
    return out;
}

/// Runs the selected suites (tolerance overrides applied).
inline verification::SuiteResult run_suites(const RunConfig& c, std::ostream& log) {
    const auto settings = harness_settings(c);
    verification::SuiteResult all;
    for (const auto& name : c.selected_suites()) {
        log << "verify: " << name << '\n' << std::flush;
        verification::SuiteResult r = apply_tolerances(verification::run_suite(name, settings), c);
        for (const auto& line : summarize(r)) {
            log << "  " << line << '\n';
        }
        all.append(std::move(r));
    }
    return all;
}

/// report.csv, summary.txt and manifest.json; exit code 0 iff every
/// pass/fail check passes.
inline int cmd_verify(const RunConfig& c, std::ostream& log) {
    namespace fs = std::filesystem;
    const fs::path dir = c.output_dir;
    fs::create_directories(dir);
    const verification::SuiteResult all = run_suites(c, log);
    write_csv(dir / "report.csv", rows_of(all));
    {
        std::ofstream out(dir / "summary.txt", std::ios::trunc);
        for (const auto& line : summarize(all)) {
            out << line << '\n';
        }
    }
    const bool ok = all.passed();
    write_manifest(dir, "verify", c, {"report.csv", "summary.txt"}, ok);
    log << "verify: " << (ok ? "all pass/fail checks passed" : "some pass/fail checks FAILED") << '\n';
    return ok ? 0 : 1;
}

namespace detail {

/// Grid L2(Q_t) norm of a - b and of b, with b on a time grid refined by an
/// integer factor; both sampled on `basis` at the knots of a.
inline std::pair<double, double> sampled_difference(const ModalVector& a, const ModalVector& b,
                                                    const SineBasis& basis) {
    const TimeGrid& ta = a[0].time();
    const int factor = b[0].time().steps() / ta.steps();
    double err = 0.0;
    double ref = 0.0;
    for (int k = 0; k < ta.knots(); ++k) {
        const double wt = (k == 0 || k == ta.steps()) ? 0.5 : 1.0;
        for (std::size_t c = 0; c < 3; ++c) {
            const GridField ga = synthesize(a[c], k, basis);
            const GridField gb = synthesize(b[c], k * factor, basis);
            for (std::size_t i = 0; i < ga.size(); ++i) {
                const double dv = ga.values()[i] - gb.values()[i];
                err += wt * dv * dv;
                ref += wt * gb.values()[i] * gb.values()[i];
            }
        }
    }
    const double scale = basis.grid().cell_volume() * ta.dt();
    return {std::sqrt(err * scale), std::sqrt(ref * scale)};
}

}  // namespace detail

/// The configured forcing across (N/2, M/2, K/2), (N, M, K), (2N, 2M, 2K):
/// differences between consecutive rungs, divergence ratio, Galerkin momentum
/// residual and, for manufactured forcing, errors against the exact solution.
inline verification::SuiteResult run_sweep(const RunConfig& c, std::ostream& log) {
    using namespace verification;
    const auto ladder = default_ladder(harness_settings(c));
    const BoxDomain d = c.domain();
    const std::string name = forcing_case_name(c);
    std::vector<ResidualReport> gdiff, udiff, div, mom, gerr, uerr;
    std::optional<ModalVector> prev_grad, prev_u;
    for (std::size_t j = 0; j < ladder.size(); ++j) {
        const Resolution& res = ladder[j];
        log << "sweep: rung N=" << res.N << " M=" << res.M << " K=" << res.K << '\n' << std::flush;
        const TimeGrid time(c.t_final, res.K);
        const SineBasis basis(SpatialGrid(d, res.M));
        const PressureResult r = pressure(decompose_source(forcing_histories(c, res.N, res.M, time), d, time));
        ModalVector grad = pressure_gradient(r);
        ModalVector u = velocity(r).velocity;
        const DivergenceDiagnostic dd = divergence_ratio(u);
        div.push_back(make_report("sweep", name, "div_u_over_grad_u", res, dd.divergence_norm, dd.gradient_norm));
        const auto [m, wn] = momentum_residual_galerkin(r, u);
        mom.push_back(make_report("sweep", name, "momentum_residual_galerkin", res, m, wn));
        if (c.kind == ForcingKind::Manufactured) {
            const ManufacturedCase mc = manufactured_case(c);
            const auto [ge, gn] = verification::detail::sampled_error(grad, mc.grad_p, basis);
            gerr.push_back(make_report("sweep", name, "grad_p_error", res, ge, gn));
            const auto [ue, un] = verification::detail::sampled_error(u, mc.u, basis);
            uerr.push_back(make_report("sweep", name, "velocity_error", res, ue, un));
        }
        if (j > 0) {
            const Resolution& coarse = ladder[j - 1];
            const auto [ge, gn] = detail::sampled_difference(*prev_grad, grad, basis);
            gdiff.push_back(make_report("sweep", name, "grad_p_rung_difference", coarse, ge, gn));
            const auto [ue, un] = detail::sampled_difference(*prev_u, u, basis);
            udiff.push_back(make_report("sweep", name, "u_rung_difference", coarse, ue, un));
        }
        prev_grad = std::move(grad);
        prev_u = std::move(u);
    }
    SuiteResult out;
    out.tables.push_back(make_table("sweep", name, "grad_p_rung_difference", std::move(gdiff)));
    out.tables.push_back(make_table("sweep", name, "u_rung_difference", std::move(udiff)));
    out.tables.push_back(make_table("sweep", name, "div_u_over_grad_u", std::move(div)));
    out.tables.push_back(make_table("sweep", name, "momentum_residual_galerkin", std::move(mom)));
    if (c.kind == ForcingKind::Manufactured) {
        out.tables.push_back(make_table("sweep", name, "grad_p_error", std::move(gerr)));
        out.tables.push_back(make_table("sweep", name, "velocity_error", std::move(uerr)));
    }
    return out;
}

/// sweep.csv, summary.txt and manifest.json. The sweep has no pass/fail
/// checks; the exit code is 0 once the tables are written.
inline int cmd_sweep(const RunConfig& c, std::ostream& log) {
    namespace fs = std::filesystem;
    const fs::path dir = c.output_dir;
    fs::create_directories(dir);
    const verification::SuiteResult s = run_sweep(c, log);
    write_csv(dir / "sweep.csv", rows_of(s));
    const auto lines = summarize(s);
    {
        std::ofstream out(dir / "summary.txt", std::ios::trunc);
        for (const auto& line : lines) {
            out << line << '\n';
        }
    }
    for (const auto& line : lines) {
        log << "  " << line << '\n';
    }
    write_manifest(dir, "sweep", c, {"sweep.csv", "summary.txt"}, s.passed());
    return s.passed() ? 0 : 1;
}

}  // namespace sgf::io
