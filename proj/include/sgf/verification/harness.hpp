#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sgf/verification/claims.hpp"
#include "sgf/verification/suites.hpp"

namespace sgf::verification {

struct HarnessSettings {
    BoxDomain domain = BoxDomain::unit_cube();
    double t_final = 0.5;
    Resolution base{12, 32, 128};
    std::uint64_t seed = 20240607;
    int corpus_cases = 10;
    double estimate_spread_tolerance = 0.10;
    TruncationPolicy policy;
};

/// (N/2, M/2, K/2), (N, M, K), (2N, 2M, 2K).
inline std::vector<Resolution> default_ladder(const HarnessSettings& s) {
    require(s.base.N % 2 == 0 && s.base.M % 2 == 0 && s.base.K % 2 == 0,
            "ladder: N, M, K must be even to halve the base resolution");
    return make_ladder({s.base.N / 2, s.base.M / 2, s.base.K / 2}, 3);
}

/// Modal field a u_m, constant in t.
inline ModalField steady_mode(const BoxDomain& domain, const TimeGrid& time, int N, const Index3& m) {
    return single_term(domain, time, single_mode(time, N, m, 1.0, [](double) { return 1.0; }));
}

inline ModalField scalar_field(const CorpusField& f, const BoxDomain& domain, const TimeGrid& time, int N) {
    return single_term(domain, time, realize(f, 0, N, time));
}

namespace detail {

/// One report per rung for each of two identity checks on p.
template <class Check>
SuiteResult identity_suite(const HarnessSettings& s, const std::string& suite, const std::string& metric,
                           Check&& check) {
    const auto ladder = default_ladder(s);
    SuiteResult out;
    {
        const TimeGrid time(s.t_final, s.base.K);
        out.reports.push_back(check(ModalField(s.domain, time), s.base.N, s.base.M, "zero"));
    }
    std::vector<ResidualReport> rows;
    for (const auto& res : ladder) {
        const TimeGrid time(s.t_final, res.K);
        rows.push_back(check(steady_mode(s.domain, time, res.N, {1, 1, 1}), res.N, res.M, "steady_mode_111"));
    }
    out.tables.push_back(make_table(suite, "steady_mode_111", metric, std::move(rows)));
    const int band = std::max(1, ladder.front().N / 2);
    const TimeGrid time(s.t_final, s.base.K);
    for (int c = 0; c < 3; ++c) {
        const CorpusField f = random_field(s.seed, 200 + c, band, 1);
        out.reports.push_back(check(scalar_field(f, s.domain, time, s.base.N), s.base.N, s.base.M, f.id));
    }
    return out;
}

inline ModalHistory steady_history(const TimeGrid& time, int N) {
    return single_mode(time, N, {1, 1, 1}, 1.0, [](double) { return 1.0; });
}

inline std::array<ModalHistory, 3> zero_forcing(const TimeGrid& time, int N) {
    return {ModalHistory(kSineSignature, N, time.knots()), ModalHistory(kSineSignature, N, time.knots()),
            ModalHistory(kSineSignature, N, time.knots())};
}

inline ManufacturedCase default_manufactured(const BoxDomain& domain) {
    return make_manufactured(domain, TimeProfile::Quadratic, PressurePattern::Cosine);
}

}  // namespace detail

inline SuiteResult run_heat_identity_suite(const HarnessSettings& s) {
    return detail::identity_suite(s, "v_heat_identity", "T_Vp",
                                  [](const ModalField& p, int N, int M, const std::string& name) {
                                      return check_heat_identity(p, N, M, name);
                                  });
}

inline SuiteResult run_inverse_laplacian_identity_suite(const HarnessSettings& s) {
    return detail::identity_suite(s, "inverse_laplacian_identity", "T_invLap_Vp",
                                  [](const ModalField& p, int N, int M, const std::string& name) {
                                      return check_inverse_laplacian_identity(p, N, M, name);
                                  });
}

inline SuiteResult run_integral_equation_suite(const HarnessSettings& s) {
    const auto ladder = default_ladder(s);
    SuiteResult out;
    {
        const TimeGrid time(s.t_final, s.base.K);
        out.reports.push_back(check_integral_equation(
            pressure(decompose_source(detail::zero_forcing(time, s.base.N), s.domain, time)), s.base.M, "zero"));
    }
    std::vector<ResidualReport> steady, manufactured;
    const ManufacturedCase mc = detail::default_manufactured(s.domain);
    for (const auto& res : ladder) {
        const TimeGrid time(s.t_final, res.K);
        auto w = detail::zero_forcing(time, res.N);
        w[0] = detail::steady_history(time, res.N);
        steady.push_back(
            check_integral_equation(pressure(decompose_source(std::move(w), s.domain, time)), res.M,
                                    "steady_mode_111"));
        const SineBasis basis(SpatialGrid(s.domain, res.M));
        manufactured.push_back(
            check_integral_equation(pressure(manufactured_source(mc, basis, res.N, time)), res.M, mc.name));
    }
    out.tables.push_back(make_table("integral_equation", "steady_mode_111", "residual", std::move(steady)));
    out.tables.push_back(make_table("integral_equation", mc.name, "residual", std::move(manufactured)));
    return out;
}

inline SuiteResult run_pressure_poisson_suite(const HarnessSettings& s) {
    const auto ladder = default_ladder(s);
    SuiteResult out;
    std::array<std::vector<ResidualReport>, 2> grad_rows, man_rows, rand_rows;
    const ManufacturedCase mc = detail::default_manufactured(s.domain);
    const int band = std::max(1, ladder.front().N / 2);
    const CorpusField ladder_field = random_field(s.seed, 0, band);
    for (const auto& res : ladder) {
        const TimeGrid time(s.t_final, res.K);
        const SourceDecomposition rs = decompose_source(realize_vector(ladder_field, res.N, time), s.domain, time);
        const auto rnd = check_pressure_poisson(pressure(rs), forcing_divergence(rs), res.M, ladder_field.id);
        // w = P_N grad(u_111): div w = -lambda u_111 in closed form.
        const ModalField u1 = steady_mode(s.domain, time, res.N, {1, 1, 1});
        std::array<ModalHistory, 3> w;
        for (int i = 0; i < 3; ++i) {
            w[static_cast<std::size_t>(i)] = project(derivative(u1, i), kSineSignature, res.N);
        }
        const auto grad = check_pressure_poisson(pressure(decompose_source(std::move(w), s.domain, time)),
                                                 -s.domain.eigenvalue({1, 1, 1}) * u1, res.M, "gradient_mode_111");
        const SineBasis basis(SpatialGrid(s.domain, res.M));
        const auto man = check_pressure_poisson(pressure(manufactured_source(mc, basis, res.N, time)),
                                                forcing_divergence_cosine(mc, TimeProfile::Quadratic, time), res.M,
                                                mc.name);
        for (std::size_t j = 0; j < 2; ++j) {
            grad_rows[j].push_back(grad[j]);
            man_rows[j].push_back(man[j]);
            rand_rows[j].push_back(rnd[j]);
        }
    }
    for (std::size_t j = 0; j < 2; ++j) {
        const std::string metric = grad_rows[j].front().metric;
        out.tables.push_back(make_table("pressure_poisson", "gradient_mode_111", metric, std::move(grad_rows[j])));
        out.tables.push_back(make_table("pressure_poisson", mc.name, metric, std::move(man_rows[j])));
        out.tables.push_back(make_table("pressure_poisson", ladder_field.id, metric, std::move(rand_rows[j])));
    }
    const TimeGrid time(s.t_final, s.base.K);
    for (int c = 1; c < 4; ++c) {
        const CorpusField f = random_field(s.seed, c, band);
        const SourceDecomposition src = decompose_source(realize_vector(f, s.base.N, time), s.domain, time);
        const ModalField div_w = forcing_divergence(src);
        for (auto& r : check_pressure_poisson(pressure(src), div_w, s.base.M, f.id)) {
            out.reports.push_back(std::move(r));
        }
    }
    return out;
}

inline SuiteResult run_energy_estimate_suite(const HarnessSettings& s) {
    const auto ladder = default_ladder(s);
    const int band = std::max(1, ladder.front().N / 2);
    EstimateReport rep = check_energy_estimate(random_corpus(s.seed, s.corpus_cases, band), s.domain, s.t_final,
                                               {ladder[1], ladder[2]}, "random_band_" + std::to_string(band));
    rep.tolerance = s.estimate_spread_tolerance;
    rep.passed = rep.pressure_spread <= s.estimate_spread_tolerance &&
                 rep.sobolev_spread <= s.estimate_spread_tolerance;
    SuiteResult out;
    out.estimates.push_back(std::move(rep));
    return out;
}

inline SuiteResult run_pressure_regularity_suite(const HarnessSettings& s) {
    const auto ladder = default_ladder(s);
    SuiteResult out;
    auto append = [&](std::vector<ResidualReport> rs) {
        for (auto& r : rs) {
            out.reports.push_back(std::move(r));
        }
    };
    const TimeGrid time(s.t_final, s.base.K);
    append(check_pressure_regularity(decompose_source(detail::zero_forcing(time, s.base.N), s.domain, time),
                                     s.base.M, "zero"));
    auto w = detail::zero_forcing(time, s.base.N);
    w[0] = detail::steady_history(time, s.base.N);
    append(check_pressure_regularity(decompose_source(std::move(w), s.domain, time), s.base.M, "steady_mode_111"));
    const ManufacturedCase mc = detail::default_manufactured(s.domain);
    const SineBasis basis(SpatialGrid(s.domain, s.base.M));
    append(check_pressure_regularity(manufactured_source(mc, basis, s.base.N, time), s.base.M, mc.name));
    return out;
}

inline SuiteResult run_manufactured_suite(const HarnessSettings& s) {
    const auto ladder = default_ladder(s);
    SuiteResult out;
    const std::vector<ManufacturedCase> cases{
        make_manufactured(s.domain, TimeProfile::Quadratic, PressurePattern::Zero, 0.0),
        detail::default_manufactured(s.domain),
        make_manufactured(s.domain, TimeProfile::Sine, PressurePattern::Cosine),
        make_manufactured(s.domain, TimeProfile::Quadratic, PressurePattern::Polynomial),
    };
    for (std::size_t i = 0; i < cases.size(); ++i) {
        ManufacturedCase mc = cases[i];
        if (i == 0) {
            mc.name = "trivial";
        }
        for (auto& t : run_manufactured_comparison(mc, s.t_final, ladder)) {
            out.tables.push_back(std::move(t));
        }
    }
    return out;
}

/// Suite names in run order.
inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"basis",
                                                "kernel",
                                                "heat",
                                                "pipeline",
                                                "v_heat_identity",
                                                "inverse_laplacian_identity",
                                                "integral_equation",
                                                "pressure_poisson",
                                                "energy_estimate",
                                                "pressure_regularity",
                                                "manufactured"};
    return names;
}

inline SuiteResult run_suite(const std::string& name, const HarnessSettings& s) {
    if (name == "basis") return run_basis_suite(s.domain, s.base, s.seed);
    if (name == "kernel") return run_kernel_suite(s.policy, s.seed);
    if (name == "heat") return run_heat_suite(s.domain, s.t_final, default_ladder(s), s.seed);
    if (name == "pipeline") return run_pipeline_suite(s.domain, s.t_final, default_ladder(s), s.seed);
    if (name == "v_heat_identity") return run_heat_identity_suite(s);
    if (name == "inverse_laplacian_identity") return run_inverse_laplacian_identity_suite(s);
    if (name == "integral_equation") return run_integral_equation_suite(s);
    if (name == "pressure_poisson") return run_pressure_poisson_suite(s);
    if (name == "energy_estimate") return run_energy_estimate_suite(s);
    if (name == "pressure_regularity") return run_pressure_regularity_suite(s);
    if (name == "manufactured") return run_manufactured_suite(s);
    throw InvalidArgument("unknown suite: " + name);
}

}  // namespace sgf::verification
