#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sgf/stokes.hpp"
#include "sgf/verification/corpus.hpp"
#include "sgf/verification/manufactured.hpp"
#include "sgf/verification/reports.hpp"

namespace sgf::verification {

/// V*p: the Green-function combination sum_i d2/dx_i dxi_i + Lap_x applied to p
/// and integrated over [0,t] x Omega, truncated to [1,N]^3.
///
///   V*p = sum_i sum_n du_n/dx_i(x) D_n[<du_n/dx_i, p>] - sum_n lambda_n u_n(x) D_n[<u_n, p>],
///
/// with D_n the Duhamel integral at rate rho lambda_n.
inline ModalField kernel_operator(const ModalField& p, int N) {
    const auto& d = p.domain();
    const auto& time = p.time();
    ModalField out(d, time);
    for (int i = 0; i < 3; ++i) {
        const double L = d.length(i);
        auto k = [&](int n1, int n2, int n3) { return (i == 0 ? n1 : (i == 1 ? n2 : n3)) * pi / L; };
        ModalHistory q = project(p, cosine_in(i), N);
        scale_by_mode(q, k);
        ModalHistory h = duhamel(q, d, time);
        scale_by_mode(h, k);
        out.add(std::move(h));
    }
    ModalHistory h = duhamel(project(p, kSineSignature, N), d, time);
    scale_by_mode(h, [&](int n1, int n2, int n3) { return -d.eigenvalue({n1, n2, n3}); });
    out.add(std::move(h));
    return out;
}

namespace detail {

inline ModalField difference(const ModalField& a, const ModalField& b) { return a + (-1.0 * b); }

inline Resolution resolution_of(const ModalField& f, int N, int M) { return {N, M, f.time().steps()}; }

}  // namespace detail

/// ||T(V*p)|| / ||V*p||.
inline ResidualReport check_heat_identity(const ModalField& p, int N, int M, const std::string& case_name) {
    const ModalField vp = kernel_operator(p, N);
    return make_report("v_heat_identity", case_name, "T_Vp", detail::resolution_of(p, N, M),
                       l2_norm_spacetime(apply_T(vp)), l2_norm_spacetime(vp));
}

/// ||T(Lap^{-1} V*p)|| / ||Lap^{-1} V*p||.
inline ResidualReport check_inverse_laplacian_identity(const ModalField& p, int N, int M,
                                                       const std::string& case_name) {
    const ModalField g = inverse_laplacian(kernel_operator(p, N), N);
    return make_report("inverse_laplacian_identity", case_name, "T_invLap_Vp", detail::resolution_of(p, N, M),
                       l2_norm_spacetime(apply_T(g)), l2_norm_spacetime(g));
}

/// ||p - T Lap^{-1} V*p + T Lap^{-1} S|| / ||p||, each term assembled on its own.
inline ResidualReport check_integral_equation(const PressureResult& r, int M, const std::string& case_name) {
    const int N = r.source.truncation();
    const int np = r.projection_modes;
    const ModalField tv = apply_T(inverse_laplacian(kernel_operator(r.pressure, N), np));
    const ModalField ts = apply_T(inverse_laplacian(source_S(r.source), np));
    ModalField res = detail::difference(r.pressure, tv);
    res.add(ts);
    return make_report("integral_equation", case_name, "residual", {N, M, r.source.time.steps()},
                       l2_norm_spacetime(res), l2_norm_spacetime(r.pressure));
}

/// Divergence of the truncated forcing, sum_i d/dx_i of its sine series.
inline ModalField forcing_divergence(const SourceDecomposition& s) {
    return sgf::detail::divergence_of_sine(s.domain, s.time, s.input);
}

/// Both signs of the pressure Poisson relation: ||Lap p - div w|| and
/// ||Lap p + div w||, each over ||div w||.
inline std::vector<ResidualReport> check_pressure_poisson(const PressureResult& r, const ModalField& div_w, int M,
                                                          const std::string& case_name) {
    const ModalField lap = laplacian(r.pressure);
    const Resolution res{r.source.truncation(), M, r.source.time.steps()};
    const double norm = l2_norm_spacetime(div_w);
    return {make_report("pressure_poisson", case_name, "lap_p_minus_div_w", res,
                        l2_norm_spacetime(detail::difference(lap, div_w)), norm),
            make_report("pressure_poisson", case_name, "lap_p_plus_div_w", res, l2_norm_spacetime(lap + div_w),
                        norm)};
}

/// int_0^t sum_i ||dp/dx_i||^2.
inline double pressure_gradient_energy(const PressureResult& r) {
    const ModalVector g = pressure_gradient(r);
    return trapezoid(r.source.time, [&](int k) { return norm_squared_at(g, k); });
}

/// int_0^t sum_i ||w_i||^2 of the truncated forcing.
inline double forcing_energy(const SourceDecomposition& s) {
    return trapezoid(s.time, [&](int k) {
        double acc = 0.0;
        for (const auto& c : s.input) {
            acc += inner(c, k, c, k);
        }
        return acc;
    });
}

/// Gradient energy of p at projection truncations N and 2N: the value (over
/// the forcing energy) and the relative change between the two.
inline std::vector<ResidualReport> check_pressure_regularity(const SourceDecomposition& s, int M,
                                                             const std::string& case_name) {
    const int N = s.truncation();
    const Resolution res{N, M, s.time.steps()};
    const double ew = forcing_energy(s);
    const double e1 = pressure_gradient_energy(pressure(s, N));
    const double e2 = pressure_gradient_energy(pressure(s, 2 * N));
    return {make_report("pressure_regularity", case_name, "grad_p_energy_Nproj_N", res, e1, ew),
            make_report("pressure_regularity", case_name, "grad_p_energy_Nproj_2N", res, e2, ew),
            make_report("pressure_regularity", case_name, "truncation_sensitivity", res, std::abs(e2 - e1), e2)};
}

/// Ratios of both estimate inequalities over a corpus at each resolution.
/// The sup ratio per resolution is the measured constant.
inline EstimateReport check_energy_estimate(const std::vector<CorpusField>& corpus, const BoxDomain& domain,
                                            double t_final, const std::vector<Resolution>& resolutions,
                                            const std::string& corpus_id) {
    require(!corpus.empty() && !resolutions.empty(), "energy estimate: empty corpus or resolution list");
    EstimateReport rep;
    rep.corpus_id = corpus_id;
    rep.resolutions = resolutions;
    for (const auto& res : resolutions) {
        const TimeGrid time(t_final, res.K);
        double sup_p = 0.0;
        double sup_u = 0.0;
        for (const auto& f : corpus) {
            const SourceDecomposition s = decompose_source(realize_vector(f, res.N, time), domain, time);
            const double ew = forcing_energy(s);
            require(ew > 0.0, "energy estimate: zero forcing has no ratio (" + f.id + ")");
            const PressureResult r = pressure(s);
            const double rp = pressure_gradient_energy(r) / ew;
            const double ru = sobolev_norm_W221(velocity(r).velocity) / std::sqrt(ew);
            rep.cases.push_back({f.id, res, rp, ru});
            sup_p = std::max(sup_p, rp);
            sup_u = std::max(sup_u, ru);
        }
        rep.sup_pressure.push_back(sup_p);
        rep.sup_sobolev.push_back(sup_u);
    }
    rep.pressure_spread = relative_spread(rep.sup_pressure);
    rep.sobolev_spread = relative_spread(rep.sup_sobolev);
    return rep;
}

namespace detail {

/// Largest power-of-two stride keeping at least 64 time intervals.
inline int sampling_stride(int K) {
    int stride = 1;
    while (K % (2 * stride) == 0 && K / (2 * stride) >= 64) {
        stride *= 2;
    }
    return stride;
}

/// Grid L2(Q_t) norms of (f - exact) and of exact, on interior nodes and a
/// strided trapezoid in t.
inline std::pair<double, double> sampled_error(const ModalVector& f, const SeparableVector& exact,
                                               const SineBasis& basis) {
    const TimeGrid& time = f[0].time();
    const int stride = sampling_stride(time.steps());
    const int samples = time.steps() / stride;
    const double dv = basis.grid().cell_volume();
    double err = 0.0;
    double ref = 0.0;
    for (int s = 0; s <= samples; ++s) {
        const int k = s * stride;
        const double wt = (s == 0 || s == samples) ? 0.5 : 1.0;
        for (std::size_t c = 0; c < 3; ++c) {
            const GridField a = synthesize(f[c], k, basis);
            const GridField b = sample(exact[c], basis.grid(), time.knot(k));
            double e2 = 0.0;
            double r2 = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = a.values()[i] - b.values()[i];
                e2 += d * d;
                r2 += b.values()[i] * b.values()[i];
            }
            err += wt * e2;
            ref += wt * r2;
        }
    }
    const double scale = dv * time.dt() * stride;
    return {std::sqrt(err * scale), std::sqrt(ref * scale)};
}

}  // namespace detail

/// Sine coefficients of the manufactured forcing at one rung.
inline SourceDecomposition manufactured_source(const ManufacturedCase& mc, const SineBasis& basis, int N,
                                               const TimeGrid& time) {
    std::array<ModalHistory, 3> w;
    for (std::size_t i = 0; i < 3; ++i) {
        w[i] = analyze(mc.w[i], basis, N, time);
    }
    return decompose_source(std::move(w), mc.domain, time);
}

/// ||grad p - grad p*|| / ||grad p*||, ||u - u*|| / ||u*|| and ||div u|| / ||grad u||
/// across a ladder.
inline std::vector<ConvergenceTable> run_manufactured_comparison(const ManufacturedCase& mc, double t_final,
                                                                 const std::vector<Resolution>& ladder) {
    std::vector<ResidualReport> gp, uv, dv;
    for (const auto& res : ladder) {
        const SpatialGrid grid(mc.domain, res.M);
        const SineBasis basis(grid);
        const TimeGrid time(t_final, res.K);
        const PressureResult r = pressure(manufactured_source(mc, basis, res.N, time));
        const auto [ge, gn] = detail::sampled_error(pressure_gradient(r), mc.grad_p, basis);
        gp.push_back(make_report("manufactured", mc.name, "grad_p_error", res, ge, gn));
        const ModalVector u = velocity(r).velocity;
        const auto [ue, un] = detail::sampled_error(u, mc.u, basis);
        uv.push_back(make_report("manufactured", mc.name, "velocity_error", res, ue, un));
        const DivergenceDiagnostic d = divergence_ratio(u);
        dv.push_back(make_report("manufactured", mc.name, "div_u_over_grad_u", res, d.divergence_norm,
                                 d.gradient_norm));
    }
    return {make_table("manufactured", mc.name, "grad_p_error", std::move(gp)),
            make_table("manufactured", mc.name, "velocity_error", std::move(uv)),
            make_table("manufactured", mc.name, "div_u_over_grad_u", std::move(dv))};
}

}  // namespace sgf::verification
