#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sgf/kernels.hpp"
#include "sgf/stokes.hpp"
#include "sgf/verification/corpus.hpp"
#include "sgf/verification/reports.hpp"

namespace sgf::verification {

namespace detail {

struct GaussRule {
    std::vector<double> x, w;
};

/// Composite 5-point Gauss-Legendre on (a, b).
inline GaussRule gauss_legendre(double a, double b, int panels) {
    static constexpr double node[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                       0.9061798459386640};
    static constexpr double weight[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                         0.2369268850561891, 0.2369268850561891};
    GaussRule g;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        for (int q = 0; q < 5; ++q) {
            g.x.push_back(a + (p + 0.5 + 0.5 * node[q]) * h);
            g.w.push_back(0.5 * h * weight[q]);
        }
    }
    return g;
}

inline Vec3 random_point(std::mt19937_64& rng, const BoxDomain& box) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {u(rng) * box.length(0), u(rng) * box.length(1), u(rng) * box.length(2)};
}

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (const double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

inline double relative_difference(const ModalField& a, const ModalField& b) {
    const double nb = l2_norm_spacetime(b);
    const double d = l2_norm_spacetime(a + (-1.0 * b));
    return nb > 0.0 ? d / nb : d;
}

inline double relative_difference(const ModalVector& a, const ModalVector& b) {
    ModalVector d = a;
    for (std::size_t i = 0; i < 3; ++i) {
        d[i].add(-1.0 * b[i]);
    }
    const double nb = l2_norm_spacetime(b);
    return nb > 0.0 ? l2_norm_spacetime(d) / nb : l2_norm_spacetime(d);
}

inline ResidualReport tolerance_report(std::string suite, std::string metric, Resolution res, double value,
                                       double tol) {
    return with_tolerance(make_report(std::move(suite), "default", std::move(metric), res, value, 1.0), tol);
}

}  // namespace detail

/// Discrete orthonormality and transform round trip at (N, M).
inline SuiteResult run_basis_suite(const BoxDomain& domain, Resolution res, std::uint64_t seed) {
    const SpatialGrid grid(domain, res.M);
    const SineBasis basis(grid);
    const int N = res.N;
    const int M = res.M;
    // Per-axis Gram matrices from direct factor evaluation; the 3D Gram is their product.
    std::array<Matrix, 3> gram;
    for (int a = 0; a < 3; ++a) {
        Matrix g(N, N);
        for (int m = 1; m <= N; ++m) {
            for (int n = 1; n <= N; ++n) {
                double acc = 0.0;
                for (int j = 0; j < M; ++j) {
                    const double x = grid.node(a, j);
                    acc += sine_factor(domain.length(a), m, x) * sine_factor(domain.length(a), n, x);
                }
                g(m - 1, n - 1) = acc * grid.spacing(a);
            }
        }
        gram[static_cast<std::size_t>(a)] = std::move(g);
    }
    double ortho = 0.0;
    for (int a1 = 0; a1 < N; ++a1) {
        for (int b1 = 0; b1 < N; ++b1) {
            for (int a2 = 0; a2 < N; ++a2) {
                for (int b2 = 0; b2 < N; ++b2) {
                    const double g12 = gram[0](a1, b1) * gram[1](a2, b2);
                    for (int a3 = 0; a3 < N; ++a3) {
                        for (int b3 = 0; b3 < N; ++b3) {
                            const double delta = (a1 == b1 && a2 == b2 && a3 == b3) ? 1.0 : 0.0;
                            ortho = std::max(ortho, std::abs(g12 * gram[2](a3, b3) - delta));
                        }
                    }
                }
            }
        }
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    SpectralField c(domain, N);
    for (double& v : c.values()) {
        v = normal(rng);
    }
    const SpectralField back = forward_sine(inverse_sine(c, basis), basis, N);
    double round = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        round = std::max(round, std::abs(back.values()[i] - c.values()[i]));
    }
    round /= detail::max_abs(c.values());

    SuiteResult out;
    out.reports.push_back(detail::tolerance_report("basis", "orthonormality_max_error", res, ortho, 1e-12));
    out.reports.push_back(detail::tolerance_report("basis", "round_trip_max_error", res, round, 1e-12));
    return out;
}

/// Kernel invariants: free-space normalization and gradient antisymmetry of Z;
/// symmetry, boundary values, spectral/image agreement and semigroup of G.
inline SuiteResult run_kernel_suite(const TruncationPolicy& policy, std::uint64_t seed) {
    const BoxDomain box = BoxDomain::unit_cube();
    const Resolution res{policy.n_kernel, 0, 0};
    SuiteResult out;
    auto add = [&](const std::string& metric, double value, double tol) {
        out.reports.push_back(detail::tolerance_report("kernel", metric, res, value, tol));
    };

    {
        // Mass of Z(x, s; ., 0) over a box of half-width 12 sqrt(rho s).
        double worst = 0.0;
        for (const double s : {0.02, 0.5}) {
            const Vec3 x{0.5, 0.5, 0.5};
            const double half = 12.0 * std::sqrt(s);
            const detail::GaussRule g = detail::gauss_legendre(-half, half, 24);
            double mass = 0.0;
            for (std::size_t i = 0; i < g.x.size(); ++i) {
                for (std::size_t j = 0; j < g.x.size(); ++j) {
                    for (std::size_t k = 0; k < g.x.size(); ++k) {
                        const Vec3 xi{x[0] + g.x[i], x[1] + g.x[j], x[2] + g.x[k]};
                        mass += g.w[i] * g.w[j] * g.w[k] * eval_Z(x, s, xi, 0.0, 1.0, policy.eps_t);
                    }
                }
            }
            worst = std::max(worst, std::abs(mass - 1.0));
        }
        add("Z_unit_mass_error", worst, 1e-8);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> sep(0.02, 0.5);
    {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const Vec3 x = detail::random_point(rng, box);
            const Vec3 xi = detail::random_point(rng, box);
            const double s = sep(rng);
            const Vec3 gx = grad_x_Z(x, s, xi, 0.0, 1.0, policy.eps_t);
            const Vec3 gxi = grad_xi_Z(x, s, xi, 0.0, 1.0, policy.eps_t);
            const double scale = std::max({std::abs(gx[0]), std::abs(gx[1]), std::abs(gx[2]), 1e-300});
            for (std::size_t a = 0; a < 3; ++a) {
                worst = std::max(worst, std::abs(gx[a] + gxi[a]) / scale);
            }
        }
        add("Z_gradient_antisymmetry", worst, 1e-15);
    }
    {
        double spectral = 0.0;
        double images = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const Vec3 x = detail::random_point(rng, box);
            const Vec3 xi = detail::random_point(rng, box);
            const double s = sep(rng);
            const double a = eval_G_spectral(x, s, xi, 0.0, box, policy);
            const double b = eval_G_spectral(xi, s, x, 0.0, box, policy);
            spectral = std::max(spectral, std::abs(a - b) / std::max(std::abs(a), 1e-300));
            const double c = eval_G_images(x, s, xi, 0.0, box, policy);
            const double d = eval_G_images(xi, s, x, 0.0, box, policy);
            images = std::max(images, std::abs(c - d) / eval_Z(x, s, x, 0.0, 1.0, policy.eps_t));
        }
        add("G_symmetry_spectral", spectral, 1e-12);
        add("G_symmetry_images", images, 1e-12);
    }
    {
        // Relative to the on-diagonal free-space value at the same separation.
        double spectral = 0.0;
        double images = 0.0;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::uniform_real_distribution<double> short_sep(0.02, 0.25);
        for (int trial = 0; trial < 60; ++trial) {
            const Vec3 x = detail::random_point(rng, box);
            Vec3 xi = detail::random_point(rng, box);
            xi[static_cast<std::size_t>(trial % 3)] = (trial / 3) % 2 == 0 ? 0.0 : 1.0;
            const double s = short_sep(rng);
            const double scale = eval_Z(x, s, x, 0.0, 1.0, policy.eps_t);
            spectral = std::max(spectral, std::abs(eval_G_spectral(x, s, xi, 0.0, box, policy)) / scale);
            images = std::max(images, std::abs(eval_G_images(x, s, xi, 0.0, box, policy)) / scale);
        }
        add("G_boundary_spectral", spectral, 1e-12);
        add("G_boundary_images", images, 1e-8);
    }
    {
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const Vec3 x = detail::random_point(rng, box);
            const Vec3 xi = detail::random_point(rng, box);
            const double s = sep(rng);
            const double gs = eval_G_spectral(x, s, xi, 0.0, box, policy);
            const double gi = eval_G_images(x, s, xi, 0.0, box, policy);
            const double scale = std::max(std::abs(gs), eval_Z(x, s, x, 0.0, 1.0, policy.eps_t));
            worst = std::max(worst, std::abs(gs - gi) / scale);
        }
        add("G_spectral_vs_images", worst, 1e-6);
    }
    {
        const SpatialGrid grid(box, 48);
        const Vec3 x{0.3, 0.55, 0.6};
        const Vec3 xi{0.5, 0.4, 0.45};
        const double t = 0.2, s = 0.1, tau = 0.0;
        const int M = grid.points_per_axis();
        std::vector<double> slab(static_cast<std::size_t>(M), 0.0);
        parallel_for(static_cast<std::size_t>(M), [&](std::size_t i) {
            double acc = 0.0;
            for (int j = 0; j < M; ++j) {
                for (int k = 0; k < M; ++k) {
                    const Vec3 y = grid.point(static_cast<int>(i), j, k);
                    acc += eval_G_spectral(x, t, y, s, box, policy) * eval_G_spectral(y, s, xi, tau, box, policy);
                }
            }
            slab[i] = acc;
        });
        double acc = 0.0;
        for (const double v : slab) {
            acc += v;
        }
        acc *= grid.cell_volume();
        const double direct = eval_G_spectral(x, t, xi, tau, box, policy);
        add("G_semigroup", std::abs(acc - direct) / direct, 1e-6);
    }
    return out;
}

namespace detail {

inline GridField sample_mode(const SpatialGrid& grid, const Index3& n) {
    const int M = grid.points_per_axis();
    GridField f(M);
    const Mode mode{n, grid.domain().eigenvalue(n)};
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            for (int k = 0; k < M; ++k) {
                f(i, j, k) = eval_eigenfunction(grid.domain(), mode, grid.point(i, j, k));
            }
        }
    }
    return f;
}

template <class F>
ScalarSpaceTime separable(const TimeGrid& time, const GridField& shape, F&& amplitude) {
    ScalarSpaceTime out = make_scalar_spacetime(time, shape.points_per_axis());
    for (int k = 0; k < time.knots(); ++k) {
        const double a = amplitude(time.knot(k));
        for (std::size_t i = 0; i < shape.size(); ++i) {
            out[k].values()[i] = a * shape.values()[i];
        }
    }
    return out;
}

}  // namespace detail

/// Inverse Laplacian identity, single-mode heat potential closed form and the
/// order of T applied to the heat potential across a ladder.
inline SuiteResult run_heat_suite(const BoxDomain& domain, double t_final, const std::vector<Resolution>& ladder,
                                  std::uint64_t seed) {
    require(!ladder.empty(), "heat suite: empty ladder");
    SuiteResult out;
    const Resolution base = ladder.size() > 1 ? ladder[1] : ladder[0];
    {
        const SpatialGrid grid(domain, base.M);
        const SineBasis basis(grid);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal;
        SpectralField c(domain, base.N);
        for (double& v : c.values()) {
            v = normal(rng);
        }
        const GridField f = inverse_sine(c, basis);
        const GridField back = laplacian_spectral(inverse_laplacian(f, basis, base.N), basis, base.N);
        double worst = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            worst = std::max(worst, std::abs(back.values()[i] - f.values()[i]));
        }
        out.reports.push_back(detail::tolerance_report("heat", "lap_inverse_lap_identity", base,
                                                       worst / detail::max_abs(f.values()), 1e-12));
    }
    {
        const SpatialGrid grid(domain, base.M);
        const SineBasis basis(grid);
        const TimeGrid time(t_final, base.K);
        const Index3 n{2, 1, 3};
        const GridField un = detail::sample_mode(grid, n);
        const ScalarSpaceTime u =
            heat_potential(detail::separable(time, un, [](double) { return 1.0; }), basis, base.N);
        const double a = domain.rho() * domain.eigenvalue(n);
        double worst = 0.0;
        for (int k = 0; k < time.knots(); ++k) {
            const double amp = -std::expm1(-a * time.knot(k)) / a;
            for (std::size_t i = 0; i < un.size(); ++i) {
                worst = std::max(worst, std::abs(u[k].values()[i] - amp * un.values()[i]));
            }
        }
        out.reports.push_back(detail::tolerance_report("heat", "single_mode_closed_form", base,
                                                       worst / detail::max_abs(un.values()), 1e-13));
    }
    {
        // t^2 forcing on two modes; 7-point Laplacian and centered differences in t.
        std::vector<ResidualReport> rows;
        for (const auto& res : ladder) {
            const SpatialGrid grid(domain, res.M);
            const SineBasis basis(grid);
            const TimeGrid time(t_final, res.K);
            GridField shape = detail::sample_mode(grid, {1, 1, 1});
            const GridField second = detail::sample_mode(grid, {2, 1, 3});
            for (std::size_t i = 0; i < shape.size(); ++i) {
                shape.values()[i] += 0.5 * second.values()[i];
            }
            const ScalarSpaceTime p = detail::separable(time, shape, [](double t) { return t * t; });
            const ScalarSpaceTime r = apply_T(heat_potential(p, basis, res.N), grid);
            double num = 0.0, den = 0.0;
            for (int k = 0; k < time.knots(); ++k) {
                for (std::size_t i = 0; i < shape.size(); ++i) {
                    const double e = r[k].values()[i] - p[k].values()[i];
                    num += e * e;
                    den += p[k].values()[i] * p[k].values()[i];
                }
            }
            rows.push_back(make_report("heat", "two_mode_t2", "T_heat_potential_residual", res, std::sqrt(num),
                                       std::sqrt(den)));
        }
        out.tables.push_back(
            with_required_order(make_table("heat", "two_mode_t2", "T_heat_potential_residual", std::move(rows)), 1.8));
    }
    return out;
}

/// ||T u - P_N(grad p + w)|| and ||P_N w||: the momentum residual measured in
/// the sine space of the velocity.
inline std::pair<double, double> momentum_residual_galerkin(const PressureResult& r, const ModalVector& u) {
    const auto& d = r.source.domain;
    const auto& tg = r.source.time;
    const ModalVector grad = pressure_gradient(r);
    ModalVector resid = make_modal_vector(d, tg);
    ModalVector wf = make_modal_vector(d, tg);
    for (std::size_t i = 0; i < 3; ++i) {
        ModalHistory target = project(grad[i], kSineSignature, r.source.truncation());
        target += r.source.input[i];
        resid[i] = apply_T(u[i]) + (-1.0 * single_term(d, tg, target));
        wf[i] = single_term(d, tg, r.source.input[i]);
    }
    return {l2_norm_spacetime(resid), l2_norm_spacetime(wf)};
}

/// Linearity of the pressure, agreement of the two velocity routes and the
/// order of the momentum residual in the Galerkin space.
inline SuiteResult run_pipeline_suite(const BoxDomain& domain, double t_final, const std::vector<Resolution>& ladder,
                                      std::uint64_t seed) {
    require(!ladder.empty(), "pipeline suite: empty ladder");
    SuiteResult out;
    const Resolution base = ladder.size() > 1 ? ladder[1] : ladder[0];
    const int band = std::max(1, ladder.front().N / 2);
    const TimeGrid time(t_final, base.K);
    {
        const auto w1 = realize_vector(random_field(seed, 101, band), base.N, time);
        const auto w2 = realize_vector(random_field(seed, 102, band), base.N, time);
        const double alpha = 0.7, beta = -2.3;
        std::array<ModalHistory, 3> combo;
        for (std::size_t i = 0; i < 3; ++i) {
            ModalHistory x = w1[i];
            x *= alpha;
            ModalHistory y = w2[i];
            y *= beta;
            x += y;
            combo[i] = std::move(x);
        }
        const PressureResult p1 = pressure(decompose_source(w1, domain, time));
        const PressureResult p2 = pressure(decompose_source(w2, domain, time));
        const PressureResult pc = pressure(decompose_source(combo, domain, time));
        out.reports.push_back(detail::tolerance_report(
            "pipeline", "pressure_linearity", base,
            detail::relative_difference(alpha * p1.pressure + beta * p2.pressure, pc.pressure), 1e-12));
    }
    {
        const auto w = realize_vector(random_field(seed, 103, band), base.N, time);
        const PressureResult r = pressure(decompose_source(w, domain, time));
        out.reports.push_back(detail::tolerance_report(
            "pipeline", "velocity_route_agreement", base,
            detail::relative_difference(velocity_via_integration_by_parts(r).velocity, velocity(r).velocity), 1e-6));
    }
    {
        // t^2 forcing: smooth start, so the centered difference in t sees the
        // asymptotic regime on every rung.
        const CorpusField f = random_field(seed, 104, band);
        std::vector<ResidualReport> rows;
        for (const auto& res : ladder) {
            const TimeGrid tg(t_final, res.K);
            std::array<ModalHistory, 3> w;
            for (int c = 0; c < 3; ++c) {
                w[static_cast<std::size_t>(c)] = ModalHistory(kSineSignature, res.N, tg.knots());
                for (const auto& m : f.modes) {
                    if (m.component != c) {
                        continue;
                    }
                    for (int k = 0; k < tg.knots(); ++k) {
                        const double t = tg.knot(k);
                        w[static_cast<std::size_t>(c)].at(k)[flat_index(res.N, m.index)] += m.amplitude * t * t;
                    }
                }
            }
            const PressureResult r = pressure(decompose_source(w, domain, tg));
            const auto [resid, wn] = momentum_residual_galerkin(r, velocity(r).velocity);
            rows.push_back(make_report("pipeline", "random_t2", "momentum_residual_galerkin", res, resid, wn));
        }
        out.tables.push_back(with_required_order(
            make_table("pipeline", "random_t2", "momentum_residual_galerkin", std::move(rows)), 1.8));
    }
    return out;
}

}  // namespace sgf::verification
