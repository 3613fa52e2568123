#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "sgf/modal.hpp"

namespace sgf::verification {

/// coeff * time(t) * f0(x1) f1(x2) f2(x3).
struct SeparableTerm {
    double coeff = 1.0;
    std::function<double(double)> time;
    std::array<std::function<double(double)>, 3> factor;
};

/// A scalar closed-form field as a sum of separable terms.
using SeparableField = std::vector<SeparableTerm>;
using SeparableVector = std::array<SeparableField, 3>;

inline double evaluate(const SeparableField& f, const Vec3& x, double t) {
    double acc = 0.0;
    for (const auto& term : f) {
        acc += term.coeff * term.time(t) * term.factor[0](x[0]) * term.factor[1](x[1]) * term.factor[2](x[2]);
    }
    return acc;
}

inline SeparableField concat(std::initializer_list<std::pair<double, const SeparableField*>> parts) {
    SeparableField out;
    for (const auto& [scale, field] : parts) {
        for (SeparableTerm term : *field) {
            term.coeff *= scale;
            out.push_back(std::move(term));
        }
    }
    return out;
}

namespace detail {

inline std::vector<double> tabulate(const std::function<double(double)>& f, const SpatialGrid& grid, int axis) {
    std::vector<double> v(static_cast<std::size_t>(grid.points_per_axis()));
    for (int j = 0; j < grid.points_per_axis(); ++j) {
        v[static_cast<std::size_t>(j)] = f(grid.node(axis, j));
    }
    return v;
}

}  // namespace detail

/// Grid samples of f at time t (outer products of 1D tables).
inline GridField sample(const SeparableField& f, const SpatialGrid& grid, double t) {
    const int M = grid.points_per_axis();
    GridField out(M);
    for (const auto& term : f) {
        const double s = term.coeff * term.time(t);
        if (s == 0.0) {
            continue;
        }
        const auto a = detail::tabulate(term.factor[0], grid, 0);
        const auto b = detail::tabulate(term.factor[1], grid, 1);
        const auto c = detail::tabulate(term.factor[2], grid, 2);
        for (int i = 0; i < M; ++i) {
            for (int j = 0; j < M; ++j) {
                const double ab = s * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
                for (int k = 0; k < M; ++k) {
                    out(i, j, k) += ab * c[static_cast<std::size_t>(k)];
                }
            }
        }
    }
    return out;
}

/// Sine coefficients (grid quadrature) of f at every knot.
///
/// Equal to analyzing the sampled field slice by slice; the separable form
/// reduces the work to three 1D projections per term.
inline ModalHistory analyze(const SeparableField& f, const SineBasis& basis, int N, const TimeGrid& time) {
    ModalHistory out(kSineSignature, N, time.knots());
    const auto& grid = basis.grid();
    for (const auto& term : f) {
        std::array<std::vector<double>, 3> proj;
        for (int a = 0; a < 3; ++a) {
            const auto samples = detail::tabulate(term.factor[static_cast<std::size_t>(a)], grid, a);
            const MatrixView A = basis.analysis(a, N);
            auto& p = proj[static_cast<std::size_t>(a)];
            p.assign(static_cast<std::size_t>(N), 0.0);
            for (int n = 0; n < N; ++n) {
                double acc = 0.0;
                for (int j = 0; j < A.cols; ++j) {
                    acc += A(n, j) * samples[static_cast<std::size_t>(j)];
                }
                p[static_cast<std::size_t>(n)] = acc;
            }
        }
        for (int k = 0; k < time.knots(); ++k) {
            const double s = term.coeff * term.time(time.knot(k));
            auto c = out.at(k);
            std::size_t idx = 0;
            for (int n1 = 0; n1 < N; ++n1) {
                for (int n2 = 0; n2 < N; ++n2) {
                    const double ab = s * proj[0][static_cast<std::size_t>(n1)] * proj[1][static_cast<std::size_t>(n2)];
                    for (int n3 = 0; n3 < N; ++n3) {
                        c[idx++] += ab * proj[2][static_cast<std::size_t>(n3)];
                    }
                }
            }
        }
    }
    return out;
}

enum class TimeProfile { Quadratic, Sine };
enum class PressurePattern { Zero, Cosine, Polynomial };

inline std::string to_string(TimeProfile p) { return p == TimeProfile::Quadratic ? "t2" : "sin"; }

inline std::string to_string(PressurePattern p) {
    switch (p) {
        case PressurePattern::Zero: return "zero";
        case PressurePattern::Cosine: return "cos";
        case PressurePattern::Polynomial: return "poly";
    }
    return "?";
}

/// Closed-form (u*, p*) with u* = curl(0, 0, chi), chi = s(t) prod_a sin^2(pi x_a / L_a),
/// and the forcing w = du*/dt - rho Lap u* - grad p* of the momentum equation.
struct ManufacturedCase {
    std::string name;
    BoxDomain domain;
    SeparableVector u;
    SeparableVector du_dt;
    SeparableVector lap_u;
    SeparableVector grad_u_diag;  ///< du_i/dx_i, for the divergence check
    SeparableField p;
    SeparableVector grad_p;
    SeparableVector w;
};

inline ManufacturedCase make_manufactured(const BoxDomain& domain, TimeProfile profile, PressurePattern pattern,
                                          double amplitude = 1.0) {
    using Fn = std::function<double(double)>;
    const Fn s = profile == TimeProfile::Quadratic ? Fn([](double t) { return t * t; })
                                                   : Fn([](double t) { return std::sin(t); });
    const Fn ds = profile == TimeProfile::Quadratic ? Fn([](double t) { return 2.0 * t; })
                                                    : Fn([](double t) { return std::cos(t); });
    // g = sin^2(a x) and its first three derivatives, per axis.
    std::array<std::array<Fn, 4>, 3> g;
    std::array<Fn, 3> c, dc, one, x, x2;
    for (int ax = 0; ax < 3; ++ax) {
        const auto i = static_cast<std::size_t>(ax);
        const double a = pi / domain.length(ax);
        g[i][0] = [a](double y) { const double v = std::sin(a * y); return v * v; };
        g[i][1] = [a](double y) { return a * std::sin(2.0 * a * y); };
        g[i][2] = [a](double y) { return 2.0 * a * a * std::cos(2.0 * a * y); };
        g[i][3] = [a](double y) { return -4.0 * a * a * a * std::sin(2.0 * a * y); };
        c[i] = [a](double y) { return std::cos(a * y); };
        dc[i] = [a](double y) { return -a * std::sin(a * y); };
        one[i] = [](double) { return 1.0; };
        x[i] = [](double y) { return y; };
        x2[i] = [](double y) { return y * y; };
    }
    auto term = [&](double coeff, const Fn& time, const Fn& f0, const Fn& f1, const Fn& f2) {
        return SeparableTerm{amplitude * coeff, time, {f0, f1, f2}};
    };

    ManufacturedCase mc;
    mc.name = to_string(profile) + "_" + to_string(pattern);
    mc.domain = domain;
    if (amplitude != 0.0) {
        // u1 = d chi / dx2, u2 = -d chi / dx1.
        mc.u[0] = {term(1.0, s, g[0][0], g[1][1], g[2][0])};
        mc.u[1] = {term(-1.0, s, g[0][1], g[1][0], g[2][0])};
        mc.du_dt[0] = {term(1.0, ds, g[0][0], g[1][1], g[2][0])};
        mc.du_dt[1] = {term(-1.0, ds, g[0][1], g[1][0], g[2][0])};
        mc.lap_u[0] = {term(1.0, s, g[0][2], g[1][1], g[2][0]), term(1.0, s, g[0][0], g[1][3], g[2][0]),
                       term(1.0, s, g[0][0], g[1][1], g[2][2])};
        mc.lap_u[1] = {term(-1.0, s, g[0][3], g[1][0], g[2][0]), term(-1.0, s, g[0][1], g[1][2], g[2][0]),
                       term(-1.0, s, g[0][1], g[1][0], g[2][2])};
        mc.grad_u_diag[0] = {term(1.0, s, g[0][1], g[1][1], g[2][0])};
        mc.grad_u_diag[1] = {term(-1.0, s, g[0][1], g[1][1], g[2][0])};

        if (pattern == PressurePattern::Cosine) {
            mc.p = {term(1.0, s, c[0], c[1], c[2])};
            mc.grad_p[0] = {term(1.0, s, dc[0], c[1], c[2])};
            mc.grad_p[1] = {term(1.0, s, c[0], dc[1], c[2])};
            mc.grad_p[2] = {term(1.0, s, c[0], c[1], dc[2])};
        } else if (pattern == PressurePattern::Polynomial) {
            // p* = s(t) (x1 x2 - x3^2 / 2)
            mc.p = {term(1.0, s, x[0], x[1], one[2]), term(-0.5, s, one[0], one[1], x2[2])};
            mc.grad_p[0] = {term(1.0, s, one[0], x[1], one[2])};
            mc.grad_p[1] = {term(1.0, s, x[0], one[1], one[2])};
            mc.grad_p[2] = {term(-1.0, s, one[0], one[1], x[2])};
        }
    }
    const double rho = domain.rho();
    for (std::size_t i = 0; i < 3; ++i) {
        mc.w[i] = concat({{1.0, &mc.du_dt[i]}, {-rho, &mc.lap_u[i]}, {-1.0, &mc.grad_p[i]}});
    }
    return mc;
}

/// Divergence of the forcing, -Lap p*, as an exact modal field (cosine pattern only).
inline ModalField forcing_divergence_cosine(const ManufacturedCase& mc, TimeProfile profile, const TimeGrid& time) {
    const auto& d = mc.domain;
    ModalHistory h(Signature{Family::Cosine, Family::Cosine, Family::Cosine}, 1, time.knots());
    const double lambda = d.eigenvalue({1, 1, 1});
    // prod cos(pi x / L) = sqrt(L1 L2 L3 / 8) C_1 C_1 C_1.
    const double norm = std::sqrt(d.length(0) * d.length(1) * d.length(2) / 8.0);
    const double amp = mc.p.empty() ? 0.0 : mc.p.front().coeff;
    for (int k = 0; k < time.knots(); ++k) {
        const double t = time.knot(k);
        const double s = profile == TimeProfile::Quadratic ? t * t : std::sin(t);
        h.at(k)[0] = amp * lambda * s * norm;
    }
    return single_term(d, time, std::move(h));
}

}  // namespace sgf::verification
