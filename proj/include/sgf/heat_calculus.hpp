#pragma once

#include <cmath>
#include <optional>

#include "sgf/modal.hpp"

namespace sgf {

/// One step of h' = g - rate h under piecewise-linear g:
/// h_{k+1} = decay h_k + c0 g_k + c1 g_{k+1}.
struct EtdStep {
    double decay = 1.0;
    double c0 = 0.0;
    double c1 = 0.0;
};

inline EtdStep etd_coefficients(double rate, double dt) {
    const double theta = rate * dt;
    EtdStep s;
    s.decay = std::exp(-theta);
    if (theta < 1e-5) {
        // Series forms; the closed forms lose every digit as theta -> 0.
        s.c0 = dt * (0.5 - theta / 3.0 + theta * theta / 8.0 - theta * theta * theta / 30.0);
        s.c1 = dt * (0.5 - theta / 6.0 + theta * theta / 24.0 - theta * theta * theta / 120.0);
        return s;
    }
    const double one_minus = -std::expm1(-theta);
    s.c0 = (one_minus - theta * s.decay) / (rate * theta);
    s.c1 = one_minus / rate - s.c0;
    return s;
}

/// Duhamel response h_n(t_k) of h' = g_n - rho lambda_n h, h(0) = 0, for every
/// coefficient of g (the decay rate depends only on the mode index).
inline ModalHistory duhamel(const ModalHistory& g, const BoxDomain& domain, const TimeGrid& time) {
    require(g.knots() == time.knots(), "duhamel: knot count mismatch");
    const int N = g.truncation();
    const auto lambda = mode_eigenvalues(domain, N);
    std::vector<EtdStep> steps(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        steps[i] = etd_coefficients(domain.rho() * lambda[i], time.dt());
    }
    ModalHistory h(g.signature(), N, g.knots());
    for (int k = 0; k < time.steps(); ++k) {
        const auto hk = h.at(k);
        const auto gk = g.at(k);
        const auto gk1 = g.at(k + 1);
        auto next = h.at(k + 1);
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = steps[i].decay * hk[i] + steps[i].c0 * gk[i] + steps[i].c1 * gk1[i];
        }
    }
    return h;
}

/// Forcing and response coefficients of one heat-potential solve.
struct ModeHistory {
    ModalHistory forcing;
    ModalHistory response;
};

inline ModeHistory heat_potential_modes(ModalHistory forcing, const BoxDomain& domain, const TimeGrid& time) {
    ModalHistory response = duhamel(forcing, domain, time);
    return {std::move(forcing), std::move(response)};
}

/// Heat potential of a sampled forcing: zero initial and boundary data.
///
/// The forcing is projected onto [1,N]^3 sine modes slice by slice and each
/// mode is integrated exactly under piecewise-linear time interpolation.
inline ScalarSpaceTime heat_potential(const ScalarSpaceTime& forcing, const SineBasis& basis, int N) {
    const ModeHistory mh =
        heat_potential_modes(analyze(forcing, basis, N), basis.domain(), forcing.time());
    return sample(single_term(basis.domain(), forcing.time(), mh.response), basis);
}

/// sum_n c_n exp(-rho lambda_n t_k) u_n.
inline ModalHistory homogeneous_modes(const SpectralField& initial, const TimeGrid& time) {
    const int N = initial.truncation();
    const auto& domain = initial.domain();
    const auto lambda = mode_eigenvalues(domain, N);
    ModalHistory out(kSineSignature, N, time.knots());
    for (int k = 0; k < time.knots(); ++k) {
        auto c = out.at(k);
        const double t = time.knot(k);
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] = k == 0 ? initial.values()[i]
                          : initial.values()[i] * std::exp(-domain.rho() * lambda[i] * t);
        }
    }
    return out;
}

inline ScalarSpaceTime homogeneous_solution(const SpectralField& initial, const TimeGrid& time,
                                            const SineBasis& basis) {
    return sample(single_term(basis.domain(), time, homogeneous_modes(initial, time)), basis);
}

enum class LaplacianKind { FiniteDifference, Spectral };

struct HeatOperatorOptions {
    LaplacianKind laplacian = LaplacianKind::FiniteDifference;
    const SineBasis* basis = nullptr;  ///< required for the spectral Laplacian
    int N = 0;                         ///< spectral truncation
};

/// Centered 7-point Laplacian with zero Dirichlet ghost values.
inline GridField laplacian_fd(const GridField& f, const SpatialGrid& grid) {
    const int M = f.points_per_axis();
    GridField out(M);
    const double ih0 = 1.0 / (grid.spacing(0) * grid.spacing(0));
    const double ih1 = 1.0 / (grid.spacing(1) * grid.spacing(1));
    const double ih2 = 1.0 / (grid.spacing(2) * grid.spacing(2));
    auto at = [&](int i, int j, int k) {
        return (i < 0 || j < 0 || k < 0 || i >= M || j >= M || k >= M) ? 0.0 : f(i, j, k);
    };
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            for (int k = 0; k < M; ++k) {
                const double c = 2.0 * f(i, j, k);
                out(i, j, k) = (at(i - 1, j, k) - c + at(i + 1, j, k)) * ih0 +
                               (at(i, j - 1, k) - c + at(i, j + 1, k)) * ih1 +
                               (at(i, j, k - 1) - c + at(i, j, k + 1)) * ih2;
            }
        }
    }
    return out;
}

/// Spectral Laplacian: project onto [1,N]^3, multiply by -lambda_n, resynthesize.
inline GridField laplacian_spectral(const GridField& f, const SineBasis& basis, int N) {
    Tensor3 c = analyze(f, basis, N);
    const auto lambda = mode_eigenvalues(basis.domain(), N);
    for (std::size_t i = 0; i < c.size(); ++i) {
        c.data[i] *= -lambda[i];
    }
    return synthesize(c, kSineSignature, basis);
}

namespace detail {

inline GridField time_derivative_at(const ScalarSpaceTime& u, int k) {
    const int K = u.time().steps();
    const double inv = 1.0 / (2.0 * u.time().dt());
    GridField out(u[0].points_per_axis());
    auto d = out.values();
    if (k == 0) {
        const auto a = u[0].values(), b = u[1].values(), c = u[2].values();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (-3.0 * a[i] + 4.0 * b[i] - c[i]) * inv;
    } else if (k == K) {
        const auto a = u[K].values(), b = u[K - 1].values(), c = u[K - 2].values();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (3.0 * a[i] - 4.0 * b[i] + c[i]) * inv;
    } else {
        const auto a = u[k + 1].values(), b = u[k - 1].values();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (a[i] - b[i]) * inv;
    }
    return out;
}

/// time_sign * du/dt - rho * Laplacian(u) at every knot.
inline ScalarSpaceTime heat_operator(const ScalarSpaceTime& u, const SpatialGrid& grid, double rho,
                                     double time_sign, const HeatOperatorOptions& options) {
    require(u.time().steps() >= 2, "apply_T: K must be >= 2");
    if (options.laplacian == LaplacianKind::Spectral) {
        require(options.basis != nullptr && options.N >= 1, "apply_T: spectral Laplacian needs a basis");
    }
    ScalarSpaceTime out = make_scalar_spacetime(u.time(), u[0].points_per_axis());
    for (int k = 0; k < u.knots(); ++k) {
        const GridField dt = time_derivative_at(u, k);
        const GridField lap = options.laplacian == LaplacianKind::Spectral
                                  ? laplacian_spectral(u[k], *options.basis, options.N)
                                  : laplacian_fd(u[k], grid);
        auto dst = out[k].values();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] = time_sign * dt.values()[i] - rho * lap.values()[i];
        }
    }
    return out;
}

}  // namespace detail

/// T u = du/dt - rho Laplacian(u).
inline ScalarSpaceTime apply_T(const ScalarSpaceTime& u, const SpatialGrid& grid,
                               const HeatOperatorOptions& options = {}) {
    return detail::heat_operator(u, grid, grid.domain().rho(), 1.0, options);
}

/// T* u = -du/dt - rho Laplacian(u).
inline ScalarSpaceTime apply_T_star(const ScalarSpaceTime& u, const SpatialGrid& grid,
                                    const HeatOperatorOptions& options = {}) {
    return detail::heat_operator(u, grid, grid.domain().rho(), -1.0, options);
}

/// T on a modal field: finite differences in t, exact -lambda_n for the Laplacian.
inline ModalField apply_T(const ModalField& f) {
    ModalField out(f.domain(), f.time());
    const double rho = f.domain().rho();
    for (const auto& term : f.terms()) {
        ModalHistory r = time_derivative(term, f.time());
        ModalHistory lam = term;
        scale_by_mode(lam, [&](int n1, int n2, int n3) { return rho * f.domain().eigenvalue({n1, n2, n3}); });
        r += lam;
        out.add(std::move(r));
    }
    return out;
}

/// Dirichlet inverse Laplacian on sampled data: coefficient n scaled by -1/lambda_n.
inline GridField inverse_laplacian(const GridField& f, const SineBasis& basis, int N) {
    Tensor3 c = analyze(f, basis, N);
    const auto lambda = mode_eigenvalues(basis.domain(), N);
    for (std::size_t i = 0; i < c.size(); ++i) {
        c.data[i] /= -lambda[i];
    }
    return synthesize(c, kSineSignature, basis);
}

/// Dirichlet inverse Laplacian of a modal field, truncated to [1,N]^3 sine modes.
///
/// Cosine factors do not vanish on the boundary; their exact sine projection
/// is what gets inverted.
inline ModalField inverse_laplacian(const ModalField& f, int N) {
    ModalHistory c = project(f, kSineSignature, N);
    scale_by_mode(c, [&](int n1, int n2, int n3) { return -1.0 / f.domain().eigenvalue({n1, n2, n3}); });
    return single_term(f.domain(), f.time(), std::move(c));
}

}  // namespace sgf
