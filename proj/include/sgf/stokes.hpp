#pragma once

#include <cmath>

#include "sgf/heat_calculus.hpp"

namespace sgf {

/// Modal data behind the source term
///   S(x,t) = int_0^t int_Omega sum_i dG/dx_i(x,t;xi,tau) w_i(xi,tau) dxi dtau
///          = sum_n sum_i du_n/dx_i(x) h_{i,n}(t),
/// with h_{i,n}' = w_{i,n} - rho lambda_n h_{i,n}, h_{i,n}(0) = 0.
struct SourceDecomposition {
    BoxDomain domain;
    TimeGrid time;
    std::array<ModalHistory, 3> input;     ///< sine coefficients w_{i,n}(t_k)
    std::array<ModalHistory, 3> response;  ///< Duhamel responses h_{i,n}(t_k)

    [[nodiscard]] int truncation() const { return input[0].truncation(); }
};

inline SourceDecomposition decompose_source(std::array<ModalHistory, 3> w, const BoxDomain& domain,
                                            const TimeGrid& time) {
    for (const auto& c : w) {
        require(c.signature() == kSineSignature && c.truncation() == w[0].truncation() &&
                    c.knots() == time.knots(),
                "decompose_source: components must be sine histories on the same truncation");
    }
    SourceDecomposition d{domain, time, std::move(w), {}};
    for (std::size_t i = 0; i < 3; ++i) {
        d.response[i] = duhamel(d.input[i], domain, time);
    }
    return d;
}

inline SourceDecomposition decompose_source(const VectorSpaceTime& w, const SineBasis& basis, int N) {
    std::array<ModalHistory, 3> coeffs;
    for (std::size_t i = 0; i < 3; ++i) {
        coeffs[i] = ModalHistory(kSineSignature, N, w.knots());
        for (int k = 0; k < w.knots(); ++k) {
            coeffs[i].set(k, analyze(w[k][i], basis, N));
        }
    }
    return decompose_source(std::move(coeffs), basis.domain(), w.time());
}

namespace detail {

/// sum_i d/dx_i of the sine series with coefficients c_i.
inline ModalField divergence_of_sine(const BoxDomain& domain, const TimeGrid& time,
                                     const std::array<ModalHistory, 3>& c) {
    ModalField out(domain, time);
    for (int i = 0; i < 3; ++i) {
        out.add(derivative(single_term(domain, time, c[static_cast<std::size_t>(i)]), i));
    }
    return out;
}

}  // namespace detail

inline ModalField source_S(const SourceDecomposition& d) {
    return detail::divergence_of_sine(d.domain, d.time, d.response);
}

/// dS/dt from the modal ODE right-hand side w_{i,n} - rho lambda_n h_{i,n}.
inline ModalField source_S_dt(const SourceDecomposition& d) {
    std::array<ModalHistory, 3> rate;
    for (std::size_t i = 0; i < 3; ++i) {
        ModalHistory decay = d.response[i];
        scale_by_mode(decay, [&](int n1, int n2, int n3) {
            return -d.domain.rho() * d.domain.eigenvalue({n1, n2, n3});
        });
        rate[i] = d.input[i];
        rate[i] += decay;
    }
    return detail::divergence_of_sine(d.domain, d.time, rate);
}

struct PressureResult {
    SourceDecomposition source;
    ModalField pressure;
    int projection_modes = 0;  ///< sine truncation of the inverse Laplacian
};

/// p = -d/dt Laplacian^{-1} S + rho S.
///
/// The time derivative is moved inside the elliptic solve and taken from the
/// modal ODE, so no differencing of p in t is involved.
inline PressureResult pressure(SourceDecomposition source, int projection_modes = 0) {
    const int np = projection_modes > 0 ? projection_modes : source.truncation();
    ModalField p = -1.0 * inverse_laplacian(source_S_dt(source), np);
    p.add(source.domain.rho() * source_S(source));
    return {std::move(source), std::move(p), np};
}

inline PressureResult pressure(const VectorSpaceTime& w, const SineBasis& basis, int N,
                               int projection_modes = 0) {
    return pressure(decompose_source(w, basis, N), projection_modes);
}

/// Term-wise gradient of p; every term stays a product of sines and cosines.
inline ModalVector pressure_gradient(const PressureResult& r) {
    return {derivative(r.pressure, 0), derivative(r.pressure, 1), derivative(r.pressure, 2)};
}

struct VelocityResult {
    ModalVector velocity;
};

/// u_i = heat potential of (w_i + dp/dx_i), the gradient projected onto the
/// velocity's sine modes.
inline VelocityResult velocity(const PressureResult& r) {
    const auto& src = r.source;
    const int N = src.truncation();
    const ModalVector grad = pressure_gradient(r);
    VelocityResult out{make_modal_vector(src.domain, src.time)};
    for (std::size_t i = 0; i < 3; ++i) {
        ModalHistory forcing = project(grad[i], kSineSignature, N);
        forcing += src.input[i];
        out.velocity[i].add(duhamel(forcing, src.domain, src.time));
    }
    return out;
}

/// Same velocity with the pressure term integrated by parts onto the kernel:
/// u_i = H[w_i] - sum_n u_n(x) int_0^t e^{-rho lambda_n (t - tau)} q_{i,n}(tau) dtau,
/// q_{i,n} = <du_n/dx_i, p>.
inline VelocityResult velocity_via_integration_by_parts(const PressureResult& r) {
    const auto& src = r.source;
    const int N = src.truncation();
    VelocityResult out{make_modal_vector(src.domain, src.time)};
    for (int i = 0; i < 3; ++i) {
        const auto s = static_cast<std::size_t>(i);
        // <C_n, p> along axis i; the result multiplies u_n, so it is relabelled as a sine history.
        const ModalHistory proj = project(r.pressure, cosine_in(i), N);
        ModalHistory q(kSineSignature, N, proj.knots());
        std::copy(proj.values().begin(), proj.values().end(), q.values().begin());
        const double L = src.domain.length(i);
        scale_by_mode(q, [&](int n1, int n2, int n3) {
            const int n = i == 0 ? n1 : (i == 1 ? n2 : n3);
            return -n * pi / L;
        });
        out.velocity[s].add(src.response[s]);
        out.velocity[s].add(duhamel(q, src.domain, src.time));
    }
    return out;
}

inline ModalField divergence(const ModalVector& u) {
    ModalField out(u[0].domain(), u[0].time());
    for (int i = 0; i < 3; ++i) {
        out.add(derivative(u[static_cast<std::size_t>(i)], i));
    }
    return out;
}

struct DivergenceDiagnostic {
    double divergence_norm = 0.0;  ///< ||div u||_{L2(Q_t)}
    double gradient_norm = 0.0;    ///< ||grad u||_{L2(Q_t)}
    double ratio = 0.0;
};

inline double gradient_norm(const ModalVector& u) {
    const auto& time = u[0].time();
    std::vector<ModalField> parts;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            parts.push_back(derivative(u[static_cast<std::size_t>(i)], j));
        }
    }
    return std::sqrt(trapezoid(time, [&](int k) {
        double acc = 0.0;
        for (const auto& p : parts) {
            acc += norm_squared_at(p, k);
        }
        return acc;
    }));
}

inline DivergenceDiagnostic divergence_ratio(const ModalVector& u) {
    DivergenceDiagnostic d;
    d.divergence_norm = l2_norm_spacetime(divergence(u));
    d.gradient_norm = gradient_norm(u);
    d.ratio = d.gradient_norm > 0.0 ? d.divergence_norm / d.gradient_norm : 0.0;
    return d;
}

/// Composite Simpson in t (K even), trapezoid otherwise.
template <class PerKnot>
double simpson(const TimeGrid& time, PerKnot&& per_knot) {
    const int K = time.steps();
    if (K % 2 != 0) {
        return trapezoid(time, per_knot);
    }
    double acc = per_knot(0) + per_knot(K);
    for (int k = 1; k < K; ++k) {
        acc += (k % 2 == 1 ? 4.0 : 2.0) * per_knot(k);
    }
    return acc * time.dt() / 3.0;
}

/// ||u||_{W_2^{2,1}(Q_t)}: L2(Q_t) norms of u, its first and second space
/// derivatives (each multi-index once) and du/dt.
///
/// Space derivatives are exact on the modal terms; du/dt is the second-order
/// finite difference; the time integral is composite Simpson.
inline double sobolev_norm_W221(const ModalVector& u) {
    const auto& time = u[0].time();
    std::vector<ModalField> parts;
    for (const auto& c : u) {
        parts.push_back(c);
        for (int a = 0; a < 3; ++a) {
            const ModalField da = derivative(c, a);
            parts.push_back(da);
            for (int b = a; b < 3; ++b) {
                parts.push_back(derivative(da, b));
            }
        }
        ModalField dt(c.domain(), time);
        for (const auto& term : c.terms()) {
            dt.add(time_derivative(term, time));
        }
        parts.push_back(std::move(dt));
    }
    return std::sqrt(simpson(time, [&](int k) {
        double acc = 0.0;
        for (const auto& p : parts) {
            acc += norm_squared_at(p, k);
        }
        return acc;
    }));
}

}  // namespace sgf
