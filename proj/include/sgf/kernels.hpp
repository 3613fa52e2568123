#pragma once

#include <cmath>
#include <string>

#include "sgf/domain.hpp"

namespace sgf {

/// Series cutoffs for pointwise kernel evaluation.
struct TruncationPolicy {
    int n_kernel = 24;       ///< sine modes per axis in the spectral Green function
    int image_shells = 3;    ///< reflections k = -R..R per axis in the image sum
    double eps_t = 5e-5;     ///< smallest admissible t - tau
    double crossover = 0.05; ///< images when rho (t - tau) <= crossover * min L^2

    /// Default policy with eps_t = 1e-4 * t_final.
    static TruncationPolicy for_horizon(double t_final) {
        TruncationPolicy p;
        p.eps_t = 1e-4 * t_final;
        return p;
    }

    void validate() const {
        require(n_kernel >= 1, "TruncationPolicy: n_kernel must be >= 1");
        require(image_shells >= 1, "TruncationPolicy: image_shells must be >= 1");
        require(eps_t > 0.0, "TruncationPolicy: eps_t must be positive");
        require(crossover > 0.0, "TruncationPolicy: crossover must be positive");
    }
};

namespace detail {

inline double separation(double t, double tau, double eps_t) {
    const double s = t - tau;
    if (!(s >= eps_t)) {
        throw TimeSeparationError("kernel evaluated with t - tau = " + std::to_string(s) +
                                  " below eps_t = " + std::to_string(eps_t));
    }
    return s;
}

/// 1D free-space heat kernel (4 pi rho s)^{-1/2} exp(-d^2 / (4 rho s)).
inline double heat_1d(double d, double rho_s) {
    return std::exp(-d * d / (4.0 * rho_s)) / std::sqrt(4.0 * pi * rho_s);
}

struct ImageSum {
    double direct = 0.0;  ///< k = 0 unreflected term
    double rest = 0.0;    ///< every other signed image
    [[nodiscard]] double total() const { return direct + rest; }
};

/// Odd-reflection image sum on (0, L): sum_k heat(x - xi - 2kL) - heat(x + xi - 2kL).
inline ImageSum image_sum_1d(double x, double xi, double L, double rho_s, int shells) {
    ImageSum out;
    out.direct = heat_1d(x - xi, rho_s);
    for (int k = -shells; k <= shells; ++k) {
        if (k != 0) {
            out.rest += heat_1d(x - xi - 2.0 * k * L, rho_s);
        }
        out.rest -= heat_1d(x + xi - 2.0 * k * L, rho_s);
    }
    return out;
}

/// sum_{n<=N} exp(-rho k_n^2 s) s_n(x) s_n(xi), or with d/dx applied when grad is set.
inline double spectral_sum_1d(double x, double xi, double L, double rho_s, int N, bool grad) {
    const double norm = 2.0 / L;
    double acc = 0.0;
    for (int n = 1; n <= N; ++n) {
        const double k = n * pi / L;
        const double decay = std::exp(-k * k * rho_s);
        const double fx = grad ? k * std::cos(k * x) : std::sin(k * x);
        acc += decay * (fx * std::sin(k * xi));
    }
    return norm * acc;
}

inline void require_in_box(const BoxDomain& domain, const Vec3& x, const Vec3& xi) {
    require(domain.contains(x) && domain.contains(xi), "kernel: point outside the box");
}

}  // namespace detail

/// Free-space heat kernel (4 pi rho s)^{-3/2} exp(-|x - xi|^2 / (4 rho s)), s = t - tau.
inline double eval_Z(const Vec3& x, double t, const Vec3& xi, double tau, double rho, double eps_t) {
    const double s = detail::separation(t, tau, eps_t);
    const double rho_s = rho * s;
    double r2 = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
        const double d = x[a] - xi[a];
        r2 += d * d;
    }
    return std::exp(-r2 / (4.0 * rho_s)) / std::pow(4.0 * pi * rho_s, 1.5);
}

inline double eval_Z(const Vec3& x, double t, const Vec3& xi, double tau, double rho) {
    return eval_Z(x, t, xi, tau, rho, TruncationPolicy{}.eps_t);
}

/// grad_x Z = -(x - xi) / (2 rho s) Z.
inline Vec3 grad_x_Z(const Vec3& x, double t, const Vec3& xi, double tau, double rho, double eps_t) {
    const double z = eval_Z(x, t, xi, tau, rho, eps_t);
    const double scale = z / (2.0 * rho * (t - tau));
    return {-(x[0] - xi[0]) * scale, -(x[1] - xi[1]) * scale, -(x[2] - xi[2]) * scale};
}

/// grad_xi Z, the exact negation of grad_x Z.
inline Vec3 grad_xi_Z(const Vec3& x, double t, const Vec3& xi, double tau, double rho, double eps_t) {
    const Vec3 g = grad_x_Z(x, t, xi, tau, rho, eps_t);
    return {-g[0], -g[1], -g[2]};
}

/// Dirichlet heat kernel of the box as the truncated eigen-series, summed as
/// the product of three 1D series.
inline double eval_G_spectral(const Vec3& x, double t, const Vec3& xi, double tau,
                              const BoxDomain& domain, const TruncationPolicy& policy) {
    detail::require_in_box(domain, x, xi);
    const double rho_s = domain.rho() * detail::separation(t, tau, policy.eps_t);
    double g = 1.0;
    for (int a = 0; a < 3; ++a) {
        const auto s = static_cast<std::size_t>(a);
        g *= detail::spectral_sum_1d(x[s], xi[s], domain.length(a), rho_s, policy.n_kernel, false);
    }
    return g;
}

/// Dirichlet heat kernel of the box by the method of images.
inline double eval_G_images(const Vec3& x, double t, const Vec3& xi, double tau,
                            const BoxDomain& domain, const TruncationPolicy& policy) {
    detail::require_in_box(domain, x, xi);
    const double rho_s = domain.rho() * detail::separation(t, tau, policy.eps_t);
    double g = 1.0;
    for (int a = 0; a < 3; ++a) {
        const auto s = static_cast<std::size_t>(a);
        g *= detail::image_sum_1d(x[s], xi[s], domain.length(a), rho_s, policy.image_shells).total();
    }
    return g;
}

inline bool prefers_images(double t, double tau, const BoxDomain& domain, const TruncationPolicy& policy) {
    const double L = domain.min_length();
    return domain.rho() * (t - tau) <= policy.crossover * L * L;
}

inline double eval_G(const Vec3& x, double t, const Vec3& xi, double tau, const BoxDomain& domain,
                     const TruncationPolicy& policy) {
    return prefers_images(t, tau, domain, policy) ? eval_G_images(x, t, xi, tau, domain, policy)
                                                  : eval_G_spectral(x, t, xi, tau, domain, policy);
}

/// V = G - Z.
///
/// On the image branch the direct term is removed analytically from the
/// product of 1D sums, so V is never formed by cancelling G against Z.
inline double eval_V(const Vec3& x, double t, const Vec3& xi, double tau, const BoxDomain& domain,
                     const TruncationPolicy& policy) {
    detail::require_in_box(domain, x, xi);
    if (!prefers_images(t, tau, domain, policy)) {
        return eval_G_spectral(x, t, xi, tau, domain, policy) -
               eval_Z(x, t, xi, tau, domain.rho(), policy.eps_t);
    }
    const double rho_s = domain.rho() * detail::separation(t, tau, policy.eps_t);
    std::array<detail::ImageSum, 3> f;
    for (int a = 0; a < 3; ++a) {
        const auto s = static_cast<std::size_t>(a);
        f[s] = detail::image_sum_1d(x[s], xi[s], domain.length(a), rho_s, policy.image_shells);
    }
    // prod(d_a + r_a) - prod(d_a)
    return f[0].rest * f[1].total() * f[2].total() + f[0].direct * f[1].rest * f[2].total() +
           f[0].direct * f[1].direct * f[2].rest;
}

/// grad_x of the truncated eigen-series (sine -> cosine in the differentiated axis).
inline Vec3 grad_x_G_spectral(const Vec3& x, double t, const Vec3& xi, double tau,
                              const BoxDomain& domain, const TruncationPolicy& policy) {
    detail::require_in_box(domain, x, xi);
    const double rho_s = domain.rho() * detail::separation(t, tau, policy.eps_t);
    std::array<double, 3> plain{};
    std::array<double, 3> diff{};
    for (int a = 0; a < 3; ++a) {
        const auto s = static_cast<std::size_t>(a);
        plain[s] = detail::spectral_sum_1d(x[s], xi[s], domain.length(a), rho_s, policy.n_kernel, false);
        diff[s] = detail::spectral_sum_1d(x[s], xi[s], domain.length(a), rho_s, policy.n_kernel, true);
    }
    return {diff[0] * plain[1] * plain[2], plain[0] * diff[1] * plain[2], plain[0] * plain[1] * diff[2]};
}

}  // namespace sgf
