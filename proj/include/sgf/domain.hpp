#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sgf/common.hpp"

namespace sgf {

/// Rectangular box (0,L1) x (0,L2) x (0,L3) with viscosity rho.
///
/// The box fixes the Dirichlet eigenbasis: products of sines with
/// wavenumbers n*pi/L per axis.
class BoxDomain {
public:
    BoxDomain() = default;

    BoxDomain(Vec3 lengths, double rho) : lengths_(lengths), rho_(rho) {
        for (double l : lengths_) {
            require(l > 0.0 && std::isfinite(l), "BoxDomain: edge lengths must be positive");
        }
        require(rho_ > 0.0 && std::isfinite(rho_), "BoxDomain: rho must be positive");
    }

    static BoxDomain unit_cube(double rho = 1.0) { return BoxDomain({1.0, 1.0, 1.0}, rho); }

    [[nodiscard]] const Vec3& lengths() const { return lengths_; }
    [[nodiscard]] double length(int axis) const { return lengths_[static_cast<std::size_t>(axis)]; }
    [[nodiscard]] double rho() const { return rho_; }
    [[nodiscard]] double min_length() const {
        return std::min({lengths_[0], lengths_[1], lengths_[2]});
    }

    /// n*pi/L along one axis.
    [[nodiscard]] double wavenumber(int axis, int n) const { return n * pi / length(axis); }

    [[nodiscard]] double eigenvalue(const Index3& n) const {
        double lambda = 0.0;
        for (int a = 0; a < 3; ++a) {
            const double k = wavenumber(a, n[static_cast<std::size_t>(a)]);
            lambda += k * k;
        }
        return lambda;
    }

    [[nodiscard]] bool contains(const Vec3& x) const {
        for (int a = 0; a < 3; ++a) {
            const double xi = x[static_cast<std::size_t>(a)];
            if (!(xi >= 0.0 && xi <= length(a))) {
                return false;
            }
        }
        return true;
    }

    [[nodiscard]] bool on_boundary(const Vec3& x) const {
        if (!contains(x)) {
            return false;
        }
        for (int a = 0; a < 3; ++a) {
            const double xi = x[static_cast<std::size_t>(a)];
            if (xi == 0.0 || xi == length(a)) {
                return true;
            }
        }
        return false;
    }

    friend bool operator==(const BoxDomain&, const BoxDomain&) = default;

private:
    Vec3 lengths_{1.0, 1.0, 1.0};
    double rho_ = 1.0;
};

/// Dirichlet eigenpair index (n1,n2,n3), n >= 1, with eigenvalue sum (n_a pi/L_a)^2.
struct Mode {
    Index3 index{1, 1, 1};
    double lambda = 0.0;
};

/// All modes of the truncation cube [1,N]^3 in lexicographic order (n3 fastest).
inline std::vector<Mode> enumerate_modes(const BoxDomain& domain, int N) {
    require(N >= 1, "enumerate_modes: N must be >= 1");
    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>(N) * N * N);
    for (int n1 = 1; n1 <= N; ++n1) {
        for (int n2 = 1; n2 <= N; ++n2) {
            for (int n3 = 1; n3 <= N; ++n3) {
                const Index3 n{n1, n2, n3};
                modes.push_back({n, domain.eigenvalue(n)});
            }
        }
    }
    return modes;
}

/// sqrt(2/L) sin(n pi x / L): the normalized 1D sine factor.
inline double sine_factor(double length, int n, double x) {
    return std::sqrt(2.0 / length) * std::sin(n * pi * x / length);
}

/// sqrt(2/L) cos(n pi x / L): the normalized 1D cosine factor (n >= 1).
inline double cosine_factor(double length, int n, double x) {
    return std::sqrt(2.0 / length) * std::cos(n * pi * x / length);
}

/// u_n(x) = prod_a sqrt(2/L_a) sin(n_a pi x_a / L_a); unit L2 norm on the box.
inline double eval_eigenfunction(const BoxDomain& domain, const Mode& mode, const Vec3& x) {
    require(domain.contains(x), "eval_eigenfunction: point outside the box");
    double value = 1.0;
    for (int a = 0; a < 3; ++a) {
        const auto s = static_cast<std::size_t>(a);
        value *= sine_factor(domain.length(a), mode.index[s], x[s]);
    }
    return value;
}

/// Uniform interior nodes x_j = j L/(M+1), j = 1..M, on every axis.
class SpatialGrid {
public:
    SpatialGrid(BoxDomain domain, int M) : domain_(domain), M_(M) {
        require(M >= 1, "SpatialGrid: M must be >= 1");
    }

    [[nodiscard]] const BoxDomain& domain() const { return domain_; }
    [[nodiscard]] int points_per_axis() const { return M_; }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(M_) * M_ * M_; }
    [[nodiscard]] double spacing(int axis) const { return domain_.length(axis) / (M_ + 1); }
    [[nodiscard]] double cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }

    /// Coordinate of zero-based node j (j = 0..M-1) along an axis.
    [[nodiscard]] double node(int axis, int j) const { return (j + 1) * spacing(axis); }

    [[nodiscard]] Vec3 point(int i, int j, int k) const {
        return {node(0, i), node(1, j), node(2, k)};
    }

private:
    BoxDomain domain_;
    int M_;
};

/// Knots t_k = k * t_final / K, k = 0..K.
class TimeGrid {
public:
    TimeGrid(double t_final, int K) : t_final_(t_final), K_(K) {
        require(t_final > 0.0 && std::isfinite(t_final), "TimeGrid: t_final must be positive");
        require(K >= 2, "TimeGrid: K must be >= 2");
    }

    [[nodiscard]] double t_final() const { return t_final_; }
    [[nodiscard]] int steps() const { return K_; }
    [[nodiscard]] int knots() const { return K_ + 1; }
    [[nodiscard]] double dt() const { return t_final_ / K_; }
    [[nodiscard]] double knot(int k) const { return k == K_ ? t_final_ : k * dt(); }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t_final_;
    int K_;
};

}  // namespace sgf
