#pragma once

#include <cmath>
#include <cstdint>

#include "sgf/fields.hpp"
#include "sgf/tensor.hpp"

namespace sgf {

/// Per-axis factor of a separable modal function: sqrt(2/L) sin(k x) or
/// sqrt(2/L) cos(k x), k = n pi / L, n >= 1.
enum class Family : std::uint8_t { Sine, Cosine };

using Signature = std::array<Family, 3>;

inline constexpr Signature kSineSignature{Family::Sine, Family::Sine, Family::Sine};

/// The sine signature with a cosine in one axis: the shape of d/dx_axis u_n.
inline constexpr Signature cosine_in(int axis) {
    Signature s = kSineSignature;
    s[static_cast<std::size_t>(axis)] = Family::Cosine;
    return s;
}

/// Tabulated 1D basis factors on the interior grid of one box.
///
/// Tables are built for every mode the grid can resolve (n = 1..M); callers
/// take the leading N columns. The type-I sine transform on these nodes makes
/// h * sum_j s_m(x_j) s_n(x_j) = delta_mn exactly for m, n <= M.
class SineBasis {
public:
    explicit SineBasis(const SpatialGrid& grid) : grid_(grid) {
        const int M = grid.points_per_axis();
        for (int a = 0; a < 3; ++a) {
            const auto s = static_cast<std::size_t>(a);
            const double L = grid.domain().length(a);
            const double h = grid.spacing(a);
            sine_[s] = Matrix(M, M);
            cosine_[s] = Matrix(M, M);
            analysis_[s] = Matrix(M, M);
            for (int j = 0; j < M; ++j) {
                for (int n = 1; n <= M; ++n) {
                    // Exact node angle n*(j+1)*pi/(M+1) avoids drift in x_j.
                    const double angle = pi * static_cast<double>(n) * (j + 1) / (M + 1);
                    const double amp = std::sqrt(2.0 / L);
                    sine_[s](j, n - 1) = amp * std::sin(angle);
                    cosine_[s](j, n - 1) = amp * std::cos(angle);
                    analysis_[s](n - 1, j) = h * amp * std::sin(angle);
                }
            }
        }
    }

    [[nodiscard]] const SpatialGrid& grid() const { return grid_; }
    [[nodiscard]] const BoxDomain& domain() const { return grid_.domain(); }
    [[nodiscard]] int points_per_axis() const { return grid_.points_per_axis(); }

    /// M x N table of family factors at the nodes of one axis.
    [[nodiscard]] MatrixView synthesis(int axis, Family family, int N) const {
        check_modes(N);
        const auto& m = family == Family::Sine ? sine_[static_cast<std::size_t>(axis)]
                                               : cosine_[static_cast<std::size_t>(axis)];
        return m.view(m.rows, N);
    }

    /// N x M quadrature projection onto the leading N sine factors of one axis.
    [[nodiscard]] MatrixView analysis(int axis, int N) const {
        check_modes(N);
        return analysis_[static_cast<std::size_t>(axis)].view(N, points_per_axis());
    }

private:
    void check_modes(int N) const {
        require(N >= 1 && N <= points_per_axis(),
                "SineBasis: grid size M must be >= mode truncation N");
    }

    SpatialGrid grid_;
    std::array<Matrix, 3> sine_;
    std::array<Matrix, 3> cosine_;
    std::array<Matrix, 3> analysis_;
};

inline Tensor3 to_tensor(const GridField& f) {
    const int M = f.points_per_axis();
    Tensor3 t({M, M, M});
    std::copy(f.values().begin(), f.values().end(), t.data.begin());
    return t;
}

inline GridField to_grid(const Tensor3& t) {
    GridField f(t.dims[0]);
    std::copy(t.data.begin(), t.data.end(), f.values().begin());
    return f;
}

/// Quadrature sine coefficients of a sampled field over the cube [1,N]^3.
inline Tensor3 analyze(const GridField& field, const SineBasis& basis, int N) {
    require(field.points_per_axis() == basis.points_per_axis(), "analyze: grid size mismatch");
    Tensor3 t = to_tensor(field);
    t = contract_axis(t, 0, basis.analysis(0, N));
    t = contract_axis(t, 1, basis.analysis(1, N));
    t = contract_axis(t, 2, basis.analysis(2, N));
    return t;
}

/// Grid samples of sum_n c_n prod_a phi^{family_a}_{n_a}(x_a).
inline GridField synthesize(const Tensor3& coeffs, const Signature& signature, const SineBasis& basis) {
    require(coeffs.dims[0] == coeffs.dims[1] && coeffs.dims[1] == coeffs.dims[2],
            "synthesize: coefficient cube must be N^3");
    const int N = coeffs.dims[0];
    return to_grid(contract_all(coeffs, {basis.synthesis(0, signature[0], N),
                                         basis.synthesis(1, signature[1], N),
                                         basis.synthesis(2, signature[2], N)}));
}

inline SpectralField forward_sine(const GridField& field, const SineBasis& basis, int N) {
    require(N <= field.points_per_axis(), "forward_sine: grid size M must be >= N");
    const Tensor3 c = analyze(field, basis, N);
    SpectralField out(basis.domain(), N);
    std::copy(c.data.begin(), c.data.end(), out.values().begin());
    return out;
}

inline GridField inverse_sine(const SpectralField& coeffs, const SineBasis& basis) {
    const int N = coeffs.truncation();
    require(N <= basis.points_per_axis(), "inverse_sine: grid size M must be >= N");
    Tensor3 c({N, N, N});
    std::copy(coeffs.values().begin(), coeffs.values().end(), c.data.begin());
    return synthesize(c, kSineSignature, basis);
}

/// Discrete L2(Omega) norm with the transform-induced rule h1 h2 h3 sum f^2.
inline double l2_norm_squared(const GridField& field, const SpatialGrid& grid) {
    return grid.cell_volume() * dot(field.values(), field.values());
}

inline double l2_norm(const GridField& field, const SpatialGrid& grid) {
    return std::sqrt(l2_norm_squared(field, grid));
}

inline double l2_norm_squared(const VectorField& field, const SpatialGrid& grid) {
    return l2_norm_squared(field[0], grid) + l2_norm_squared(field[1], grid) +
           l2_norm_squared(field[2], grid);
}

/// Composite trapezoid in time of per-knot squared norms.
template <class PerKnot>
double trapezoid(const TimeGrid& time, PerKnot&& per_knot) {
    const int K = time.steps();
    double acc = 0.5 * (per_knot(0) + per_knot(K));
    for (int k = 1; k < K; ++k) {
        acc += per_knot(k);
    }
    return acc * time.dt();
}

template <class Slice>
double l2_norm_spacetime(const SpaceTimeField<Slice>& field, const SpatialGrid& grid) {
    return std::sqrt(trapezoid(field.time(), [&](int k) { return l2_norm_squared(field[k], grid); }));
}

}  // namespace sgf
