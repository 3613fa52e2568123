#pragma once

#include <span>
#include <vector>

#include "sgf/domain.hpp"

namespace sgf {

/// Scalar samples on the M^3 interior nodes, x3 fastest.
class GridField {
public:
    GridField() = default;
    explicit GridField(int M, double fill = 0.0)
        : M_(M), values_(static_cast<std::size_t>(M) * M * M, fill) {}

    [[nodiscard]] int points_per_axis() const { return M_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }

    [[nodiscard]] double& operator()(int i, int j, int k) { return values_[offset(i, j, k)]; }
    [[nodiscard]] double operator()(int i, int j, int k) const { return values_[offset(i, j, k)]; }

    [[nodiscard]] std::span<double> values() { return values_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }

    friend bool operator==(const GridField&, const GridField&) = default;

private:
    [[nodiscard]] std::size_t offset(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * M_ + j) * M_ + k;
    }

    int M_ = 0;
    std::vector<double> values_;
};

using VectorField = std::array<GridField, 3>;

inline VectorField make_vector_field(int M) { return {GridField(M), GridField(M), GridField(M)}; }

/// One slice per time knot.
template <class Slice>
class SpaceTimeField {
public:
    SpaceTimeField(TimeGrid time, Slice prototype)
        : time_(time), slices_(static_cast<std::size_t>(time.knots()), prototype) {}

    [[nodiscard]] const TimeGrid& time() const { return time_; }
    [[nodiscard]] int knots() const { return time_.knots(); }

    [[nodiscard]] Slice& operator[](int k) { return slices_[static_cast<std::size_t>(k)]; }
    [[nodiscard]] const Slice& operator[](int k) const { return slices_[static_cast<std::size_t>(k)]; }

    friend bool operator==(const SpaceTimeField&, const SpaceTimeField&) = default;

private:
    TimeGrid time_;
    std::vector<Slice> slices_;
};

using ScalarSpaceTime = SpaceTimeField<GridField>;
using VectorSpaceTime = SpaceTimeField<VectorField>;

inline ScalarSpaceTime make_scalar_spacetime(const TimeGrid& time, int M) {
    return ScalarSpaceTime(time, GridField(M));
}

inline VectorSpaceTime make_vector_spacetime(const TimeGrid& time, int M) {
    return VectorSpaceTime(time, make_vector_field(M));
}

/// Sine coefficients over the truncation cube [1,N]^3; coefficient n multiplies u_n.
class SpectralField {
public:
    SpectralField(BoxDomain domain, int N)
        : domain_(domain), N_(N), coeffs_(static_cast<std::size_t>(N) * N * N, 0.0) {
        require(N >= 1, "SpectralField: N must be >= 1");
    }

    [[nodiscard]] const BoxDomain& domain() const { return domain_; }
    [[nodiscard]] int truncation() const { return N_; }
    [[nodiscard]] std::size_t size() const { return coeffs_.size(); }

    /// One-based mode index access.
    [[nodiscard]] double& at(const Index3& n) { return coeffs_[offset(n)]; }
    [[nodiscard]] double at(const Index3& n) const { return coeffs_[offset(n)]; }

    [[nodiscard]] std::span<double> values() { return coeffs_; }
    [[nodiscard]] std::span<const double> values() const { return coeffs_; }

private:
    [[nodiscard]] std::size_t offset(const Index3& n) const {
        return (static_cast<std::size_t>(n[0] - 1) * N_ + (n[1] - 1)) * N_ + (n[2] - 1);
    }

    BoxDomain domain_;
    int N_;
    std::vector<double> coeffs_;
};

}  // namespace sgf
