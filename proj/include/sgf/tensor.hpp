#pragma once

#include <span>
#include <vector>

#include "sgf/common.hpp"

namespace sgf {

/// Dense 3-index array, last index fastest. Axis extents may differ.
struct Tensor3 {
    Index3 dims{0, 0, 0};
    std::vector<double> data;

    Tensor3() = default;
    explicit Tensor3(Index3 d, double fill = 0.0)
        : dims(d), data(static_cast<std::size_t>(d[0]) * d[1] * d[2], fill) {}

    [[nodiscard]] std::size_t size() const { return data.size(); }
    [[nodiscard]] double& operator()(int i, int j, int k) {
        return data[(static_cast<std::size_t>(i) * dims[1] + j) * dims[2] + k];
    }
    [[nodiscard]] double operator()(int i, int j, int k) const {
        return data[(static_cast<std::size_t>(i) * dims[1] + j) * dims[2] + k];
    }
};

/// Non-owning row-major matrix view with a leading dimension.
struct MatrixView {
    const double* a = nullptr;
    int rows = 0;
    int cols = 0;
    int ld = 0;

    [[nodiscard]] double operator()(int r, int c) const {
        return a[static_cast<std::size_t>(r) * ld + c];
    }
};

struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    [[nodiscard]] double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    [[nodiscard]] double operator()(int r, int c) const {
        return a[static_cast<std::size_t>(r) * cols + c];
    }
    [[nodiscard]] MatrixView view() const { return {a.data(), rows, cols, cols}; }
    [[nodiscard]] MatrixView view(int r, int c) const { return {a.data(), r, c, cols}; }
};

namespace detail {
inline constexpr std::size_t kParallelGrain = 1u << 15;
}

/// out(..., r, ...) = sum_c A(r, c) in(..., c, ...) along one axis.
///
/// A.cols must equal in.dims[axis]. The summation over c runs in increasing
/// order for every output entry.
inline Tensor3 contract_axis(const Tensor3& in, int axis, MatrixView A) {
    const auto ax = static_cast<std::size_t>(axis);
    require(A.cols == in.dims[ax], "contract_axis: matrix columns do not match tensor extent");
    Index3 out_dims = in.dims;
    out_dims[ax] = A.rows;
    Tensor3 out(out_dims);
    const int d0 = in.dims[0];
    const int d1 = in.dims[1];
    const int d2 = in.dims[2];
    const std::size_t work = out.size() * static_cast<std::size_t>(A.cols);

    auto run = [&](std::size_t n, auto&& body) {
        if (work >= detail::kParallelGrain) {
            parallel_for(n, body);
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                body(i);
            }
        }
    };

    if (axis == 0) {
        const std::size_t plane = static_cast<std::size_t>(d1) * d2;
        run(static_cast<std::size_t>(A.rows), [&](std::size_t r) {
            double* dst = out.data.data() + r * plane;
            for (int c = 0; c < A.cols; ++c) {
                const double w = A(static_cast<int>(r), c);
                const double* src = in.data.data() + static_cast<std::size_t>(c) * plane;
                for (std::size_t q = 0; q < plane; ++q) {
                    dst[q] += w * src[q];
                }
            }
        });
    } else if (axis == 1) {
        run(static_cast<std::size_t>(d0), [&](std::size_t i) {
            for (int r = 0; r < A.rows; ++r) {
                double* dst = out.data.data() + (i * A.rows + r) * d2;
                for (int c = 0; c < A.cols; ++c) {
                    const double w = A(r, c);
                    const double* src = in.data.data() + (i * d1 + c) * d2;
                    for (int k = 0; k < d2; ++k) {
                        dst[k] += w * src[k];
                    }
                }
            }
        });
    } else {
        run(static_cast<std::size_t>(d0), [&](std::size_t i) {
            for (int j = 0; j < d1; ++j) {
                const double* src = in.data.data() + (i * d1 + j) * d2;
                double* dst = out.data.data() + (i * d1 + j) * A.rows;
                for (int r = 0; r < A.rows; ++r) {
                    const double* row = A.a + static_cast<std::size_t>(r) * A.ld;
                    double acc = 0.0;
                    for (int c = 0; c < A.cols; ++c) {
                        acc += row[c] * src[c];
                    }
                    dst[r] = acc;
                }
            }
        });
    }
    return out;
}

/// Applies one matrix per axis, axis 2 first (the cheapest order when the
/// input is the small coefficient cube).
inline Tensor3 contract_all(Tensor3 t, const std::array<MatrixView, 3>& mats) {
    t = contract_axis(t, 2, mats[2]);
    t = contract_axis(t, 1, mats[1]);
    t = contract_axis(t, 0, mats[0]);
    return t;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

}  // namespace sgf
