#pragma once

#include <cmath>
#include <vector>

#include "sgf/transform.hpp"

namespace sgf {

/// <C_m, S_n> on one axis: integral over (0,L) of sqrt(2/L)cos(m pi x/L) sqrt(2/L)sin(n pi x/L).
///
/// Independent of L; zero when m + n is even.
inline double cosine_sine_overlap(int m, int n) {
    if (m == n || (m + n) % 2 == 0) {
        return 0.0;
    }
    const double nd = n;
    const double md = m;
    return (4.0 / pi) * nd / (nd * nd - md * md);
}

/// Rows are target factors, columns source factors: P(n, m) = <target_n, source_m>.
inline Matrix projection_matrix(Family source, Family target, int n_source, int n_target) {
    Matrix P(n_target, n_source);
    for (int n = 1; n <= n_target; ++n) {
        for (int m = 1; m <= n_source; ++m) {
            double v = 0.0;
            if (source == target) {
                v = (m == n) ? 1.0 : 0.0;
            } else if (source == Family::Cosine) {
                v = cosine_sine_overlap(m, n);
            } else {
                v = cosine_sine_overlap(n, m);
            }
            P(n - 1, m - 1) = v;
        }
    }
    return P;
}

/// lambda_n over the cube [1,N]^3 in storage order.
inline std::vector<double> mode_eigenvalues(const BoxDomain& domain, int N) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(N) * N * N);
    for (int n1 = 1; n1 <= N; ++n1) {
        for (int n2 = 1; n2 <= N; ++n2) {
            for (int n3 = 1; n3 <= N; ++n3) {
                out.push_back(domain.eigenvalue({n1, n2, n3}));
            }
        }
    }
    return out;
}

/// Time history of one separable term sum_n c_n(t_k) prod_a phi^{sig_a}_{n_a}(x_a).
class ModalHistory {
public:
    ModalHistory() = default;
    ModalHistory(Signature signature, int N, int knots)
        : signature_(signature),
          N_(N),
          knots_(knots),
          data_(static_cast<std::size_t>(knots) * N * N * N, 0.0) {
        require(N >= 1, "ModalHistory: N must be >= 1");
    }

    [[nodiscard]] const Signature& signature() const { return signature_; }
    [[nodiscard]] int truncation() const { return N_; }
    [[nodiscard]] int knots() const { return knots_; }
    [[nodiscard]] std::size_t modes() const { return static_cast<std::size_t>(N_) * N_ * N_; }

    [[nodiscard]] std::span<double> at(int k) {
        return {data_.data() + static_cast<std::size_t>(k) * modes(), modes()};
    }
    [[nodiscard]] std::span<const double> at(int k) const {
        return {data_.data() + static_cast<std::size_t>(k) * modes(), modes()};
    }

    [[nodiscard]] Tensor3 tensor(int k) const {
        Tensor3 t({N_, N_, N_});
        const auto src = at(k);
        std::copy(src.begin(), src.end(), t.data.begin());
        return t;
    }

    void set(int k, const Tensor3& t) {
        require(t.size() == modes(), "ModalHistory::set: size mismatch");
        std::copy(t.data.begin(), t.data.end(), at(k).begin());
    }

    [[nodiscard]] std::span<double> values() { return data_; }
    [[nodiscard]] std::span<const double> values() const { return data_; }

    ModalHistory& operator*=(double s) {
        for (double& v : data_) {
            v *= s;
        }
        return *this;
    }

    ModalHistory& operator+=(const ModalHistory& other) {
        require(other.signature_ == signature_ && other.N_ == N_ && other.knots_ == knots_,
                "ModalHistory: incompatible terms");
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += other.data_[i];
        }
        return *this;
    }

    friend bool operator==(const ModalHistory&, const ModalHistory&) = default;

private:
    Signature signature_ = kSineSignature;
    int N_ = 1;
    int knots_ = 0;
    std::vector<double> data_;
};

/// Multiplies coefficient n at every knot by f(n1, n2, n3).
template <class F>
void scale_by_mode(ModalHistory& h, F&& f) {
    const int N = h.truncation();
    std::vector<double> factor;
    factor.reserve(h.modes());
    for (int n1 = 1; n1 <= N; ++n1) {
        for (int n2 = 1; n2 <= N; ++n2) {
            for (int n3 = 1; n3 <= N; ++n3) {
                factor.push_back(f(n1, n2, n3));
            }
        }
    }
    for (int k = 0; k < h.knots(); ++k) {
        auto c = h.at(k);
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] *= factor[i];
        }
    }
}

/// Second-order finite difference in t, one-sided at both ends.
inline ModalHistory time_derivative(const ModalHistory& h, const TimeGrid& time) {
    require(h.knots() == time.knots() && time.steps() >= 2, "time_derivative: needs K >= 2");
    const int K = time.steps();
    const double inv = 1.0 / (2.0 * time.dt());
    ModalHistory out(h.signature(), h.truncation(), h.knots());
    for (int k = 0; k <= K; ++k) {
        auto d = out.at(k);
        if (k == 0) {
            const auto a = h.at(0), b = h.at(1), c = h.at(2);
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i] = (-3.0 * a[i] + 4.0 * b[i] - c[i]) * inv;
            }
        } else if (k == K) {
            const auto a = h.at(K), b = h.at(K - 1), c = h.at(K - 2);
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i] = (3.0 * a[i] - 4.0 * b[i] + c[i]) * inv;
            }
        } else {
            const auto a = h.at(k + 1), b = h.at(k - 1);
            for (std::size_t i = 0; i < d.size(); ++i) {
                d[i] = (a[i] - b[i]) * inv;
            }
        }
    }
    return out;
}

/// Projection of one term onto the target factors: <target_n, term> for n <= n_target.
inline Tensor3 project_term(const ModalHistory& term, int k, const Signature& target, int n_target) {
    const int N = term.truncation();
    Tensor3 t = term.tensor(k);
    for (int a = 2; a >= 0; --a) {
        const auto s = static_cast<std::size_t>(a);
        // Same family at the same truncation is the identity.
        if (term.signature()[s] == target[s] && N == n_target) {
            continue;
        }
        const Matrix P = projection_matrix(term.signature()[s], target[s], N, n_target);
        t = contract_axis(t, a, P.view());
    }
    return t;
}

/// A scalar space-time field stored as a sum of separable modal terms.
///
/// Every factor is a Laplacian eigenfunction on the box, so derivatives,
/// Laplacians and L2 inner products act exactly on the coefficients.
class ModalField {
public:
    ModalField(BoxDomain domain, TimeGrid time) : domain_(domain), time_(time) {}

    [[nodiscard]] const BoxDomain& domain() const { return domain_; }
    [[nodiscard]] const TimeGrid& time() const { return time_; }
    [[nodiscard]] const std::vector<ModalHistory>& terms() const { return terms_; }
    [[nodiscard]] bool empty() const { return terms_.empty(); }

    /// Adds a term, merging it into an existing term of the same shape.
    void add(ModalHistory term) {
        require(term.knots() == time_.knots(), "ModalField::add: knot count mismatch");
        for (auto& t : terms_) {
            if (t.signature() == term.signature() && t.truncation() == term.truncation()) {
                t += term;
                return;
            }
        }
        terms_.push_back(std::move(term));
    }

    void add(const ModalField& other) {
        for (const auto& t : other.terms_) {
            add(t);
        }
    }

    ModalField& operator*=(double s) {
        for (auto& t : terms_) {
            t *= s;
        }
        return *this;
    }

private:
    BoxDomain domain_;
    TimeGrid time_;
    std::vector<ModalHistory> terms_;
};

using ModalVector = std::array<ModalField, 3>;

inline ModalVector make_modal_vector(const BoxDomain& domain, const TimeGrid& time) {
    return {ModalField(domain, time), ModalField(domain, time), ModalField(domain, time)};
}

inline ModalField single_term(const BoxDomain& domain, const TimeGrid& time, ModalHistory term) {
    ModalField f(domain, time);
    f.add(std::move(term));
    return f;
}

inline ModalField operator+(ModalField a, const ModalField& b) {
    a.add(b);
    return a;
}

inline ModalField operator*(double s, ModalField f) {
    f *= s;
    return f;
}

/// d/dx_axis: sin(kx) -> k cos(kx), cos(kx) -> -k sin(kx).
inline ModalField derivative(const ModalField& f, int axis) {
    ModalField out(f.domain(), f.time());
    const auto ax = static_cast<std::size_t>(axis);
    for (const auto& t : f.terms()) {
        const bool was_sine = t.signature()[ax] == Family::Sine;
        Signature sig = t.signature();
        sig[ax] = was_sine ? Family::Cosine : Family::Sine;
        ModalHistory r(sig, t.truncation(), t.knots());
        std::copy(t.values().begin(), t.values().end(), r.values().begin());
        const double L = f.domain().length(axis);
        scale_by_mode(r, [&](int n1, int n2, int n3) {
            const int n = axis == 0 ? n1 : (axis == 1 ? n2 : n3);
            const double k = n * pi / L;
            return was_sine ? k : -k;
        });
        out.add(std::move(r));
    }
    return out;
}

inline ModalField laplacian(const ModalField& f) {
    ModalField out(f.domain(), f.time());
    for (auto t : f.terms()) {
        scale_by_mode(t, [&](int n1, int n2, int n3) { return -f.domain().eigenvalue({n1, n2, n3}); });
        out.add(std::move(t));
    }
    return out;
}

/// <target_n, f> at every knot for n in [1, n_target]^3.
inline ModalHistory project(const ModalField& f, const Signature& target, int n_target) {
    ModalHistory out(target, n_target, f.time().knots());
    for (int k = 0; k < f.time().knots(); ++k) {
        auto dst = out.at(k);
        for (const auto& t : f.terms()) {
            const Tensor3 p = project_term(t, k, target, n_target);
            for (std::size_t i = 0; i < dst.size(); ++i) {
                dst[i] += p.data[i];
            }
        }
    }
    return out;
}

/// Exact L2(Omega) inner product of two terms at one knot.
inline double inner(const ModalHistory& a, int ka, const ModalHistory& b, int kb) {
    if (a.signature() == b.signature()) {
        // Same factors in every axis: orthonormal, so only shared modes pair up.
        const int n = std::min(a.truncation(), b.truncation());
        const auto ca = a.at(ka);
        const auto cb = b.at(kb);
        const int Na = a.truncation();
        const int Nb = b.truncation();
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                for (int l = 0; l < n; ++l) {
                    acc += ca[(static_cast<std::size_t>(i) * Na + j) * Na + l] *
                           cb[(static_cast<std::size_t>(i) * Nb + j) * Nb + l];
                }
            }
        }
        return acc;
    }
    const Tensor3 p = project_term(a, ka, b.signature(), b.truncation());
    return dot(p.data, b.at(kb));
}

inline double norm_squared_at(const ModalField& f, int k) {
    const auto& terms = f.terms();
    double acc = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        acc += inner(terms[i], k, terms[i], k);
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            acc += 2.0 * inner(terms[i], k, terms[j], k);
        }
    }
    return std::max(acc, 0.0);
}

inline double norm_squared_at(const ModalVector& f, int k) {
    return norm_squared_at(f[0], k) + norm_squared_at(f[1], k) + norm_squared_at(f[2], k);
}

/// sqrt of the trapezoid-in-time integral of the exact spatial norm squared.
inline double l2_norm_spacetime(const ModalField& f) {
    return std::sqrt(trapezoid(f.time(), [&](int k) { return norm_squared_at(f, k); }));
}

inline double l2_norm_spacetime(const ModalVector& f) {
    return std::sqrt(trapezoid(f[0].time(), [&](int k) { return norm_squared_at(f, k); }));
}

inline GridField synthesize(const ModalField& f, int k, const SineBasis& basis) {
    GridField out(basis.points_per_axis());
    for (const auto& t : f.terms()) {
        const GridField g = synthesize(t.tensor(k), t.signature(), basis);
        auto dst = out.values();
        const auto src = g.values();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] += src[i];
        }
    }
    return out;
}

inline ScalarSpaceTime sample(const ModalField& f, const SineBasis& basis) {
    ScalarSpaceTime out = make_scalar_spacetime(f.time(), basis.points_per_axis());
    for (int k = 0; k < f.time().knots(); ++k) {
        out[k] = synthesize(f, k, basis);
    }
    return out;
}

inline VectorSpaceTime sample(const ModalVector& f, const SineBasis& basis) {
    VectorSpaceTime out = make_vector_spacetime(f[0].time(), basis.points_per_axis());
    for (int k = 0; k < f[0].time().knots(); ++k) {
        for (std::size_t c = 0; c < 3; ++c) {
            out[k][c] = synthesize(f[c], k, basis);
        }
    }
    return out;
}

/// Sine coefficients (quadrature projection) of every slice of a sampled field.
inline ModalHistory analyze(const ScalarSpaceTime& f, const SineBasis& basis, int N) {
    ModalHistory out(kSineSignature, N, f.knots());
    for (int k = 0; k < f.knots(); ++k) {
        out.set(k, analyze(f[k], basis, N));
    }
    return out;
}

}  // namespace sgf
