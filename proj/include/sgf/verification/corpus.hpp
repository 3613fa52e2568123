#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sgf/modal.hpp"

namespace sgf::verification {

inline std::size_t flat_index(int N, const Index3& n) {
    return (static_cast<std::size_t>(n[0] - 1) * N + (n[1] - 1)) * N + (n[2] - 1);
}

/// One mode of a band-limited field: amp * sin(omega t + phase) u_n.
struct CorpusMode {
    int component = 0;
    Index3 index{1, 1, 1};
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
};

/// A resolution-independent description of a random band-limited field.
struct CorpusField {
    std::string id;
    std::vector<CorpusMode> modes;
};

/// Fixed-seed random field with modes in [1, band]^3.
///
/// The draw depends only on (seed, case_index, band, components), so the same
/// field can be realized at every rung of a ladder.
inline CorpusField random_field(std::uint64_t seed, int case_index, int band, int components = 3) {
    require(band >= 1 && components >= 1 && components <= 3, "random_field: invalid band or component count");
    std::seed_seq seq{seed, static_cast<std::uint64_t>(case_index)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> omega(0.5, 6.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
    CorpusField f{"random_" + std::to_string(case_index), {}};
    for (int c = 0; c < components; ++c) {
        for (int n1 = 1; n1 <= band; ++n1) {
            for (int n2 = 1; n2 <= band; ++n2) {
                for (int n3 = 1; n3 <= band; ++n3) {
                    CorpusMode m;
                    m.component = c;
                    m.index = {n1, n2, n3};
                    // Spectral decay keeps derivatives of comparable size across cases.
                    m.amplitude = normal(rng) / (n1 * n1 + n2 * n2 + n3 * n3);
                    m.omega = omega(rng);
                    m.phase = phase(rng);
                    f.modes.push_back(m);
                }
            }
        }
    }
    return f;
}

inline std::vector<CorpusField> random_corpus(std::uint64_t seed, int cases, int band, int components = 3) {
    std::vector<CorpusField> out;
    for (int i = 0; i < cases; ++i) {
        out.push_back(random_field(seed, i, band, components));
    }
    return out;
}

inline double corpus_profile(const CorpusMode& m, double t) { return m.amplitude * std::sin(m.omega * t + m.phase); }

/// Sine coefficients of one component at truncation N.
inline ModalHistory realize(const CorpusField& f, int component, int N, const TimeGrid& time) {
    ModalHistory h(kSineSignature, N, time.knots());
    for (const auto& m : f.modes) {
        if (m.component != component) {
            continue;
        }
        require(m.index[0] <= N && m.index[1] <= N && m.index[2] <= N, "realize: mode above the truncation");
        const std::size_t i = flat_index(N, m.index);
        for (int k = 0; k < time.knots(); ++k) {
            h.at(k)[i] += corpus_profile(m, time.knot(k));
        }
    }
    return h;
}

inline std::array<ModalHistory, 3> realize_vector(const CorpusField& f, int N, const TimeGrid& time) {
    return {realize(f, 0, N, time), realize(f, 1, N, time), realize(f, 2, N, time)};
}

/// (a u_m, 0, 0) or a scalar a u_m, times profile(t), on the sine basis at truncation N.
template <class F>
ModalHistory single_mode(const TimeGrid& time, int N, const Index3& m, double a, F&& profile) {
    ModalHistory h(kSineSignature, N, time.knots());
    for (int k = 0; k < time.knots(); ++k) {
        h.at(k)[flat_index(N, m)] = a * profile(time.knot(k));
    }
    return h;
}

template <class F>
std::array<ModalHistory, 3> single_mode_forcing(const TimeGrid& time, int N, const Index3& m, double a, F&& profile) {
    return {single_mode(time, N, m, a, profile), ModalHistory(kSineSignature, N, time.knots()),
            ModalHistory(kSineSignature, N, time.knots())};
}

}  // namespace sgf::verification
