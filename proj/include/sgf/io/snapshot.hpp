#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgf/modal.hpp"

namespace sgf::io {

/// Sampled space-time field on the interior grid.
///
/// Layout: magic "SGF1"; u32 version, M1, M2, M3, ncomp, ntimes; f64 L1, L2,
/// L3, rho, t_final; then ntimes * ncomp * M1 * M2 * M3 f64 values ordered
/// time, component, x1, x2, x3 (x3 fastest). All little-endian.
struct FieldSnapshot {
    static constexpr std::uint32_t kVersion = 1;
    static constexpr std::size_t kHeaderBytes = 4 + 6 * 4 + 5 * 8;

    std::array<std::uint32_t, 3> points{0, 0, 0};
    std::uint32_t ncomp = 0;
    std::uint32_t ntimes = 0;
    std::array<double, 3> lengths{1.0, 1.0, 1.0};
    double rho = 1.0;
    double t_final = 0.0;
    std::vector<double> data;

    FieldSnapshot() = default;
    FieldSnapshot(const BoxDomain& domain, int M, int components, int times, double t_end)
        : points{static_cast<std::uint32_t>(M), static_cast<std::uint32_t>(M), static_cast<std::uint32_t>(M)},
          ncomp(static_cast<std::uint32_t>(components)),
          ntimes(static_cast<std::uint32_t>(times)),
          lengths(domain.lengths()),
          rho(domain.rho()),
          t_final(t_end),
          data(expected_size(), 0.0) {}

    [[nodiscard]] std::size_t slab() const {
        return static_cast<std::size_t>(points[0]) * points[1] * points[2];
    }
    [[nodiscard]] std::size_t expected_size() const { return slab() * ncomp * ntimes; }

    [[nodiscard]] std::span<double> at(int time, int comp) {
        return {data.data() + (static_cast<std::size_t>(time) * ncomp + comp) * slab(), slab()};
    }
    [[nodiscard]] std::span<const double> at(int time, int comp) const {
        return {data.data() + (static_cast<std::size_t>(time) * ncomp + comp) * slab(), slab()};
    }

    friend bool operator==(const FieldSnapshot&, const FieldSnapshot&) = default;
};

namespace detail {

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) {
        out.push_back(static_cast<unsigned char>(v >> (8 * b)));
    }
}

inline void put_f64(std::vector<unsigned char>& out, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
        out.push_back(static_cast<unsigned char>(bits >> (8 * b)));
    }
}

inline std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int b = 3; b >= 0; --b) {
        v = (v << 8) | p[b];
    }
    return v;
}

inline double get_f64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) {
        v = (v << 8) | p[b];
    }
    return std::bit_cast<double>(v);
}

}  // namespace detail

inline std::vector<unsigned char> encode(const FieldSnapshot& s) {
    require(s.data.size() == s.expected_size(), "snapshot: header dimensions do not match the payload");
    std::vector<unsigned char> out;
    out.reserve(FieldSnapshot::kHeaderBytes + 8 * s.data.size());
    for (char ch : {'S', 'G', 'F', '1'}) {
        out.push_back(static_cast<unsigned char>(ch));
    }
    detail::put_u32(out, FieldSnapshot::kVersion);
    for (auto m : s.points) {
        detail::put_u32(out, m);
    }
    detail::put_u32(out, s.ncomp);
    detail::put_u32(out, s.ntimes);
    for (double l : s.lengths) {
        detail::put_f64(out, l);
    }
    detail::put_f64(out, s.rho);
    detail::put_f64(out, s.t_final);
    for (double v : s.data) {
        detail::put_f64(out, v);
    }
    return out;
}

inline FieldSnapshot decode(std::span<const unsigned char> bytes) {
    require(bytes.size() >= FieldSnapshot::kHeaderBytes, "snapshot: truncated header");
    require(std::memcmp(bytes.data(), "SGF1", 4) == 0, "snapshot: bad magic");
    const unsigned char* p = bytes.data() + 4;
    const std::uint32_t version = detail::get_u32(p);
    require(version == FieldSnapshot::kVersion, "snapshot: unsupported version " + std::to_string(version));
    FieldSnapshot s;
    for (std::size_t a = 0; a < 3; ++a) {
        s.points[a] = detail::get_u32(p + 4 + 4 * a);
    }
    s.ncomp = detail::get_u32(p + 16);
    s.ntimes = detail::get_u32(p + 20);
    p += 24;
    for (std::size_t a = 0; a < 3; ++a) {
        s.lengths[a] = detail::get_f64(p + 8 * a);
    }
    s.rho = detail::get_f64(p + 24);
    s.t_final = detail::get_f64(p + 32);
    p += 40;
    const std::size_t n = s.expected_size();
    require(bytes.size() - FieldSnapshot::kHeaderBytes == 8 * n,
            "snapshot: payload length does not match the header dimensions");
    s.data.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.data[i] = detail::get_f64(p + 8 * i);
    }
    return s;
}

inline void write_snapshot(const std::filesystem::path& path, const FieldSnapshot& s) {
    const auto bytes = encode(s);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("snapshot: cannot write " + path.string());
    }
}

inline FieldSnapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("snapshot: cannot open " + path.string());
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode(bytes);
}

/// Samples modal fields (one per component) on the grid of `basis` at every
/// stride-th knot.
inline FieldSnapshot snapshot_of(const std::vector<const ModalField*>& comps, const SineBasis& basis,
                                 int stride = 1) {
    require(!comps.empty(), "snapshot_of: no components");
    const TimeGrid& time = comps.front()->time();
    require(stride >= 1 && time.steps() % stride == 0, "snapshot_of: stride must divide K");
    const int ntimes = time.steps() / stride + 1;
    FieldSnapshot s(comps.front()->domain(), basis.grid().points_per_axis(), static_cast<int>(comps.size()), ntimes,
                    time.t_final());
    for (int t = 0; t < ntimes; ++t) {
        for (std::size_t c = 0; c < comps.size(); ++c) {
            const GridField g = synthesize(*comps[c], t * stride, basis);
            std::copy(g.values().begin(), g.values().end(), s.at(t, static_cast<int>(c)).begin());
        }
    }
    return s;
}

}  // namespace sgf::io
