#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "sgf/verification/harness.hpp"

namespace sgf::io {

/// Parse or validation failure; what() joins every violation.
class ConfigError : public InvalidArgument {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : InvalidArgument(join(violations)), violations_(std::move(violations)) {}

    [[nodiscard]] const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid config:";
        for (const auto& s : v) {
            out += "\n  " + s;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

enum class ProfileKind { Const, Linear, Quadratic, Sinusoid };

struct ModeProfile {
    ProfileKind kind = ProfileKind::Const;
    double omega = 0.0;

    [[nodiscard]] double operator()(double t) const {
        switch (kind) {
            case ProfileKind::Const: return 1.0;
            case ProfileKind::Linear: return t;
            case ProfileKind::Quadratic: return t * t;
            case ProfileKind::Sinusoid: return std::sin(omega * t);
        }
        return 0.0;
    }

    [[nodiscard]] std::string to_string() const {
        switch (kind) {
            case ProfileKind::Const: return "const";
            case ProfileKind::Linear: return "linear";
            case ProfileKind::Quadratic: return "quadratic";
            case ProfileKind::Sinusoid: {
                std::ostringstream os;
                os.precision(17);
                os << "sinusoid(" << omega << ")";
                return os.str();
            }
        }
        return {};
    }
};

/// One forcing term a * profile(t) * u_n in component `component` (1-based).
struct ForcingMode {
    int component = 1;
    Index3 index{1, 1, 1};
    double amplitude = 1.0;
    ModeProfile profile;
};

enum class ForcingKind { Modes, Manufactured, Random };

inline std::string to_string(ForcingKind k) {
    switch (k) {
        case ForcingKind::Modes: return "modes";
        case ForcingKind::Manufactured: return "manufactured";
        case ForcingKind::Random: return "random";
    }
    return {};
}

struct RunConfig {
    Vec3 lengths{1.0, 1.0, 1.0};
    double rho = 1.0;
    int N = 12;
    int M = 32;
    int K = 128;
    double t_final = 0.5;
    ForcingKind kind = ForcingKind::Modes;
    std::vector<ForcingMode> modes;
    std::uint64_t seed = 20240607;
    int band = 0;                            ///< random forcing: modes up to band per axis; 0 = max(1, N/4)
    std::string manufactured = "t2_cos";     ///< <t2|sin>_<cos|poly|zero>
    std::vector<std::string> suites;         ///< empty = every suite
    std::map<std::string, double> tolerances;
    int estimate_cases = 10;
    int n_kernel = 24;
    int image_shells = 3;
    double crossover = 0.05;
    std::optional<double> eps_t;             ///< default 1e-4 t_final
    std::string output_dir = "out";
    int time_stride = 1;                     ///< snapshot every time_stride-th knot

    [[nodiscard]] BoxDomain domain() const { return BoxDomain(lengths, rho); }
    [[nodiscard]] int random_band() const { return band > 0 ? band : std::max(1, N / 4); }

    [[nodiscard]] TruncationPolicy policy() const {
        TruncationPolicy p = TruncationPolicy::for_horizon(t_final);
        p.n_kernel = n_kernel;
        p.image_shells = image_shells;
        p.crossover = crossover;
        if (eps_t) {
            p.eps_t = *eps_t;
        }
        return p;
    }

    [[nodiscard]] std::vector<std::string> selected_suites() const {
        return suites.empty() ? verification::suite_names() : suites;
    }
};

/// Names accepted under tolerances.*: pass/fail report metrics, the required
/// ladder order and the estimate spread bound.
inline const std::vector<std::string>& tolerance_names() {
    static const std::vector<std::string> names{
        "orthonormality_max_error", "round_trip_max_error",   "Z_unit_mass_error",
        "Z_gradient_antisymmetry",  "G_symmetry_spectral",    "G_symmetry_images",
        "G_boundary_spectral",      "G_boundary_images",      "G_spectral_vs_images",
        "G_semigroup",              "lap_inverse_lap_identity", "single_mode_closed_form",
        "pressure_linearity",       "velocity_route_agreement", "order",
        "estimate_spread"};
    return names;
}

inline verification::HarnessSettings harness_settings(const RunConfig& c) {
    verification::HarnessSettings s;
    s.domain = c.domain();
    s.t_final = c.t_final;
    s.base = {c.N, c.M, c.K};
    s.seed = c.seed;
    s.corpus_cases = c.estimate_cases;
    s.policy = c.policy();
    if (auto it = c.tolerances.find("estimate_spread"); it != c.tolerances.end()) {
        s.estimate_spread_tolerance = it->second;
    }
    return s;
}

/// Re-applies tolerances.* overrides to the pass/fail checks of a suite.
inline verification::SuiteResult apply_tolerances(verification::SuiteResult r, const RunConfig& c) {
    for (auto& rep : r.reports) {
        if (auto it = c.tolerances.find(rep.metric); rep.tolerance && it != c.tolerances.end()) {
            rep = verification::with_tolerance(std::move(rep), it->second);
        }
    }
    if (auto it = c.tolerances.find("order"); it != c.tolerances.end()) {
        for (auto& t : r.tables) {
            if (t.required_order) {
                t = verification::with_required_order(std::move(t), it->second);
            }
        }
    }
    return r;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
    s = trim(s);
    T v{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc() || ptr != end) {
        return std::nullopt;
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) {
            return std::nullopt;
        }
    }
    return v;
}

inline std::optional<ModeProfile> parse_profile(std::string_view s) {
    if (s == "const") return ModeProfile{ProfileKind::Const, 0.0};
    if (s == "linear") return ModeProfile{ProfileKind::Linear, 0.0};
    if (s == "quadratic") return ModeProfile{ProfileKind::Quadratic, 0.0};
    constexpr std::string_view head = "sinusoid(";
    if (s.starts_with(head) && s.ends_with(")")) {
        if (auto w = parse_number<double>(s.substr(head.size(), s.size() - head.size() - 1))) {
            return ModeProfile{ProfileKind::Sinusoid, *w};
        }
    }
    return std::nullopt;
}

/// comp:n1,n2,n3:amp:profile
inline std::optional<ForcingMode> parse_mode(std::string_view s) {
    const auto parts = split(s, ':');
    if (parts.size() != 4) {
        return std::nullopt;
    }
    ForcingMode m;
    const auto comp = parse_number<int>(parts[0]);
    const auto idx = split(parts[1], ',');
    const auto amp = parse_number<double>(parts[2]);
    const auto prof = parse_profile(parts[3]);
    if (!comp || idx.size() != 3 || !amp || !prof) {
        return std::nullopt;
    }
    for (std::size_t a = 0; a < 3; ++a) {
        const auto n = parse_number<int>(idx[a]);
        if (!n) {
            return std::nullopt;
        }
        m.index[a] = *n;
    }
    m.component = *comp;
    m.amplitude = *amp;
    m.profile = *prof;
    return m;
}

inline bool valid_manufactured(const std::string& name) {
    static const std::vector<std::string> names{"t2_cos", "t2_poly", "t2_zero", "sin_cos", "sin_poly", "sin_zero"};
    return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace detail

inline verification::ManufacturedCase manufactured_case(const RunConfig& c) {
    using namespace verification;
    const auto sep = c.manufactured.find('_');
    const std::string t = c.manufactured.substr(0, sep);
    const std::string p = c.manufactured.substr(sep + 1);
    const TimeProfile tp = t == "t2" ? TimeProfile::Quadratic : TimeProfile::Sine;
    const PressurePattern pp =
        p == "cos" ? PressurePattern::Cosine : (p == "poly" ? PressurePattern::Polynomial : PressurePattern::Zero);
    return make_manufactured(c.domain(), tp, pp);
}

/// Validates the invariants of a config; returns every violation.
inline std::vector<std::string> violations(const RunConfig& c) {
    std::vector<std::string> v;
    for (double l : c.lengths) {
        if (!(l > 0.0)) {
            v.emplace_back("domain.lengths must be positive");
            break;
        }
    }
    if (!(c.rho > 0.0)) v.emplace_back("physics.rho must be positive");
    if (!(c.t_final > 0.0)) v.emplace_back("disc.t_final must be positive");
    if (c.N < 1) v.emplace_back("disc.N must be >= 1");
    if (c.M < 2 * c.N) v.emplace_back("M ≥ 2N violated (M=" + std::to_string(c.M) + ", N=" + std::to_string(c.N) + ")");
    if (c.K < 2) v.emplace_back("K ≥ 2 violated (K=" + std::to_string(c.K) + ")");
    for (const auto& m : c.modes) {
        if (m.component < 1 || m.component > 3) {
            v.emplace_back("forcing.modes: component " + std::to_string(m.component) + " not in {1,2,3}");
        }
        const auto [lo, hi] = std::minmax({m.index[0], m.index[1], m.index[2]});
        if (lo < 1 || hi > c.N) {
            v.emplace_back("forcing.modes: index (" + std::to_string(m.index[0]) + "," + std::to_string(m.index[1]) +
                           "," + std::to_string(m.index[2]) + ") outside [1, N=" + std::to_string(c.N) + "]");
        }
    }
    if (c.band < 0 || c.band > c.N) v.emplace_back("forcing.band must lie in [1, N]");
    if (!detail::valid_manufactured(c.manufactured)) {
        v.emplace_back("forcing.manufactured: unknown case '" + c.manufactured + "'");
    }
    const auto& known = verification::suite_names();
    for (const auto& s : c.suites) {
        if (std::find(known.begin(), known.end(), s) == known.end()) {
            v.emplace_back("suites: unknown suite '" + s + "'");
        }
    }
    for (const auto& [name, tol] : c.tolerances) {
        if (!(tol > 0.0)) v.emplace_back("tolerances." + name + " must be positive");
    }
    if (c.estimate_cases < 1) v.emplace_back("estimate.cases must be >= 1");
    if (c.n_kernel < 1) v.emplace_back("kernel.n_kernel must be >= 1");
    if (c.image_shells < 1) v.emplace_back("kernel.image_shells must be >= 1");
    if (!(c.crossover > 0.0)) v.emplace_back("kernel.crossover must be positive");
    if (c.eps_t && !(*c.eps_t > 0.0)) v.emplace_back("kernel.eps_t must be positive");
    if (c.output_dir.empty()) v.emplace_back("output.dir must not be empty");
    if (c.time_stride < 1 || (c.K >= 2 && c.K % c.time_stride != 0)) {
        v.emplace_back("output.time_stride must divide K");
    }
    return v;
}

/// Parses `key = value` lines ('#' starts a comment). Unknown keys, repeated
/// keys, malformed values and violated invariants are collected and thrown
/// together as a ConfigError.
inline RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::vector<std::string> errors;
    std::map<std::string, int> seen;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = "line " + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back(where + "expected 'key = value'");
            continue;
        }
        const std::string key{detail::trim(line.substr(0, eq))};
        const std::string_view value = detail::trim(line.substr(eq + 1));
        if (seen[key]++ > 0) {
            errors.push_back(where + "duplicate key '" + key + "'");
            continue;
        }
        auto bad = [&](const std::string& what) {
            errors.push_back(where + "malformed " + what + " for '" + key + "': '" + std::string(value) + "'");
        };
        auto real = [&](double& dst) {
            if (auto x = detail::parse_number<double>(value)) dst = *x; else bad("number");
        };
        auto integer = [&](int& dst) {
            if (auto x = detail::parse_number<int>(value)) dst = *x; else bad("integer");
        };

        if (key == "domain.lengths") {
            const auto parts = detail::split(value, ',');
            bool ok = parts.size() == 3;
            for (std::size_t a = 0; ok && a < 3; ++a) {
                const auto x = detail::parse_number<double>(parts[a]);
                ok = x.has_value();
                if (ok) c.lengths[a] = *x;
            }
            if (!ok) bad("list of 3 numbers");
        } else if (key == "physics.rho") {
            real(c.rho);
        } else if (key == "disc.N") {
            integer(c.N);
        } else if (key == "disc.M") {
            integer(c.M);
        } else if (key == "disc.K") {
            integer(c.K);
        } else if (key == "disc.t_final") {
            real(c.t_final);
        } else if (key == "forcing.kind") {
            if (value == "modes") c.kind = ForcingKind::Modes;
            else if (value == "manufactured") c.kind = ForcingKind::Manufactured;
            else if (value == "random") c.kind = ForcingKind::Random;
            else bad("forcing kind (modes|manufactured|random)");
        } else if (key == "forcing.modes") {
            for (auto entry : detail::split(value, ';')) {
                if (entry.empty()) continue;
                if (auto m = detail::parse_mode(entry)) c.modes.push_back(*m);
                else bad("mode 'comp:n1,n2,n3:amp:profile'");
            }
        } else if (key == "forcing.seed") {
            if (auto x = detail::parse_number<std::uint64_t>(value)) c.seed = *x; else bad("integer");
        } else if (key == "forcing.band") {
            integer(c.band);
        } else if (key == "forcing.manufactured") {
            c.manufactured = std::string(value);
        } else if (key == "suites") {
            c.suites.clear();
            if (value != "all") {
                for (auto s : detail::split(value, ',')) {
                    if (!s.empty()) c.suites.emplace_back(s);
                }
            }
        } else if (key.starts_with("tolerances.")) {
            const std::string name = key.substr(std::string_view("tolerances.").size());
            const auto& known = tolerance_names();
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                errors.push_back(where + "unknown key '" + key + "'");
            } else if (auto x = detail::parse_number<double>(value)) {
                c.tolerances[name] = *x;
            } else {
                bad("number");
            }
        } else if (key == "estimate.cases") {
            integer(c.estimate_cases);
        } else if (key == "kernel.n_kernel") {
            integer(c.n_kernel);
        } else if (key == "kernel.image_shells") {
            integer(c.image_shells);
        } else if (key == "kernel.crossover") {
            real(c.crossover);
        } else if (key == "kernel.eps_t") {
            double x = 0.0;
            real(x);
            c.eps_t = x;
        } else if (key == "output.dir") {
            c.output_dir = std::string(value);
        } else if (key == "output.time_stride") {
            integer(c.time_stride);
        } else {
            errors.push_back(where + "unknown key '" + key + "'");
        }
    }
    for (auto& v : violations(c)) {
        errors.push_back(std::move(v));
    }
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return c;
}

/// Config echo for manifests.
inline nlohmann::ordered_json to_json(const RunConfig& c) {
    nlohmann::ordered_json j;
    j["domain.lengths"] = c.lengths;
    j["physics.rho"] = c.rho;
    j["disc.N"] = c.N;
    j["disc.M"] = c.M;
    j["disc.K"] = c.K;
    j["disc.t_final"] = c.t_final;
    j["forcing.kind"] = to_string(c.kind);
    auto modes = nlohmann::ordered_json::array();
    for (const auto& m : c.modes) {
        modes.push_back({{"component", m.component},
                         {"index", m.index},
                         {"amplitude", m.amplitude},
                         {"profile", m.profile.to_string()}});
    }
    j["forcing.modes"] = modes;
    j["forcing.seed"] = c.seed;
    j["forcing.band"] = c.random_band();
    j["forcing.manufactured"] = c.manufactured;
    j["suites"] = c.selected_suites();
    j["tolerances"] = c.tolerances;
    j["estimate.cases"] = c.estimate_cases;
    const TruncationPolicy p = c.policy();
    j["kernel.n_kernel"] = p.n_kernel;
    j["kernel.image_shells"] = p.image_shells;
    j["kernel.crossover"] = p.crossover;
    j["kernel.eps_t"] = p.eps_t;
    j["output.dir"] = c.output_dir;
    j["output.time_stride"] = c.time_stride;
    return j;
}

}  // namespace sgf::io
