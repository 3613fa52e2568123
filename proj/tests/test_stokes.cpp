#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sgf/kernels.hpp"
#include "sgf/stokes.hpp"

using namespace sgf;

namespace {

std::size_t flat(int N, const Index3& n) {
    return (static_cast<std::size_t>(n[0] - 1) * N + (n[1] - 1)) * N + (n[2] - 1);
}

// w = (a u_m, 0, 0) times profile(t).
template <class F>
std::array<ModalHistory, 3> single_mode_forcing(const TimeGrid& time, int N, const Index3& m, double a, F&& profile) {
    std::array<ModalHistory, 3> w{ModalHistory(kSineSignature, N, time.knots()),
                                  ModalHistory(kSineSignature, N, time.knots()),
                                  ModalHistory(kSineSignature, N, time.knots())};
    for (int k = 0; k < time.knots(); ++k) w[0].at(k)[flat(N, m)] = a * profile(time.knot(k));
    return w;
}

template <class F>
std::array<ModalHistory, 3> random_forcing(const TimeGrid& time, int N, int band, std::uint64_t seed, F&& profile) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::array<ModalHistory, 3> w;
    for (auto& c : w) {
        c = ModalHistory(kSineSignature, N, time.knots());
        std::vector<double> shape(c.modes(), 0.0);
        for (int n1 = 1; n1 <= band; ++n1)
            for (int n2 = 1; n2 <= band; ++n2)
                for (int n3 = 1; n3 <= band; ++n3) shape[flat(N, {n1, n2, n3})] = normal(rng);
        for (int k = 0; k < time.knots(); ++k) {
            const double s = profile(time.knot(k));
            for (std::size_t i = 0; i < shape.size(); ++i) c.at(k)[i] = s * shape[i];
        }
    }
    return w;
}

double relative_difference(const ModalField& a, const ModalField& b) {
    return l2_norm_spacetime(a + (-1.0 * b)) / l2_norm_spacetime(b);
}

double relative_difference(const ModalVector& a, const ModalVector& b) {
    ModalVector d = a;
    for (std::size_t i = 0; i < 3; ++i) d[i].add(-1.0 * b[i]);
    return l2_norm_spacetime(d) / l2_norm_spacetime(b);
}

ModalHistory every_nth_knot(const ModalHistory& h, int stride) {
    ModalHistory out(h.signature(), h.truncation(), (h.knots() - 1) / stride + 1);
    for (int k = 0; k < out.knots(); ++k) {
        const auto src = h.at(k * stride);
        std::copy(src.begin(), src.end(), out.at(k).begin());
    }
    return out;
}

ModalField every_nth_knot(const ModalField& f, const TimeGrid& coarse, int stride) {
    ModalField out(f.domain(), coarse);
    for (const auto& t : f.terms()) out.add(every_nth_knot(t, stride));
    return out;
}

}  // namespace

TEST(Source, ZeroForcing) {
    const BoxDomain box = BoxDomain::unit_cube();
    const TimeGrid time(0.5, 4);
    const auto w = single_mode_forcing(time, 3, {1, 1, 1}, 0.0, [](double) { return 1.0; });
    const PressureResult r = pressure(decompose_source(w, box, time));
    EXPECT_EQ(l2_norm_spacetime(source_S(r.source)), 0.0);
    EXPECT_EQ(l2_norm_spacetime(source_S_dt(r.source)), 0.0);
    EXPECT_EQ(l2_norm_spacetime(r.pressure), 0.0);
    EXPECT_EQ(l2_norm_spacetime(pressure_gradient(r)), 0.0);
    EXPECT_EQ(l2_norm_spacetime(velocity(r).velocity), 0.0);
    EXPECT_EQ(l2_norm_spacetime(velocity_via_integration_by_parts(r).velocity), 0.0);
}

TEST(Source, SingleModeSteadyClosedForms) {
    const BoxDomain box({1.0, 1.2, 0.8}, 0.7);
    const TimeGrid time(0.5, 10);
    const Index3 m{2, 1, 1};
    const double a = 1.5;
    const int N = 3;
    const SourceDecomposition d = decompose_source(
        single_mode_forcing(time, N, m, a, [](double) { return 1.0; }), box, time);
    // Only the first component is forced, so only the cosine-in-x1 term is nonzero.
    const ModalHistory S = project(source_S(d), cosine_in(0), N);
    const ModalHistory Sdt = project(source_S_dt(d), cosine_in(0), N);
    const double rl = box.rho() * box.eigenvalue(m);
    const double k1 = m[0] * pi / box.length(0);
    for (int k = 0; k < time.knots(); ++k) {
        const double t = time.knot(k);
        const auto s = S.at(k);
        const auto sd = Sdt.at(k);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const bool hit = i == flat(N, m);
            EXPECT_NEAR(s[i], hit ? a * k1 * (-std::expm1(-rl * t)) / rl : 0.0, 1e-14);
            EXPECT_NEAR(sd[i], hit ? a * k1 * std::exp(-rl * t) : 0.0, 1e-13);
        }
    }
}

TEST(Source, TimeDerivativeMatchesFiniteDifference) {
    const BoxDomain box({1.0, 1.0, 1.0}, 0.1);
    auto error = [&](int K) {
        const TimeGrid time(0.5, K);
        const auto w = random_forcing(time, 3, 3, 12, [](double t) { return std::sin(4.0 * t); });
        const SourceDecomposition d = decompose_source(w, box, time);
        const ModalField S = source_S(d);
        ModalField fd(box, time);
        for (const auto& t : S.terms()) fd.add(time_derivative(t, time));
        return relative_difference(fd, source_S_dt(d));
    };
    const double coarse = error(32);
    const double fine = error(64);
    EXPECT_LT(coarse, 1e-2);
    EXPECT_GT(std::log2(coarse / fine), 1.8);
}

TEST(Source, MatchesKernelQuadrature) {
    // S(x,t) = int_0^t int_Omega sum_i dG/dx_i(x,t;xi,tau) w_i(xi,tau) dxi dtau at one point, with
    // w linear in t so the modal integrator is exact; the grid rule is exact for the kernel's sine modes.
    const BoxDomain box = BoxDomain::unit_cube();
    const TimeGrid time(0.1, 2);
    const int N = 2;
    const auto w = random_forcing(time, N, N, 99, [](double t) { return 1.0 + 5.0 * t; });
    const SourceDecomposition d = decompose_source(w, box, time);
    const SpatialGrid grid(box, 48);
    const SineBasis basis(grid);
    std::array<GridField, 3> shape;
    for (std::size_t i = 0; i < 3; ++i) shape[i] = synthesize(w[i].tensor(0), kSineSignature, basis);

    const Vec3 x{0.3, 0.55, 0.7};
    const double t = time.t_final();
    TruncationPolicy policy;
    policy.eps_t = 1e-12;
    static const double node[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                   0.9061798459386640};
    static const double weight[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                     0.2369268850561891, 0.2369268850561891};
    // Kernel modes above the forcing band cancel exactly in the grid sum, so the
    // tau integrand is a few smooth exponentials.
    const std::vector<double> edges{0.0, 0.025, 0.05, 0.075, 0.1};
    const int M = grid.points_per_axis();
    double oracle = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double lo = edges[p], hi = edges[p + 1];
        for (int q = 0; q < 5; ++q) {
            const double tau = 0.5 * (lo + hi) + 0.5 * (hi - lo) * node[q];
            const double profile = 1.0 + 5.0 * tau;  // exact w(tau) on the grid
            double inner = 0.0;
            for (int i = 0; i < M; ++i)
                for (int j = 0; j < M; ++j)
                    for (int k = 0; k < M; ++k) {
                        const Vec3 g = grad_x_G_spectral(x, t, grid.point(i, j, k), tau, box, policy);
                        inner += g[0] * shape[0](i, j, k) + g[1] * shape[1](i, j, k) + g[2] * shape[2](i, j, k);
                    }
            oracle += 0.5 * (hi - lo) * weight[q] * profile * inner * grid.cell_volume();
        }
    }
    const ModalField S = source_S(d);
    double modal = 0.0;
    for (const auto& term : S.terms()) {
        const auto c = term.at(time.steps());
        for (int n1 = 1; n1 <= N; ++n1)
            for (int n2 = 1; n2 <= N; ++n2)
                for (int n3 = 1; n3 <= N; ++n3) {
                    double v = c[flat(N, {n1, n2, n3})];
                    const Index3 n{n1, n2, n3};
                    for (int a = 0; a < 3; ++a) {
                        const auto s = static_cast<std::size_t>(a);
                        v *= term.signature()[s] == Family::Sine ? sine_factor(box.length(a), n[s], x[s])
                                                                   : cosine_factor(box.length(a), n[s], x[s]);
                    }
                    modal += v;
                }
    }
    EXPECT_LE(std::abs(modal - oracle), 1e-6 * std::abs(oracle));
}

TEST(Pressure, Linearity) {
    const BoxDomain box({1.0, 0.9, 1.1}, 0.8);
    const TimeGrid time(0.5, 16);
    const auto w1 = random_forcing(time, 4, 2, 1, [](double t) { return t * t; });
    const auto w2 = random_forcing(time, 4, 2, 2, [](double t) { return std::sin(t); });
    const double alpha = 0.7, beta = -2.3;
    std::array<ModalHistory, 3> combo;
    for (std::size_t i = 0; i < 3; ++i) {
        ModalHistory x = w1[i];
        x *= alpha;
        ModalHistory y = w2[i];
        y *= beta;
        x += y;
        combo[i] = x;
    }
    const PressureResult p1 = pressure(decompose_source(w1, box, time));
    const PressureResult p2 = pressure(decompose_source(w2, box, time));
    const PressureResult pc = pressure(decompose_source(combo, box, time));
    EXPECT_LE(relative_difference(alpha * p1.pressure + beta * p2.pressure, pc.pressure), 1e-12);
}

TEST(Pressure, SelfRefinementOfSingleModeSteadyForcing) {
    // Reference: 2x modes, 4x steps. The gap is the sine-projection tail of the
    // cosine-type source inside the inverse Laplacian and shrinks like N^{-5/2}.
    const BoxDomain box = BoxDomain::unit_cube();
    const Index3 m{1, 1, 1};
    const auto one = [](double) { return 1.0; };
    auto gap = [&](int N, int K) {
        const TimeGrid coarse(0.5, K);
        const TimeGrid fine(0.5, 4 * K);
        const PressureResult p =
            pressure(decompose_source(single_mode_forcing(coarse, N, m, 1.0, one), box, coarse));
        const PressureResult ref =
            pressure(decompose_source(single_mode_forcing(fine, 2 * N, m, 1.0, one), box, fine));
        return relative_difference(p.pressure, every_nth_knot(ref.pressure, coarse, 4));
    };
    const double g6 = gap(6, 64);
    const double g12 = gap(12, 128);
    RecordProperty("gap_N6", std::to_string(g6));
    RecordProperty("gap_N12", std::to_string(g12));
    EXPECT_LE(g12, 1e-3);
    EXPECT_GT(std::log2(g6 / g12), 2.0);
}

TEST(Velocity, TwoRoutesAgree) {
    const BoxDomain box = BoxDomain::unit_cube();
    const TimeGrid time(0.5, 32);
    const auto w = random_forcing(time, 6, 3, 5, [](double t) { return t * t + std::sin(3.0 * t); });
    const PressureResult r = pressure(decompose_source(w, box, time));
    const ModalVector u22 = velocity(r).velocity;
    const ModalVector u25 = velocity_via_integration_by_parts(r).velocity;
    EXPECT_LE(relative_difference(u25, u22), 1e-6);
}

TEST(Velocity, PressureOnlyDuhamelCoefficient) {
    // p = u_m constant in t, w = 0: u_1 coefficient n is -<du_n/dx_1, u_m> (1 - e^{-a_n t}) / a_n.
    const BoxDomain box = BoxDomain::unit_cube();
    const TimeGrid time(0.5, 8);
    const int N = 3;
    const Index3 m{2, 1, 1};
    ModalHistory ph(kSineSignature, N, time.knots());
    for (int k = 0; k < time.knots(); ++k) ph.at(k)[flat(N, m)] = 1.0;
    const auto zero = single_mode_forcing(time, N, m, 0.0, [](double) { return 1.0; });
    PressureResult r{decompose_source(zero, box, time), single_term(box, time, ph), N};
    const ModalVector u = velocity_via_integration_by_parts(r).velocity;
    const Index3 n{1, 1, 1};
    const double kn = pi;
    const double q = kn * cosine_sine_overlap(n[0], m[0]);  // <du_n/dx_1, u_m>
    const double a = box.eigenvalue(n);
    double coeff = 0.0;
    for (const auto& t : u[0].terms()) coeff += t.at(time.steps())[flat(N, n)];
    EXPECT_NEAR(coeff, -q * (-std::expm1(-a * 0.5)) / a, 1e-13);
    EXPECT_LE(relative_difference(u, velocity(r).velocity), 1e-13);
}

TEST(Velocity, GalerkinResidualIsSecondOrder) {
    const BoxDomain box = BoxDomain::unit_cube();
    auto residual = [&](int N, int K) {
        const TimeGrid time(0.5, K);
        const auto w = random_forcing(time, N, 2, 31, [](double t) { return t * t; });
        const PressureResult r = pressure(decompose_source(w, box, time));
        const ModalVector u = velocity(r).velocity;
        const ModalVector grad = pressure_gradient(r);
        ModalVector res = make_modal_vector(box, time);
        ModalVector wf = make_modal_vector(box, time);
        for (std::size_t i = 0; i < 3; ++i) {
            ModalHistory target = project(grad[i], kSineSignature, N);
            target += r.source.input[i];
            res[i] = apply_T(u[i]) + (-1.0 * single_term(box, time, target));
            wf[i] = single_term(box, time, r.source.input[i]);
        }
        return l2_norm_spacetime(res) / l2_norm_spacetime(wf);
    };
    const double r0 = residual(4, 32);
    const double r1 = residual(8, 64);
    EXPECT_GT(std::log2(r0 / r1), 1.8);
}

TEST(Divergence, GradientOfModeAndCurl) {
    const BoxDomain box({1.0, 1.3, 0.7}, 1.0);
    const TimeGrid time(0.5, 4);
    const int N = 3;
    const Index3 n{2, 1, 3};
    ModalHistory h(kSineSignature, N, time.knots());
    for (int k = 0; k < time.knots(); ++k) h.at(k)[flat(N, n)] = 1.0 + time.knot(k);
    const ModalField phi = single_term(box, time, h);
    const ModalVector grad{derivative(phi, 0), derivative(phi, 1), derivative(phi, 2)};
    const ModalField div = divergence(grad);
    const ModalField expected = -box.eigenvalue(n) * phi;
    EXPECT_LE(relative_difference(div, expected), 1e-14);

    // curl(0, 0, psi) is divergence-free term by term.
    const ModalVector curl{derivative(phi, 1), -1.0 * derivative(phi, 0), ModalField(box, time)};
    const DivergenceDiagnostic d = divergence_ratio(curl);
    EXPECT_LE(d.ratio, 1e-14);
    EXPECT_GT(d.gradient_norm, 0.0);
}

TEST(Sobolev, LinearInTimeSingleMode) {
    const BoxDomain box({1.0, 1.5, 0.8}, 1.0);
    const TimeGrid time(0.5, 8);
    const int N = 3;
    const Index3 n{1, 3, 2};
    ModalHistory h(kSineSignature, N, time.knots());
    for (int k = 0; k < time.knots(); ++k) h.at(k)[flat(N, n)] = time.knot(k);
    ModalVector u = make_modal_vector(box, time);
    u[1] = single_term(box, time, h);

    std::array<double, 3> k2{};
    for (int a = 0; a < 3; ++a) {
        const double k = n[static_cast<std::size_t>(a)] * pi / box.length(a);
        k2[static_cast<std::size_t>(a)] = k * k;
    }
    double second = 0.0;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = a; b < 3; ++b) second += k2[a] * k2[b];
    const double T = time.t_final();
    const double exact2 = T * T * T / 3.0 * (1.0 + box.eigenvalue(n) + second) + T;
    EXPECT_NEAR(sobolev_norm_W221(u), std::sqrt(exact2), 1e-10 * std::sqrt(exact2));

    ModalVector twice = u;
    for (auto& c : twice) c *= 2.0;
    EXPECT_EQ(sobolev_norm_W221(twice), 2.0 * sobolev_norm_W221(u));
    EXPECT_EQ(sobolev_norm_W221(make_modal_vector(box, time)), 0.0);
}
