#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sgf/kernels.hpp"

using namespace sgf;

namespace {

struct Gauss {
    std::vector<double> x, w;
};

// Composite 5-point Gauss-Legendre on (a, b).
Gauss gauss_rule(double a, double b, int panels) {
    static const double node[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                   0.9061798459386640};
    static const double weight[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                     0.2369268850561891, 0.2369268850561891};
    Gauss g;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        for (int q = 0; q < 5; ++q) {
            g.x.push_back(a + (p + 0.5 + 0.5 * node[q]) * h);
            g.w.push_back(0.5 * h * weight[q]);
        }
    return g;
}

Vec3 random_point(std::mt19937_64& rng, const BoxDomain& box) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {u(rng) * box.length(0), u(rng) * box.length(1), u(rng) * box.length(2)};
}

}  // namespace

TEST(FreeSpaceKernel, ClosedFormValues) {
    const Vec3 o{0.3, 0.4, 0.5};
    EXPECT_NEAR(eval_Z(o, 1.0, o, 0.0, 1.0), 1.0 / (8.0 * std::pow(pi, 1.5)), 1e-15);
    EXPECT_NEAR(eval_Z(o, 1.0, o, 0.0, 1.0), 0.0224483903, 1e-10);
    const Vec3 x{0.3 + 2.0, 0.4, 0.5};  // |x - xi|^2 = 4 rho s
    EXPECT_NEAR(eval_Z(x, 1.0, o, 0.0, 1.0), 0.0224483903 * std::exp(-1.0), 1e-10);
}

TEST(FreeSpaceKernel, UnitMass) {
    for (double s : {0.01, 0.3, 2.0}) {
        for (double rho : {0.5, 1.0}) {
            const Vec3 x{0.2, -0.1, 0.7};
            const double half = 12.0 * std::sqrt(rho * s);
            std::array<Gauss, 3> g;
            for (std::size_t a = 0; a < 3; ++a) g[a] = gauss_rule(x[a] - half, x[a] + half, 24);
            double mass = 0.0;
            for (std::size_t i = 0; i < g[0].x.size(); ++i)
                for (std::size_t j = 0; j < g[1].x.size(); ++j)
                    for (std::size_t k = 0; k < g[2].x.size(); ++k)
                        mass += g[0].w[i] * g[1].w[j] * g[2].w[k] *
                                eval_Z(x, s, {g[0].x[i], g[1].x[j], g[2].x[k]}, 0.0, rho);
            EXPECT_NEAR(mass, 1.0, 1e-8) << "s=" << s << " rho=" << rho;
        }
    }
}

TEST(FreeSpaceKernel, GradientAntisymmetryAndFiniteDifference) {
    std::mt19937_64 rng(5);
    const BoxDomain box = BoxDomain::unit_cube();
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 x = random_point(rng, box);
        const Vec3 xi = random_point(rng, box);
        const Vec3 gx = grad_x_Z(x, 0.3, xi, 0.1, 0.7, 1e-6);
        const Vec3 gxi = grad_xi_Z(x, 0.3, xi, 0.1, 0.7, 1e-6);
        for (std::size_t a = 0; a < 3; ++a) EXPECT_EQ(gx[a] + gxi[a], 0.0);
    }
    const Vec3 c{0.5, 0.5, 0.5};
    for (double v : grad_x_Z(c, 0.2, c, 0.0, 1.0, 1e-6)) EXPECT_EQ(v, 0.0);

    const Vec3 x{0.55, 0.4, 0.62};
    const Vec3 xi{0.5, 0.45, 0.5};
    const Vec3 g = grad_x_Z(x, 0.05, xi, 0.0, 1.0, 1e-6);
    auto fd_error = [&](double h) {
        double worst = 0.0;
        for (std::size_t a = 0; a < 3; ++a) {
            Vec3 p = x, m = x;
            p[a] += h;
            m[a] -= h;
            const double fd = (eval_Z(p, 0.05, xi, 0.0, 1.0) - eval_Z(m, 0.05, xi, 0.0, 1.0)) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - g[a]));
        }
        return worst;
    };
    const double ratio = fd_error(1e-3) / fd_error(5e-4);
    EXPECT_NEAR(ratio, 4.0, 0.2);
}

TEST(FreeSpaceKernel, RejectsSmallSeparation) {
    const Vec3 o{0.5, 0.5, 0.5};
    EXPECT_THROW(eval_Z(o, 1.0, o, 1.0, 1.0), TimeSeparationError);
    EXPECT_THROW(eval_Z(o, 0.0, o, 1.0, 1.0), TimeSeparationError);
    const TruncationPolicy policy;
    EXPECT_THROW(eval_G_spectral(o, 1e-6, o, 0.0, BoxDomain::unit_cube(), policy), TimeSeparationError);
    EXPECT_THROW(eval_G_images(o, 1e-6, o, 0.0, BoxDomain::unit_cube(), policy), TimeSeparationError);
    EXPECT_THROW(eval_V(o, 1e-6, o, 0.0, BoxDomain::unit_cube(), policy), TimeSeparationError);
    EXPECT_THROW(grad_x_Z(o, 1e-6, o, 0.0, 1.0, 1e-4), TimeSeparationError);
}

TEST(TruncationPolicy, Validation) {
    TruncationPolicy p;
    EXPECT_NO_THROW(p.validate());
    p.image_shells = 0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    EXPECT_DOUBLE_EQ(TruncationPolicy::for_horizon(0.5).eps_t, 5e-5);
}

TEST(GreenFunction, SymmetryExactForSpectralTightForImages) {
    std::mt19937_64 rng(17);
    const BoxDomain box({1.0, 1.4, 0.8}, 0.9);
    const TruncationPolicy policy;
    for (int trial = 0; trial < 30; ++trial) {
        const Vec3 x = random_point(rng, box);
        const Vec3 xi = random_point(rng, box);
        EXPECT_EQ(eval_G_spectral(x, 0.2, xi, 0.05, box, policy), eval_G_spectral(xi, 0.2, x, 0.05, box, policy));
        const double a = eval_G_images(x, 0.02, xi, 0.0, box, policy);
        const double b = eval_G_images(xi, 0.02, x, 0.0, box, policy);
        EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST(GreenFunction, VanishesOnBoundary) {
    const BoxDomain box = BoxDomain::unit_cube();
    TruncationPolicy policy;
    const Vec3 x{0.4, 0.6, 0.5};
    for (double s : {0.01, 0.1, 0.25}) {
        const double scale = eval_Z(x, s, x, 0.0, 1.0);
        for (const Vec3& xi : {Vec3{0.0, 0.3, 0.4}, Vec3{1.0, 0.3, 0.4}, Vec3{0.45, 1.0, 0.7}}) {
            EXPECT_LE(std::abs(eval_G_spectral(x, s, xi, 0.0, box, policy)), 1e-14 * scale);
            EXPECT_LE(std::abs(eval_G_images(x, s, xi, 0.0, box, policy)), 1e-8 * scale);
            for (double v : grad_x_G_spectral(x, s, xi, 0.0, box, policy)) EXPECT_LE(std::abs(v), 1e-14 * scale);
        }
    }
    // Mirror cancellation tightens as shells are added.
    const Vec3 far{1.0, 0.5, 0.5};
    double previous = 1e300;
    for (int R = 1; R <= 3; ++R) {
        policy.image_shells = R;
        const double g = std::abs(eval_G_images({0.5, 0.5, 0.5}, 1.0, far, 0.0, box, policy));
        EXPECT_LE(g, previous);
        previous = g;
    }
}

TEST(GreenFunction, ConstructionsAgree) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> sep(0.02, 0.5);
    const BoxDomain box = BoxDomain::unit_cube();
    const TruncationPolicy policy;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 x = random_point(rng, box);
        const Vec3 xi = random_point(rng, box);
        const double s = sep(rng);
        const double gs = eval_G_spectral(x, s, xi, 0.0, box, policy);
        const double gi = eval_G_images(x, s, xi, 0.0, box, policy);
        const double scale = std::max(std::abs(gs), eval_Z(x, s, x, 0.0, 1.0));
        worst = std::max(worst, std::abs(gs - gi) / scale);
    }
    EXPECT_LE(worst, 1e-6);

    const Vec3 c{0.5, 0.5, 0.5};
    const double gs = eval_G_spectral(c, 0.1, c, 0.0, box, policy);
    EXPECT_LE(std::abs(gs - eval_G_images(c, 0.1, c, 0.0, box, policy)) / gs, 1e-6);
}

TEST(GreenFunction, ImagesNegligibleAtShortTimes) {
    TruncationPolicy policy;
    policy.image_shells = 1;
    const BoxDomain box({1.0, 2.0, 1.5}, 1.0);
    const Vec3 c{0.5, 1.0, 0.75};
    const double s = 1e-3;
    const double z = eval_Z(c, s, c, 0.0, 1.0);
    EXPECT_LE(std::abs(eval_G_images(c, s, c, 0.0, box, policy) - z) / z, 1e-10);
}

TEST(GreenFunction, Semigroup) {
    const BoxDomain box = BoxDomain::unit_cube();
    const TruncationPolicy policy;
    const SpatialGrid grid(box, 48);
    const Vec3 x{0.3, 0.55, 0.6};
    const Vec3 xi{0.5, 0.4, 0.45};
    const double t = 0.2, s = 0.1, tau = 0.0;
    const int M = grid.points_per_axis();
    double acc = 0.0;
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < M; ++k) {
                const Vec3 y = grid.point(i, j, k);
                acc += eval_G_spectral(x, t, y, s, box, policy) * eval_G_spectral(y, s, xi, tau, box, policy);
            }
    acc *= grid.cell_volume();
    const double direct = eval_G_spectral(x, t, xi, tau, box, policy);
    EXPECT_LE(std::abs(acc - direct) / direct, 1e-6);
}

TEST(GreenFunction, HeatResidualShrinksUnderRefinement) {
    const BoxDomain box({1.0, 1.2, 0.9}, 0.8);
    const TruncationPolicy policy;
    const Vec3 x{0.35, 0.6, 0.5};
    const Vec3 xi{0.5, 0.5, 0.4};
    const double t = 0.15;
    auto residual = [&](double h) {
        auto G = [&](const Vec3& p, double tt) { return eval_G_spectral(p, tt, xi, 0.0, box, policy); };
        const double g0 = G(x, t);
        const double dt = (G(x, t + h) - G(x, t - h)) / (2.0 * h);
        double lap = 0.0;
        for (std::size_t a = 0; a < 3; ++a) {
            Vec3 p = x, m = x;
            p[a] += h;
            m[a] -= h;
            lap += (G(p, t) - 2.0 * g0 + G(m, t)) / (h * h);
        }
        return std::abs(dt - box.rho() * lap) / std::abs(dt);
    };
    const double coarse = residual(0.02);
    const double fine = residual(0.01);
    EXPECT_LT(fine, coarse);
    EXPECT_GT(coarse / fine, 3.0);
}

TEST(Corrector, EqualsMinusZOnBoundary) {
    const BoxDomain box = BoxDomain::unit_cube();
    const TruncationPolicy policy;
    const Vec3 x{0.3, 0.5, 0.6};
    for (double s : {0.005, 0.03, 0.2}) {
        for (const Vec3& xi : {Vec3{0.0, 0.2, 0.5}, Vec3{0.7, 1.0, 0.3}}) {
            const double z = eval_Z(x, s, xi, 0.0, 1.0);
            EXPECT_NEAR(eval_V(x, s, xi, 0.0, box, policy), -z, 1e-12 * eval_Z(x, s, x, 0.0, 1.0));
        }
    }
}

TEST(Corrector, SmallNearDiagonalAndConsistentWithSpectral) {
    const BoxDomain box = BoxDomain::unit_cube();
    const TruncationPolicy policy = TruncationPolicy::for_horizon(0.5);
    const Vec3 c{0.5, 0.5, 0.5};
    EXPECT_LE(std::abs(eval_V(c, policy.eps_t, c, 0.0, box, policy)), 1e-8);

    const Vec3 x{0.3, 0.6, 0.45};
    const Vec3 xi{0.4, 0.5, 0.5};
    for (double s : {0.03, 0.045}) {
        const double v = eval_V(x, s, xi, 0.0, box, policy);
        const double ref = eval_G_spectral(x, s, xi, 0.0, box, policy) - eval_Z(x, s, xi, 0.0, 1.0);
        EXPECT_LE(std::abs(v - ref), 1e-6 * eval_Z(x, s, x, 0.0, 1.0));
    }
}

TEST(GreenGradient, ParityAndFiniteDifference) {
    const BoxDomain box = BoxDomain::unit_cube();
    const TruncationPolicy policy;
    const Vec3 c{0.5, 0.5, 0.5};
    const Vec3 g = grad_x_G_spectral(c, 0.1, c, 0.0, box, policy);
    const double scale = eval_G_spectral(c, 0.1, c, 0.0, box, policy);
    for (double v : g) EXPECT_LE(std::abs(v), 1e-12 * scale);

    const Vec3 x{0.3, 0.6, 0.45};
    const Vec3 xi{0.4, 0.5, 0.5};
    const Vec3 ga = grad_x_G_spectral(x, 0.08, xi, 0.0, box, policy);
    auto fd_error = [&](double h) {
        double worst = 0.0;
        for (std::size_t a = 0; a < 3; ++a) {
            Vec3 p = x, m = x;
            p[a] += h;
            m[a] -= h;
            const double fd = (eval_G_spectral(p, 0.08, xi, 0.0, box, policy) -
                               eval_G_spectral(m, 0.08, xi, 0.0, box, policy)) /
                              (2.0 * h);
            worst = std::max(worst, std::abs(fd - ga[a]));
        }
        return worst;
    };
    EXPECT_NEAR(fd_error(2e-3) / fd_error(1e-3), 4.0, 0.2);
}
