#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sgf/heat_calculus.hpp"
#include "sgf/transform.hpp"

using namespace sgf;

namespace {

GridField sample_mode(const SpatialGrid& grid, const Index3& n) {
    const int M = grid.points_per_axis();
    GridField f(M);
    const Mode mode{n, grid.domain().eigenvalue(n)};
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            for (int k = 0; k < M; ++k) f(i, j, k) = eval_eigenfunction(grid.domain(), mode, grid.point(i, j, k));
    return f;
}

// Direct double loop: c_n = h^3 sum_x f(x) u_n(x), evaluated point by point.
std::vector<double> direct_forward(const GridField& f, const SpatialGrid& grid, int N) {
    const int M = grid.points_per_axis();
    std::vector<double> c;
    for (const Mode& mode : enumerate_modes(grid.domain(), N)) {
        double acc = 0.0;
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < M; ++j)
                for (int k = 0; k < M; ++k)
                    acc += f(i, j, k) * eval_eigenfunction(grid.domain(), mode, grid.point(i, j, k));
        c.push_back(acc * grid.cell_volume());
    }
    return c;
}

}  // namespace

TEST(BoxDomain, RejectsNonPositiveParameters) {
    EXPECT_THROW(BoxDomain({1.0, 0.0, 1.0}, 1.0), InvalidArgument);
    EXPECT_THROW(BoxDomain({1.0, 1.0, 1.0}, -1.0), InvalidArgument);
    EXPECT_NO_THROW(BoxDomain({0.5, 2.0, 1.0}, 0.1));
}

TEST(EnumerateModes, UnitCubeSingleMode) {
    const auto modes = enumerate_modes(BoxDomain::unit_cube(), 1);
    ASSERT_EQ(modes.size(), 1u);
    EXPECT_EQ(modes[0].index, (Index3{1, 1, 1}));
    EXPECT_NEAR(modes[0].lambda, 29.608813, 1e-6);
    EXPECT_DOUBLE_EQ(modes[0].lambda, 3.0 * pi * pi);
}

TEST(EnumerateModes, StretchedBox) {
    const auto modes = enumerate_modes(BoxDomain({1.0, 1.0, 2.0}, 1.0), 1);
    EXPECT_NEAR(modes[0].lambda, 22.206610, 1e-6);
}

TEST(EnumerateModes, CountOrderAndMinimum) {
    const auto modes = enumerate_modes(BoxDomain::unit_cube(), 4);
    ASSERT_EQ(modes.size(), 64u);
    double min_lambda = 1e300;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        min_lambda = std::min(min_lambda, modes[i].lambda);
        for (int a = 0; a < 3; ++a) {
            EXPECT_GE(modes[i].index[static_cast<std::size_t>(a)], 1);
            EXPECT_LE(modes[i].index[static_cast<std::size_t>(a)], 4);
        }
        if (i > 0) {
            EXPECT_LT(modes[i - 1].index, modes[i].index);
        }
    }
    EXPECT_DOUBLE_EQ(min_lambda, 3.0 * pi * pi);
    EXPECT_THROW(enumerate_modes(BoxDomain::unit_cube(), 0), InvalidArgument);
}

TEST(Eigenfunction, KnownValues) {
    const auto cube = BoxDomain::unit_cube();
    EXPECT_NEAR(eval_eigenfunction(cube, {{1, 1, 1}, 0.0}, {0.5, 0.5, 0.5}), 2.0 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(eval_eigenfunction(cube, {{2, 2, 2}, 0.0}, {0.25, 0.25, 0.25}), 2.0 * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(eval_eigenfunction(cube, {{3, 1, 2}, 0.0}, {0.0, 0.3, 0.7}), 0.0, 1e-15);
    EXPECT_NEAR(eval_eigenfunction(cube, {{3, 1, 2}, 0.0}, {0.2, 1.0, 0.7}), 0.0, 1e-15);
    EXPECT_THROW(eval_eigenfunction(cube, {{1, 1, 1}, 0.0}, {1.2, 0.5, 0.5}), InvalidArgument);
}

TEST(SineTransform, SampledModeHasUnitCoefficient) {
    const SpatialGrid grid(BoxDomain({1.0, 1.5, 0.75}, 1.0), 10);
    const SineBasis basis(grid);
    const SpectralField c = forward_sine(sample_mode(grid, {2, 3, 1}), basis, 6);
    for (int n1 = 1; n1 <= 6; ++n1)
        for (int n2 = 1; n2 <= 6; ++n2)
            for (int n3 = 1; n3 <= 6; ++n3) {
                const double expected = (n1 == 2 && n2 == 3 && n3 == 1) ? 1.0 : 0.0;
                EXPECT_NEAR(c.at({n1, n2, n3}), expected, 1e-12);
            }
}

TEST(SineTransform, ZeroFieldAndSizeGuard) {
    const SpatialGrid grid(BoxDomain::unit_cube(), 6);
    const SineBasis basis(grid);
    const SpectralField c = forward_sine(GridField(6), basis, 4);
    for (double v : c.values()) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(forward_sine(GridField(6), basis, 7), InvalidArgument);
}

TEST(SineTransform, MatchesDirectDoubleLoopAndRoundTrips) {
    const SpatialGrid grid(BoxDomain({1.0, 2.0, 1.3}, 0.7), 7);
    const SineBasis basis(grid);
    std::mt19937_64 rng(42);
    std::normal_distribution<double> normal;
    const int N = 5;
    SpectralField c(grid.domain(), N);
    for (double& v : c.values()) v = normal(rng);

    const GridField f = inverse_sine(c, basis);
    const SpectralField back = forward_sine(f, basis, N);
    const auto oracle = direct_forward(f, grid, N);
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_NEAR(back.values()[i], c.values()[i], 1e-12);
        EXPECT_NEAR(back.values()[i], oracle[i], 1e-12);
    }

    // inverse(forward(f)) = f for band-limited f.
    const GridField again = inverse_sine(back, basis);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(again.values()[i], f.values()[i], 1e-12);
}

TEST(SineTransform, DiscreteOrthonormality) {
    const SpatialGrid grid(BoxDomain({1.0, 0.8, 1.7}, 1.0), 9);
    std::vector<GridField> samples;
    std::vector<Index3> idx;
    for (const Mode& m : enumerate_modes(grid.domain(), 4)) {
        samples.push_back(sample_mode(grid, m.index));
        idx.push_back(m.index);
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < samples.size(); ++a)
        for (std::size_t b = a; b < samples.size(); ++b) {
            const double ip = grid.cell_volume() * dot(samples[a].values(), samples[b].values());
            worst = std::max(worst, std::abs(ip - (a == b ? 1.0 : 0.0)));
        }
    EXPECT_LE(worst, 1e-12);
}

TEST(Norms, ModeZeroAndParseval) {
    const SpatialGrid grid(BoxDomain::unit_cube(), 8);
    const SineBasis basis(grid);
    EXPECT_NEAR(l2_norm(sample_mode(grid, {1, 2, 3}), grid), 1.0, 1e-12);
    EXPECT_EQ(l2_norm(GridField(8), grid), 0.0);

    SpectralField c(grid.domain(), 4);
    c.at({1, 1, 1}) = 3.0;
    c.at({2, 1, 4}) = 4.0;
    const GridField f = inverse_sine(c, basis);
    EXPECT_NEAR(l2_norm(f, grid), 5.0, 1e-12);
    double parseval = 0.0;
    const SpectralField coeffs = forward_sine(f, basis, 4);
    for (double v : coeffs.values()) parseval += v * v;
    EXPECT_NEAR(parseval, l2_norm_squared(f, grid), 1e-12);
}

TEST(Norms, SpaceTimeTrapezoid) {
    const SpatialGrid grid(BoxDomain::unit_cube(), 6);
    const TimeGrid time(2.0, 4);
    ScalarSpaceTime f = make_scalar_spacetime(time, 6);
    const GridField mode = sample_mode(grid, {1, 1, 2});
    for (int k = 0; k < time.knots(); ++k) {
        for (std::size_t i = 0; i < mode.size(); ++i) f[k].values()[i] = mode.values()[i];
    }
    // ||u_n||^2 = 1 at every knot, so the trapezoid gives t_final.
    EXPECT_NEAR(l2_norm_spacetime(f, grid), std::sqrt(2.0), 1e-12);
}

TEST(EigenRelation, FiniteDifferenceLaplacianIsSecondOrder) {
    const BoxDomain box({1.0, 1.2, 0.9}, 1.0);
    const Index3 n{2, 1, 3};
    auto error = [&](int M) {
        const SpatialGrid grid(box, M);
        const GridField u = sample_mode(grid, n);
        const GridField lap = laplacian_fd(u, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i)
            worst = std::max(worst, std::abs(lap.values()[i] + box.eigenvalue(n) * u.values()[i]));
        return worst;
    };
    const double coarse = error(15);
    const double fine = error(31);
    EXPECT_GE(coarse / fine, 3.6);
    EXPECT_LE(coarse / fine, 4.4);
}

TEST(Grids, TimeAndSpaceInvariants) {
    EXPECT_THROW(TimeGrid(0.5, 1), InvalidArgument);
    EXPECT_THROW(TimeGrid(-1.0, 4), InvalidArgument);
    const TimeGrid time(0.5, 128);
    EXPECT_DOUBLE_EQ(time.knot(128), 0.5);
    const SpatialGrid grid(BoxDomain({2.0, 1.0, 1.0}, 1.0), 3);
    EXPECT_DOUBLE_EQ(grid.node(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(grid.node(0, 2), 1.5);
    EXPECT_GT(grid.node(1, 0), 0.0);
    EXPECT_LT(grid.node(1, 2), 1.0);
}
