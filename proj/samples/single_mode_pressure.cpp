// Pressure and velocity for w = (sin(3t) u_{211}, 0, 0) on the unit cube.

#include <cmath>
#include <cstdio>

#include "sgf/stokes.hpp"
#include "sgf/verification/corpus.hpp"

int main() {
    using namespace sgf;
    const BoxDomain domain = BoxDomain::unit_cube();
    const TimeGrid time(0.5, 64);
    const int N = 8;
    const SineBasis basis(SpatialGrid(domain, 2 * N + 1));

    const auto w = verification::single_mode_forcing(time, N, {2, 1, 1}, 1.0, [](double t) { return std::sin(3.0 * t); });
    const PressureResult r = pressure(decompose_source(w, domain, time));
    const VelocityResult v = velocity(r);
    const DivergenceDiagnostic div = divergence_ratio(v.velocity);

    std::printf("%8s %16s %16s %16s\n", "t", "p(centre)", "||grad p||", "||u||");
    const int mid = N;  // node (N+1)/(2N+2) = 1/2 on every axis
    for (int k = 0; k <= time.steps(); k += 8) {
        const GridField p = synthesize(r.pressure, k, basis);
        const double gp = std::sqrt(norm_squared_at(pressure_gradient(r), k));
        const double u = std::sqrt(norm_squared_at(v.velocity, k));
        std::printf("%8.4f %16.8e %16.8e %16.8e\n", time.knot(k), p(mid, mid, mid), gp, u);
    }
    std::printf("||div u|| / ||grad u|| = %.6e\n", div.divergence_norm / div.gradient_norm);
    return 0;
}
