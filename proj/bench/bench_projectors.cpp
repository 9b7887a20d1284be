// Compares the serial reference projectors against the OpenMP kernels:
// wall time and max absolute output difference.
#include <chrono>
#include <cstdio>
#include <random>

#include "spindle/transforms.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace spindle;
using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

}  // namespace

int main(int argc, char** argv) {
    int nParams = argc > 1 ? std::atoi(argv[1]) : 64;
    int gridN = argc > 2 ? std::atoi(argv[2]) : 48;
    QuadratureSpec quad{96, 96};

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    VoxelGrid vol = VoxelGrid::cube(gridN, 1.0);
    for (auto& v : vol.values) v = uni(rng);

    std::vector<AnyParams> params;
    for (int i = 0; i < nParams; ++i) {
        RestrictedParams rp;
        rp.p = 2.0 + 4.0 * uni(rng);
        rp.x0 = -0.2 + 0.4 * uni(rng);
        rp.y0 = -0.2 + 0.4 * uni(rng);
        params.emplace_back(rp);
    }

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled\n");
#endif
    std::printf("%d params, %d^3 grid, quadrature %dx%d\n", nParams, gridN, quad.nPsi,
                quad.nTheta);

    auto t0 = Clock::now();
    const DataGrid serial = forward_project_serial(vol, params, SurfaceKind::Lemon, quad);
    auto t1 = Clock::now();
    const DataGrid parallel = forward_project(vol, params, SurfaceKind::Lemon, quad);
    auto t2 = Clock::now();

    double fwdDiff = 0.0;
    for (size_t i = 0; i < serial.values.size(); ++i)
        fwdDiff = std::max(fwdDiff, std::abs(serial.values[i] - parallel.values[i]));
    std::printf("forward  serial %.3fs  omp %.3fs  speedup %.2fx  maxdiff %.3e\n",
                seconds(t0, t1), seconds(t1, t2),
                seconds(t0, t1) / std::max(seconds(t1, t2), 1e-12), fwdDiff);

    const VoxelGrid spec = VoxelGrid::cube(gridN, 1.0);
    auto t3 = Clock::now();
    const VoxelGrid adjS = adjoint_project_serial(serial, SurfaceKind::Lemon, quad, spec);
    auto t4 = Clock::now();
    const VoxelGrid adjP = adjoint_project(serial, SurfaceKind::Lemon, quad, spec);
    auto t5 = Clock::now();

    double adjDiff = 0.0;
    for (size_t i = 0; i < adjS.values.size(); ++i)
        adjDiff = std::max(adjDiff, std::abs(adjS.values[i] - adjP.values[i]));
    std::printf("adjoint  serial %.3fs  omp %.3fs  speedup %.2fx  maxdiff %.3e\n",
                seconds(t3, t4), seconds(t4, t5),
                seconds(t3, t4) / std::max(seconds(t4, t5), 1e-12), adjDiff);
    return 0;
}
