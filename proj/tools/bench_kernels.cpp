// Times the OpenMP solver kernels against the serial reference on large
// grids. The two paths compute identical arithmetic per cell, so this also
// sanity-checks that parallelization changes nothing.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "isoflow/fokker_planck.hpp"
#include "isoflow/parallel.hpp"
#include "isoflow/rescaled_solver.hpp"

using namespace isoflow;

namespace {

double time_ms(int reps, const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", max_threads());
    std::printf("%-22s %10s %12s %12s %9s\n", "kernel", "n", "serial[ms]", "openmp[ms]", "speedup");

    for (int n : {1 << 14, 1 << 17, 1 << 20}) {
        const Grid1D grid = Grid1D::uniform(10.0, n);
        TauParams tp;
        const TauTrajectory traj = integrate_tau(tp, 1.0);

        FluidState1D st;
        st.grid = grid;
        st.theta = 1.0;
        st.model.eps = 0.5;
        st.model.nu = 0.2;
        st.R.resize(static_cast<std::size_t>(n));
        st.RU.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double y = grid.centers[static_cast<std::size_t>(i)];
            st.R[static_cast<std::size_t>(i)] = std::exp(-y * y);
            st.RU[static_cast<std::size_t>(i)] = 0.1 * y * st.R[static_cast<std::size_t>(i)];
        }
        const double dt = 0.5 * stable_dt(st, traj);
        const int reps = n > (1 << 18) ? 5 : 20;
        const double ts = time_ms(reps, [&] { step(st, traj, dt, Exec::Serial); });
        const double tp_ = time_ms(reps, [&] { step(st, traj, dt, Exec::Parallel); });
        std::printf("%-22s %10d %12.3f %12.3f %8.2fx\n", "rescaled_solver.step", n, ts, tp_,
                    ts / tp_);

        FPState fp;
        fp.grid = grid;
        fp.R = st.R;
        const double ds = 0.9 * fp_stable_ds(grid);
        const double fs = time_ms(reps, [&] { fp_step(fp, ds, Exec::Serial); });
        const double fpar = time_ms(reps, [&] { fp_step(fp, ds, Exec::Parallel); });
        std::printf("%-22s %10d %12.3f %12.3f %8.2fx\n", "fokker_planck.fp_step", n, fs, fpar,
                    fs / fpar);
    }
    return 0;
}
