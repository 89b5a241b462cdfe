// Timing harness for the two parallel kernels against their serial
// reference paths. Results are identical by construction (indexed slots +
// fixed-order reduction); this only measures the speedup.
#include <chrono>
#include <cstdio>

#include "optirec/applications.hpp"
#include "optirec/lowerbound.hpp"
#include "optirec/noise_sim.hpp"
#include "optirec/parallel.hpp"

using namespace optirec;

namespace {

template <typename F>
double time_sec(F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", thread_cap());
    std::printf("%-34s %10s %10s %8s\n", "kernel", "serial", "parallel", "speedup");

    {
        const DerivativeProblem p{1, 0, 1.0};
        const FrequencyGrid grid(4096, 6.0);
        const OptimalFilter f = solve_cutoff(recovery_problem(p));
        const Spectrum xhat = extremal_spectrum(f, grid);
        const GaussianPointwise model{1.0};
        double rmse_serial = 0.0, rmse_parallel = 0.0;
        const double ts = time_sec([&] {
            rmse_serial = monte_carlo_error(p, xhat, model, 2000, 7, Exec::Serial)
                              .empirical_rmse;
        });
        const double tp = time_sec([&] {
            rmse_parallel = monte_carlo_error(p, xhat, model, 2000, 7, Exec::Parallel)
                                .empirical_rmse;
        });
        std::printf("%-34s %9.3fs %9.3fs %7.2fx%s\n",
                    "monte_carlo_error (2000 x n=4096)", ts, tp, ts / tp,
                    rmse_serial == rmse_parallel ? "" : "  [MISMATCH]");
    }

    {
        const WeightPair pair = WeightPair::heat(2, 0.5);
        const DiscreteGrid grid{4.0, 4096};
        CellMoments serial, parallel;
        const double ts =
            time_sec([&] { serial = cell_moments(grid, pair, {}, Exec::Serial); });
        const double tp =
            time_sec([&] { parallel = cell_moments(grid, pair, {}, Exec::Parallel); });
        const bool same = serial.mu == parallel.mu && serial.nu == parallel.nu;
        std::printf("%-34s %9.3fs %9.3fs %7.2fx%s\n", "cell_moments (8192 cells)", ts,
                    tp, ts / tp, same ? "" : "  [MISMATCH]");
    }

    return 0;
}
