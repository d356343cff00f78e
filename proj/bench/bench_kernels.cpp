// Serial-reference vs OpenMP timing for the Monte Carlo kernels. The two
// policies are bit-identical by construction (per-sample RNG substreams,
// index-ordered reduction); this target measures the speedup only.
//
//   ./build/bench/doob_bench [samples]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "doob/brownian.hpp"
#include "doob/convergence.hpp"

using namespace doob;

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

template <typename F>
void row(const char* name, F&& run) {
    const auto t0 = std::chrono::steady_clock::now();
    const double serial = run(mc::Exec::Serial);
    const auto t1 = std::chrono::steady_clock::now();
    const double parallel = run(mc::Exec::Parallel);
    const auto t2 = std::chrono::steady_clock::now();
    const double ts = seconds(t0, t1), tp = seconds(t1, t2);
    if (serial != parallel) {
        std::printf("%-28s MISMATCH (%.17g vs %.17g)\n", name, serial, parallel);
        std::exit(1);
    }
    std::printf("%-28s serial %8.3fs   openmp %8.3fs   speedup %.2fx\n", name, ts, tp,
                ts / tp);
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;
#ifdef _OPENMP
    std::printf("threads: %d, samples: %zu\n", omp_get_max_threads(), n);
#else
    std::printf("threads: 1 (no OpenMP), samples: %zu\n", n);
#endif

    row("game capital, 256 steps", [&](mc::Exec exec) {
        lab::GameConfig cfg;
        cfg.steps = 256;
        cfg.row_width = 8;
        lab::ConvergenceConfig cc;
        cc.samples = n;
        cc.horizon = cfg.steps;
        cc.exec = exec;
        auto rep = lab::convergence_report(
            lab::game_sampler(lab::row_echo_strategy(8),
                              lab::ScenarioSource::uniform(7), cfg),
            cc);
        return rep.mean_final + rep.oscillation_fraction;
    });

    row("brownian paths, 256 steps", [&](mc::Exec exec) {
        std::vector<double> ends(n);
        mc::for_samples(n, exec, [&](std::size_t i) {
            ends[i] = bm::sample_path(rat(4), rat(1, 64), rng::derive(11, i))
                          .values()
                          .back();
        });
        double s = 0;
        for (double e : ends) s += e;
        return s / static_cast<double>(n);
    });

    row("conditional expectation E_t", [&](mc::Exec exec) {
        bm::PathFunctional f{rat(2), 4.0, [](const bm::GridPath& w) {
                                 return std::clamp(w.values().back(), -4.0, 4.0);
                             }};
        auto prefix = bm::sample_path(rat(1), rat(1, 64), 5);
        return bm::cond_expectation_t(f, prefix, n, 13, exec).value;
    });

    return 0;
}
