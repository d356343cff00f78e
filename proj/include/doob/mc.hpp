#pragma once

#include <cmath>
#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace doob::mc {

// Execution policy for the sample loops. Parallel fills per-sample slots with
// OpenMP; every aggregate is then reduced serially in index order, so both
// policies produce bit-identical results. Serial is the reference the tests
// and the benchmark compare against.
enum class Exec { Serial, Parallel };

template <typename F>
void for_samples(std::size_t n, Exec exec, F&& body) {
    if (exec == Exec::Parallel) {
        // exceptions cannot unwind out of an OpenMP region: park the first
        // one and rethrow once every thread has joined
        std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                body(static_cast<std::size_t>(i));
            } catch (...) {
#ifdef _OPENMP
#pragma omp critical(doob_mc_error)
#endif
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
    } else {
        for (std::size_t i = 0; i < n; ++i) body(i);
    }
}

// Mean / sample standard error, reduced in index order.
struct MeanStats {
    double mean = 0.0;
    double stddev = 0.0;
    double stderror = 0.0;
    std::size_t n = 0;
};

inline MeanStats mean_stats(const std::vector<double>& xs) {
    MeanStats s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    if (s.n > 1) {
        s.stddev = std::sqrt(ss / static_cast<double>(s.n - 1));
        s.stderror = s.stddev / std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

}  // namespace doob::mc
