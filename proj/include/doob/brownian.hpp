#pragma once

#include <functional>
#include <optional>

#include "doob/gridpath.hpp"
#include "doob/martingale.hpp"
#include "doob/mc.hpp"

namespace doob::bm {

// A bounded functional of a path on [0, horizon]. The declared bound is a
// hard contract: Monte Carlo confidence intervals price it in, and runs
// reject evaluations that escape it (an unbounded functional has no
// computable conditional expectation; see the counterexample module).
struct PathFunctional {
    Rational horizon;
    double bound;
    std::function<double(const GridPath&)> eval;
};

struct Estimate {
    double value = 0.0;
    double half_width = 0.0;  // Hoeffding at confidence 0.95
    std::size_t samples = 0;
};

// E_t(f)(prefix): Monte Carlo mean of f(prefix ⌢ V) over fresh Brownian
// continuations V, with a Hoeffding half-width from the declared bound.
Estimate cond_expectation_t(const PathFunctional& f, const GridPath& prefix,
                            std::size_t n_samples, std::uint64_t seed,
                            mc::Exec exec = mc::Exec::Parallel);

// A martingale on path space, evaluated from a prefix: eval(W restricted to
// [0,t]) = M_t(W). Adaptedness is structural: the evaluator is only ever
// handed the prefix. time_grid is the index set S, bound the growth bound d.
struct PathMartingale {
    std::function<double(const GridPath& prefix)> eval;
    std::vector<Rational> time_grid;
    std::function<double(const Rational& s)> bound;  // optional
};

// N_t = E_t(M_{s_n}) for the first grid time s_n > t (Monte Carlo), with the
// confidence interval priced from d(s_n). The growth bound is a hard
// prerequisite. force_index overrides the choice of s_n (for the invariance
// check); it must still satisfy s_{force_index} > t.
Estimate extend_grid_martingale(const PathMartingale& m, const Rational& t,
                                const GridPath& prefix, std::size_t n_samples,
                                std::uint64_t seed,
                                std::optional<std::size_t> force_index = std::nullopt,
                                mc::Exec exec = mc::Exec::Parallel);

// Continuous-time Doob transforms along a grid trajectory. Crossing times
// are solved exactly on the linear segments and reported; the capital
// recursion latches phase changes at grid points, which keeps the transform
// an exact martingale of the grid increments.
struct PathTransformResult {
    std::vector<double> values;          // transformed trajectory at grid times
    std::vector<mart::StopMark> stops;   // grid steps where phases latched
    std::vector<double> exact_times;     // interpolated hit time per stop
};

PathTransformResult continuous_upcrossing(const std::vector<double>& m_values,
                                          const Rational& dt, double a, double b);
PathTransformResult continuous_savings(const std::vector<double>& m_values,
                                       const Rational& dt);

// Martingale-level wrappers: evaluate M along the prefix grid, transform.
PathMartingale continuous_upcrossing_transform(PathMartingale m, double a, double b);
PathMartingale continuous_savings_transform(PathMartingale m);

// Levels in [lo,hi] carrying zero empirical mass: strictly between adjacent
// distinct sample values, widest gaps first (each chosen gap splits in two).
std::vector<double> select_nonatom_levels(std::vector<double> samples, double lo,
                                          double hi, std::size_t count);

}  // namespace doob::bm
