#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "doob/rational.hpp"

namespace doob::bm {

// A piecewise-linear path on the uniform grid 0, dt, 2dt, ... The increment
// stream is the authoritative data; values are its running sums, so
// splitting at a grid time and concatenating back reproduces the original
// bit for bit (no subtraction ever enters the round trip).
class GridPath {
public:
    GridPath() : dt_(1), values_{0.0} {}

    static GridPath from_increments(Rational dt, double origin,
                                    std::vector<double> increments);
    // Values are normalized through their increment stream; entries may move
    // by rounding ulps relative to the input.
    static GridPath from_values(Rational dt, const std::vector<double>& values);

    const Rational& dt() const { return dt_; }
    std::size_t steps() const { return increments_.size(); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& increments() const { return increments_; }

    double origin() const { return values_.front(); }
    bool origin_zero() const { return values_.front() == 0.0; }
    Rational end_time() const { return dt_ * Rational(static_cast<long>(steps())); }
    double time_of(std::size_t i) const { return to_double(dt_) * static_cast<double>(i); }

    // Linear interpolation; t must lie in [0, end_time].
    double value_at_time(double t) const;

    // CSV rows "t,value".
    std::string to_csv() const;

private:
    Rational dt_;
    std::vector<double> increments_;  // increments_[i] = step from t_i to t_{i+1}
    std::vector<double> values_;      // running sums, size steps()+1
};

// Brownian sample: increments i.i.d. normal(0, dt). T must be a multiple of dt.
GridPath sample_path(const Rational& T, const Rational& dt, std::uint64_t seed);

// Concatenation at grid time s: W on [0,s], then W_s + V. V must start at 0
// and share the grid step.
GridPath concat_paths(const GridPath& w, const Rational& s, const GridPath& v);

// Inverse: (W restricted to [0,s], the tail re-based to start at 0).
std::pair<GridPath, GridPath> split_path(const GridPath& w, const Rational& s);

// First time >= start at which the interpolated path equals `level`, solved
// exactly on each linear segment. Explicitly reports "not hit by T" instead
// of inventing a finite time.
struct HitResult {
    bool hit = false;
    double time = 0.0;     // valid when hit
    double horizon = 0.0;  // end of the materialized path
};
HitResult hitting_time(const GridPath& f, double start, double level);

}  // namespace doob::bm
