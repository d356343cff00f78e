#include "doob/gridpath.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "doob/errors.hpp"
#include "doob/normal.hpp"
#include "doob/rng.hpp"

namespace doob::bm {

namespace {

void require_positive(const Rational& dt) {
    if (sgn(dt) <= 0) throw DomainError("grid step must be positive");
}

// s/dt as an exact nonnegative integer, or nothing
std::optional<std::size_t> grid_index(const Rational& s, const Rational& dt) {
    Rational q = s / dt;
    q.canonicalize();
    if (q.get_den() != 1 || sgn(q) < 0) return std::nullopt;
    if (!q.get_num().fits_ulong_p()) return std::nullopt;
    return static_cast<std::size_t>(q.get_num().get_ui());
}

}  // namespace

GridPath GridPath::from_increments(Rational dt, double origin,
                                   std::vector<double> increments) {
    require_positive(dt);
    GridPath p;
    p.dt_ = std::move(dt);
    p.increments_ = std::move(increments);
    p.values_.clear();
    p.values_.reserve(p.increments_.size() + 1);
    p.values_.push_back(origin);
    for (double d : p.increments_) p.values_.push_back(p.values_.back() + d);
    return p;
}

GridPath GridPath::from_values(Rational dt, const std::vector<double>& values) {
    if (values.empty()) throw DomainError("a grid path needs at least its origin value");
    std::vector<double> inc;
    inc.reserve(values.size() - 1);
    for (std::size_t i = 1; i < values.size(); ++i) inc.push_back(values[i] - values[i - 1]);
    return from_increments(std::move(dt), values.front(), std::move(inc));
}

double GridPath::value_at_time(double t) const {
    const double dt = to_double(dt_);
    const double T = dt * static_cast<double>(steps());
    if (t < 0.0 || t > T) throw DomainError("time outside the materialized path");
    if (steps() == 0) return values_.front();
    std::size_t i = static_cast<std::size_t>(t / dt);
    if (i >= steps()) i = steps() - 1;
    const double t0 = dt * static_cast<double>(i);
    const double w = (t - t0) / dt;
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

std::string GridPath::to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "t,value\n";
    for (std::size_t i = 0; i < values_.size(); ++i)
        out << time_of(i) << "," << values_[i] << "\n";
    return out.str();
}

GridPath sample_path(const Rational& T, const Rational& dt, std::uint64_t seed) {
    require_positive(dt);
    if (sgn(T) <= 0) throw DomainError("path horizon must be positive");
    const auto n = grid_index(T, dt);
    if (!n || *n == 0) throw DomainError("path horizon must be a positive multiple of dt");
    rng::Stream stream(seed);
    const double sd = std::sqrt(to_double(dt));
    std::vector<double> inc(*n);
    for (double& d : inc) d = sd * norm_cdf_inv(stream.uniform01());
    return GridPath::from_increments(dt, 0.0, std::move(inc));
}

GridPath concat_paths(const GridPath& w, const Rational& s, const GridPath& v) {
    if (!(w.dt() == v.dt())) throw DomainError("concatenation needs a shared grid step");
    if (!v.origin_zero()) throw DomainError("the continuation path must start at 0");
    const auto k = grid_index(s, w.dt());
    if (!k || *k > w.steps())
        throw DomainError("concatenation time is off the prefix grid");
    std::vector<double> inc(w.increments().begin(),
                            w.increments().begin() + static_cast<std::ptrdiff_t>(*k));
    inc.insert(inc.end(), v.increments().begin(), v.increments().end());
    return GridPath::from_increments(w.dt(), w.origin(), std::move(inc));
}

std::pair<GridPath, GridPath> split_path(const GridPath& w, const Rational& s) {
    const auto k = grid_index(s, w.dt());
    if (!k || *k > w.steps()) throw DomainError("split time is off the grid");
    std::vector<double> head(w.increments().begin(),
                             w.increments().begin() + static_cast<std::ptrdiff_t>(*k));
    std::vector<double> tail(w.increments().begin() + static_cast<std::ptrdiff_t>(*k),
                             w.increments().end());
    return {GridPath::from_increments(w.dt(), w.origin(), std::move(head)),
            GridPath::from_increments(w.dt(), 0.0, std::move(tail))};
}

HitResult hitting_time(const GridPath& f, double start, double level) {
    const double dt = to_double(f.dt());
    const double T = dt * static_cast<double>(f.steps());
    HitResult out;
    out.horizon = T;
    if (start < 0.0) start = 0.0;
    if (start > T) return out;
    if (f.value_at_time(start) == level) {
        out.hit = true;
        out.time = start;
        return out;
    }
    const auto& v = f.values();
    std::size_t first = static_cast<std::size_t>(start / dt);
    for (std::size_t i = first; i < f.steps(); ++i) {
        const double t0 = dt * static_cast<double>(i);
        const double t1 = t0 + dt;
        if (t1 < start) continue;
        const double lo = std::min(v[i], v[i + 1]);
        const double hi = std::max(v[i], v[i + 1]);
        if (level < lo || level > hi) continue;
        double t;
        if (v[i + 1] == v[i]) {
            t = std::max(t0, start);  // flat segment at the level
        } else {
            t = t0 + dt * (level - v[i]) / (v[i + 1] - v[i]);
            if (t < start) continue;  // crossing happened before the start time
        }
        out.hit = true;
        out.time = t;
        return out;
    }
    return out;
}

}  // namespace doob::bm
