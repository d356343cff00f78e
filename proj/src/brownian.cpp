#include "doob/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "doob/rng.hpp"

namespace doob::bm {

namespace {

constexpr double kDelta = 0.05;  // Hoeffding confidence 1 - delta

double hoeffding_half_width(double bound, std::size_t n) {
    return bound * std::sqrt(2.0 * std::log(2.0 / kDelta) / static_cast<double>(n));
}

}  // namespace

Estimate cond_expectation_t(const PathFunctional& f, const GridPath& prefix,
                            std::size_t n_samples, std::uint64_t seed, mc::Exec exec) {
    if (!(f.bound > 0.0) || !std::isfinite(f.bound))
        throw DomainError("path functional needs a finite positive bound");
    if (n_samples == 0) throw DomainError("conditional expectation needs samples");
    const Rational t = prefix.end_time();
    Rational gap = f.horizon - t;
    gap.canonicalize();
    if (sgn(gap) < 0) throw DomainError("prefix extends beyond the functional horizon");

    std::vector<double> xs(n_samples);
    mc::for_samples(n_samples, exec, [&](std::size_t i) {
        GridPath whole = prefix;
        if (sgn(gap) > 0) {
            const GridPath v = sample_path(gap, prefix.dt(), rng::derive(seed, i));
            whole = concat_paths(prefix, t, v);
        }
        const double x = f.eval(whole);
        if (!(std::fabs(x) <= f.bound))
            throw DomainError("functional value " + std::to_string(x) +
                              " escapes its declared bound " + std::to_string(f.bound));
        xs[i] = x;
    });
    double sum = 0.0;
    for (double x : xs) sum += x;
    return Estimate{sum / static_cast<double>(n_samples),
                    hoeffding_half_width(f.bound, n_samples), n_samples};
}

Estimate extend_grid_martingale(const PathMartingale& m, const Rational& t,
                                const GridPath& prefix, std::size_t n_samples,
                                std::uint64_t seed, std::optional<std::size_t> force_index,
                                mc::Exec exec) {
    if (!m.bound)
        throw DomainError(
            "extension off the time grid needs the growth bound d (without it the "
            "conditional expectation is not computable)");
    for (std::size_t i = 1; i < m.time_grid.size(); ++i)
        if (!(m.time_grid[i - 1] < m.time_grid[i]))
            throw DomainError("the time grid must be strictly increasing");
    if (!(prefix.end_time() == t))
        throw DomainError("prefix must be materialized exactly to t");
    std::size_t pick = SIZE_MAX;
    for (std::size_t i = 0; i < m.time_grid.size(); ++i)
        if (m.time_grid[i] > t) {
            pick = i;
            break;
        }
    if (force_index) {
        if (*force_index >= m.time_grid.size() || !(m.time_grid[*force_index] > t))
            throw DomainError("forced grid index does not lie beyond t");
        pick = *force_index;
    }
    if (pick == SIZE_MAX) throw DomainError("no grid time beyond t is materialized");
    const Rational s = m.time_grid[pick];

    PathFunctional f;
    f.horizon = s;
    f.bound = m.bound(s);
    f.eval = [&m](const GridPath& w) { return m.eval(w); };
    return cond_expectation_t(f, prefix, n_samples, seed, exec);
}

// ---------------------------------------------------------------------------
// continuous transforms

namespace {

// exact interpolated time at which the segment ending at grid step `i`
// crosses `level`
double segment_hit_time(const std::vector<double>& v, const Rational& dt,
                        std::size_t i, double level) {
    const double step = to_double(dt);
    if (i == 0) return 0.0;
    const double v0 = v[i - 1], v1 = v[i];
    if (v1 == v0) return step * static_cast<double>(i);
    double w = (level - v0) / (v1 - v0);
    w = std::clamp(w, 0.0, 1.0);
    return step * (static_cast<double>(i - 1) + w);
}

}  // namespace

PathTransformResult continuous_upcrossing(const std::vector<double>& m_values,
                                          const Rational& dt, double a, double b) {
    if (!(a < b)) throw DomainError("upcrossing transform needs a < b");
    PathTransformResult out;
    out.values = mart::upcrossing_path<double>(m_values, a, b, &out.stops);
    out.exact_times.reserve(out.stops.size());
    for (const auto& s : out.stops)
        out.exact_times.push_back(segment_hit_time(
            m_values, dt, s.step,
            s.kind == mart::StopMark::Kind::SigmaDown ? b : a));
    return out;
}

PathTransformResult continuous_savings(const std::vector<double>& m_values,
                                       const Rational& dt) {
    PathTransformResult out;
    out.values = mart::savings_path<double>(m_values, &out.stops);
    out.exact_times.reserve(out.stops.size());
    double m_tau = m_values.empty() ? 0.0 : m_values.front();
    for (const auto& s : out.stops) {
        if (s.step == 0) {
            out.exact_times.push_back(0.0);
            continue;
        }
        const double target = 2.0 * m_tau;
        out.exact_times.push_back(segment_hit_time(m_values, dt, s.step, target));
        m_tau = m_values[s.step];
    }
    return out;
}

namespace {

std::vector<double> trajectory_of(const PathMartingale& m, const GridPath& prefix) {
    std::vector<double> values;
    values.reserve(prefix.steps() + 1);
    for (std::size_t i = 0; i <= prefix.steps(); ++i) {
        auto [head, tail] = split_path(prefix, prefix.dt() * Rational(static_cast<long>(i)));
        (void)tail;
        values.push_back(m.eval(head));
    }
    return values;
}

}  // namespace

PathMartingale continuous_upcrossing_transform(PathMartingale m, double a, double b) {
    if (!(a < b)) throw DomainError("upcrossing transform needs a < b");
    PathMartingale out;
    out.time_grid = m.time_grid;
    out.bound = nullptr;  // the transform has no a-priori growth bound
    out.eval = [m = std::move(m), a, b](const GridPath& prefix) {
        auto values = trajectory_of(m, prefix);
        return mart::upcrossing_path<double>(values, a, b).back();
    };
    return out;
}

PathMartingale continuous_savings_transform(PathMartingale m) {
    PathMartingale out;
    out.time_grid = m.time_grid;
    out.bound = nullptr;
    out.eval = [m = std::move(m)](const GridPath& prefix) {
        auto values = trajectory_of(m, prefix);
        return mart::savings_path<double>(values).back();
    };
    return out;
}

// ---------------------------------------------------------------------------
// non-atom level selection

std::vector<double> select_nonatom_levels(std::vector<double> samples, double lo,
                                          double hi, std::size_t count) {
    if (!(lo < hi)) throw DomainError("level selection needs lo < hi");
    if (count == 0) return {};
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

    // gap endpoints: the interval borders plus every distinct sample inside
    std::vector<double> cuts{lo};
    for (double s : samples)
        if (s > lo && s < hi) cuts.push_back(s);
    cuts.push_back(hi);

    using Gap = std::pair<double, std::pair<double, double>>;  // width, (l, r)
    std::priority_queue<Gap> gaps;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i])
            gaps.push({cuts[i + 1] - cuts[i], {cuts[i], cuts[i + 1]}});

    std::vector<double> levels;
    std::vector<bool> taken;  // guards against degenerate midpoints
    while (levels.size() < count) {
        if (gaps.empty())
            throw DomainError("interval saturated: no positive-width gap remains");
        auto [width, g] = gaps.top();
        gaps.pop();
        const double mid = 0.5 * (g.first + g.second);
        if (!(mid > g.first && mid < g.second))
            throw DomainError("interval saturated at floating-point resolution");
        const bool is_sample =
            std::binary_search(samples.begin(), samples.end(), mid);
        if (!is_sample) levels.push_back(mid);
        gaps.push({mid - g.first, {g.first, mid}});
        gaps.push({g.second - mid, {mid, g.second}});
    }
    return levels;
}

}  // namespace doob::bm
