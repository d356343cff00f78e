#include "doob/game.hpp"

#include <algorithm>

namespace doob::lab {

namespace {

void place_bet(const RowStrategy& strategy, const StrategyView& view, bool bit,
               Rational& capital) {
    const Rational f = strategy.stake_fraction(view);
    if (f < -1 || f > 1)
        throw DomainError("stake fraction " + to_fraction_string(f) +
                          " exceeds current capital");
    // capital += stake * (2b - 1), stake = f * capital
    capital += capital * f * (bit ? 1 : -1);
}

void place_bet(const RowStrategy& strategy, const StrategyView& view, bool bit,
               double& capital) {
    const double f = strategy.stake_fraction_double(view);
    if (!(f >= -1.0 && f <= 1.0))
        throw DomainError("stake fraction " + std::to_string(f) +
                          " exceeds current capital");
    capital += capital * f * (bit ? 1.0 : -1.0);
}

// One game run. bit_at(row, col) supplies the array, on_read(pos, bit, is_bet)
// observes every bit the gambler consumes, in order.
template <typename V, typename BitFn, typename ReadFn>
std::vector<V> game_core(const RowStrategy& strategy, std::size_t steps, V start,
                         std::uint32_t width, BitFn&& bit_at, ReadFn&& on_read) {
    const auto* schedule = strategy.k_schedule();
    auto forced_k = [&](std::uint32_t row) -> std::uint32_t {
        return (*schedule)[std::min<std::size_t>(row, schedule->size() - 1)];
    };
    if (schedule && schedule->empty())
        throw DomainError("empty k_schedule");

    std::vector<std::vector<bool>> oracle;
    std::vector<bool> seen;
    std::uint32_t row = 0, col = 0;
    V capital = start;
    std::vector<V> values{capital};

    for (std::size_t t = 1; t <= steps; ++t) {
        int advances = 0;
        for (;;) {
            bool go = schedule
                          ? col >= forced_k(row)
                          : strategy.advance(StrategyView{row, col, seen, oracle});
            if (!go) break;
            if (++advances > 64)
                throw DomainError("strategy advanced through 64 rows without betting");
            // reveal the unbet remainder of the row; it becomes oracle material
            std::vector<bool> full(seen);
            for (std::uint32_t c = col; c < width; ++c) {
                const bool b = bit_at(row, c);
                on_read(Position{row, c}, b, false);
                full.push_back(b);
            }
            oracle.push_back(std::move(full));
            seen.clear();
            ++row;
            col = 0;
        }

        const bool b = bit_at(row, col);
        on_read(Position{row, col}, b, true);
        place_bet(strategy, StrategyView{row, col, seen, oracle}, b, capital);
        seen.push_back(b);
        ++col;
        values.push_back(capital);
    }
    return values;
}

}  // namespace

Trajectory run_game(const RowStrategy& strategy, const ScenarioSource& source,
                    const GameConfig& cfg) {
    if (cfg.steps < 1) throw DomainError("a game needs at least one step");
    Trajectory out;
    out.values = game_core<Rational>(
        strategy, cfg.steps, cfg.start_capital, cfg.row_width,
        [&](std::uint32_t r, std::uint32_t c) { return source.bit(r, c); },
        [&](Position p, bool b, bool) { out.sample.set(p, b); });
    return out;
}

std::vector<double> run_game_values(const RowStrategy& strategy,
                                    const ScenarioSource& source,
                                    const GameConfig& cfg) {
    if (cfg.steps < 1) throw DomainError("a game needs at least one step");
    return game_core<double>(
        strategy, cfg.steps, to_double(cfg.start_capital), cfg.row_width,
        [&](std::uint32_t r, std::uint32_t c) { return source.bit(r, c); },
        [](Position, bool, bool) {});
}

mart::MartingaleSpec materialize_game(const RowStrategy& strategy, const GameConfig& cfg) {
    if (!strategy.k_schedule())
        throw DomainError(
            "materialize_game needs a k_schedule: adaptive row progression has no "
            "fixed read order, hence no fixed chain");

    // pass 1: the read order (value-independent under a schedule)
    struct Event {
        Position pos;
        bool is_bet;
    };
    std::vector<Event> events;
    game_core<Rational>(
        strategy, cfg.steps, cfg.start_capital, cfg.row_width,
        [](std::uint32_t, std::uint32_t) { return false; },
        [&](Position p, bool, bool is_bet) { events.push_back({p, is_bet}); });

    // D_t: everything read before bet t+1 (trailing reveals go to the last set)
    std::vector<std::vector<Position>> chain_positions(cfg.steps + 1);
    {
        std::vector<Position> acc;
        std::size_t bets_seen = 0;
        std::size_t next_boundary = 0;  // chain index whose set is still open
        for (const Event& e : events) {
            if (e.is_bet) {
                ++bets_seen;
                acc.push_back(e.pos);
                // sets D_0 .. D_{bets_seen-1} are the reads before this bet;
                // close D_{bets_seen-1} just before recording it
            } else {
                acc.push_back(e.pos);
            }
            if (e.is_bet) {
                while (next_boundary < bets_seen) {
                    // D_{next_boundary} = reads strictly before bet next_boundary+1
                    std::vector<Position> upto(acc.begin(), acc.end() - 1);
                    chain_positions[next_boundary] = upto;
                    ++next_boundary;
                }
            }
        }
        for (; next_boundary <= cfg.steps; ++next_boundary)
            chain_positions[next_boundary] = acc;
    }

    std::vector<PositionSet> chain_sets;
    chain_sets.reserve(cfg.steps + 1);
    for (auto& ps : chain_positions)
        chain_sets.push_back(PositionSet::explicit_set(ps));

    // pass 2: tabulate capital after t bets over everything read by then
    mart::MartingaleSpec spec;
    spec.chain = mart::TimeChain::sets(chain_sets);
    spec.nonneg = true;
    for (std::size_t t = 0; t <= cfg.steps; ++t) {
        spec.levels.push_back(bits::CylinderFunction::tabulate(
            chain_positions[t], [&](const BitAssignment& a) {
                auto values = game_core<Rational>(
                    strategy, t, cfg.start_capital, cfg.row_width,
                    [&](std::uint32_t r, std::uint32_t c) {
                        return a.at(Position{r, c});
                    },
                    [](Position, bool, bool) {});
                return values.back();
            }));
    }
    return spec;
}

// --- built-in strategies ----------------------------------------------------

namespace {

class ZeroStrategy final : public RowStrategy {
public:
    Rational stake_fraction(const StrategyView&) const override { return Rational(0); }
    double stake_fraction_double(const StrategyView&) const override { return 0.0; }
};

class BoldZeroStrategy final : public RowStrategy {
public:
    Rational stake_fraction(const StrategyView&) const override { return Rational(-1); }
    double stake_fraction_double(const StrategyView&) const override { return -1.0; }
};

class BoldUntilStrategy final : public RowStrategy {
public:
    explicit BoldUntilStrategy(std::uint32_t n) : n_(n) {}
    Rational stake_fraction(const StrategyView& view) const override {
        return view.col < n_ ? Rational(-1) : Rational(0);
    }
    double stake_fraction_double(const StrategyView& view) const override {
        return view.col < n_ ? -1.0 : 0.0;
    }

private:
    std::uint32_t n_;
};

class ShrinkingStakeStrategy final : public RowStrategy {
public:
    explicit ShrinkingStakeStrategy(Rational c) : c_(std::move(c)) {
        if (c_ < -1 || c_ > 1) throw DomainError("shrinking stake needs |c| <= 1");
        c_double_ = to_double(c_);
    }
    Rational stake_fraction(const StrategyView& view) const override {
        Rational f = c_ / Rational(static_cast<long>(view.col) + 2);
        f.canonicalize();
        return f;
    }
    double stake_fraction_double(const StrategyView& view) const override {
        return c_double_ / (static_cast<double>(view.col) + 2.0);
    }

private:
    Rational c_;
    double c_double_ = 0.0;
};

class RowEchoStrategy final : public RowStrategy {
public:
    explicit RowEchoStrategy(std::uint32_t width) : schedule_{width} {
        if (width == 0) throw DomainError("row echo needs a positive row width");
    }
    Rational stake_fraction(const StrategyView& view) const override {
        if (view.row == 0) return Rational(0);
        const auto& prev = view.oracle[view.row - 1];
        if (view.col >= prev.size()) return Rational(0);
        Rational f(1, static_cast<long>(view.row) + 2);
        f.canonicalize();
        return prev[view.col] ? f : Rational(-f);
    }
    double stake_fraction_double(const StrategyView& view) const override {
        if (view.row == 0) return 0.0;
        const auto& prev = view.oracle[view.row - 1];
        if (view.col >= prev.size()) return 0.0;
        const double f = 1.0 / (static_cast<double>(view.row) + 2.0);
        return prev[view.col] ? f : -f;
    }
    const std::vector<std::uint32_t>* k_schedule() const override { return &schedule_; }

private:
    std::vector<std::uint32_t> schedule_;
};

}  // namespace

std::shared_ptr<RowStrategy> zero_strategy() { return std::make_shared<ZeroStrategy>(); }
std::shared_ptr<RowStrategy> bold_zero_strategy() {
    return std::make_shared<BoldZeroStrategy>();
}
std::shared_ptr<RowStrategy> bold_until_strategy(std::uint32_t n) {
    return std::make_shared<BoldUntilStrategy>(n);
}
std::shared_ptr<RowStrategy> shrinking_stake_strategy(Rational c) {
    return std::make_shared<ShrinkingStakeStrategy>(std::move(c));
}
std::shared_ptr<RowStrategy> row_echo_strategy(std::uint32_t width) {
    return std::make_shared<RowEchoStrategy>(width);
}

}  // namespace doob::lab
