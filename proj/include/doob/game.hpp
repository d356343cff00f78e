#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "doob/martingale.hpp"
#include "doob/scenario.hpp"

namespace doob::lab {

using bits::BitAssignment;
using bits::Position;
using bits::PositionSet;
using mart::StopMark;

// What a strategy sees before each bet: the current cell, the bits of the
// current row it has already bet on, and every earlier row in full (including
// bits it never bet on), exactly the oracle access of the row game.
struct StrategyView {
    std::uint32_t row;
    std::uint32_t col;
    const std::vector<bool>& seen;          // bits of the current row bet so far
    const std::vector<std::vector<bool>>& oracle;
};

// A row-progression betting strategy. Stakes are signed fractions of current
// capital in [-1, 1]: positive predicts the next bit is 1, negative predicts
// 0, so capital can never go below zero. Advancing to the next row is either
// adaptive (advance()) or forced by the non-adaptive column schedule; when a
// schedule is present it takes over completely.
class RowStrategy {
public:
    virtual ~RowStrategy() = default;
    virtual Rational stake_fraction(const StrategyView& view) const = 0;
    // hot-loop variant for mass Monte Carlo; overridden by the built-ins
    virtual double stake_fraction_double(const StrategyView& view) const {
        return to_double(stake_fraction(view));
    }
    virtual bool advance(const StrategyView& view) const { (void)view; return false; }
    // k(m) per row; rows beyond the table reuse the last entry
    virtual const std::vector<std::uint32_t>* k_schedule() const { return nullptr; }
};

struct Trajectory {
    BitAssignment sample;          // every bit read: bets and oracle reveals
    std::vector<Rational> values;  // capital after 0..steps bets
    std::vector<StopMark> stops;
};

struct GameConfig {
    std::size_t steps = 16;
    std::uint32_t row_width = 8;  // materialized width of a revealed row
    Rational start_capital = Rational(1);
};

Trajectory run_game(const RowStrategy& strategy, const ScenarioSource& source,
                    const GameConfig& cfg);

// Double-valued fast path for mass Monte Carlo; identical game semantics.
std::vector<double> run_game_values(const RowStrategy& strategy,
                                    const ScenarioSource& source,
                                    const GameConfig& cfg);

// Materializes the capital process of a schedule-driven strategy as an exact
// martingale over the explicit chain of revealed positions. Requires a
// k_schedule: only a fixed read order has a fixed chain.
mart::MartingaleSpec materialize_game(const RowStrategy& strategy, const GameConfig& cfg);

// Completed upcrossings of [a,b]: excursions that reach <= a and then >= b.
template <typename V>
std::size_t count_upcrossings(const std::vector<V>& values, const V& a, const V& b) {
    if (!(a < b)) throw DomainError("count_upcrossings needs a < b");
    std::size_t count = 0;
    bool armed = false;  // saw <= a, waiting for >= b
    for (const V& v : values) {
        if (armed && v >= b) {
            ++count;
            armed = false;
        }
        if (v <= a) armed = true;
    }
    return count;
}

// --- built-in strategies ----------------------------------------------------

// never stakes anything
std::shared_ptr<RowStrategy> zero_strategy();
// full capital on "the next row-0 bit is 0", never advances
std::shared_ptr<RowStrategy> bold_zero_strategy();
// full capital on "the next row-0 bit is 0" for the first n bets, then holds
std::shared_ptr<RowStrategy> bold_until_strategy(std::uint32_t n);
// stake c/(t+2) on bit 1 at global step t; converges along every path
std::shared_ptr<RowStrategy> shrinking_stake_strategy(Rational c);
// predicts that column j of the current row repeats the previous row, stake
// 1/(row+2), advancing every `width` bets on a fixed schedule
std::shared_ptr<RowStrategy> row_echo_strategy(std::uint32_t width);

}  // namespace doob::lab
