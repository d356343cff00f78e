#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "doob/convergence.hpp"
#include "test_util.hpp"

using namespace doob;
using namespace doob::bits;
using namespace doob::lab;
using testutil::Rng;

namespace {

Position P(std::uint32_t r, std::uint32_t c) { return Position{r, c}; }

using testutil::HashedStrategy;

// Independent upcrossing-count oracle: dynamic program over (index, phase)
// rather than the sequential scan.
std::size_t upcrossings_dp(const std::vector<Rational>& v, const Rational& a,
                           const Rational& b) {
    // best[0] = max completed crossings while hunting a dip, best[1] = while
    // armed; computed backwards
    std::size_t n = v.size();
    std::vector<std::array<std::size_t, 2>> best(n + 1, {0, 0});
    for (std::size_t i = n; i-- > 0;) {
        best[i][0] = best[i + 1][0];
        if (v[i] <= a) best[i][0] = std::max(best[i][0], best[i + 1][1]);
        best[i][1] = best[i + 1][1];
        if (v[i] >= b) best[i][1] = std::max(best[i][1], 1 + best[i + 1][0]);
    }
    return best[0][0];
}

}  // namespace

TEST_CASE("zero-stake strategy keeps capital constant") {
    GameConfig cfg;
    cfg.steps = 12;
    auto t = run_game(*zero_strategy(), ScenarioSource::uniform(7), cfg);
    for (const auto& v : t.values) CHECK(v == rat(1));
}

TEST_CASE("bold zero bettor doubles n times on the zero first row") {
    GameConfig cfg;
    cfg.steps = 10;
    cfg.start_capital = rat(3);
    auto t = run_game(*bold_zero_strategy(), ScenarioSource::zero_first_row(5), cfg);
    Rational expect = rat(3);
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        CHECK(t.values[i] == expect);
        expect *= 2;
    }
    CHECK(t.values.back() == rat(3) * rat(1024));
}

TEST_CASE("capital never goes negative, stakes beyond capital are rejected") {
    Rng rng(50);
    GameConfig cfg;
    cfg.steps = 20;
    cfg.row_width = 4;
    for (int trial = 0; trial < 10; ++trial) {
        HashedStrategy s(rng.next(), {3, 2, 4});
        auto t = run_game(s, ScenarioSource::uniform(rng.next()), cfg);
        for (const auto& v : t.values) CHECK(v >= 0);
    }

    struct Overbet final : RowStrategy {
        Rational stake_fraction(const StrategyView&) const override { return rat(3, 2); }
    };
    CHECK_THROWS_AS(run_game(Overbet{}, ScenarioSource::uniform(1), cfg), DomainError);
}

TEST_CASE("game capital materialized as cylinder functions verifies exactly") {
    Rng rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        GameConfig cfg;
        cfg.steps = 4;
        cfg.row_width = 2;
        cfg.start_capital = rat(1 + static_cast<long>(rng.below(3)));
        HashedStrategy s(rng.next(),
                         {static_cast<std::uint32_t>(1 + rng.below(3)),
                          static_cast<std::uint32_t>(1 + rng.below(3))});
        auto spec = materialize_game(s, cfg);
        REQUIRE(spec.size() == cfg.steps + 1);
        auto r = mart::verify(spec);
        INFO(r.message);
        CHECK(r.ok);

        // the materialized functions reproduce actual runs bit for bit
        for (int run = 0; run < 5; ++run) {
            auto src = ScenarioSource::uniform(rng.next());
            auto t = run_game(s, src, cfg);
            auto replay = mart::evaluate_path(spec, t.sample);
            CHECK(replay == t.values);
        }
    }
}

TEST_CASE("materialize_game refuses adaptive progression") {
    struct Adaptive final : RowStrategy {
        Rational stake_fraction(const StrategyView&) const override { return rat(0); }
        bool advance(const StrategyView& v) const override {
            return !v.seen.empty() && v.seen.back();
        }
    };
    GameConfig cfg;
    cfg.steps = 3;
    CHECK_THROWS_AS(materialize_game(Adaptive{}, cfg), DomainError);
}

TEST_CASE("count_upcrossings: worked example and monotone case") {
    std::vector<Rational> v = {rat(1), rat(3), rat(1), rat(3), rat(1), rat(3)};
    CHECK(count_upcrossings(v, rat(3, 2), rat(5, 2)) == 3);

    std::vector<Rational> mono = {rat(5), rat(4), rat(4), rat(2), rat(1)};
    CHECK(count_upcrossings(mono, rat(3, 2), rat(5, 2)) == 0);

    CHECK_THROWS_AS(count_upcrossings(v, rat(2), rat(2)), DomainError);
}

TEST_CASE("count_upcrossings agrees with a dynamic-programming oracle") {
    Rng rng(52);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Rational> v;
        for (int i = 0; i < 14; ++i) v.push_back(rat(static_cast<long>(rng.below(6))));
        Rational a = rat(1 + static_cast<long>(rng.below(2)));
        Rational b = a + 1 + static_cast<long>(rng.below(2));
        CHECK(count_upcrossings(v, a, b) == upcrossings_dp(v, a, b));
    }
}

TEST_CASE("count_upcrossings is monotone in the band") {
    Rng rng(53);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> v;
        for (int i = 0; i < 12; ++i) v.push_back(rat(static_cast<long>(rng.below(8))));
        // raising b cannot create crossings
        CHECK(count_upcrossings(v, rat(2), rat(5)) <= count_upcrossings(v, rat(2), rat(4)));
        // shrinking the band from both sides cannot destroy crossings
        CHECK(count_upcrossings(v, rat(2), rat(5)) <= count_upcrossings(v, rat(3), rat(4)));
    }
}

TEST_CASE("mean capital is preserved under the uniform source") {
    // 2000 samples at 4 stderr: quick smoke version of the acceptance check
    GameConfig cfg;
    cfg.steps = 32;
    cfg.row_width = 4;
    ConvergenceConfig cc;
    cc.samples = 2000;
    cc.horizon = cfg.steps;
    for (auto strategy : {shrinking_stake_strategy(rat(1, 2)), row_echo_strategy(4),
                          bold_until_strategy(5)}) {
        auto rep = convergence_report(
            game_sampler(strategy, ScenarioSource::uniform(99), cfg), cc);
        CHECK(std::abs(rep.mean_final - 1.0) <= 4.0 * rep.stderr_final + 1e-12);
    }
}

TEST_CASE("bold bettor hits zero with frequency 1 - 2^-n") {
    GameConfig cfg;
    cfg.steps = 6;
    ConvergenceConfig cc;
    cc.samples = 4000;
    cc.horizon = cfg.steps;
    auto rep = convergence_report(
        game_sampler(bold_zero_strategy(), ScenarioSource::uniform(123), cfg), cc);
    const double p = 1.0 - std::pow(2.0, -6.0);
    const double se = std::sqrt(p * (1 - p) / 4000.0);
    CHECK(std::abs(rep.zero_fraction - p) <= 4.0 * se);
}

TEST_CASE("constant martingale reports zero oscillation") {
    mart::MartingaleSpec spec;
    spec.chain = mart::TimeChain::rows();
    for (int i = 0; i < 8; ++i)
        spec.levels.push_back(CylinderFunction::constant(rat(2)));
    ConvergenceConfig cc;
    cc.samples = 50;
    cc.horizon = 7;
    auto rep = convergence_report(spec_sampler(spec, ScenarioSource::uniform(3)), cc);
    CHECK(rep.mean_oscillation == 0.0);
    CHECK(rep.oscillation_fraction == 0.0);
}

TEST_CASE("oscillation fraction shrinks as the horizon grows") {
    ConvergenceConfig cc;
    cc.samples = 3000;
    cc.epsilon = 0.05;
    double prev = 1.0;
    for (std::size_t h : {64u, 128u, 256u}) {
        GameConfig cfg;
        cfg.steps = h;
        cc.horizon = h;
        auto rep = convergence_report(
            game_sampler(shrinking_stake_strategy(rat(1, 2)),
                         ScenarioSource::uniform(2024), cfg),
            cc);
        CHECK(rep.oscillation_fraction <= prev + 1e-12);
        prev = rep.oscillation_fraction;
    }
}

TEST_CASE("below-g scenarios confine the random bits below g") {
    auto src = ScenarioSource::below_g({3, 1, 2}, 77);
    for (std::uint32_t r = 0; r < 5; ++r)
        for (std::uint32_t c = 0; c < 8; ++c) {
            const std::uint32_t g = r < 3 ? std::vector<std::uint32_t>{3, 1, 2}[r] : 0;
            if (c >= g) CHECK(src.bit(r, c) == false);
        }
    // some randomness does appear below the thresholds
    int ones = 0;
    for (int i = 0; i < 64; ++i)
        ones += ScenarioSource::below_g({3, 1, 2}, static_cast<std::uint64_t>(i)).bit(0, 0);
    CHECK(ones > 8);
    CHECK(ones < 56);
}

TEST_CASE("scenario files round-trip through the documented text format") {
    const char* path = "scenario_test_tmp.txt";
    {
        std::ofstream out(path);
        out << "0101\n1110\n";
    }
    auto src = ScenarioSource::from_file(path);
    CHECK(src.bit(0, 1) == true);
    CHECK(src.bit(1, 3) == false);
    CHECK_THROWS_AS(src.bit(2, 0), DomainError);
    std::remove(path);
}

TEST_CASE("parallel and serial sample loops give identical reports") {
    GameConfig cfg;
    cfg.steps = 40;
    cfg.row_width = 4;
    ConvergenceConfig serial, parallel;
    serial.samples = parallel.samples = 500;
    serial.horizon = parallel.horizon = cfg.steps;
    serial.exec = mc::Exec::Serial;
    parallel.exec = mc::Exec::Parallel;
    auto sampler = game_sampler(row_echo_strategy(4), ScenarioSource::uniform(31415), cfg);
    auto a = convergence_report(sampler, serial);
    auto b = convergence_report(sampler, parallel);
    CHECK(a.mean_final == b.mean_final);
    CHECK(a.stderr_final == b.stderr_final);
    CHECK(a.oscillation_fraction == b.oscillation_fraction);
    CHECK(a.mean_oscillation == b.mean_oscillation);
    CHECK(a.ladder_mean_upcrossings == b.ladder_mean_upcrossings);
}

TEST_CASE("trajectory csv carries stop annotations") {
    Trajectory t;
    t.values = {rat(1), rat(2)};
    t.stops.push_back({StopMark::Kind::Tau, 1, 1});
    auto csv = trajectory_csv(t);
    CHECK(csv == "step,value,stop_flags\n0,1/1,\n1,2/1,tau1\n");
}
