#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "doob/oracle.hpp"
#include "test_util.hpp"

using namespace doob;
using namespace doob::bits;
using namespace doob::mart;
using testutil::Rng;

namespace {

Position P(std::uint32_t r, std::uint32_t c) { return Position{r, c}; }

using testutil::random_savings_oracle;
using testutil::swing;

}  // namespace

TEST_CASE("the equality-bet example: K_{0,2} pays 2 on a match") {
    OracleMartingale om;
    om.oracle_set = PositionSet::below_function({1});  // first column of every row... row widths f=(1)
    om.bet_positions = {P(0, 1), P(0, 2)};
    auto match = CylinderFunction::tabulate({P(0, 0), P(1, 0)}, [](const BitAssignment& a) {
        return a.at(P(0, 0)) == a.at(P(1, 0)) ? rat(2) : rat(0);
    });
    om.levels = {CylinderFunction::constant(rat(1)), match, match};
    om.dependency_bound = {0, 1, 1};
    validate(om);
    CHECK(!has_savings_property(om));  // the payoff can be 0 < N_0/2
    CHECK_THROWS_AS(convert_oracle_martingale(om, 3), DomainError);

    auto conv = convert_oracle_martingale(om, 3, SavingsPolicy::Warn);
    CHECK(!conv.savings_ok);
    CHECK(verify(conv.spec).ok);

    // K at (0,2): 2 iff the bet bit (0,1) equals the oracle bit (0,0)
    const auto& pts = conv.spec.chain.points();
    auto it = std::find(pts.begin(), pts.end(), P(0, 2));
    REQUIRE(it != pts.end());
    const auto& k02 = conv.spec.levels[static_cast<std::size_t>(it - pts.begin())];
    auto expected = CylinderFunction::tabulate({P(0, 0), P(0, 1)}, [](const BitAssignment& a) {
        return a.at(P(0, 0)) == a.at(P(0, 1)) ? rat(2) : rat(0);
    });
    CHECK(k02.equals(expected));

    // before the bet resolves, the match is a coin flip: K_{0,1} = 1
    auto it01 = std::find(pts.begin(), pts.end(), P(0, 1));
    REQUIRE(it01 != pts.end());
    CHECK(conv.spec.levels[static_cast<std::size_t>(it01 - pts.begin())].equals(
        CylinderFunction::constant(rat(1))));
}

TEST_CASE("constant oracle martingale converts to a constant K") {
    OracleMartingale om;
    om.oracle_set = PositionSet::below_function({2});
    om.bet_positions = {P(0, 2), P(0, 3)};
    om.levels = {CylinderFunction::constant(rat(3)), CylinderFunction::constant(rat(3)),
                 CylinderFunction::constant(rat(3))};
    om.dependency_bound = {0, 0, 0};
    auto conv = convert_oracle_martingale(om, 3);
    CHECK(conv.savings_ok);
    for (const auto& level : conv.spec.levels)
        CHECK(level.equals(CylinderFunction::constant(rat(3))));
    CHECK(verify(conv.spec).ok);
}

TEST_CASE("oracle-free martingale: K equals the array extension of the bet martingale") {
    Rng rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        // bets walk the first two columns of rows 0 and 1 in lex order
        OracleMartingale om;
        om.oracle_set = PositionSet::explicit_set({P(3, 0)});  // present but never read
        om.bet_positions = {P(0, 0), P(0, 1), P(1, 0), P(1, 1)};
        om.levels.push_back(CylinderFunction::constant(rat(2)));
        om.dependency_bound = {0, 0, 0, 0, 0};
        for (std::size_t n = 0; n + 1 < 5; ++n) {
            Rational mag = pow2_inv(static_cast<unsigned>(n) + 2);
            auto stake = (rng.coin() ? mag : Rational(-mag)) *
                         CylinderFunction::constant(rat(1));
            om.levels.push_back(om.levels.back() + om.levels.back() * stake *
                                                       swing(P(1, static_cast<std::uint32_t>(n))));
        }
        auto conv = convert_oracle_martingale(om, 5);
        CHECK(conv.savings_ok);
        REQUIRE(verify(conv.spec).ok);

        // the plain bet martingale, sampled at the row starts, relabeled into
        // the array: P_m = N at the first bet of row m
        auto bet_map = [&](Position p) { return om.bet_positions[p.col]; };
        MartingaleSpec rowm;
        rowm.chain = TimeChain::rows();
        rowm.nonneg = true;
        rowm.levels = {om.levels[0].relabel(bet_map), om.levels[2].relabel(bet_map),
                       om.levels[4].relabel(bet_map)};
        REQUIRE(verify(rowm).ok);
        auto ext = extend_to_array(rowm);

        // K and the extension agree wherever both are materialized
        const auto& kp = conv.spec.chain.points();
        const auto& ep = ext.chain.points();
        int compared = 0;
        for (std::size_t i = 0; i < kp.size(); ++i) {
            auto it = std::find(ep.begin(), ep.end(), kp[i]);
            if (it == ep.end()) continue;
            ++compared;
            CHECK(conv.spec.levels[i].equals(
                ext.levels[static_cast<std::size_t>(it - ep.begin())]));
        }
        CHECK(compared >= 3);
    }
}

TEST_CASE("random savings oracles convert to exactly verifying K") {
    Rng rng(42);
    for (int trial = 0; trial < 8; ++trial) {
        auto om = random_savings_oracle(rng, 3 + rng.below(2), 2);
        validate(om);
        REQUIRE(has_savings_property(om));
        auto conv = convert_oracle_martingale(om, om.levels.size());
        CHECK(conv.savings_ok);
        CHECK(verify(conv.spec).ok);
    }
}

TEST_CASE("converted K restricts to a verified row martingale") {
    Rng rng(44);
    for (int trial = 0; trial < 5; ++trial) {
        auto om = testutil::random_savings_oracle(rng, 4, 2);
        auto conv = convert_oracle_martingale(om, om.levels.size());
        auto rows = restrict_rows(conv.spec);
        CHECK(verify(rows).ok);
        CHECK(rows.size() >= 1);
    }
}

TEST_CASE("pathwise capital bound: K at b_k holds half the stage-k0 capital") {
    Rng rng(43);
    for (int trial = 0; trial < 8; ++trial) {
        auto om = random_savings_oracle(rng, 4, 2);
        const std::size_t h = om.levels.size();
        auto conv = convert_oracle_martingale(om, h);
        REQUIRE(conv.savings_ok);

        // sample a full assignment of everything K or the stages can see
        std::vector<Position> all;
        for (const auto& f : conv.staged)
            for (Position p : f.support()) all.push_back(p);
        for (std::size_t i = 0; i + 1 < h; ++i) all.push_back(om.bet_positions[i]);
        std::sort(all.begin(), all.end());
        all.erase(std::unique(all.begin(), all.end()), all.end());

        const auto& pts = conv.spec.chain.points();
        for (int s = 0; s < 20; ++s) {
            BitAssignment omega;
            for (Position p : all) omega.set(p, rng.coin());
            for (std::size_t k0 = 0; k0 + 1 < h; ++k0) {
                // capital at stage k0, then the K value at each later bet whose
                // prefix already determines that capital
                Rational c = conv.staged[k0].value_at(omega);
                for (std::size_t k = k0 + 1; k + 1 < h; ++k) {
                    const Position bk = om.bet_positions[k];
                    bool determined = true;
                    for (Position p : conv.staged[k0].support())
                        determined = determined && (p < bk);
                    if (!determined) continue;
                    auto it = std::find(pts.begin(), pts.end(), bk);
                    REQUIRE(it != pts.end());
                    const auto& kv =
                        conv.spec.levels[static_cast<std::size_t>(it - pts.begin())];
                    CHECK(kv.value_at(omega) >= c / 2);
                }
            }
        }
    }
}

TEST_CASE("bets across rows: conversion, row bounds and restriction compose") {
    OracleMartingale om;
    om.oracle_set = PositionSet::below_function({1, 1});
    om.bet_positions = {P(0, 1), P(1, 1), P(1, 2)};
    om.levels.push_back(CylinderFunction::constant(rat(1)));
    om.dependency_bound = {0, 1, 2, 2};
    for (int n = 0; n < 3; ++n) {
        auto sign = testutil::swing(P(0, static_cast<std::uint32_t>(std::min(n, 1))));
        auto stake = rat(1, 8) * sign;
        om.levels.push_back(om.levels.back() + om.levels.back() * stake *
                                                   testutil::swing(P(1, static_cast<std::uint32_t>(n))));
    }
    validate(om);
    auto conv = convert_oracle_martingale(om, 4);
    CHECK(conv.savings_ok);
    CHECK(verify(conv.spec).ok);
    REQUIRE(conv.spec.chain.points().size() == 5);  // (0,0..1), (1,0..2)

    // the stabilization column of row 0 is certified through the tower
    // identity even though (0,2) itself is not materialized
    auto ks = stopping_row_bound(conv.spec);
    REQUIRE(ks.size() == 1);
    CHECK(ks[0].k == 2);
    CHECK(ks[0].certified);

    auto rows = restrict_rows(conv.spec);
    CHECK(rows.size() == 2);
    CHECK(verify(rows).ok);
}

TEST_CASE("explicit-set oracles convert too") {
    OracleMartingale om;
    om.oracle_set = PositionSet::explicit_set({P(0, 0), P(0, 2)});
    om.bet_positions = {P(0, 3), P(0, 4)};
    om.levels.push_back(CylinderFunction::constant(rat(2)));
    om.dependency_bound = {0, 2, 2};
    for (int n = 0; n < 2; ++n) {
        auto stake = rat(1, 4) * testutil::swing(P(0, static_cast<std::uint32_t>(n)));
        om.levels.push_back(om.levels.back() + om.levels.back() * stake *
                                                   testutil::swing(P(1, static_cast<std::uint32_t>(n))));
    }
    validate(om);
    auto conv = convert_oracle_martingale(om, 3);
    CHECK(conv.savings_ok);
    CHECK(verify(conv.spec).ok);
    // before its own bet resolves, K at (0,3) is still the flat start
    const auto& pts = conv.spec.chain.points();
    auto at = [&](Position q) {
        auto it = std::find(pts.begin(), pts.end(), q);
        REQUIRE(it != pts.end());
        return conv.spec.levels[static_cast<std::size_t>(it - pts.begin())];
    };
    CHECK(at(P(0, 3)).equals(CylinderFunction::constant(rat(2))));
    // once bet 0 is on the table, K reads it and the explicit oracle cell (0,0)
    const auto k04 = at(P(0, 4));
    bool sees_oracle = false, sees_bet = false;
    for (Position p : k04.support()) {
        sees_oracle |= (p == P(0, 0));
        sees_bet |= (p == P(0, 3));
    }
    CHECK(sees_oracle);
    CHECK(sees_bet);
}

TEST_CASE("validation rejects malformed oracle martingales") {
    OracleMartingale om;
    om.oracle_set = PositionSet::below_function({1});
    om.bet_positions = {P(0, 0)};  // collides with the oracle set
    om.levels = {CylinderFunction::constant(rat(1)), CylinderFunction::constant(rat(1))};
    om.dependency_bound = {0, 0};
    CHECK_THROWS_AS(validate(om), DomainError);

    om.bet_positions = {P(0, 1)};
    om.levels[1] = CylinderFunction::coordinate(P(1, 1));  // reads bet 1 at stage 1
    CHECK_THROWS_AS(validate(om), DomainError);

    om.levels[1] = swing(P(1, 0));  // negative values
    CHECK_THROWS_AS(validate(om), DomainError);

    om.levels[1] = CylinderFunction::coordinate(P(1, 0));  // E(level1) = 1/2 != 1
    CHECK_THROWS_AS(validate(om), DomainError);
}
