#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "doob/martingale.hpp"
#include "test_util.hpp"

using namespace doob;
using namespace doob::bits;
using namespace doob::mart;
using testutil::Rng;

namespace {

Position P(std::uint32_t r, std::uint32_t c) { return Position{r, c}; }

std::vector<Rational> rats(std::initializer_list<Rational> xs) { return xs; }

}  // namespace

TEST_CASE("verify: the two-level coin martingale") {
    MartingaleSpec m;
    m.chain = TimeChain::rows();
    m.levels = {CylinderFunction::constant(rat(1, 2)),
                CylinderFunction::coordinate(P(0, 0))};
    CHECK(verify(m).ok);
}

TEST_CASE("verify: failing index comes with the exact discrepancy") {
    MartingaleSpec m;
    m.chain = TimeChain::rows();
    m.levels = {CylinderFunction::constant(rat(1, 2)),
                CylinderFunction::coordinate(P(0, 0)) + CylinderFunction::constant(rat(1))};
    auto r = verify(m);
    CHECK(!r.ok);
    CHECK(r.kind == FailKind::MartingaleIdentity);
    CHECK(r.index == 0);
    CHECK(r.discrepancy.equals(CylinderFunction::constant(rat(-1))));
}

TEST_CASE("verify: constants are martingales") {
    MartingaleSpec m;
    m.chain = TimeChain::rows();
    for (int i = 0; i < 5; ++i) m.levels.push_back(CylinderFunction::constant(rat(7, 3)));
    CHECK(verify(m).ok);
}

TEST_CASE("verify: adaptedness violations are caught") {
    MartingaleSpec m;
    m.chain = TimeChain::rows();
    m.levels = {CylinderFunction::coordinate(P(0, 0))};  // level 0 must be constant
    auto r = verify(m);
    CHECK(!r.ok);
    CHECK(r.kind == FailKind::Adaptedness);
}

TEST_CASE("verify: random multiplicative martingales pass, mean is constant") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = testutil::random_mult_martingale(rng, 2 + rng.below(5));
        CHECK(verify(m).ok);
        for (const auto& level : m.levels)
            CHECK(level.expectation() == m.levels[0].expectation());
    }
}

TEST_CASE("repair: a martingale is a fixed point") {
    Rng rng(22);
    auto m = testutil::random_mult_martingale(rng, 4);
    auto fixed = repair(m.chain, m.levels);
    REQUIRE(fixed.spec.size() == m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(fixed.spec.levels[i].equals(m.levels[i]));
        CHECK(fixed.drift[i] == 0);
    }
}

TEST_CASE("repair: the one-step correction example") {
    std::vector<CylinderFunction> inputs = {CylinderFunction::constant(rat(0)),
                                            CylinderFunction::coordinate(P(0, 0))};
    auto r = repair(TimeChain::rows(), inputs);
    CHECK(r.spec.levels[1].equals(CylinderFunction::coordinate(P(0, 0)) -
                                  CylinderFunction::constant(rat(1, 2))));
    CHECK(verify(r.spec).ok);
}

TEST_CASE("repair: perturbation drift obeys the induction bound") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = testutil::random_mult_martingale(rng, 5);
        const unsigned k = 2 + static_cast<unsigned>(rng.below(3));
        // per-level perturbation bounded by 2^-(n+k+2), sign and size random
        std::vector<CylinderFunction> noisy;
        for (std::size_t n = 0; n < m.size(); ++n) {
            auto eps = pow2_inv(static_cast<unsigned>(n) + k + 2);
            Rational delta = rng.coin() ? eps : Rational(-eps);
            if (rng.coin()) delta /= 2;
            noisy.push_back(m.levels[n] + CylinderFunction::constant(delta));
        }
        auto r = repair(m.chain, noisy);
        CHECK(verify(r.spec).ok);
        for (std::size_t n = 0; n < m.size(); ++n) {
            Rational bound = (Rational(2) - pow2_inv(static_cast<unsigned>(n))) *
                             pow2_inv(k + 1);
            CHECK((r.spec.levels[n] - m.levels[n]).sup_norm() <= bound);
        }
    }
}

TEST_CASE("upcrossing path: the worked trajectory") {
    std::vector<StopMark> stops;
    auto n = upcrossing_path<Rational>(
        rats({rat(1), rat(3), rat(1), rat(3), rat(1), rat(3)}), rat(3, 2), rat(5, 2),
        &stops);
    CHECK(n == rats({rat(1), rat(3), rat(3), rat(5), rat(5), rat(7)}));
    // sigma^down at steps 1,3,5; sigma^up at 0,2,4
    int downs = 0;
    for (const auto& s : stops)
        if (s.kind == StopMark::Kind::SigmaDown) ++downs;
    CHECK(downs == 3);
}

TEST_CASE("upcrossing transform: constants stay put, random inputs verify") {
    Rng rng(24);
    MartingaleSpec c;
    c.chain = TimeChain::rows();
    c.nonneg = true;
    for (int i = 0; i < 4; ++i) c.levels.push_back(CylinderFunction::constant(rat(2)));
    auto n = upcrossing_transform(c, rat(1), rat(3));
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(n.levels[i].equals(c.levels[i]));

    for (int trial = 0; trial < 10; ++trial) {
        auto m = testutil::random_mult_martingale(rng, 4);
        auto t = upcrossing_transform(m, rat(1, 2), rat(2));
        auto r = verify(t);
        CHECK(r.ok);
        CHECK(t.levels[0].equals(m.levels[0]));
        // the transform must never dip negative; check exactly
        for (const auto& level : t.levels) CHECK(level.min_value() >= 0);
    }
    CHECK_THROWS_AS(upcrossing_transform(c, rat(3), rat(1)), DomainError);
}

TEST_CASE("upcrossing pathwise bound: N at sigma^down_k is at least k(b-a)") {
    Rng rng(25);
    for (int trial = 0; trial < 200; ++trial) {
        // random nonnegative integer trajectory
        std::vector<Rational> m;
        m.push_back(rat(static_cast<long>(rng.below(4))));
        for (int i = 0; i < 12; ++i)
            m.push_back(rat(static_cast<long>(rng.below(5))));
        Rational a = rat(1), b = rat(3);
        std::vector<StopMark> stops;
        auto n = upcrossing_path<Rational>(m, a, b, &stops);
        for (const auto& s : stops)
            if (s.kind == StopMark::Kind::SigmaDown)
                CHECK(n[s.step] >= Rational(s.k) * (b - a));
    }
}

TEST_CASE("stopping times live in the compactified naturals") {
    std::vector<StopMark> stops;
    upcrossing_path<Rational>(rats({rat(1), rat(3), rat(1)}), rat(3, 2), rat(5, 2),
                              &stops);
    auto down0 = stop_at(stops, StopMark::Kind::SigmaDown, 0);
    REQUIRE(down0.finite);
    CHECK(down0.step == 1);
    auto down1 = stop_at(stops, StopMark::Kind::SigmaDown, 1);
    CHECK(!down1.finite);  // sigma^down_1 = infinity, explicitly
}

TEST_CASE("savings path: the worked trajectory is exactly (3/2)^k") {
    auto n = savings_path<Rational>(rats({rat(1), rat(2), rat(4), rat(8)}));
    CHECK(n == rats({rat(1), rat(3, 2), rat(9, 4), rat(27, 8)}));
}

TEST_CASE("savings path: no doubling means a half-stake mirror") {
    // M never reaches 2 M_0: N_n = (M_0 + M_n)/2 for n >= 1
    auto m = rats({rat(4), rat(5), rat(3), rat(7), rat(2)});
    auto n = savings_path<Rational>(m);
    CHECK(n[0] == rat(4));
    for (std::size_t i = 1; i < m.size(); ++i) CHECK(n[i] == (m[0] + m[i]) / 2);
}

TEST_CASE("savings transform: random inputs verify; zero capital is rejected") {
    Rng rng(26);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = testutil::random_mult_martingale(rng, 4);
        auto t = savings_transform(m);
        CHECK(verify(t).ok);
        for (const auto& level : t.levels) CHECK(level.min_value() > 0);
    }
    // M_{tau_0} = 0 can only mean the zero martingale; reject the division
    MartingaleSpec dz;
    dz.chain = TimeChain::rows();
    dz.nonneg = true;
    dz.levels = {CylinderFunction::constant(rat(0)), CylinderFunction::constant(rat(0))};
    REQUIRE(verify(dz).ok);
    CHECK_THROWS_AS(savings_transform(dz), DomainError);
    CHECK_THROWS_AS(savings_path<Rational>(rats({rat(0), rat(5)})), DomainError);
}

TEST_CASE("savings pathwise bound: N at tau_k is at least (3/2)^(k-1) M_0") {
    Rng rng(27);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Rational> m;
        m.push_back(rat(1 + static_cast<long>(rng.below(3))));
        for (int i = 0; i < 12; ++i)
            m.push_back(rat(1 + static_cast<long>(rng.below(8))));
        std::vector<StopMark> stops;
        auto n = savings_path<Rational>(m, &stops);
        for (const auto& s : stops)
            if (s.kind == StopMark::Kind::Tau && s.k >= 1) {
                Rational bound = m[0];
                for (std::uint32_t i = 1; i < s.k; ++i) bound *= rat(3, 2);
                CHECK(n[s.step] >= bound);
            }
    }
}

TEST_CASE("extend_to_array: the one-bit example") {
    MartingaleSpec m;
    m.chain = TimeChain::rows();
    m.nonneg = true;
    m.levels = {CylinderFunction::constant(rat(1)),
                rat(2) * CylinderFunction::coordinate(P(0, 0))};
    auto n = extend_to_array(m);
    REQUIRE(n.chain.kind() == TimeChain::Kind::Lex);
    const auto& pts = n.chain.points();
    // row 0 materialized to k(0)=1, then (1,0)
    REQUIRE(pts.size() == 3);
    CHECK(pts[0] == P(0, 0));
    CHECK(pts[1] == P(0, 1));
    CHECK(pts[2] == P(1, 0));
    CHECK(n.levels[0].equals(CylinderFunction::constant(rat(1))));
    CHECK(n.levels[1].equals(rat(2) * CylinderFunction::coordinate(P(0, 0))));
    CHECK(n.levels[2].equals(rat(2) * CylinderFunction::coordinate(P(0, 0))));
    CHECK(verify(n).ok);
}

TEST_CASE("materialized transforms respect the support cap") {
    Rng rng(31);
    auto m = testutil::random_mult_martingale(rng, 6);
    ScopedSupportCap cap(3);
    CHECK_THROWS_AS(upcrossing_transform(m, rat(1, 2), rat(2)), SupportCapError);
}

TEST_CASE("extend_to_array rejects non-adapted input") {
    MartingaleSpec m;
    m.chain = TimeChain::rows();
    m.levels = {CylinderFunction::coordinate(P(5, 0)),
                CylinderFunction::coordinate(P(5, 0))};
    CHECK_THROWS_AS(extend_to_array(m), DomainError);
}

TEST_CASE("extend_to_array: constants extend to constants") {
    MartingaleSpec m;
    m.chain = TimeChain::rows();
    for (int i = 0; i < 3; ++i) m.levels.push_back(CylinderFunction::constant(rat(5)));
    auto n = extend_to_array(m);
    for (const auto& level : n.levels) CHECK(level.equals(m.levels[0]));
    CHECK(verify(n).ok);
}

TEST_CASE("extend then restrict is the identity; rows embed at (m,0)") {
    Rng rng(28);
    for (int trial = 0; trial < 5; ++trial) {
        auto m = testutil::random_mult_martingale(rng, 3);
        auto n = extend_to_array(m);
        CHECK(verify(n).ok);
        auto back = restrict_rows(n);
        REQUIRE(back.size() == m.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            CHECK(back.levels[i].equals(m.levels[i]));
        CHECK(verify(back).ok);
    }
}

TEST_CASE("stopping_row_bound") {
    // N_{1,0} depending only on (0,0): k(0) = 1
    MartingaleSpec m;
    m.chain = TimeChain::rows();
    m.nonneg = true;
    m.levels = {CylinderFunction::constant(rat(1)),
                rat(2) * CylinderFunction::coordinate(P(0, 0))};
    auto lex = extend_to_array(m);
    auto ks = stopping_row_bound(lex);
    REQUIRE(ks.size() == 1);
    CHECK(ks[0].k == 1);
    CHECK(ks[0].certified);

    // constants: k(m) = 0 everywhere
    MartingaleSpec c;
    c.chain = TimeChain::rows();
    for (int i = 0; i < 3; ++i) c.levels.push_back(CylinderFunction::constant(rat(2)));
    auto lexc = extend_to_array(c);
    for (const auto& rb : stopping_row_bound(lexc)) {
        CHECK(rb.k == 0);
        CHECK(rb.certified);
    }

    // extend outputs: k(m) = 1 + max column of row m in support(M_{m+1})
    Rng rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        auto rm = testutil::random_mult_martingale(rng, 4);
        auto lext = extend_to_array(rm);
        auto bounds = stopping_row_bound(lext);
        for (const auto& rb : bounds) {
            std::uint32_t expect = 0;
            for (Position p : rm.levels[rb.row + 1].support())
                if (p.row == rb.row) expect = std::max(expect, p.col + 1);
            CHECK(rb.k == expect);
            CHECK(rb.certified);
        }
    }
}

TEST_CASE("martingale spec json round trip") {
    Rng rng(30);
    auto m = testutil::random_mult_martingale(rng, 3);
    m.growth_bound = std::vector<Rational>{rat(10), rat(10), rat(10)};
    auto j = to_json(m);
    auto back = spec_from_json(j);
    REQUIRE(back.size() == m.size());
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(back.levels[i].equals(m.levels[i]));
    CHECK(back.nonneg == m.nonneg);
    CHECK(verify(back).ok);

    auto lex = extend_to_array(m);
    auto back2 = spec_from_json(to_json(lex));
    CHECK(back2.chain.points() == lex.chain.points());
    CHECK(verify(back2).ok);

    CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"chain", "lex"}, {"levels", nlohmann::json::array()}}),
                    ParseError);
}

TEST_CASE("lazy generation materializes to a horizon") {
    // the classic doubling-on-ones martingale, generated level by level
    auto gen = [](std::size_t n) {
        CylinderFunction f = CylinderFunction::constant(rat(1));
        for (std::size_t i = 0; i < n; ++i)
            f = f * (rat(2) * CylinderFunction::coordinate(P(static_cast<std::uint32_t>(i), 0)));
        return f;
    };
    auto m = from_generator(TimeChain::rows(), gen, 5, true);
    CHECK(m.size() == 5);
    CHECK(verify(m).ok);
}

TEST_CASE("growth bound violations are reported") {
    MartingaleSpec m;
    m.chain = TimeChain::rows();
    m.levels = {CylinderFunction::constant(rat(3))};
    m.growth_bound = std::vector<Rational>{rat(2)};
    auto r = verify(m);
    CHECK(!r.ok);
    CHECK(r.kind == FailKind::GrowthBound);
}
