#include "doob/martingale.hpp"

#include <algorithm>

#include "doob/serialize.hpp"

namespace doob::mart {

using nlohmann::json;

TimeChain TimeChain::lex(std::vector<Position> points) {
    for (std::size_t i = 1; i < points.size(); ++i)
        if (!(points[i - 1] < points[i]))
            throw DomainError("lex chain points must be strictly increasing");
    TimeChain c(Kind::Lex);
    c.points_ = std::move(points);
    return c;
}

TimeChain TimeChain::sets(std::vector<PositionSet> sets) {
    TimeChain c(Kind::Sets);
    c.sets_ = std::move(sets);
    return c;
}

PositionSet TimeChain::at(std::size_t i) const {
    switch (kind_) {
        case Kind::Rows:
            return PositionSet::row_prefix(static_cast<std::uint32_t>(i));
        case Kind::Lex:
            if (i >= points_.size()) throw DomainError("chain index beyond materialized points");
            return PositionSet::lex_prefix(points_[i]);
        case Kind::Sets:
            if (i >= sets_.size()) throw DomainError("chain index beyond materialized sets");
            return sets_[i];
    }
    throw DomainError("unreachable chain kind");
}

std::size_t TimeChain::bounded_size() const {
    switch (kind_) {
        case Kind::Rows: return SIZE_MAX;
        case Kind::Lex: return points_.size();
        case Kind::Sets: return sets_.size();
    }
    return 0;
}

MartingaleSpec from_generator(TimeChain chain,
                              const std::function<CylinderFunction(std::size_t)>& gen,
                              std::size_t horizon, bool nonneg) {
    MartingaleSpec m;
    m.chain = std::move(chain);
    m.nonneg = nonneg;
    horizon = std::min(horizon, m.chain.bounded_size());
    m.levels.reserve(horizon);
    for (std::size_t i = 0; i < horizon; ++i) m.levels.push_back(gen(i));
    return m;
}

// ---------------------------------------------------------------------------
// verify

namespace {

// Positions the chain-monotonicity check is decided on: everything the
// materialized levels can see, plus explicit members of set chains.
std::vector<Position> materialized_positions(const MartingaleSpec& m) {
    std::vector<Position> ps;
    for (const auto& f : m.levels)
        ps.insert(ps.end(), f.support().begin(), f.support().end());
    if (m.chain.kind() == TimeChain::Kind::Sets)
        for (const auto& s : m.chain.set_list())
            if (s.kind() == PositionSet::Kind::Explicit)
                ps.insert(ps.end(), s.members().begin(), s.members().end());
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return ps;
}

}  // namespace

VerifyReport verify(const MartingaleSpec& m, std::size_t horizon) {
    VerifyReport r;
    const std::size_t n = std::min({horizon, m.size(), m.chain.bounded_size()});

    if (m.chain.kind() == TimeChain::Kind::Sets) {
        const auto probe = materialized_positions(m);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const auto di = m.chain.at(i);
            const auto dj = m.chain.at(i + 1);
            for (Position p : probe)
                if (di.contains(p) && !dj.contains(p)) {
                    r.ok = false;
                    r.kind = FailKind::ChainMonotonicity;
                    r.index = i;
                    r.message = "chain not monotone: " + to_string(p) + " in D_" +
                                std::to_string(i) + " but not D_" + std::to_string(i + 1);
                    return r;
                }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const auto di = m.chain.at(i);
        for (Position p : m.levels[i].support())
            if (!di.contains(p)) {
                r.ok = false;
                r.kind = FailKind::Adaptedness;
                r.index = i;
                r.message = "level " + std::to_string(i) + " depends on " + to_string(p) +
                            " outside " + di.describe();
                return r;
            }
        if (m.nonneg && sgn(m.levels[i].min_value()) < 0) {
            r.ok = false;
            r.kind = FailKind::Negativity;
            r.index = i;
            r.message = "level " + std::to_string(i) + " takes a negative value";
            return r;
        }
        if (m.growth_bound && i < m.growth_bound->size() &&
            m.levels[i].sup_norm() > (*m.growth_bound)[i]) {
            r.ok = false;
            r.kind = FailKind::GrowthBound;
            r.index = i;
            r.message = "level " + std::to_string(i) + " exceeds its growth bound";
            return r;
        }
    }

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto cond = m.levels[i + 1].cond_expectation(m.chain.at(i));
        if (!cond.equals(m.levels[i])) {
            r.ok = false;
            r.kind = FailKind::MartingaleIdentity;
            r.index = i;
            r.discrepancy = m.levels[i] - cond;
            r.message = "E_{D_" + std::to_string(i) + "}(M_" + std::to_string(i + 1) +
                        ") != M_" + std::to_string(i);
            return r;
        }
    }
    return r;
}

json VerifyReport::to_json() const {
    const char* kind_name = "none";
    switch (kind) {
        case FailKind::None: break;
        case FailKind::ChainMonotonicity: kind_name = "chain_monotonicity"; break;
        case FailKind::Adaptedness: kind_name = "adaptedness"; break;
        case FailKind::MartingaleIdentity: kind_name = "martingale_identity"; break;
        case FailKind::Negativity: kind_name = "negativity"; break;
        case FailKind::GrowthBound: kind_name = "growth_bound"; break;
    }
    json j{{"ok", ok}};
    if (!ok) {
        j["failure"] = kind_name;
        j["index"] = index;
        j["message"] = message;
        if (kind == FailKind::MartingaleIdentity) j["discrepancy"] = bits::to_json(discrepancy);
    }
    return j;
}

// ---------------------------------------------------------------------------
// repair

RepairResult repair(const TimeChain& chain, const std::vector<CylinderFunction>& inputs) {
    RepairResult out;
    out.spec.chain = chain;
    out.spec.levels.reserve(inputs.size());
    out.drift.reserve(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto di = chain.at(i);
        for (Position p : inputs[i].support())
            if (!di.contains(p))
                throw DomainError("repair input " + std::to_string(i) +
                                  " is not adapted: depends on " + to_string(p));
        if (i == 0) {
            out.spec.levels.push_back(inputs[0]);
        } else {
            const auto correction = inputs[i].cond_expectation(chain.at(i - 1));
            out.spec.levels.push_back(inputs[i] - correction + out.spec.levels[i - 1]);
        }
        out.drift.push_back((out.spec.levels[i] - inputs[i]).sup_norm());
    }
    bool nonneg = !out.spec.levels.empty();
    for (const auto& f : out.spec.levels) nonneg = nonneg && sgn(f.min_value()) >= 0;
    out.spec.nonneg = nonneg;
    return out;
}

// ---------------------------------------------------------------------------
// materialized stopping-time transforms

namespace {

// Union of the supports of levels[0..n], sorted.
std::vector<Position> union_support(const MartingaleSpec& m, std::size_t n) {
    std::vector<Position> u;
    for (std::size_t i = 0; i <= n; ++i)
        u.insert(u.end(), m.levels[i].support().begin(), m.levels[i].support().end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
}

// Materializes a pathwise recursion level by level over the union supports.
MartingaleSpec materialize_path_transform(
    const MartingaleSpec& m,
    const std::function<std::vector<Rational>(const std::vector<Rational>&)>& path_fn) {
    MartingaleSpec out;
    out.chain = m.chain;
    out.nonneg = m.nonneg;
    out.levels.reserve(m.size());
    for (std::size_t n = 0; n < m.size(); ++n) {
        auto support = union_support(m, n);
        out.levels.push_back(CylinderFunction::tabulate(
            support, [&](const BitAssignment& a) {
                std::vector<Rational> path;
                path.reserve(n + 1);
                for (std::size_t i = 0; i <= n; ++i)
                    path.push_back(m.levels[i].value_at(a));
                return path_fn(path).back();
            }));
    }
    return out;
}

}  // namespace

MartingaleSpec upcrossing_transform(const MartingaleSpec& m, const Rational& a,
                                    const Rational& b) {
    if (!(a < b)) throw DomainError("upcrossing transform needs a < b");
    if (!m.nonneg) throw DomainError("upcrossing transform expects a nonnegative martingale");
    return materialize_path_transform(m, [&](const std::vector<Rational>& path) {
        return upcrossing_path<Rational>(path, a, b);
    });
}

MartingaleSpec savings_transform(const MartingaleSpec& m) {
    if (!m.nonneg) throw DomainError("savings transform expects a nonnegative martingale");
    return materialize_path_transform(m, [](const std::vector<Rational>& path) {
        return savings_path<Rational>(path);
    });
}

std::vector<Rational> evaluate_path(const MartingaleSpec& m, const BitAssignment& sample) {
    std::vector<Rational> values;
    values.reserve(m.size());
    for (const auto& level : m.levels) values.push_back(level.value_at(sample));
    return values;
}

// ---------------------------------------------------------------------------
// array extension / restriction

MartingaleSpec extend_to_array(const MartingaleSpec& m) {
    if (m.chain.kind() != TimeChain::Kind::Rows)
        throw DomainError("extend_to_array expects a rows-chain martingale");
    if (m.size() < 2) throw DomainError("extend_to_array needs at least two levels");
    for (std::size_t i = 0; i < m.size(); ++i)
        for (Position p : m.levels[i].support())
            if (p.row >= i)
                throw DomainError("extend_to_array input is not adapted: level " +
                                  std::to_string(i) + " depends on " + to_string(p));

    std::vector<Position> points;
    std::vector<CylinderFunction> levels;
    const std::size_t rows = m.size();
    for (std::uint32_t row = 0; row + 1 < rows; ++row) {
        const auto& next = m.levels[row + 1];
        std::uint32_t k = 0;
        for (Position p : next.support())
            if (p.row == row) k = std::max(k, p.col + 1);
        for (std::uint32_t col = 0; col <= k; ++col) {
            points.push_back(Position{row, col});
            levels.push_back(next.cond_expectation(
                PositionSet::lex_prefix(Position{row, col})));
        }
    }
    points.push_back(Position{static_cast<std::uint32_t>(rows - 1), 0});
    levels.push_back(m.levels.back());

    MartingaleSpec out;
    out.chain = TimeChain::lex(std::move(points));
    out.levels = std::move(levels);
    out.nonneg = m.nonneg;
    return out;
}

MartingaleSpec restrict_rows(const MartingaleSpec& m) {
    if (m.chain.kind() != TimeChain::Kind::Lex)
        throw DomainError("restrict_rows expects a lex-chain martingale");
    MartingaleSpec out;
    out.chain = TimeChain::rows();
    const auto& points = m.chain.points();
    std::uint32_t want_row = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].col != 0) continue;
        if (points[i].row != want_row)
            throw DomainError("restrict_rows: missing level at (" +
                              std::to_string(want_row) + ",0)");
        out.levels.push_back(m.levels[i]);
        ++want_row;
    }
    if (out.levels.empty()) throw DomainError("restrict_rows: no (m,0) levels present");
    out.nonneg = m.nonneg;
    return out;
}

std::vector<RowBound> stopping_row_bound(const MartingaleSpec& m) {
    if (m.chain.kind() != TimeChain::Kind::Lex)
        throw DomainError("stopping_row_bound expects a lex-chain martingale");
    const auto& points = m.chain.points();

    // level at an arbitrary lex position q: condition the first materialized
    // level at or beyond q back down to q (tower identity)
    auto level_at = [&](Position q) -> CylinderFunction {
        auto it = std::lower_bound(points.begin(), points.end(), q);
        if (it == points.end())
            throw DomainError("stopping_row_bound: no materialized level at or beyond " +
                              to_string(q));
        const std::size_t i = static_cast<std::size_t>(it - points.begin());
        if (points[i] == q) return m.levels[i];
        return m.levels[i].cond_expectation(PositionSet::lex_prefix(q));
    };

    std::uint32_t max_row = 0;
    for (Position p : points) max_row = std::max(max_row, p.row);

    std::vector<RowBound> out;
    for (std::uint32_t row = 0; row < max_row; ++row) {
        const auto next0 = level_at(Position{row + 1, 0});
        std::uint32_t k = 0;
        for (Position p : next0.support())
            if (p.row == row) k = std::max(k, p.col + 1);
        const bool certified = level_at(Position{row, k}).equals(next0);
        out.push_back(RowBound{row, k, certified});
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const MartingaleSpec& m) {
    json chain;
    switch (m.chain.kind()) {
        case TimeChain::Kind::Rows:
            chain = "rows";
            break;
        case TimeChain::Kind::Lex: {
            json pts = json::array();
            for (Position p : m.chain.points()) pts.push_back(bits::to_json(p));
            chain = json{{"lex", pts}};
            break;
        }
        case TimeChain::Kind::Sets: {
            json ss = json::array();
            for (const auto& s : m.chain.set_list()) ss.push_back(bits::to_json(s));
            chain = json{{"sets", ss}};
            break;
        }
    }
    json levels = json::array();
    for (const auto& f : m.levels) levels.push_back(bits::to_json(f));
    json j{{"chain", chain}, {"levels", levels}, {"nonneg", m.nonneg}};
    if (m.growth_bound) {
        json gb = json::array();
        for (const auto& v : *m.growth_bound) gb.push_back(to_fraction_string(v));
        j["growth_bound"] = gb;
    }
    return j;
}

MartingaleSpec spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("chain") || !j.contains("levels"))
        throw ParseError("martingale spec needs {chain, levels}", j.dump().substr(0, 80));
    MartingaleSpec m;
    const auto& chain = j.at("chain");
    if (chain.is_string()) {
        if (chain.get<std::string>() == "rows")
            m.chain = TimeChain::rows();
        else if (chain.get<std::string>() == "lex")
            throw ParseError(
                "a lex chain needs its materialized points: use {\"lex\": [[m,n],...]}");
        else
            throw ParseError("unknown chain '" + chain.get<std::string>() + "'");
    } else if (chain.is_object() && chain.contains("lex")) {
        std::vector<Position> pts;
        for (const auto& e : chain.at("lex")) pts.push_back(bits::position_from_json(e));
        m.chain = TimeChain::lex(std::move(pts));
    } else if (chain.is_object() && chain.contains("sets")) {
        std::vector<PositionSet> ss;
        for (const auto& e : chain.at("sets")) ss.push_back(bits::position_set_from_json(e));
        m.chain = TimeChain::sets(std::move(ss));
    } else {
        throw ParseError("chain must be \"rows\", {\"lex\": ...} or {\"sets\": ...}");
    }
    for (const auto& e : j.at("levels")) m.levels.push_back(bits::cylinder_from_json(e));
    m.nonneg = j.value("nonneg", false);
    if (j.contains("growth_bound") && !j.at("growth_bound").is_null()) {
        std::vector<Rational> gb;
        for (const auto& e : j.at("growth_bound"))
            gb.push_back(parse_fraction(e.get<std::string>()));
        m.growth_bound = std::move(gb);
    }
    return m;
}

}  // namespace doob::mart
