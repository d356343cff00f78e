#include "doob/oracle.hpp"

#include <algorithm>

#include "doob/serialize.hpp"

namespace doob::mart {

void validate(const OracleMartingale& om) {
    if (om.levels.empty()) throw DomainError("oracle martingale has no levels");
    if (om.dependency_bound.size() != om.levels.size())
        throw DomainError("dependency_bound must cover every level");
    if (!om.oracle_set.omega_enumerable())
        throw DomainError("oracle set must have finite row sections (A_f or explicit)");

    for (std::size_t i = 1; i < om.bet_positions.size(); ++i)
        if (!(om.bet_positions[i - 1] < om.bet_positions[i]))
            throw DomainError("bet positions must be lex increasing");
    for (Position b : om.bet_positions)
        if (om.oracle_set.contains(b))
            throw DomainError("bet position " + to_string(b) + " lies in the oracle set");
    if (om.bet_positions.size() + 1 < om.levels.size())
        throw DomainError("need at least one bet position per betting stage");

    for (std::size_t n = 0; n < om.levels.size(); ++n) {
        for (Position p : om.levels[n].support()) {
            if (p.row == 0) {
                if (p.col >= om.dependency_bound[n])
                    throw DomainError("level " + std::to_string(n) +
                                      " reads oracle bit " + std::to_string(p.col) +
                                      " beyond l(n) = " +
                                      std::to_string(om.dependency_bound[n]));
            } else if (p.row == 1) {
                if (p.col >= n)
                    throw DomainError("level " + std::to_string(n) + " reads bet " +
                                      std::to_string(p.col) + " before it is placed");
            } else {
                throw DomainError("level " + std::to_string(n) +
                                  " leaves the two-tape namespace at " + to_string(p));
            }
        }
        if (sgn(om.levels[n].min_value()) < 0)
            throw DomainError("level " + std::to_string(n) + " takes a negative value");
    }

    // martingale in the bet tape, uniformly in the oracle tape: conditioning
    // on lex_prefix(1,n) keeps all of row 0 and the first n bets
    for (std::size_t n = 0; n + 1 < om.levels.size(); ++n) {
        auto cond = om.levels[n + 1].cond_expectation(
            PositionSet::lex_prefix(Position{1, static_cast<std::uint32_t>(n)}));
        if (!cond.equals(om.levels[n]))
            throw DomainError("not a martingale in the bet tape at stage " +
                              std::to_string(n));
    }

    // the oracle enumeration must actually reach l(n) positions
    std::uint32_t lmax = 0;
    for (auto l : om.dependency_bound) lmax = std::max(lmax, l);
    if (lmax > 0) om.oracle_set.nth_member(lmax - 1);
}

bool has_savings_property(const OracleMartingale& om) {
    for (std::size_t n = 0; n < om.levels.size(); ++n)
        for (std::size_t m = 0; m < n; ++m) {
            auto gap = Rational(2) * om.levels[n] - om.levels[m];
            if (sgn(gap.min_value()) < 0) return false;
        }
    return true;
}

OracleConversion convert_oracle_martingale(const OracleMartingale& om,
                                           std::size_t horizon,
                                           SavingsPolicy policy) {
    validate(om);
    horizon = std::min(horizon, om.levels.size());
    if (horizon == 0) throw DomainError("conversion horizon must be positive");
    if (om.bet_positions.size() < horizon - 1)
        throw DomainError("not enough bet positions for the requested horizon");

    OracleConversion out;
    out.savings_ok = has_savings_property(om);
    if (!out.savings_ok && policy == SavingsPolicy::Require)
        throw DomainError(
            "oracle martingale lacks the savings property N_n >= N_m/2; "
            "convert with SavingsPolicy::Warn to proceed without the pathwise bound");

    // stage 1: M_{A u B_n} = levels[n] with the tapes relabeled into the array
    auto tape_map = [&](Position p) -> Position {
        if (p.row == 0) return om.oracle_set.nth_member(p.col);
        return om.bet_positions[p.col];
    };
    for (std::size_t n = 0; n < horizon; ++n)
        out.staged.push_back(om.levels[n].relabel(tape_map));

    if (om.bet_positions.empty()) {
        // no bets: K collapses to the constant expectation at (0,0)
        out.spec.chain = TimeChain::lex({Position{0, 0}});
        out.spec.levels = {out.staged[0].cond_expectation(
            PositionSet::lex_prefix(Position{0, 0}))};
        out.spec.nonneg = true;
        return out;
    }

    // the chain covers every lex index up to the last usable bet b_j (the
    // horizon-th bet when present, else the last one the levels read), with
    // row widths wide enough to see every position the staged levels use
    const std::size_t j = std::min(horizon, om.bet_positions.size()) - 1;
    const Position end = om.bet_positions[j];
    std::vector<std::uint32_t> width(end.row + 1, 1);
    auto widen = [&](Position p) {
        if (p.row <= end.row) width[p.row] = std::max(width[p.row], p.col + 1);
    };
    for (const auto& f : out.staged)
        for (Position p : f.support()) widen(p);
    for (std::size_t i = 0; i <= j && i < om.bet_positions.size(); ++i)
        widen(om.bet_positions[i]);

    std::vector<Position> points;
    std::vector<CylinderFunction> levels;
    for (std::uint32_t row = 0; row <= end.row; ++row) {
        for (std::uint32_t col = 0; col < width[row]; ++col) {
            const Position p{row, col};
            if (end < p) break;
            // stage 3: K_p = E_p(M_{A u B_k}), k = min{i : p <= b_i}
            auto it = std::lower_bound(om.bet_positions.begin(),
                                       om.bet_positions.begin() + (j + 1), p);
            const std::size_t k = static_cast<std::size_t>(it - om.bet_positions.begin());
            points.push_back(p);
            levels.push_back(
                out.staged[std::min(k, horizon - 1)].cond_expectation(
                    PositionSet::lex_prefix(p)));
        }
    }

    out.spec.chain = TimeChain::lex(std::move(points));
    out.spec.levels = std::move(levels);
    out.spec.nonneg = true;
    return out;
}

nlohmann::json to_json(const OracleMartingale& om) {
    nlohmann::json bets = nlohmann::json::array();
    for (Position b : om.bet_positions) bets.push_back(bits::to_json(b));
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& f : om.levels) levels.push_back(bits::to_json(f));
    return nlohmann::json{{"oracle_set", bits::to_json(om.oracle_set)},
                          {"bet_positions", bets},
                          {"levels", levels},
                          {"dependency_bound", om.dependency_bound}};
}

OracleMartingale oracle_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("oracle_set") || !j.contains("levels"))
        throw ParseError("oracle martingale needs {oracle_set, bet_positions, levels, dependency_bound}");
    OracleMartingale om;
    om.oracle_set = bits::position_set_from_json(j.at("oracle_set"));
    for (const auto& e : j.at("bet_positions"))
        om.bet_positions.push_back(bits::position_from_json(e));
    for (const auto& e : j.at("levels")) om.levels.push_back(bits::cylinder_from_json(e));
    om.dependency_bound = j.at("dependency_bound").get<std::vector<std::uint32_t>>();
    return om;
}

}  // namespace doob::mart
