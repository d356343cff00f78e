#pragma once

#include "doob/martingale.hpp"

namespace doob::mart {

// A uniformly computable family N^beta of bet martingales with oracle tape
// beta, at finite truncation. Levels live in an abstract two-row namespace:
// row 0 carries the oracle tape (position (0,k) = k-th oracle bit), row 1 the
// bet tape (position (1,k) = k-th bet). In the array space the oracle tape
// reads the set A in lex order and bet k sits at bet_positions[k].
struct OracleMartingale {
    PositionSet oracle_set = PositionSet::row_prefix(0);  // A
    std::vector<Position> bet_positions;                  // B = {b_k}, lex increasing
    std::vector<CylinderFunction> levels;                 // N_n over the two tapes
    std::vector<std::uint32_t> dependency_bound;          // l(n): oracle bits level n may read
};

enum class SavingsPolicy {
    Require,  // reject inputs without the pathwise savings property
    Warn,     // convert anyway, report savings_ok = false
};

// Structural validation: tape-shaped supports within the declared bounds,
// lex-increasing bets disjoint from the oracle set, per-oracle martingale
// identity (exact), nonnegativity. Throws DomainError on violation.
void validate(const OracleMartingale& om);

// Exact check of N_n >= N_m / 2 for all materialized m <= n, every tape
// assignment.
bool has_savings_property(const OracleMartingale& om);

struct OracleConversion {
    MartingaleSpec spec;  // K_{m,n} over a lex chain ending at bet horizon-1
    bool savings_ok;
    // M_{A u B_n} relabeled into the array space, one per stage (diagnostics
    // and the pathwise capital bound).
    std::vector<CylinderFunction> staged;
};

// The three-stage construction: relabel the tapes into the array space,
// reindex by the sets A_{l(n)} u C_n, then condition down to every lex index
// up to the last materialized bet. Output verifies exactly.
OracleConversion convert_oracle_martingale(const OracleMartingale& om,
                                           std::size_t horizon,
                                           SavingsPolicy policy = SavingsPolicy::Require);

nlohmann::json to_json(const OracleMartingale& om);
OracleMartingale oracle_from_json(const nlohmann::json& j);

}  // namespace doob::mart
