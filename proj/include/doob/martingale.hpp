#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "doob/cylinder.hpp"

namespace doob::mart {

using bits::BitAssignment;
using bits::CylinderFunction;
using bits::Position;
using bits::PositionSet;

// The increasing family of pasts a martingale is adapted to.
//   rows()   D_i = row_prefix(i)            (N-indexed on sequence space)
//   lex(ps)  D_i = lex_prefix(ps[i])        (N x N indexed, materialized points)
//   sets(ss) D_i = ss[i]                    (explicit increasing sets)
class TimeChain {
public:
    enum class Kind { Rows, Lex, Sets };

    static TimeChain rows() { return TimeChain(Kind::Rows); }
    static TimeChain lex(std::vector<Position> points);
    static TimeChain sets(std::vector<PositionSet> sets);

    Kind kind() const { return kind_; }
    PositionSet at(std::size_t i) const;
    // Number of materialized indices; rows() is unbounded.
    std::size_t bounded_size() const;

    const std::vector<Position>& points() const { return points_; }
    const std::vector<PositionSet>& set_list() const { return sets_; }

private:
    explicit TimeChain(Kind k) : kind_(k) {}
    Kind kind_;
    std::vector<Position> points_;
    std::vector<PositionSet> sets_;
};

struct MartingaleSpec {
    TimeChain chain = TimeChain::rows();
    std::vector<CylinderFunction> levels;
    bool nonneg = false;
    std::optional<std::vector<Rational>> growth_bound;

    std::size_t size() const { return levels.size(); }
};

// Materializes a lazily generated family to a horizon (single task).
MartingaleSpec from_generator(TimeChain chain,
                              const std::function<CylinderFunction(std::size_t)>& gen,
                              std::size_t horizon, bool nonneg = false);

// ---------------------------------------------------------------------------
// Verification

enum class FailKind {
    None,
    ChainMonotonicity,
    Adaptedness,
    MartingaleIdentity,
    Negativity,
    GrowthBound,
};

struct VerifyReport {
    bool ok = true;
    FailKind kind = FailKind::None;
    std::size_t index = 0;
    CylinderFunction discrepancy;  // levels[i] - E_{D_i}(levels[i+1]) on identity failures
    std::string message;

    nlohmann::json to_json() const;
};

// Exact check of adaptedness, the martingale identity on consecutive levels,
// nonnegativity (when flagged), the growth bound (when present), and chain
// monotonicity on the materialized positions.
VerifyReport verify(const MartingaleSpec& m, std::size_t horizon = SIZE_MAX);

// ---------------------------------------------------------------------------
// Pathwise stopping-time recursions (shared by the discrete transforms, the
// game lab and the Brownian backend; V is Rational or double)

struct StopMark {
    enum class Kind { SigmaUp, SigmaDown, Tau };
    Kind kind;
    std::uint32_t k;    // which sigma^up_k / sigma^down_k / tau_k
    std::size_t step;   // index in the value sequence
};

// A stopping time in the compactification N u {infinity}: infinite times are
// a distinct state, never a sentinel index.
struct ExtendedStep {
    bool finite = false;
    std::size_t step = 0;  // meaningful only when finite
};

// The k-th stop of the given kind among the recorded marks, or the explicit
// infinite value when the trajectory never reached it.
inline ExtendedStep stop_at(const std::vector<StopMark>& stops, StopMark::Kind kind,
                            std::uint32_t k) {
    for (const auto& s : stops)
        if (s.kind == kind && s.k == k) return {true, s.step};
    return {false, 0};
}

// Doob upcrossing construction along one trajectory: capital rises with m on
// upcrossing phases, holds on downcrossing phases. sigma^up_0 = 0.
template <typename V>
std::vector<V> upcrossing_path(const std::vector<V>& m, const V& a, const V& b,
                               std::vector<StopMark>* stops = nullptr) {
    if (!(a < b)) throw DomainError("upcrossing transform needs a < b");
    std::vector<V> n;
    n.reserve(m.size());
    if (m.empty()) return n;
    if (stops) stops->push_back({StopMark::Kind::SigmaUp, 0, 0});
    V m_up = m[0];   // M at the current sigma^up
    V n_up = m[0];   // N at the current sigma^up
    V n_down{};      // N at the current sigma^down
    bool betting = true;
    std::uint32_t k = 0;
    n.push_back(m[0]);
    for (std::size_t i = 1; i < m.size(); ++i) {
        if (betting) {
            n.push_back((m[i] - m_up) + n_up);
            if (m[i] >= b) {
                n_down = n.back();
                betting = false;
                if (stops) stops->push_back({StopMark::Kind::SigmaDown, k, i});
            }
        } else {
            n.push_back(n_down);
            if (m[i] <= a) {
                ++k;
                m_up = m[i];
                n_up = n_down;
                betting = true;
                if (stops) stops->push_back({StopMark::Kind::SigmaUp, k, i});
            }
        }
    }
    return n;
}

// Savings construction: bank half the capital at every doubling time
// tau_{k+1} = inf{n > tau_k : M_n >= 2 M_{tau_k}}. Rejects M_{tau_k} = 0
// when a later level still has to be priced off it.
template <typename V>
std::vector<V> savings_path(const std::vector<V>& m,
                            std::vector<StopMark>* stops = nullptr) {
    std::vector<V> n;
    n.reserve(m.size());
    if (m.empty()) return n;
    if (stops) stops->push_back({StopMark::Kind::Tau, 0, 0});
    V m_tau = m[0];
    V n_tau = m[0];
    std::uint32_t k = 0;
    n.push_back(m[0]);
    for (std::size_t i = 1; i < m.size(); ++i) {
        if (m_tau == V{})
            throw DomainError("savings transform: M_tau = 0 at tau_" + std::to_string(k) +
                              " (step " + std::to_string(i - 1) +
                              ") but the trajectory continues");
        n.push_back(n_tau / 2 + (n_tau * m[i]) / (2 * m_tau));
        if (m[i] >= 2 * m_tau) {
            ++k;
            m_tau = m[i];
            n_tau = n.back();
            if (stops) stops->push_back({StopMark::Kind::Tau, k, i});
        }
    }
    return n;
}

// ---------------------------------------------------------------------------
// The four constructions, exact and materialized

struct RepairResult {
    MartingaleSpec spec;
    std::vector<Rational> drift;  // ||L_n - N_n||_inf per level
};

// Turns an adapted family into a martingale: L_{n+1} = N_{n+1} - E_n(N_{n+1}) + L_n.
RepairResult repair(const TimeChain& chain, const std::vector<CylinderFunction>& inputs);

// Materialized transforms; outputs verify exactly.
MartingaleSpec upcrossing_transform(const MartingaleSpec& m, const Rational& a,
                                    const Rational& b);
MartingaleSpec savings_transform(const MartingaleSpec& m);

// Evaluates a spec's levels along one sample (pathwise view of the spec).
std::vector<Rational> evaluate_path(const MartingaleSpec& m, const BitAssignment& sample);

// N_{m,n} = E_{m,n}(M_{m+1}) for a rows-chain martingale; lex output with the
// stabilized per-row widths materialized.
MartingaleSpec extend_to_array(const MartingaleSpec& m);

// Picks the (m,0) levels of a lex martingale back out.
MartingaleSpec restrict_rows(const MartingaleSpec& m);

struct RowBound {
    std::uint32_t row;
    std::uint32_t k;        // least k with no (row, j >= k) dependence in N_{row+1,0}
    bool certified;         // N_{row,k} == N_{row+1,0} exactly
};
std::vector<RowBound> stopping_row_bound(const MartingaleSpec& lex_spec);

// ---------------------------------------------------------------------------
// JSON surfaces

nlohmann::json to_json(const MartingaleSpec& m);
MartingaleSpec spec_from_json(const nlohmann::json& j);

}  // namespace doob::mart
