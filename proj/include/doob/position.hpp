#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "doob/errors.hpp"

namespace doob::bits {

// A cell (row, col) of the N x N bit array. The plain bit space 2^N embeds as
// row 0, the space of sequences-of-sequences as the rows. Ordering is
// lexicographic: (k,l) < (m,n) iff k < m, or k = m and l < n.
struct Position {
    std::uint32_t row = 0;
    std::uint32_t col = 0;

    friend auto operator<=>(const Position&, const Position&) = default;
};

inline std::string to_string(Position p) {
    return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
}

// A decidable "past" D of the array: the conditioning sets of conditional
// expectation. Four kinds:
//
//   row_prefix(n)           rows 0..n-1, whole rows
//   lex_prefix(p)           every position lexicographically below p
//   below_function(f)       A_f = {(m,n) : f(m) > n}; rows beyond the table
//                           have threshold 0 (empty). complemented gives
//                           B_f = {(m,n) : f(m) <= n}.
//   explicit_set(ps)        a finite set
class PositionSet {
public:
    enum class Kind { RowPrefix, LexPrefix, BelowFunction, Explicit };

    static PositionSet row_prefix(std::uint32_t rows) {
        PositionSet s;
        s.kind_ = Kind::RowPrefix;
        s.rows_ = rows;
        return s;
    }

    static PositionSet lex_prefix(Position p) {
        PositionSet s;
        s.kind_ = Kind::LexPrefix;
        s.bound_ = p;
        return s;
    }

    static PositionSet below_function(std::vector<std::uint32_t> thresholds,
                                      bool complemented = false) {
        PositionSet s;
        s.kind_ = Kind::BelowFunction;
        s.thresholds_ = std::move(thresholds);
        s.complemented_ = complemented;
        return s;
    }

    static PositionSet explicit_set(std::vector<Position> members);

    static PositionSet empty() { return row_prefix(0); }

    Kind kind() const { return kind_; }
    bool contains(Position p) const;

    // Lex enumeration of the set itself: k-th member, counting from 0.
    // Defined only when the set's lex order has order type <= omega, i.e.
    // every row section is finite (A_f, explicit sets, the degenerate
    // prefixes). Throws DomainError otherwise or when the set is exhausted.
    Position nth_member(std::size_t k) const;

    // True when every nonempty row section of the set is finite, so the lex
    // enumeration above is total on the set.
    bool omega_enumerable() const;

    // The concatenation relabeling: maps positions of the abstract tail index
    // space onto the complement D^c.
    //
    // When every row section of D^c is infinite (row/lex prefixes, A_f as D,
    // explicit sets), tail row i is matched to the i-th row with a nonempty
    // complement section and columns are matched in order; this reproduces
    // the classical displays for row and lex prefixes. When the complement
    // sections are finite (D = B_f, complement A_f), the tail must live on
    // row 0 and is matched to the lex enumeration of the complement.
    Position relabel_tail_to_complement(Position tail) const;

    // Inverse of the relabeling, for splitting a concrete assignment.
    // Precondition: !contains(p).
    Position relabel_complement_to_tail(Position p) const;

    // Accessors for serialization.
    std::uint32_t row_prefix_rows() const { return rows_; }
    Position lex_prefix_bound() const { return bound_; }
    const std::vector<std::uint32_t>& thresholds() const { return thresholds_; }
    bool complemented() const { return complemented_; }
    const std::vector<Position>& members() const { return members_; }

    std::string describe() const;

private:
    // Threshold of row m under the below-function table (0 beyond the table).
    std::uint32_t threshold(std::uint32_t m) const {
        return m < thresholds_.size() ? thresholds_[m] : 0;
    }
    // Columns of row `row` not in the set, enumerated in order: the j-th one.
    std::uint32_t complement_col(std::uint32_t row, std::uint32_t j) const;

    Kind kind_ = Kind::RowPrefix;
    std::uint32_t rows_ = 0;                  // RowPrefix
    Position bound_{};                        // LexPrefix
    std::vector<std::uint32_t> thresholds_;   // BelowFunction
    bool complemented_ = false;               // BelowFunction
    std::vector<Position> members_;           // Explicit, sorted, unique
};

}  // namespace doob::bits
