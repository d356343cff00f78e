#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <utility>
#include <vector>

#include "doob/position.hpp"
#include "doob/rational.hpp"

namespace doob::bits {

// Process-wide cap on table support sizes. A table over k positions has 2^k
// exact rational entries; the cap turns a runaway materialization into a
// clean SupportCapError instead of a memory blow-up.
std::size_t support_cap();
void set_support_cap(std::size_t cap);

struct ScopedSupportCap {
    explicit ScopedSupportCap(std::size_t cap) : saved_(support_cap()) { set_support_cap(cap); }
    ~ScopedSupportCap() { set_support_cap(saved_); }

private:
    std::size_t saved_;
};

// A finite partial assignment of bits to positions: the ω_D, prefixes and
// sample truncations of the discrete spaces.
class BitAssignment {
public:
    BitAssignment() = default;
    BitAssignment(std::initializer_list<std::pair<Position, bool>> bits);
    static BitAssignment from_pairs(std::vector<std::pair<Position, bool>> bits);

    bool defined_at(Position p) const;
    bool at(Position p) const;  // throws if undefined
    void set(Position p, bool value);  // throws if already defined

    std::size_t size() const { return bits_.size(); }
    const std::vector<std::pair<Position, bool>>& pairs() const { return bits_; }

    // Disjoint union; overlapping positions are rejected.
    BitAssignment merged_with(const BitAssignment& other) const;

    friend bool operator==(const BitAssignment&, const BitAssignment&) = default;

private:
    std::vector<std::pair<Position, bool>> bits_;  // sorted by position
};

// Defines ω = prefix ⌢_D tail: prefix is read in place (its positions must
// lie in D), tail positions are relabeled onto D^c per the set's rule.
BitAssignment concat(const BitAssignment& prefix, const BitAssignment& tail,
                     const PositionSet& D);

// Inverse: splits ω into (ω_D in place, ω_{D^c} pulled back to tail indices).
std::pair<BitAssignment, BitAssignment> split(const BitAssignment& whole,
                                              const PositionSet& D);

// A rational-valued function on the bit array depending on finitely many
// positions: a dense table with 2^|support| exact entries.
//
// Table order: support positions sorted lexicographically; an assignment
// (b_0, ..., b_{k-1}) along the sorted support indexes entry
// b_0 b_1 ... b_{k-1} read as a binary numeral (first position = most
// significant bit). Canonical form prunes positions the table never depends
// on; all constructors canonicalize.
class CylinderFunction {
public:
    CylinderFunction() : table_{Rational(0)} {}

    static CylinderFunction constant(Rational value);
    // The coordinate function ω ↦ ω_p as a 0/1 rational.
    static CylinderFunction coordinate(Position p);
    // General constructor; table.size() must be 2^support.size().
    static CylinderFunction from_table(std::vector<Position> support,
                                       std::vector<Rational> table);
    // Tabulates an arbitrary evaluator over the given support.
    static CylinderFunction tabulate(std::vector<Position> support,
                                     const std::function<Rational(const BitAssignment&)>& fn);

    const std::vector<Position>& support() const { return support_; }
    const std::vector<Rational>& table() const { return table_; }
    bool is_constant() const { return support_.empty(); }

    // Value on an assignment covering the support (extra positions ignored).
    const Rational& value_at(const BitAssignment& a) const;

    // --- exact operations -------------------------------------------------

    Rational expectation() const;
    CylinderFunction cond_expectation(const PositionSet& D) const;
    // Partial evaluation: pins the given bits, support shrinks accordingly.
    CylinderFunction restrict(const BitAssignment& fixed) const;
    // Reindexes the support through a strictly injective position map.
    CylinderFunction relabel(const std::function<Position(Position)>& map) const;

    bool equals(const CylinderFunction& other) const;  // canonical comparison

    CylinderFunction abs() const;
    Rational min_value() const;
    Rational max_value() const;
    Rational sup_norm() const;
    bool nonnegative() const { return sgn(min_value()) >= 0; }

    friend CylinderFunction operator+(const CylinderFunction&, const CylinderFunction&);
    friend CylinderFunction operator-(const CylinderFunction&, const CylinderFunction&);
    friend CylinderFunction operator*(const CylinderFunction&, const CylinderFunction&);
    friend CylinderFunction operator*(const Rational&, const CylinderFunction&);
    CylinderFunction& operator+=(const CylinderFunction& g) { return *this = *this + g; }
    CylinderFunction& operator-=(const CylinderFunction& g) { return *this = *this - g; }

private:
    static CylinderFunction combine(const CylinderFunction& f, const CylinderFunction& g,
                                    const std::function<Rational(const Rational&, const Rational&)>& op);
    void canonicalize();
    static void check_cap(std::size_t positions);

    std::vector<Position> support_;  // strictly increasing (lex)
    std::vector<Rational> table_;    // size 1 << support_.size()
};

}  // namespace doob::bits
