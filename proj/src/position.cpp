#include "doob/position.hpp"

#include <algorithm>

namespace doob::bits {

PositionSet PositionSet::explicit_set(std::vector<Position> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    PositionSet s;
    s.kind_ = Kind::Explicit;
    s.members_ = std::move(members);
    return s;
}

bool PositionSet::contains(Position p) const {
    switch (kind_) {
        case Kind::RowPrefix:
            return p.row < rows_;
        case Kind::LexPrefix:
            return p < bound_;
        case Kind::BelowFunction: {
            const bool above = threshold(p.row) > p.col;  // p in A_f
            return complemented_ ? !above : above;
        }
        case Kind::Explicit:
            return std::binary_search(members_.begin(), members_.end(), p);
    }
    return false;
}

bool PositionSet::omega_enumerable() const {
    switch (kind_) {
        case Kind::RowPrefix:
            return rows_ == 0;
        case Kind::LexPrefix:
            return bound_ == Position{0, 0};
        case Kind::BelowFunction:
            // A_f has row sections of size f(m); B_f rows are infinite tails.
            return !complemented_;
        case Kind::Explicit:
            return true;
    }
    return false;
}

Position PositionSet::nth_member(std::size_t k) const {
    if (!omega_enumerable())
        throw DomainError("lex enumeration undefined: " + describe() +
                          " has an infinite row section");
    switch (kind_) {
        case Kind::Explicit:
            if (k >= members_.size())
                throw DomainError("set exhausted: member " + std::to_string(k) +
                                  " of a " + std::to_string(members_.size()) +
                                  "-element set");
            return members_[k];
        case Kind::BelowFunction: {
            std::size_t left = k;
            for (std::uint32_t m = 0; m < thresholds_.size(); ++m) {
                if (left < thresholds_[m])
                    return Position{m, static_cast<std::uint32_t>(left)};
                left -= thresholds_[m];
            }
            throw DomainError("set exhausted: member " + std::to_string(k) +
                              " of " + describe());
        }
        default:
            throw DomainError("set exhausted: empty set");
    }
}

std::uint32_t PositionSet::complement_col(std::uint32_t row, std::uint32_t j) const {
    switch (kind_) {
        case Kind::RowPrefix:
            return j;  // row is entirely outside the set
        case Kind::LexPrefix:
            return (row == bound_.row) ? bound_.col + j : j;
        case Kind::BelowFunction:
            // complement of A_f in row m starts at f(m)
            return threshold(row) + j;
        case Kind::Explicit: {
            // j-th column of this row not among the members
            auto it = std::lower_bound(members_.begin(), members_.end(),
                                       Position{row, 0});
            std::uint32_t col = 0;
            for (; it != members_.end() && it->row == row; ++it) {
                const std::uint32_t gap = it->col - col;  // free columns col..it->col-1
                if (j < gap) return col + j;
                j -= gap;
                col = it->col + 1;
            }
            return col + j;
        }
    }
    return j;
}

Position PositionSet::relabel_tail_to_complement(Position tail) const {
    if (kind_ == Kind::BelowFunction && complemented_) {
        // Complement is A_f: finite row sections, flat matching.
        if (tail.row != 0)
            throw DomainError(
                "tail for a finite-row complement must live on row 0, got " +
                to_string(tail));
        PositionSet above = below_function(thresholds_, false);
        return above.nth_member(tail.col);
    }
    switch (kind_) {
        case Kind::RowPrefix:
            return Position{rows_ + tail.row, tail.col};
        case Kind::LexPrefix:
            if (bound_ == Position{0, 0}) return tail;
            if (tail.row == 0) return Position{bound_.row, bound_.col + tail.col};
            return Position{bound_.row + tail.row, tail.col};
        case Kind::BelowFunction:  // complement is B_f, rows shift by f(m)
            return Position{tail.row, threshold(tail.row) + tail.col};
        case Kind::Explicit:
            return Position{tail.row, complement_col(tail.row, tail.col)};
    }
    return tail;
}

Position PositionSet::relabel_complement_to_tail(Position p) const {
    if (contains(p))
        throw DomainError("position " + to_string(p) + " is not in the complement of " +
                          describe());
    if (kind_ == Kind::BelowFunction && complemented_) {
        // Flat matching: index of p in the lex enumeration of A_f.
        std::size_t index = 0;
        for (std::uint32_t m = 0; m < p.row; ++m) index += threshold(m);
        index += p.col;
        return Position{0, static_cast<std::uint32_t>(index)};
    }
    switch (kind_) {
        case Kind::RowPrefix:
            return Position{p.row - rows_, p.col};
        case Kind::LexPrefix:
            if (bound_ == Position{0, 0}) return p;
            if (p.row == bound_.row) return Position{0, p.col - bound_.col};
            return Position{p.row - bound_.row, p.col};
        case Kind::BelowFunction:
            return Position{p.row, p.col - threshold(p.row)};
        case Kind::Explicit: {
            // count free columns of p.row strictly before p.col
            std::uint32_t free = p.col;
            auto lo = std::lower_bound(members_.begin(), members_.end(),
                                       Position{p.row, 0});
            for (auto it = lo; it != members_.end() && it->row == p.row &&
                               it->col < p.col;
                 ++it)
                --free;
            return Position{p.row, free};
        }
    }
    return p;
}

std::string PositionSet::describe() const {
    switch (kind_) {
        case Kind::RowPrefix:
            return "row_prefix(" + std::to_string(rows_) + ")";
        case Kind::LexPrefix:
            return "lex_prefix" + to_string(bound_);
        case Kind::BelowFunction: {
            std::string s = complemented_ ? "B_f[" : "A_f[";
            for (std::size_t i = 0; i < thresholds_.size(); ++i)
                s += (i ? "," : "") + std::to_string(thresholds_[i]);
            return s + "]";
        }
        case Kind::Explicit: {
            std::string s = "{";
            for (std::size_t i = 0; i < members_.size(); ++i)
                s += (i ? "," : "") + to_string(members_[i]);
            return s + "}";
        }
    }
    return "?";
}

}  // namespace doob::bits
