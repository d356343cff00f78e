#include "doob/cylinder.hpp"

#include <algorithm>
#include <atomic>

namespace doob::bits {

namespace {
std::atomic<std::size_t> g_support_cap{20};
}

std::size_t support_cap() { return g_support_cap.load(); }
void set_support_cap(std::size_t cap) { g_support_cap.store(cap); }

// ---------------------------------------------------------------------------
// BitAssignment

BitAssignment::BitAssignment(std::initializer_list<std::pair<Position, bool>> bits) {
    for (const auto& [p, b] : bits) set(p, b);
}

BitAssignment BitAssignment::from_pairs(std::vector<std::pair<Position, bool>> bits) {
    std::sort(bits.begin(), bits.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < bits.size(); ++i)
        if (bits[i - 1].first == bits[i].first)
            throw DomainError("position " + to_string(bits[i].first) + " mapped twice");
    BitAssignment a;
    a.bits_ = std::move(bits);
    return a;
}

bool BitAssignment::defined_at(Position p) const {
    auto it = std::lower_bound(bits_.begin(), bits_.end(), p,
                               [](const auto& e, Position q) { return e.first < q; });
    return it != bits_.end() && it->first == p;
}

bool BitAssignment::at(Position p) const {
    auto it = std::lower_bound(bits_.begin(), bits_.end(), p,
                               [](const auto& e, Position q) { return e.first < q; });
    if (it == bits_.end() || it->first != p)
        throw DomainError("assignment undefined at " + to_string(p));
    return it->second;
}

void BitAssignment::set(Position p, bool value) {
    auto it = std::lower_bound(bits_.begin(), bits_.end(), p,
                               [](const auto& e, Position q) { return e.first < q; });
    if (it != bits_.end() && it->first == p)
        throw DomainError("position " + to_string(p) + " mapped twice");
    bits_.insert(it, {p, value});
}

BitAssignment BitAssignment::merged_with(const BitAssignment& other) const {
    BitAssignment out = *this;
    for (const auto& [p, b] : other.bits_) out.set(p, b);
    return out;
}

BitAssignment concat(const BitAssignment& prefix, const BitAssignment& tail,
                     const PositionSet& D) {
    BitAssignment out;
    for (const auto& [p, b] : prefix.pairs()) {
        if (!D.contains(p))
            throw DomainError("prefix position " + to_string(p) + " is not in " +
                              D.describe());
        out.set(p, b);
    }
    for (const auto& [p, b] : tail.pairs())
        out.set(D.relabel_tail_to_complement(p), b);
    return out;
}

std::pair<BitAssignment, BitAssignment> split(const BitAssignment& whole,
                                              const PositionSet& D) {
    BitAssignment prefix, tail;
    for (const auto& [p, b] : whole.pairs()) {
        if (D.contains(p))
            prefix.set(p, b);
        else
            tail.set(D.relabel_complement_to_tail(p), b);
    }
    return {std::move(prefix), std::move(tail)};
}

// ---------------------------------------------------------------------------
// CylinderFunction

void CylinderFunction::check_cap(std::size_t positions) {
    if (positions > support_cap()) throw SupportCapError(positions, support_cap());
}

CylinderFunction CylinderFunction::constant(Rational value) {
    value.canonicalize();
    CylinderFunction f;
    f.table_ = {std::move(value)};
    return f;
}

CylinderFunction CylinderFunction::coordinate(Position p) {
    CylinderFunction f;
    f.support_ = {p};
    f.table_ = {Rational(0), Rational(1)};
    return f;
}

CylinderFunction CylinderFunction::from_table(std::vector<Position> support,
                                              std::vector<Rational> table) {
    for (std::size_t i = 1; i < support.size(); ++i)
        if (!(support[i - 1] < support[i]))
            throw DomainError("support must be strictly increasing");
    check_cap(support.size());
    if (table.size() != (std::size_t{1} << support.size()))
        throw DomainError("table must have exactly 2^|support| entries");
    CylinderFunction f;
    f.support_ = std::move(support);
    f.table_ = std::move(table);
    // user-supplied rationals may arrive uncanonicalized (e.g. mpq_class(3,3))
    for (Rational& v : f.table_) v.canonicalize();
    f.canonicalize();
    return f;
}

CylinderFunction CylinderFunction::tabulate(
    std::vector<Position> support,
    const std::function<Rational(const BitAssignment&)>& fn) {
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    check_cap(support.size());
    const std::size_t k = support.size();
    std::vector<Rational> table(std::size_t{1} << k);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
        BitAssignment a;
        for (std::size_t i = 0; i < k; ++i)
            a.set(support[i], (idx >> (k - 1 - i)) & 1u);
        table[idx] = fn(a);
    }
    return from_table(std::move(support), std::move(table));
}

void CylinderFunction::canonicalize() {
    const std::size_t k = support_.size();
    if (k == 0) return;
    std::vector<bool> keep(k, false);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t mask = std::size_t{1} << (k - 1 - i);
        for (std::size_t idx = 0; idx < table_.size(); ++idx) {
            if (idx & mask) continue;
            if (table_[idx] != table_[idx | mask]) {
                keep[i] = true;
                break;
            }
        }
    }
    std::size_t kept = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
    if (kept == k) return;

    std::vector<Position> new_support;
    new_support.reserve(kept);
    for (std::size_t i = 0; i < k; ++i)
        if (keep[i]) new_support.push_back(support_[i]);

    std::vector<Rational> new_table(std::size_t{1} << kept);
    for (std::size_t out = 0; out < new_table.size(); ++out) {
        // place the kept bits, leave pruned bits at 0
        std::size_t idx = 0;
        std::size_t bit = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!keep[i]) continue;
            if ((out >> (kept - 1 - bit)) & 1u) idx |= std::size_t{1} << (k - 1 - i);
            ++bit;
        }
        new_table[out] = table_[idx];
    }
    support_ = std::move(new_support);
    table_ = std::move(new_table);
}

const Rational& CylinderFunction::value_at(const BitAssignment& a) const {
    const std::size_t k = support_.size();
    std::size_t idx = 0;
    for (std::size_t i = 0; i < k; ++i)
        if (a.at(support_[i])) idx |= std::size_t{1} << (k - 1 - i);
    return table_[idx];
}

Rational CylinderFunction::expectation() const {
    Rational sum(0);
    for (const Rational& v : table_) sum += v;
    return sum / Rational(std::size_t{1} << support_.size());
}

CylinderFunction CylinderFunction::cond_expectation(const PositionSet& D) const {
    const std::size_t k = support_.size();
    std::vector<bool> keep(k);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < k; ++i) {
        keep[i] = D.contains(support_[i]);
        kept += keep[i];
    }
    const std::size_t dropped = k - kept;
    if (dropped == 0) return *this;

    std::vector<Position> new_support;
    new_support.reserve(kept);
    for (std::size_t i = 0; i < k; ++i)
        if (keep[i]) new_support.push_back(support_[i]);

    // bucket sums over the averaged-out positions
    std::vector<Rational> sums(std::size_t{1} << kept, Rational(0));
    for (std::size_t idx = 0; idx < table_.size(); ++idx) {
        std::size_t out = 0;
        std::size_t bit = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!keep[i]) continue;
            if ((idx >> (k - 1 - i)) & 1u) out |= std::size_t{1} << (kept - 1 - bit);
            ++bit;
        }
        sums[out] += table_[idx];
    }
    const Rational scale = pow2_inv(static_cast<unsigned>(dropped));
    for (Rational& v : sums) v *= scale;

    CylinderFunction g;
    g.support_ = std::move(new_support);
    g.table_ = std::move(sums);
    g.canonicalize();
    return g;
}

CylinderFunction CylinderFunction::restrict(const BitAssignment& fixed) const {
    const std::size_t k = support_.size();
    std::vector<bool> keep(k);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < k; ++i) {
        keep[i] = !fixed.defined_at(support_[i]);
        kept += keep[i];
    }
    if (kept == k) return *this;

    std::size_t pinned = 0;
    std::vector<Position> new_support;
    new_support.reserve(kept);
    for (std::size_t i = 0; i < k; ++i) {
        if (keep[i])
            new_support.push_back(support_[i]);
        else if (fixed.at(support_[i]))
            pinned |= std::size_t{1} << (k - 1 - i);
    }

    std::vector<Rational> new_table(std::size_t{1} << kept);
    for (std::size_t out = 0; out < new_table.size(); ++out) {
        std::size_t idx = pinned;
        std::size_t bit = 0;
        for (std::size_t i = 0; i < k; ++i) {
            if (!keep[i]) continue;
            if ((out >> (kept - 1 - bit)) & 1u) idx |= std::size_t{1} << (k - 1 - i);
            ++bit;
        }
        new_table[out] = table_[idx];
    }
    CylinderFunction g;
    g.support_ = std::move(new_support);
    g.table_ = std::move(new_table);
    g.canonicalize();
    return g;
}

CylinderFunction CylinderFunction::relabel(
    const std::function<Position(Position)>& map) const {
    const std::size_t k = support_.size();
    // image positions with their source index, re-sorted lexicographically
    std::vector<std::pair<Position, std::size_t>> image(k);
    for (std::size_t i = 0; i < k; ++i) image[i] = {map(support_[i]), i};
    std::sort(image.begin(), image.end());
    for (std::size_t i = 1; i < k; ++i)
        if (image[i - 1].first == image[i].first)
            throw DomainError("relabeling collapses two support positions onto " +
                              to_string(image[i].first));

    std::vector<Position> new_support(k);
    for (std::size_t i = 0; i < k; ++i) new_support[i] = image[i].first;
    std::vector<Rational> new_table(table_.size());
    for (std::size_t out = 0; out < new_table.size(); ++out) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < k; ++i)
            if ((out >> (k - 1 - i)) & 1u)
                idx |= std::size_t{1} << (k - 1 - image[i].second);
        new_table[out] = table_[idx];
    }
    CylinderFunction g;
    g.support_ = std::move(new_support);
    g.table_ = std::move(new_table);
    g.canonicalize();
    return g;
}

bool CylinderFunction::equals(const CylinderFunction& other) const {
    return support_ == other.support_ && table_ == other.table_;
}

CylinderFunction CylinderFunction::abs() const {
    CylinderFunction g = *this;
    for (Rational& v : g.table_)
        if (sgn(v) < 0) v = -v;
    return g;
}

Rational CylinderFunction::min_value() const {
    return *std::min_element(table_.begin(), table_.end());
}

Rational CylinderFunction::max_value() const {
    return *std::max_element(table_.begin(), table_.end());
}

Rational CylinderFunction::sup_norm() const {
    Rational m(0);
    for (const Rational& v : table_) {
        Rational a = v < 0 ? Rational(-v) : v;
        if (a > m) m = a;
    }
    return m;
}

CylinderFunction CylinderFunction::combine(
    const CylinderFunction& f, const CylinderFunction& g,
    const std::function<Rational(const Rational&, const Rational&)>& op) {
    std::vector<Position> support;
    support.reserve(f.support_.size() + g.support_.size());
    std::set_union(f.support_.begin(), f.support_.end(), g.support_.begin(),
                   g.support_.end(), std::back_inserter(support));
    check_cap(support.size());
    const std::size_t k = support.size();

    // bit index of each operand's support inside the union
    auto positions_of = [&](const CylinderFunction& h) {
        std::vector<std::size_t> at(h.support_.size());
        for (std::size_t i = 0; i < h.support_.size(); ++i)
            at[i] = static_cast<std::size_t>(
                std::lower_bound(support.begin(), support.end(), h.support_[i]) -
                support.begin());
        return at;
    };
    const auto f_at = positions_of(f);
    const auto g_at = positions_of(g);

    std::vector<Rational> table(std::size_t{1} << k);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
        auto project = [&](const CylinderFunction& h, const std::vector<std::size_t>& at) {
            std::size_t sub = 0;
            const std::size_t hk = h.support_.size();
            for (std::size_t i = 0; i < hk; ++i)
                if ((idx >> (k - 1 - at[i])) & 1u) sub |= std::size_t{1} << (hk - 1 - i);
            return sub;
        };
        table[idx] = op(f.table_[project(f, f_at)], g.table_[project(g, g_at)]);
    }
    CylinderFunction out;
    out.support_ = std::move(support);
    out.table_ = std::move(table);
    out.canonicalize();
    return out;
}

CylinderFunction operator+(const CylinderFunction& f, const CylinderFunction& g) {
    return CylinderFunction::combine(f, g, [](const Rational& a, const Rational& b) {
        return Rational(a + b);
    });
}

CylinderFunction operator-(const CylinderFunction& f, const CylinderFunction& g) {
    return CylinderFunction::combine(f, g, [](const Rational& a, const Rational& b) {
        return Rational(a - b);
    });
}

CylinderFunction operator*(const CylinderFunction& f, const CylinderFunction& g) {
    return CylinderFunction::combine(f, g, [](const Rational& a, const Rational& b) {
        return Rational(a * b);
    });
}

CylinderFunction operator*(const Rational& c, const CylinderFunction& f) {
    CylinderFunction g = f;
    for (Rational& v : g.table_) v *= c;
    g.canonicalize();
    return g;
}

}  // namespace doob::bits
