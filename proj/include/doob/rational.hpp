#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "doob/errors.hpp"

namespace doob {

// Arbitrary-precision rational. All exact-arithmetic modules use this type;
// no floating point enters them.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// 2^-k as an exact rational.
inline Rational pow2_inv(unsigned k) {
    Rational q(1);
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), k);
    return q;
}

// Canonical decimal-free serialization: "p/q" with gcd(p,q)=1, q >= 1.
inline std::string to_fraction_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "p/q" or a bare integer "p".
inline Rational parse_fraction(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw ParseError("not a rational: '" + s + "'");
    if (q.get_den() == 0)
        throw ParseError("zero denominator in rational: '" + s + "'");
    q.canonicalize();
    return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace doob
