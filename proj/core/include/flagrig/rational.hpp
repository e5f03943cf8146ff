#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>

#include "flagrig/error.hpp"

namespace flagrig {

using BigInt = boost::multiprecision::mpz_int;

/// Exact rational with arbitrary-precision numerator and positive denominator,
/// always stored in lowest terms (the GMP backend keeps the canonical form).
using Rational = boost::multiprecision::mpq_rational;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Cheap zero test and sign; comparing against a literal 0 would go through
/// the generic rational comparison, which is far more expensive.
inline bool rat_is_zero(const Rational& q) { return q.is_zero(); }
inline int rat_sign(const Rational& q) { return q.sign(); }

/// r^e for integer e (negative exponents require r != 0).
inline Rational rational_pow(const Rational& r, long e) {
    if (e == 0) return Rational(1);
    if (r == 0) {
        if (e < 0) throw DivisionByZeroError("rational_pow: 0 to a negative power");
        return Rational(0);
    }
    Rational base = e < 0 ? Rational(1) / r : r;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Rational acc(1);
    while (k) {
        if (k & 1u) acc *= base;
        base *= base;
        k >>= 1u;
    }
    return acc;
}

/// "p/q" with "/q" omitted when the denominator is 1.
inline std::string rational_to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw UsageError("parse_rational: zero denominator in '" + s + "'");
        return Rational(num, den);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("parse_rational: cannot parse '" + s + "'");
    }
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

} // namespace flagrig
