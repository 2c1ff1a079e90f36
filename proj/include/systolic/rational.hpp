#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "systolic/errors.hpp"

namespace systolic {

using Integer = mpz_class;
using Rational = mpq_class;

inline bool is_integer(const Rational& q) {
    return q.get_den() == 1;
}

// int64 -> GMP conversions (gmpxx has no long long overloads; long is 64-bit here)
inline Integer to_integer(long long x) { return Integer(static_cast<long>(x)); }

inline Rational to_rational(long long num, long long den = 1) {
    Rational q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
}

inline int sign(const Rational& q) {
    return sgn(q);
}

inline Rational rational_abs(const Rational& q) {
    return q < 0 ? Rational(-q) : q;
}

inline Integer integer_pow(const Integer& base, unsigned long exp) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
    return out;
}

inline Rational rational_pow(const Rational& base, unsigned long exp) {
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num().get_mpz_t(), exp);
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den().get_mpz_t(), exp);
    return out;
}

// floor(sqrt(n)) for n >= 0
inline Integer integer_isqrt(const Integer& n) {
    require(n >= 0, "integer_isqrt: negative argument");
    Integer out;
    mpz_sqrt(out.get_mpz_t(), n.get_mpz_t());
    return out;
}

inline std::string to_string(const Rational& q) {
    return q.get_str();
}

inline std::string to_string(const Integer& z) {
    return z.get_str();
}

// Parses "p" or "p/q" (arbitrary precision). Rejects anything else.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw precondition_error("parse_rational: empty string");
    std::size_t slash = text.find('/');
    auto check_digits = [&](std::size_t from, std::size_t to) {
        if (from >= to) return false;
        std::size_t i = from;
        if (text[i] == '+' || text[i] == '-') ++i;
        if (i >= to) return false;
        for (; i < to; ++i)
            if (text[i] < '0' || text[i] > '9') return false;
        return true;
    };
    bool ok = slash == std::string::npos
                  ? check_digits(0, text.size())
                  : check_digits(0, slash) && check_digits(slash + 1, text.size());
    if (!ok) throw precondition_error("parse_rational: malformed rational '" + text + "'");
    Rational q;
    if (q.set_str(text, 10) != 0) throw precondition_error("parse_rational: malformed rational '" + text + "'");
    require(q.get_den() != 0, "parse_rational: zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

// positive remainder of d mod 4, correct for negative d
inline int mod4(long long d) {
    long long m = d % 4;
    return static_cast<int>(m < 0 ? m + 4 : m);
}

inline bool is_squarefree(long long d) {
    if (d == 0) return false;
    unsigned long long n = d < 0 ? static_cast<unsigned long long>(-d) : static_cast<unsigned long long>(d);
    for (unsigned long long p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0) return false;
        while (n % p == 0) n /= p;
    }
    return true;
}

} // namespace systolic
