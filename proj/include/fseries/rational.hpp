#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fseries {

using Int = mpz_class;

/// Exact rational num/den with den > 0, kept *unreduced* by default.
///
/// Deep continued-fraction orbits produce numerators of millions of bits;
/// canonicalizing through gcd on every operation (as mpq_class does) would
/// dominate the runtime. Every predicate below works on the raw pair, so
/// reduction happens only where a caller asks for it.
struct BigRat {
    Int num;
    Int den;  // > 0

    BigRat() : num(0), den(1) {}
    BigRat(Int n) : num(std::move(n)), den(1) {}
    BigRat(long n) : num(n), den(1) {}
    BigRat(Int n, Int d) : num(std::move(n)), den(std::move(d)) {
        if (den == 0) throw std::invalid_argument("BigRat: zero denominator");
        if (den < 0) { num = -num; den = -den; }
    }
    BigRat(long n, long d) : BigRat(Int(n), Int(d)) {}

    bool is_zero() const { return num == 0; }
    int sign() const { return mpz_sgn(num.get_mpz_t()); }

    BigRat reduced() const {
        Int g;
        mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (g == 0) return BigRat(0, 1);
        return BigRat(num / g, den / g);
    }

    friend BigRat operator+(const BigRat& a, const BigRat& b) {
        return BigRat(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend BigRat operator-(const BigRat& a, const BigRat& b) {
        return BigRat(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend BigRat operator*(const BigRat& a, const BigRat& b) {
        return BigRat(a.num * b.num, a.den * b.den);
    }
    friend BigRat operator/(const BigRat& a, const BigRat& b) {
        if (b.num == 0) throw std::domain_error("BigRat: division by zero");
        return BigRat(a.num * b.den, a.den * b.num);
    }
    BigRat operator-() const { BigRat r; r.num = -num; r.den = den; return r; }

    friend bool operator==(const BigRat& a, const BigRat& b) {
        return a.num * b.den == b.num * a.den;
    }
    friend bool operator!=(const BigRat& a, const BigRat& b) { return !(a == b); }
    friend bool operator<(const BigRat& a, const BigRat& b) {
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator<=(const BigRat& a, const BigRat& b) {
        return a.num * b.den <= b.num * a.den;
    }
    friend bool operator>(const BigRat& a, const BigRat& b) { return b < a; }
    friend bool operator>=(const BigRat& a, const BigRat& b) { return b <= a; }

    BigRat abs() const { BigRat r(*this); if (r.num < 0) r.num = -r.num; return r; }

    /// Round-to-nearest double, correct even when num/den overflow a double.
    double to_double() const {
        if (num == 0) return 0.0;
        long en, ed;
        double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
        double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
        return std::ldexp(mn / md, static_cast<int>(en - ed));
    }

    /// Natural log of a positive rational, accurate to a couple of ulp
    /// regardless of magnitude (mantissa/exponent split avoids overflow).
    double log() const {
        if (sign() <= 0) throw std::domain_error("BigRat::log: nonpositive value");
        long en, ed;
        double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
        double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
        return std::log(mn) - std::log(md) + static_cast<double>(en - ed) * M_LN2;
    }

    Int floor() const {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        return q;
    }

    /// Fractional part in [0,1).
    BigRat frac() const {
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        return BigRat(r, den);
    }

    std::string str() const {
        BigRat r = reduced();
        if (r.den == 1) return r.num.get_str();
        return r.num.get_str() + "/" + r.den.get_str();
    }

    size_t bits() const {
        return mpz_sizeinbase(num.get_mpz_t(), 2) + mpz_sizeinbase(den.get_mpz_t(), 2);
    }
};

inline BigRat rat_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: non-finite");
    mpq_class q(x);
    return BigRat(Int(q.get_num()), Int(q.get_den()));
}

}  // namespace fseries
