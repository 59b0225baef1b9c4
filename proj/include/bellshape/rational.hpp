#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellshape/errors.hpp"

namespace bellshape {

using Integer = mpz_class;
using Rational = mpq_class;

// mpq_class(num, den) does not canonicalize on its own; every Rational built
// from parts must go through here.
inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw BadInput("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(long num, long den = 1) {
    return make_rational(Integer(num), Integer(den));
}

inline const Integer& num(const Rational& q) { return q.get_num(); }
inline const Integer& den(const Rational& q) { return q.get_den(); }

inline int sign(const Rational& q) { return sgn(q); }
inline int sign(const Integer& n) { return sgn(n); }

inline Integer int_pow(Integer base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rational rat_pow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    Rational r = make_rational(int_pow(num(base), a), int_pow(den(base), a));
    if (e < 0) {
        if (r == 0) throw BadInput("0 raised to a negative power");
        r = Rational(1) / r;
    }
    return r;
}

inline Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// floor(q) as an integer
inline Integer rat_floor(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), num(q).get_mpz_t(), den(q).get_mpz_t());
    return r;
}

inline Integer rat_ceil(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), num(q).get_mpz_t(), den(q).get_mpz_t());
    return r;
}

// dyadic outward roundings: largest multiple of 2^-bits below q, smallest above
inline Rational dyadic_floor(const Rational& q, unsigned bits) {
    Integer scaled = num(q);
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), bits);
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), scaled.get_mpz_t(), den(q).get_mpz_t());
    Integer p2 = 1;
    mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), bits);
    return make_rational(fl, p2);
}

inline Rational dyadic_ceil(const Rational& q, unsigned bits) {
    Integer scaled = num(q);
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), bits);
    Integer cl;
    mpz_cdiv_q(cl.get_mpz_t(), scaled.get_mpz_t(), den(q).get_mpz_t());
    Integer p2 = 1;
    mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), bits);
    return make_rational(cl, p2);
}

// exact rational square root, if one exists
inline std::optional<Rational> rat_sqrt_exact(const Rational& q) {
    if (q < 0) return std::nullopt;
    if (mpz_perfect_square_p(num(q).get_mpz_t()) && mpz_perfect_square_p(den(q).get_mpz_t())) {
        Integer rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num(q).get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den(q).get_mpz_t());
        return make_rational(rn, rd);
    }
    return std::nullopt;
}

// exact k-th root of a rational, if one exists
inline std::optional<Rational> rat_root_exact(const Rational& q, unsigned long k) {
    if (k == 0) throw BadInput("0th root");
    if (q < 0 && k % 2 == 0) return std::nullopt;
    Integer an = abs(num(q)), ad = den(q);
    Integer rn, rd;
    if (!mpz_root(rn.get_mpz_t(), an.get_mpz_t(), k)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), ad.get_mpz_t(), k)) return std::nullopt;
    Rational r = make_rational(rn, rd);
    return (q < 0) ? Rational(-r) : r;
}

// "p/q" or "p" (decimal), used across the JSON/CLI boundary
inline Rational rat_from_string(const std::string& s) {
    if (s.empty()) throw BadInput("empty rational literal");
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), s.c_str(), 10) != 0)
        throw BadInput("bad rational literal: " + s);
    if (den(q) == 0) throw BadInput("zero denominator in: " + s);
    q.canonicalize();
    return q;
}

inline std::string rat_to_string(const Rational& q) {
    return q.get_str();
}

// decimal rendering with explicit precision, round-to-nearest-ish (for reports only)
inline std::string rat_to_decimal(const Rational& q, int digits) {
    if (q == 0) return "0";
    std::string s;
    Rational a = rat_abs(q);
    Integer ip = rat_floor(a);
    Rational frac = a - Rational(ip);
    s += (q < 0 ? "-" : "");
    s += ip.get_str();
    if (digits > 0) {
        Integer scale = int_pow(Integer(10), static_cast<unsigned long>(digits));
        Integer d = rat_floor(frac * Rational(scale) + make_rational(1, 2));
        std::string ds = d.get_str();
        if (static_cast<int>(ds.size()) > digits) {
            // fractional part rounded up to 1
            return rat_to_decimal(q < 0 ? Rational(-(a + 1)) : Rational(a + 1), 0);
        }
        while (static_cast<int>(ds.size()) < digits) ds.insert(ds.begin(), '0');
        s += "." + ds;
    }
    return s;
}

// endpoint on the extended real line; used by piece supports and root intervals
struct ExtReal {
    enum Kind { MinusInf = -1, Finite = 0, PlusInf = 1 };
    Kind kind = Finite;
    Rational value = 0;

    static ExtReal minus_inf() { return {MinusInf, 0}; }
    static ExtReal plus_inf() { return {PlusInf, 0}; }
    static ExtReal finite(const Rational& v) { return {Finite, v}; }

    bool is_finite() const { return kind == Finite; }

    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        if (a.kind != b.kind) return false;
        return a.kind != Finite || a.value == b.value;
    }
    friend bool operator<(const ExtReal& a, const ExtReal& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.kind == Finite && a.value < b.value;
    }
    friend bool operator<=(const ExtReal& a, const ExtReal& b) { return a < b || a == b; }
};

inline std::string ext_to_string(const ExtReal& e) {
    switch (e.kind) {
        case ExtReal::MinusInf: return "-inf";
        case ExtReal::PlusInf: return "inf";
        default: return rat_to_string(e.value);
    }
}

inline ExtReal ext_from_string(const std::string& s) {
    if (s == "inf" || s == "+inf") return ExtReal::plus_inf();
    if (s == "-inf") return ExtReal::minus_inf();
    return ExtReal::finite(rat_from_string(s));
}

} // namespace bellshape
