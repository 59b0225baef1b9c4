#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "bellshape/rational.hpp"

namespace bellshape {

// Rational-endpoint enclosure. Every operation rounds outward, so an interval
// built from enclosures of true quantities always contains the true result.
struct CertifiedInterval {
    Rational lo = 0;
    Rational hi = 0;

    CertifiedInterval() = default;
    CertifiedInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw BadInput("interval with lo > hi");
    }
    static CertifiedInterval point(const Rational& v) { return {v, v}; }

    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / 2; }
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }

    // -1, 0 (= undetermined or exact zero point), +1
    int determined_sign() const {
        if (lo > 0) return 1;
        if (hi < 0) return -1;
        return 0;
    }

    CertifiedInterval rounded_outward(unsigned bits) const {
        return {dyadic_floor(lo, bits), dyadic_ceil(hi, bits)};
    }

    friend CertifiedInterval operator+(const CertifiedInterval& a, const CertifiedInterval& b) {
        return {a.lo + b.lo, a.hi + b.hi};
    }
    friend CertifiedInterval operator-(const CertifiedInterval& a, const CertifiedInterval& b) {
        return {a.lo - b.hi, a.hi - b.lo};
    }
    friend CertifiedInterval operator-(const CertifiedInterval& a) { return {-a.hi, -a.lo}; }
    friend CertifiedInterval operator*(const CertifiedInterval& a, const CertifiedInterval& b) {
        Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
        return {std::min(std::min(p1, p2), std::min(p3, p4)),
                std::max(std::max(p1, p2), std::max(p3, p4))};
    }
    friend CertifiedInterval operator*(const Rational& c, const CertifiedInterval& a) {
        return c >= 0 ? CertifiedInterval{c * a.lo, c * a.hi}
                      : CertifiedInterval{c * a.hi, c * a.lo};
    }
};

// 1/I for an interval strictly away from zero
inline CertifiedInterval interval_reciprocal(const CertifiedInterval& a) {
    if (a.contains_zero()) throw BadInput("reciprocal of interval containing zero");
    return {Rational(1) / a.hi, Rational(1) / a.lo};
}

inline CertifiedInterval interval_pow(const CertifiedInterval& a, long e) {
    if (e == 0) return CertifiedInterval::point(1);
    bool invert = e < 0;
    unsigned long n = static_cast<unsigned long>(invert ? -e : e);
    CertifiedInterval r = CertifiedInterval::point(1);
    CertifiedInterval base = a;
    while (n) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return invert ? interval_reciprocal(r) : r;
}

// sqrt of a non-negative interval, outward at the given dyadic precision
inline CertifiedInterval interval_sqrt(const CertifiedInterval& a, unsigned bits) {
    if (a.lo < 0) throw BadInput("sqrt of interval with negative part");
    Integer p2 = 1;
    mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), bits);
    Integer p4 = p2 * p2;

    Integer tlo = rat_floor(a.lo * Rational(p4));
    Integer slo;
    mpz_sqrt(slo.get_mpz_t(), tlo.get_mpz_t());

    Integer thi = rat_ceil(a.hi * Rational(p4));
    Integer shi;
    mpz_sqrt(shi.get_mpz_t(), thi.get_mpz_t());
    shi += 1;

    return {make_rational(slo, p2), make_rational(shi, p2)};
}

namespace detail {

inline unsigned bits_for_width(const Rational& width) {
    // smallest B with 2^-B <= width, plus guard
    if (width <= 0) throw BadInput("nonpositive target width");
    unsigned b = 0;
    Rational w(1);
    while (w > width && b < 1u << 22) {
        w /= 2;
        ++b;
    }
    return b + 8;
}

// Taylor enclosure of e^x for |x| <= 1/4, exact partial sum plus remainder bound
inline CertifiedInterval exp_taylor_small(const Rational& x, unsigned bits) {
    Rational term(1), sum(1), abs_term(1), bound;
    Rational ax = rat_abs(x);
    Integer p2 = 1;
    mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), bits + 4);
    const Rational target = make_rational(1, p2);
    unsigned long k = 0;
    while (true) {
        ++k;
        term = term * x / Rational(static_cast<long>(k));
        abs_term = abs_term * ax / Rational(static_cast<long>(k));
        sum += term;
        // |tail| <= |x|^{k+1}/(k+1)! * 1/(1-|x|) <= abs_term * |x| * 4/3 / (k+1)
        bound = abs_term * ax * make_rational(4, 3) / Rational(static_cast<long>(k + 1));
        if (bound <= target) break;
        if (k > 100000) throw PrecisionExhausted("exp series did not converge");
    }
    return CertifiedInterval{sum - bound, sum + bound}.rounded_outward(bits + 2);
}

} // namespace detail

// Enclosure of e^r by Taylor series with explicit remainder and repeated
// interval squaring for argument reduction. Width <= target_width.
inline CertifiedInterval exp_enclosure(const Rational& r, const Rational& target_width) {
    unsigned base_bits = detail::bits_for_width(target_width);
    // extra headroom: value magnitude and squaring error growth
    double rd = std::abs(r.get_d());
    unsigned mag_bits = r > 0 ? static_cast<unsigned>(rd * 1.4427) + 4 : 0;

    unsigned m = 0;
    Rational x = r;
    while (rat_abs(x) > make_rational(1, 4)) {
        x /= 2;
        ++m;
        if (m > 4096) throw BadInput("exponent too large for enclosure");
    }

    for (int attempt = 0; attempt < 8; ++attempt) {
        unsigned bits = base_bits + mag_bits + 2 * m + 24 + 32 * attempt;
        CertifiedInterval e = detail::exp_taylor_small(x, bits);
        for (unsigned i = 0; i < m; ++i) {
            Rational lo = e.lo < 0 ? Rational(0) : e.lo; // exp > 0; clamp rounding dust
            e = CertifiedInterval{lo * lo, e.hi * e.hi}.rounded_outward(bits);
        }
        if (e.width() <= target_width) return e;
    }
    throw PrecisionExhausted("exp_enclosure: target width not reached");
}

namespace detail {

// alternating series for atan(1/x), x >= 2: consecutive partials bracket the limit
inline CertifiedInterval atan_inv_brackets(long x, unsigned bits) {
    Rational xq(x);
    Rational x2 = xq * xq;
    Rational term = 1 / xq;
    Rational sum = term;
    Rational lo = sum, hi = sum;
    unsigned long k = 1;
    Integer p2 = 1;
    mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), bits + 4);
    Rational target = make_rational(1, p2);
    while (rat_abs(term) > target) {
        term = -term / x2;
        Rational contrib = term / Rational(static_cast<long>(2 * k + 1));
        sum += contrib;
        if (contrib > 0) hi = sum, lo = sum - contrib; // previous partial was the lower one
        else lo = sum, hi = sum - contrib;
        ++k;
        if (k > 1000000) throw PrecisionExhausted("atan series stalled");
    }
    return CertifiedInterval{lo, hi};
}

struct ConstCache {
    std::mutex mu;
    std::map<unsigned, CertifiedInterval> pi, ln2;
};

inline ConstCache& const_cache() {
    static ConstCache c;
    return c;
}

} // namespace detail

// Machin: pi = 16 atan(1/5) - 4 atan(1/239), with bracketed partial sums
inline CertifiedInterval pi_enclosure(unsigned bits) {
    auto& cache = detail::const_cache();
    {
        std::lock_guard<std::mutex> g(cache.mu);
        auto it = cache.pi.find(bits);
        if (it != cache.pi.end()) return it->second;
    }
    CertifiedInterval a5 = detail::atan_inv_brackets(5, bits + 6);
    CertifiedInterval a239 = detail::atan_inv_brackets(239, bits + 6);
    CertifiedInterval pi =
        (Rational(16) * a5 - Rational(4) * a239).rounded_outward(bits + 2);
    std::lock_guard<std::mutex> g(cache.mu);
    cache.pi[bits] = pi;
    return pi;
}

namespace detail {

// atanh(z) for |z| < 1/2, positive-term tail bound
inline CertifiedInterval atanh_enclosure(const Rational& z, unsigned bits) {
    Rational z2 = z * z;
    Rational term = z, sum = z;
    unsigned long k = 0;
    Integer p2 = 1;
    mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), bits + 4);
    Rational target = make_rational(1, p2);
    Rational bound;
    while (true) {
        ++k;
        term = term * z2;
        sum += term / Rational(static_cast<long>(2 * k + 1));
        // |tail| <= |z|^{2k+3} / ((2k+3)(1-z^2))
        bound = rat_abs(term * z2) / (Rational(static_cast<long>(2 * k + 3)) * (1 - z2));
        if (bound <= target) break;
        if (k > 1000000) throw PrecisionExhausted("atanh series stalled");
    }
    return CertifiedInterval{sum - bound, sum + bound};
}

} // namespace detail

inline CertifiedInterval ln2_enclosure(unsigned bits) {
    auto& cache = detail::const_cache();
    {
        std::lock_guard<std::mutex> g(cache.mu);
        auto it = cache.ln2.find(bits);
        if (it != cache.ln2.end()) return it->second;
    }
    CertifiedInterval v =
        (Rational(2) * detail::atanh_enclosure(make_rational(1, 3), bits + 4))
            .rounded_outward(bits + 2);
    std::lock_guard<std::mutex> g(cache.mu);
    cache.ln2[bits] = v;
    return v;
}

// Enclosure of ln(u) for rational u > 0: reduce u = m * 2^e with m in [3/4, 3/2),
// then ln m = 2 atanh((m-1)/(m+1)).
inline CertifiedInterval log_enclosure(const Rational& u, unsigned bits) {
    if (u <= 0) throw BadInput("log of nonpositive rational");
    long e = 0;
    Rational m = u;
    while (m >= make_rational(3, 2)) {
        m /= 2;
        ++e;
    }
    while (m < make_rational(3, 4)) {
        m *= 2;
        --e;
    }
    Rational z = (m - 1) / (m + 1);
    CertifiedInterval lnm = Rational(2) * detail::atanh_enclosure(z, bits + 6);
    CertifiedInterval result = lnm;
    if (e != 0) {
        CertifiedInterval l2 = ln2_enclosure(bits + 6);
        result = result + Rational(e) * l2;
    }
    return result.rounded_outward(bits + 2);
}

// Enclosure of u^e for rational u > 0 and rational exponent, via exp(e * ln u)
inline CertifiedInterval pow_enclosure(const Rational& u, const Rational& e, unsigned bits) {
    if (u <= 0) throw BadInput("pow of nonpositive base");
    CertifiedInterval L = log_enclosure(u, bits + 16);
    CertifiedInterval arg = e * L;
    Integer p2 = 1;
    mpz_mul_2exp(p2.get_mpz_t(), p2.get_mpz_t(), bits);
    Rational w = make_rational(1, p2);
    CertifiedInterval elo = exp_enclosure(arg.lo, w);
    CertifiedInterval ehi = exp_enclosure(arg.hi, w);
    return {elo.lo, ehi.hi};
}

} // namespace bellshape
