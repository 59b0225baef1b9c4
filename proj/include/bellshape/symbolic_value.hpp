#pragma once

#include <algorithm>
#include <sstream>
#include <vector>

#include "bellshape/interval.hpp"

namespace bellshape {

// A finite sum  sum_i q_i * e^{r_i} * pi^{p_i/2}  with rational q_i, r_i and
// integer p_i. Closed under addition and under multiplication by q * pi^{p/2}.
// The empty sum is exactly zero.
struct SymbolicValue {
    struct Term {
        Rational q;
        Rational r;
        long pi_half = 0; // value carries pi^{pi_half/2}
    };
    std::vector<Term> terms;

    SymbolicValue() = default;

    static SymbolicValue zero() { return {}; }

    static SymbolicValue single(const Rational& q, const Rational& r, long pi_half = 0) {
        SymbolicValue v;
        if (q != 0) v.terms.push_back({q, r, pi_half});
        return v;
    }

    bool is_zero() const { return terms.empty(); }

    void canonicalize() {
        std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
            if (a.r != b.r) return a.r < b.r;
            return a.pi_half < b.pi_half;
        });
        std::vector<Term> merged;
        for (const auto& t : terms) {
            if (!merged.empty() && merged.back().r == t.r && merged.back().pi_half == t.pi_half)
                merged.back().q += t.q;
            else
                merged.push_back(t);
        }
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [](const Term& t) { return t.q == 0; }),
                     merged.end());
        terms = std::move(merged);
    }

    SymbolicValue& operator+=(const SymbolicValue& other) {
        terms.insert(terms.end(), other.terms.begin(), other.terms.end());
        canonicalize();
        return *this;
    }

    friend SymbolicValue operator+(SymbolicValue a, const SymbolicValue& b) { return a += b; }

    // multiply every term by q0 * pi^{p0/2}
    SymbolicValue scaled(const Rational& q0, long pi_half0 = 0) const {
        SymbolicValue v;
        if (q0 == 0) return v;
        v.terms = terms;
        for (auto& t : v.terms) {
            t.q *= q0;
            t.pi_half += pi_half0;
        }
        return v;
    }

    friend bool operator==(const SymbolicValue& a, const SymbolicValue& b) {
        if (a.terms.size() != b.terms.size()) return false;
        for (size_t i = 0; i < a.terms.size(); ++i) {
            if (a.terms[i].q != b.terms[i].q || a.terms[i].r != b.terms[i].r ||
                a.terms[i].pi_half != b.terms[i].pi_half)
                return false;
        }
        return true;
    }

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& t : terms) {
            if (!first) os << " + ";
            first = false;
            os << "(" << rat_to_string(t.q) << ")";
            if (t.r != 0) os << "*e^(" << rat_to_string(t.r) << ")";
            if (t.pi_half != 0) os << "*pi^(" << t.pi_half << "/2)";
        }
        return os.str();
    }
};

// Enclosure of a SymbolicValue at a given target width for the total sum.
inline CertifiedInterval enclose(const SymbolicValue& v, const Rational& target_width) {
    if (v.is_zero()) return CertifiedInterval::point(0);
    size_t n = v.terms.size();
    Rational per_term = target_width / Rational(static_cast<long>(2 * n));
    unsigned pi_bits = detail::bits_for_width(per_term) + 64;
    CertifiedInterval total = CertifiedInterval::point(0);
    for (const auto& t : v.terms) {
        Rational aq = rat_abs(t.q);
        Rational exp_width = aq > 1 ? per_term / aq : per_term;
        CertifiedInterval factor = exp_enclosure(t.r, exp_width / 4);
        if (t.pi_half != 0) {
            CertifiedInterval pi = pi_enclosure(pi_bits);
            long p = t.pi_half;
            CertifiedInterval pip;
            if (p % 2 == 0) {
                pip = interval_pow(pi, p / 2);
            } else {
                CertifiedInterval sq = interval_sqrt(pi, pi_bits);
                long whole = (p - (p > 0 ? 1 : -1)) / 2; // p = 2*whole +- 1
                pip = interval_pow(pi, whole) * (p > 0 ? sq : interval_reciprocal(sq));
            }
            factor = factor * pip;
        }
        total = total + t.q * factor;
    }
    return total;
}

// Exact sign of a SymbolicValue. Symbolic cancellation (empty sum) gives 0;
// otherwise the enclosure precision ladder runs until the sign is determined.
inline int sign_certified(const SymbolicValue& v) {
    if (v.is_zero()) return 0;
    // all coefficients of one sign: e^r * pi^{p/2} > 0, so the sign is immediate
    bool all_pos = true, all_neg = true;
    for (const auto& t : v.terms) {
        all_pos = all_pos && t.q > 0;
        all_neg = all_neg && t.q < 0;
    }
    if (all_pos) return 1;
    if (all_neg) return -1;

    static const long ladder_digits[] = {12, 48, 192, 400};
    for (long digits : ladder_digits) {
        Rational w = make_rational(1, int_pow(Integer(10), static_cast<unsigned long>(digits)));
        CertifiedInterval e = enclose(v, w);
        int s = e.determined_sign();
        if (s != 0) return s;
        if (e.lo == 0 && e.hi == 0) return 0;
    }
    throw PrecisionExhausted(
        "sign_certified: enclosure still straddles zero at width 10^-400 (possible exact zero)");
}

} // namespace bellshape
