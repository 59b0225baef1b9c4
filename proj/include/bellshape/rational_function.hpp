#pragma once

#include <utility>
#include <vector>

#include "bellshape/polynomial.hpp"

namespace bellshape {

// Quotient of polynomials over Q, stored fully reduced with a primitive
// integer denominator whose leading coefficient is positive.
class RationalFunctionExact {
  public:
    RationalFunctionExact() : num_(Poly::constant(0)), den_(Poly::constant(1)) {}

    RationalFunctionExact(Poly num, Poly den) {
        if (den.is_zero()) throw BadInput("rational function with zero denominator");
        if (num.is_zero()) {
            num_ = Poly();
            den_ = Poly::constant(1);
            return;
        }
        Poly g = poly_gcd(num, den);
        if (g.degree() > 0) {
            num = poly_divide_exact(num, g);
            den = poly_divide_exact(den, g);
        }
        assign_normalized(std::move(num), std::move(den));
    }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    Rational eval(const Rational& x) const {
        Rational d = den_.eval(x);
        if (d == 0) throw PoleHit("evaluation at a pole");
        return num_.eval(x) / d;
    }

    friend bool operator==(const RationalFunctionExact& a, const RationalFunctionExact& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    struct reduced_tag {};
    RationalFunctionExact(reduced_tag, Poly num, Poly den) {
        assign_normalized(std::move(num), std::move(den));
    }

  private:
    void assign_normalized(Poly num, Poly den) {
        auto [iden, dscale] = to_integer_primitive(den);
        // den := den / (dscale * sign), num scaled to match
        Rational s = dscale;
        if (sign(iden.back()) < 0) {
            s = -s;
            iden = ipoly::negate(std::move(iden));
        }
        den_ = from_integer(iden);
        num_ = (Rational(1) / s) * num;
        if (num_.is_zero()) den_ = Poly::constant(1);
    }

    Poly num_;
    Poly den_;
};

namespace detail {

struct DenFactorisation {
    std::vector<std::pair<Poly, long>> factors; // (squarefree factor, exponent)
    Rational unit;                              // den = unit * prod factor^exp
};

inline DenFactorisation factor_denominator(const Poly& den) {
    DenFactorisation out;
    auto sqf = squarefree_decomposition(den);
    Poly prod = Poly::constant(1);
    for (size_t i = 0; i < sqf.size(); ++i) {
        if (sqf[i].degree() > 0) {
            out.factors.emplace_back(sqf[i], static_cast<long>(i + 1));
            prod = prod * poly_pow(sqf[i], i + 1);
        }
    }
    out.unit = den.lc() / prod.lc();
    return out;
}

} // namespace detail

// Exact n-th derivative. The recurrence runs over the squarefree base of the
// denominator: d/dx [N / (D P^k)] = (N' P - N (W + k P')) / (D P^{k+1}),
// where P is the squarefree part of D and W = D' P / D.
inline RationalFunctionExact diff_rational(const RationalFunctionExact& f, unsigned long n) {
    if (n == 0 || f.is_zero()) return f;
    auto fac = detail::factor_denominator(f.den());
    if (fac.factors.empty()) {
        // polynomial over a constant denominator
        Poly N = f.num();
        for (unsigned long k = 0; k < n; ++k) N = N.derivative();
        return RationalFunctionExact(N, f.den());
    }

    Poly P = Poly::constant(1);
    for (const auto& [a, m] : fac.factors) P = P * a;
    Poly W = poly_divide_exact(f.den().derivative() * P, f.den());

    Poly N = f.num();
    Poly Pd = P.derivative();
    for (unsigned long k = 0; k < n; ++k)
        N = N.derivative() * P - N * (W + Rational(static_cast<long>(k)) * Pd);

    // reduce against the known factors only; no large general gcd is needed
    std::vector<std::pair<Poly, long>> exps;
    for (const auto& [a, m] : fac.factors)
        exps.emplace_back(a, m + static_cast<long>(n));
    for (auto& [a, e] : exps) {
        while (e > 0) {
            auto [q, r] = poly_divmod(N, a);
            if (!r.is_zero()) break;
            N = q;
            --e;
        }
    }
    Poly D = Poly::constant(fac.unit);
    for (const auto& [a, e] : exps) D = D * poly_pow(a, static_cast<unsigned long>(e));
    return RationalFunctionExact(RationalFunctionExact::reduced_tag{}, std::move(N), std::move(D));
}

// Exact sign-change count of f over R: the number of real roots of the
// numerator with odd multiplicity. Requires a pole-free real line.
inline long count_sign_changes_exact(const RationalFunctionExact& f) {
    // squarefree part of the denominator carries its distinct (potential) real roots
    Poly den_sf = Poly::constant(1);
    for (const auto& a : squarefree_decomposition(f.den()))
        if (a.degree() > 0) den_sf = den_sf * a;
    if (den_sf.degree() > 0 && count_distinct_real_roots(den_sf) > 0)
        throw PoleOnRealLine("denominator vanishes on the real line");

    if (f.is_zero() || f.num().degree() == 0) return 0;

    ipoly::SturmEvaluator sturm(to_integer_primitive(f.num()).first);
    if (sturm.gcd_degree() == 0) return sturm.count_all(); // squarefree numerator

    auto sqf = squarefree_decomposition(f.num());
    Poly odd = Poly::constant(1);
    for (size_t i = 0; i < sqf.size(); ++i)
        if (i % 2 == 0 && sqf[i].degree() > 0) odd = odd * sqf[i]; // multiplicity i+1 odd
    if (odd.degree() <= 0) return 0;
    return count_distinct_real_roots(odd);
}

} // namespace bellshape
