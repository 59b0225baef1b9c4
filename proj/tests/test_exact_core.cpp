#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bellshape/exppoly.hpp"
#include "bellshape/interval.hpp"
#include "bellshape/polynomial.hpp"
#include "bellshape/rational.hpp"
#include "bellshape/rational_function.hpp"
#include "bellshape/symbolic_value.hpp"
#include "test_util.hpp"

using namespace bellshape;
using testutil::contains_exp_of;
using testutil::contains_ref;
using testutil::random_rational;
using testutil::rng;

namespace {

Rational Q(long n, long d = 1) { return make_rational(n, d); }

Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// the explicit density from catalog case 6.1 (rates 2 and 17)
ExpPolySum make_f61() {
    Rational pref = Q(83521, 36450000);
    std::vector<ExpPolyTerm> terms;
    long c2[] = {284, 888, 360};
    long c17[] = {-284, -5148, -45630, 494325};
    for (long k = 0; k < 3; ++k) terms.push_back({pref * Q(c2[k]), Q(k), Q(-2)});
    for (long k = 0; k < 4; ++k) terms.push_back({pref * Q(c17[k]), Q(k), Q(-17)});
    return ExpPolySum::on_positive_axis(terms);
}

// rational part of catalog case 6.3's density: (1/2)(x^{-1/2} + 2 x^{1/2}) e^{-x}
ExpPolySum make_f63_rational_part() {
    return ExpPolySum::on_positive_axis(
        {{Q(1, 2), Q(-1, 2), Q(-1)}, {Q(1), Q(1, 2), Q(-1)}});
}

SymbolicValue sym(std::vector<SymbolicValue::Term> terms) {
    SymbolicValue v;
    v.terms = std::move(terms);
    v.canonicalize();
    return v;
}

// independent enclosure of e^r: plain Taylor at r, no argument reduction
CertifiedInterval exp_series_oracle(const Rational& r, unsigned terms) {
    Rational term(1), sum(1);
    for (unsigned k = 1; k <= terms; ++k) {
        term = term * r / Q(k);
        sum += term;
    }
    Rational next = rat_abs(term * r / Q(terms + 1));
    Rational tail = next * 2; // valid once terms+1 >= 2|r|
    return {sum - tail, sum + tail};
}

} // namespace

TEST_CASE("rational helpers") {
    CHECK(make_rational(Integer(4), Integer(-6)) == Q(-2, 3));
    CHECK(den(make_rational(Integer(4), Integer(-6))) == 3);
    CHECK(rat_from_string("83521/36450000") == Q(83521, 36450000));
    CHECK(rat_to_string(Q(-5, 7)) == "-5/7");
    CHECK(rat_pow(Q(2, 3), -2) == Q(9, 4));
    CHECK(rat_floor(Q(-7, 2)) == Integer(-4));
    CHECK(rat_ceil(Q(-7, 2)) == Integer(-3));
    CHECK(*rat_sqrt_exact(Q(9, 4)) == Q(3, 2));
    CHECK(!rat_sqrt_exact(Q(2)).has_value());
    CHECK(*rat_root_exact(Q(27, 8), 3) == Q(3, 2));
    CHECK(dyadic_floor(Q(1, 3), 4) <= Q(1, 3));
    CHECK(dyadic_ceil(Q(1, 3), 4) >= Q(1, 3));
    CHECK(dyadic_ceil(Q(1, 3), 4) - dyadic_floor(Q(1, 3), 4) <= Q(1, 8));
}

TEST_CASE("interval arithmetic is outward") {
    for (int i = 0; i < 200; ++i) {
        Rational a = random_rational(50, 20), b = random_rational(50, 20);
        Rational wa = rat_abs(random_rational(5, 100)), wb = rat_abs(random_rational(5, 100));
        CertifiedInterval ia{a - wa, a + wa}, ib{b - wb, b + wb};
        CHECK((ia + ib).contains(a + b));
        CHECK((ia - ib).contains(a - b));
        CHECK((ia * ib).contains(a * b));
        if (!ib.contains_zero()) CHECK(interval_reciprocal(ib).contains(1 / b));
        CHECK(interval_pow(ia, 3).contains(a * a * a));
    }
}

TEST_CASE("exp enclosure examples") {
    CHECK(exp_enclosure(Q(0), Q(1, 1000)).lo == 1);
    CHECK(exp_enclosure(Q(0), Q(1, 1000)).hi == 1);

    Rational w6 = Q(1, 1000000);
    CertifiedInterval e1 = exp_enclosure(Q(1), w6);
    CHECK(e1.width() <= w6);
    CHECK(contains_exp_of(e1, Q(1)));
    CHECK(e1.lo > Q(27182, 10000));
    CHECK(e1.hi < Q(27183, 10000));

    Rational w12 = rat_pow(Q(1, 10), 12);
    CertifiedInterval em = exp_enclosure(Q(-17, 4), w12);
    CHECK(em.width() <= w12);
    CHECK(contains_exp_of(em, Q(-17, 4)));
    // 0.014264233...
    CHECK(em.lo < Q(14264234, 1000000000));
    CHECK(em.hi > Q(14264233, 1000000000));
}

TEST_CASE("exp enclosure soundness, randomized") {
    // sweep of arguments in [-20, 20] against a correctly rounded reference
    std::uniform_int_distribution<long> dens(1, 97);
    for (int i = 0; i < 1000; ++i) {
        long d = dens(rng());
        std::uniform_int_distribution<long> nums(-20 * d, 20 * d);
        Rational r = Q(nums(rng()), d);
        Rational w = rat_pow(Q(1, 10), 10 + (i % 5) * 10); // widths down to 1e-50
        CertifiedInterval e = exp_enclosure(r, w);
        CHECK(e.width() <= w);
        CHECK(contains_exp_of(e, r));
    }
    // plus a fully independent rational-series oracle on a smaller sweep
    for (int i = 0; i < 25; ++i) {
        Rational r = random_rational(8 * 13, 13);
        CertifiedInterval e = exp_enclosure(r, rat_pow(Q(1, 10), 30));
        CertifiedInterval o = exp_series_oracle(r, 220);
        CHECK(e.lo <= o.hi);
        CHECK(o.lo <= e.hi);
    }
}

TEST_CASE("pi, log and pow enclosures") {
    CertifiedInterval pi = pi_enclosure(200);
    CHECK(contains_ref(pi, [](mpfr_ptr out) { mpfr_const_pi(out, MPFR_RNDN); }));
    CHECK(pi.width() <= rat_pow(Q(1, 2), 190));

    CertifiedInterval l2 = log_enclosure(Q(2), 200);
    CHECK(contains_ref(l2, [](mpfr_ptr out) { mpfr_const_log2(out, MPFR_RNDN); }));

    CertifiedInterval lhuge = log_enclosure(Q(85, 2), 150);
    CHECK(contains_ref(lhuge, [](mpfr_ptr out) {
        mpfr_set_ui(out, 85, MPFR_RNDN);
        mpfr_div_ui(out, out, 2, MPFR_RNDN);
        mpfr_log(out, out, MPFR_RNDN);
    }));
    CertifiedInterval ltiny = log_enclosure(Q(1, 1000), 150);
    CHECK(ltiny.hi < 0);

    CertifiedInterval p = pow_enclosure(Q(2, 85), Q(2, 13), 150);
    CHECK(contains_ref(p, [](mpfr_ptr out) {
        testutil::Ref e(512);
        mpfr_set_ui(out, 2, MPFR_RNDN);
        mpfr_div_ui(out, out, 85, MPFR_RNDN);
        mpfr_set_ui(e.get(), 2, MPFR_RNDN);
        mpfr_div_ui(e.get(), e.get(), 13, MPFR_RNDN);
        mpfr_pow(out, out, e.get(), MPFR_RNDN);
    }));
}

TEST_CASE("symbolic values canonicalize and certify signs") {
    SymbolicValue z = sym({{Q(1), Q(2), 0}, {Q(-1), Q(2), 0}});
    CHECK(z.is_zero());
    CHECK(sign_certified(z) == 0);

    SymbolicValue v = sym({{Q(3), Q(0), 0}, {Q(2), Q(0), 0}});
    CHECK(v.terms.size() == 1);
    CHECK(v.terms[0].q == Q(5));

    CHECK(sign_certified(sym({{Q(1), Q(-1), 0}, {Q(1), Q(-2), 0}})) == 1);
    CHECK(sign_certified(sym({{Q(-1), Q(-1), 0}, {Q(-1), Q(-2), 0}})) == -1);
    // e < 3
    CHECK(sign_certified(sym({{Q(1), Q(1), 0}, {Q(-3), Q(0), 0}})) == -1);
    // pi^2 > 9.8
    CHECK(sign_certified(sym({{Q(1), Q(0), 4}, {Q(-49, 5), Q(0), 0}})) == 1);
    // sqrt(pi) < righteous bound 1.7725
    CHECK(sign_certified(sym({{Q(1), Q(0), 1}, {Q(-17725, 10000), Q(0), 0}})) == -1);

    // value smaller than the 10^-400 ceiling: must refuse, not guess
    Rational eps = make_rational(Integer(1), int_pow(Integer(10), 500));
    SymbolicValue tiny = sym({{Q(1), Q(1), 0}, {Q(-1), Q(1) + eps, 0}});
    CHECK_THROWS_AS(sign_certified(tiny), PrecisionExhausted);
}

TEST_CASE("sign_certified never contradicts a high precision reference") {
    for (int i = 0; i < 60; ++i) {
        SymbolicValue v;
        int nterms = 1 + static_cast<int>(rng()() % 4);
        for (int t = 0; t < nterms; ++t) {
            v += SymbolicValue::single(random_rational(1000, 50), random_rational(60, 10),
                                       static_cast<long>(rng()() % 7) - 3);
        }
        if (v.is_zero()) continue;
        testutil::Ref sum(1200), term(1200), pi(1200), tmp(1200);
        mpfr_const_pi(pi.get(), MPFR_RNDN);
        mpfr_set_zero(sum.get(), 1);
        for (const auto& t : v.terms) {
            mpfr_set_q(term.get(), t.r.get_mpq_t(), MPFR_RNDN);
            mpfr_exp(term.get(), term.get(), MPFR_RNDN);
            mpfr_set_d(tmp.get(), static_cast<double>(t.pi_half) / 2.0, MPFR_RNDN);
            mpfr_pow(tmp.get(), pi.get(), tmp.get(), MPFR_RNDN);
            mpfr_mul(term.get(), term.get(), tmp.get(), MPFR_RNDN);
            mpfr_mul_q(term.get(), term.get(), t.q.get_mpq_t(), MPFR_RNDN);
            mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
        }
        double mag = mpfr_get_d(sum.get(), MPFR_RNDN);
        if (std::abs(mag) < 1e-80) continue;
        int ref_sign = mpfr_sgn(sum.get());
        CHECK(sign_certified(v) == ref_sign);
    }
}

TEST_CASE("polynomial basics, gcd, squarefree") {
    Poly p({Q(-2), Q(0), Q(1)}); // x^2 - 2
    CHECK(p.degree() == 2);
    CHECK(p.eval(Q(3)) == Q(7));
    CHECK(p.derivative() == Poly({Q(0), Q(2)}));

    Poly a = Poly({Q(-1), Q(1)});           // x - 1
    Poly b = Poly({Q(2), Q(1)});            // x + 2
    Poly prod = a * a * b;                  // (x-1)^2 (x+2)
    CHECK(poly_gcd(prod, prod.derivative()) == a);

    auto sqf = squarefree_decomposition(prod);
    REQUIRE(sqf.size() == 2);
    CHECK(sqf[0] == b);
    CHECK(sqf[1] == a);

    auto [q, r] = poly_divmod(prod, a);
    CHECK(r.is_zero());
    CHECK(q == a * b);
}

TEST_CASE("root isolation examples") {
    // x^2 - 2: one root in [-2,-1], one in [1,2]
    auto roots = isolate_real_roots(Poly({Q(-2), Q(0), Q(1)}));
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].hi < 0);
    CHECK(roots[1].lo > 0);
    CHECK(roots[0].lo >= Q(-2));
    CHECK(roots[0].hi <= Q(-1));
    CHECK(roots[1].lo >= Q(1));
    CHECK(roots[1].hi <= Q(2));
    // the positive interval must bracket sqrt(2)
    CHECK(roots[1].lo * roots[1].lo <= Q(2));
    CHECK(roots[1].hi * roots[1].hi >= Q(2));

    // 6x^2 - 2: roots at +-1/sqrt(3) ~ +-0.577
    auto r2 = isolate_real_roots(Poly({Q(-2), Q(0), Q(6)}), Q(1, 64));
    REQUIRE(r2.size() == 2);
    CHECK(r2[1].lo * r2[1].lo <= Q(1, 3));
    CHECK(r2[1].hi * r2[1].hi >= Q(1, 3));
    CHECK(r2[1].hi < Q(3, 5));
    CHECK(r2[0].lo > Q(-3, 5));

    // multiplicities via the squarefree decomposition
    Poly m = Poly({Q(-1), Q(1)}) * Poly({Q(-1), Q(1)}) * Poly({Q(2), Q(1)}) *
             poly_pow(Poly({Q(-1), Q(3)}), 3);
    auto rm = isolate_real_roots(m);
    REQUIRE(rm.size() == 3);
    // sorted: -2 (simple), 1/3 (triple), 1 (double)
    CHECK(rm[0].multiplicity == 1);
    CHECK(rm[0].lo <= Q(-2));
    CHECK(rm[0].hi >= Q(-2));
    CHECK(rm[1].multiplicity == 3);
    CHECK(rm[1].lo <= Q(1, 3));
    CHECK(rm[1].hi >= Q(1, 3));
    CHECK(rm[2].multiplicity == 2);
    CHECK(rm[2].lo <= Q(1));
    CHECK(rm[2].hi >= Q(1));
    // pairwise disjoint
    CHECK(rm[0].hi < rm[1].lo);
    CHECK(rm[1].hi < rm[2].lo);
}

TEST_CASE("sturm count agrees with a dense sign scan") {
    std::uniform_int_distribution<long> coeff(-9, 9);
    std::uniform_int_distribution<int> degd(2, 12);
    for (int trial = 0; trial < 40; ++trial) {
        int deg = degd(rng());
        std::vector<Rational> c(static_cast<size_t>(deg) + 1);
        for (auto& v : c) v = Q(coeff(rng()));
        if (c.back() == 0) c.back() = Q(1);
        Poly p(c);
        if (p.degree() < 1) continue;

        long sturm_count = count_distinct_real_roots(p);

        // dense scan with bisection refinement: counts sign changes, i.e. roots of
        // odd multiplicity; random integer polynomials are squarefree in practice
        auto evald = [&](double x) {
            double v = 0;
            for (size_t i = p.c.size(); i-- > 0;) v = v * x + p.c[i].get_d();
            return v;
        };
        double bound = ipoly::root_bound(to_integer_primitive(p).first).get_d();
        long scan_count = 0;
        const int nsteps = 100000;
        double prev = evald(-bound);
        for (int i = 1; i <= nsteps; ++i) {
            double x = -bound + 2 * bound * i / nsteps;
            double v = evald(x);
            if (prev != 0 && v != 0 && ((prev < 0) != (v < 0))) ++scan_count;
            if (v != 0) prev = v;
        }
        CHECK(sturm_count == scan_count);
    }
}

TEST_CASE("diff_exppoly basics") {
    // d/dx [x^{-1/2} e^{-x}] = -(1/2) x^{-3/2} e^{-x} - x^{-1/2} e^{-x}
    ExpPolySum f = ExpPolySum::on_positive_axis({{Q(1), Q(-1, 2), Q(-1)}});
    ExpPolySum d = diff_exppoly(f, 1);
    ExpPolySum expected = ExpPolySum::on_positive_axis(
        {{Q(-1, 2), Q(-3, 2), Q(-1)}, {Q(-1), Q(-1, 2), Q(-1)}});
    CHECK(d == expected);

    CHECK(diff_exppoly(f, 0) == f);
}

TEST_CASE("diff_exppoly linearity and composition") {
    std::uniform_int_distribution<long> small(-5, 5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<ExpPolyTerm> tf, tg;
        for (int i = 0; i < 3; ++i) {
            tf.push_back(
                {random_rational(20, 6), Q(std::abs(small(rng())) % 4), random_rational(6, 2)});
            tg.push_back(
                {random_rational(20, 6), Q(std::abs(small(rng())) % 4), random_rational(6, 2)});
        }
        ExpPolySum f = ExpPolySum::on_positive_axis(tf);
        ExpPolySum g = ExpPolySum::on_positive_axis(tg);
        Rational alpha = random_rational(9, 4), beta = random_rational(9, 4);

        ExpPolySum lhs = diff_exppoly(exppoly_add(f.scaled(alpha), g.scaled(beta)), 3);
        ExpPolySum rhs =
            exppoly_add(diff_exppoly(f, 3).scaled(alpha), diff_exppoly(g, 3).scaled(beta));
        CHECK(lhs == rhs);

        CHECK(diff_exppoly(diff_exppoly(f, 2), 3) == diff_exppoly(f, 5));
    }
}

TEST_CASE("second derivative of the 6.1 density: exact values and signs") {
    ExpPolySum f2 = diff_exppoly(make_f61(), 2);

    SymbolicValue v14 = eval_exact(f2, Q(1, 4));
    SymbolicValue e14 = sym({{Q(83521, 2332800000) * Q(-92032), Q(-1, 2), 0},
                             {Q(83521, 2332800000) * Q(-38168123), Q(-17, 4), 0}});
    CHECK(v14 == e14);
    CHECK(sign_certified(v14) == -1);

    SymbolicValue v12 = eval_exact(f2, Q(1, 2));
    SymbolicValue e12 = sym({{Q(83521, 2332800) * Q(-64), Q(-1), 0},
                             {Q(83521, 2332800) * Q(271849), Q(-17, 2), 0}});
    CHECK(v12 == e12);
    CHECK(sign_certified(v12) == 1);

    SymbolicValue v34 = eval_exact(f2, Q(3, 4));
    SymbolicValue e34 = sym({{Q(83521, 2332800000) * Q(-24448), Q(-3, 2), 0},
                             {Q(83521, 2332800000) * Q(1787319463), Q(-51, 4), 0}});
    CHECK(v34 == e34);
    CHECK(sign_certified(v34) == -1);

    // zero function evaluates to the empty symbolic value
    CHECK(eval_exact(ExpPolySum{}, Q(1, 2)).is_zero());
}

TEST_CASE("sampled alternation lower bounds") {
    ExpPolySum f2 = diff_exppoly(make_f61(), 2);
    std::vector<Rational> samples = {Q(1, 100), Q(1, 4), Q(1, 2), Q(3, 4), Q(100)};
    CHECK(sign_changes_lower_bound(f2, samples) >= 4);

    CHECK(sign_changes_lower_bound(f2, {Q(1, 2)}) == 0);

    // -3 + 6 e^{-2x} - 34 e^{-15x} stays negative at these samples
    ExpPolySum h = ExpPolySum::on_positive_axis(
        {{Q(-3), Q(0), Q(0)}, {Q(6), Q(0), Q(-2)}, {Q(-34), Q(0), Q(-15)}});
    CHECK(sign_changes_lower_bound(h, {Q(1, 10), Q(1, 5), Q(1)}) == 0);
    CHECK(sign_certified(eval_exact(h, Q(1, 5))) == -1);
}

TEST_CASE("eighth derivative of the 6.3 density at x = 4") {
    ExpPolySum r8 = diff_exppoly(make_f63_rational_part(), 8);
    SymbolicValue v = eval_exact(r8, Q(4));
    REQUIRE(v.terms.size() == 1);
    CHECK(v.terms[0].r == Q(-4));
    CHECK(v.terms[0].q == Q(-11598375, 67108864));

    // with the pi^{-1/2} prefactor restored
    SymbolicValue full = v.scaled(Q(1), -1);
    REQUIRE(full.terms.size() == 1);
    CHECK(full.terms[0].pi_half == -1);
    CHECK(sign_certified(full) == -1);

    CHECK_THROWS_AS(eval_exact(r8, Q(3)), NonRepresentablePoint);
}

TEST_CASE("diff_rational basics") {
    RationalFunctionExact f(Poly::constant(1), Poly({Q(1), Q(0), Q(1)})); // 1/(1+x^2)
    CHECK(diff_rational(f, 0) == f);

    RationalFunctionExact d1 = diff_rational(f, 1);
    RationalFunctionExact expected(Poly({Q(0), Q(-2)}),
                                   Poly({Q(1), Q(0), Q(1)}) * Poly({Q(1), Q(0), Q(1)}));
    CHECK(d1 == expected);

    // polynomial input
    RationalFunctionExact p(Poly({Q(0), Q(0), Q(3)}), Poly::constant(1));
    CHECK(diff_rational(p, 1) == RationalFunctionExact(Poly({Q(0), Q(6)}), Poly::constant(1)));
}

namespace {
RationalFunctionExact naive_derivative(const RationalFunctionExact& f) {
    return RationalFunctionExact(
        f.num().derivative() * f.den() - f.num() * f.den().derivative(), f.den() * f.den());
}
} // namespace

TEST_CASE("diff_rational agrees with the naive quotient rule") {
    Poly q61 = Poly({Q(1), Q(0), Q(1)}) * Poly({Q(9), Q(0), Q(1)}) * Poly({Q(16), Q(0), Q(1)});
    RationalFunctionExact f(Poly::constant(1), q61);
    RationalFunctionExact naive = f;
    for (unsigned n = 1; n <= 12; ++n) {
        naive = naive_derivative(naive);
        CHECK(diff_rational(f, n) == naive);
    }
    for (int trial = 0; trial < 10; ++trial) {
        Poly num({random_rational(9, 3), random_rational(9, 3), random_rational(9, 3)});
        if (num.is_zero()) continue;
        RationalFunctionExact g(num, Poly({Q(1), Q(0), Q(1)}));
        RationalFunctionExact acc = g;
        for (unsigned n = 1; n <= 5; ++n) {
            acc = naive_derivative(acc);
            CHECK(diff_rational(g, n) == acc);
        }
    }
}

TEST_CASE("57th derivative matches the partial fraction oracle") {
    Poly q1({Q(1), Q(0), Q(1)}), q9({Q(9), Q(0), Q(1)}), q16({Q(16), Q(0), Q(1)});
    RationalFunctionExact f(Poly::constant(1), q1 * q9 * q16);
    RationalFunctionExact d57 = diff_rational(f, 57);

    // oracle: 1/((1+x^2)(9+x^2)(16+x^2)) = sum_j r_j/(a_j+x^2), and the 57th
    // derivative of each pole pair expands over Q because sqrt(a_j) is an integer
    struct PoleData {
        long a, w;
        Rational res;
    };
    std::vector<PoleData> poles = {{1, 1, Q(1, 120)}, {9, 3, Q(-1, 56)}, {16, 4, Q(1, 105)}};
    Rational fact57(1);
    for (long k = 2; k <= 57; ++k) fact57 *= k;

    Poly oracle_num;
    for (size_t j = 0; j < poles.size(); ++j) {
        // S_j(x) = sum_{k odd} C(58,k) (-1)^{(k-1)/2} w^k x^{58-k}
        std::vector<Rational> s(59, Q(0));
        for (unsigned long k = 1; k <= 58; k += 2) {
            Rational term = Rational(binomial(58, k)) * rat_pow(Q(poles[j].w), k);
            if (((k - 1) / 2) % 2 == 1) term = -term;
            s[58 - k] = term;
        }
        Poly Sj(s);
        Poly other = Poly::constant(1);
        for (size_t l = 0; l < poles.size(); ++l)
            if (l != j)
                other = other * poly_pow(Poly({Q(poles[l].a), Q(0), Q(1)}), 58);
        Rational scale = poles[j].res * (-fact57 / Q(poles[j].w));
        oracle_num = oracle_num + scale * (Sj * other);
    }

    Poly full_den = poly_pow(q1, 58) * poly_pow(q9, 58) * poly_pow(q16, 58);
    CHECK(d57.den() == full_den);
    CHECK(d57.num() == oracle_num);
    CHECK(d57.num().degree() == 285);
}

TEST_CASE("count_sign_changes_exact basics") {
    CHECK(count_sign_changes_exact(
              RationalFunctionExact(Poly::constant(1), Poly::constant(1))) == 0);
    CHECK(count_sign_changes_exact(
              RationalFunctionExact(Poly({Q(0), Q(1)}), Poly({Q(1), Q(0), Q(1)}))) == 1);
    CHECK_THROWS_AS(count_sign_changes_exact(
                        RationalFunctionExact(Poly::constant(1), Poly({Q(-1), Q(0), Q(1)}))),
                    PoleOnRealLine);
    // even multiplicity roots do not change the sign
    Poly sq = Poly({Q(-1), Q(1)}) * Poly({Q(-1), Q(1)}) * Poly({Q(3), Q(1)});
    CHECK(count_sign_changes_exact(RationalFunctionExact(sq, Poly({Q(1), Q(0), Q(1)}))) == 1);
}

TEST_CASE("count_sign_changes_exact agrees with grid counting") {
    std::uniform_int_distribution<long> coeff(-9, 9);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Rational> c(6);
        for (auto& v : c) v = Q(coeff(rng()));
        Poly num(c);
        if (num.is_zero()) continue;
        RationalFunctionExact f(num, Poly({Q(2), Q(0), Q(1)}));
        long exact = count_sign_changes_exact(f);

        auto evald = [&](double x) {
            double n = 0;
            for (size_t i = num.c.size(); i-- > 0;) n = n * x + num.c[i].get_d();
            return n / (2 + x * x);
        };
        long grid = 0;
        double prev = evald(-40.0);
        for (int i = 1; i <= 200000; ++i) {
            double x = -40.0 + 80.0 * i / 200000;
            double v = evald(x);
            if (prev != 0 && v != 0 && ((prev < 0) != (v < 0))) ++grid;
            if (v != 0) prev = v;
        }
        CHECK(exact == grid);
    }
}

TEST_CASE("hypoexponential convolution keeps exactness") {
    // e^{-y} on (0,inf) convolved with 2 e^{-2x}: 2(e^{-x} - e^{-2x})
    ExpPolySum f = ExpPolySum::on_positive_axis({{Q(1), Q(0), Q(-1)}});
    ExpPolySum c = convolve_exponential(f, Q(2));
    ExpPolySum expected =
        ExpPolySum::on_positive_axis({{Q(2), Q(0), Q(-1)}, {Q(-2), Q(0), Q(-2)}});
    CHECK(c == expected);

    // mass is preserved: integral of x e^{-3x} * (5e^{-5x}) convolution equals 1/9
    // check pointwise against an independent expansion at one rational point instead
    ExpPolySum g = ExpPolySum::on_positive_axis({{Q(9), Q(1), Q(-3)}});
    ExpPolySum gc = convolve_exponential(g, Q(5));
    // direct formula: 9*5 * int_0^x y e^{-3y} e^{-5(x-y)} dy
    //               = 45 e^{-5x} [ (e^{2y}(2y-1)/4) ]_0^x
    SymbolicValue at1 = eval_exact(gc, Q(1));
    SymbolicValue direct;
    direct += SymbolicValue::single(Q(45) * Q(1, 4), Q(-3)); // (2x-1)/4 e^{-3x} at x=1
    direct += SymbolicValue::single(Q(45) * Q(1, 4), Q(-5)); // +1/4 e^{-5x}
    CHECK(at1 == direct);

    CHECK(sup_abs_bound_positive_axis(g) >= Q(3, 1) * exp_enclosure(Q(-1), Q(1, 100)).lo);
}
