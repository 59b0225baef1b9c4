// Acceptance suite: one test case per criterion, each printing a PASS/FAIL line
// with the measured quantities and its runtime.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdio>

#include "bellshape/bellshape.hpp"
#include "test_util.hpp"

using namespace bellshape;
using testutil::random_valid_phi;
using testutil::rng;
using testutil::step_sum;

namespace {

Rational Q(long n, long d = 1) { return make_rational(n, d); }

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int criterion, bool pass, const std::string& detail, double seconds) {
    std::printf("[criterion %2d] %s  %s  (%.2fs)\n", criterion, pass ? "PASS" : "FAIL",
                detail.c_str(), seconds);
    std::fflush(stdout);
}

ExpPolySum f61() {
    Rational pref = Q(83521, 36450000);
    std::vector<ExpPolyTerm> terms;
    long c2[] = {284, 888, 360};
    long c17[] = {-284, -5148, -45630, 494325};
    for (long k = 0; k < 3; ++k) terms.push_back({pref * Q(c2[k]), Q(k), Q(-2)});
    for (long k = 0; k < 4; ++k) terms.push_back({pref * Q(c17[k]), Q(k), Q(-17)});
    return ExpPolySum::on_positive_axis(terms);
}

PhiFunction phi61() {
    return PhiFunction::from_steps({{ExtReal::finite(2), ExtReal::finite(4), Q(3)},
                                    {ExtReal::finite(17), ExtReal::plus_inf(), Q(4)}});
}

BellRepresentation rep61() {
    BellRepresentation rep;
    rep.b = Q(67, 68);
    rep.phi = phi61();
    return rep;
}

PhiFunction phi63() {
    return PhiFunction::from_steps({{ExtReal::finite(1), ExtReal::finite(2), Q(3, 2)},
                                    {ExtReal::finite(2), ExtReal::plus_inf(), Q(1, 2)}});
}

BellRepresentation rep63() {
    BellRepresentation rep;
    rep.b = Q(1);
    rep.phi = phi63();
    return rep;
}

Complex closed_form_61(const Real& xi) {
    Complex z{Real(0), xi};
    auto lin = [&](long p) { return Complex{Real(1), Real(0)} + z / Complex{Real(p), Real(0)}; };
    return pow_int(lin(4), 3) / (pow_int(lin(2), 3) * pow_int(lin(17), 4));
}

Complex closed_form_63(const Real& xi) {
    Complex z{Real(0), xi};
    Complex one_z = Complex{Real(1), Real(0)} + z;
    return (Complex{Real(1), Real(0)} + z / Complex{Real(2), Real(0)}) / (one_z * sqrt(one_z));
}

double cnorm(const Complex& z) { return std::hypot(z.re.to_double(), z.im.to_double()); }

} // namespace

TEST_CASE("criterion 1: exact second-derivative certificate") {
    Stopwatch sw;
    ExpPolySum f2 = diff_exppoly(f61(), 2);
    auto sym2 = [](Rational q1, Rational r1, Rational q2, Rational r2) {
        SymbolicValue v;
        v.terms = {{std::move(q1), std::move(r1), 0}, {std::move(q2), std::move(r2), 0}};
        v.canonicalize();
        return v;
    };
    struct Row {
        Rational x;
        SymbolicValue expected;
        int sign;
    };
    std::vector<Row> rows = {
        {Q(1, 4),
         sym2(Q(83521, 2332800000) * Q(-92032), Q(-1, 2), Q(83521, 2332800000) * Q(-38168123),
              Q(-17, 4)),
         -1},
        {Q(1, 2),
         sym2(Q(83521, 2332800) * Q(-64), Q(-1), Q(83521, 2332800) * Q(271849), Q(-17, 2)), +1},
        {Q(3, 4),
         sym2(Q(83521, 2332800000) * Q(-24448), Q(-3, 2), Q(83521, 2332800000) * Q(1787319463),
              Q(-51, 4)),
         -1},
    };
    bool values = true, signs = true;
    for (const auto& r : rows) {
        SymbolicValue got = eval_exact(f2, r.x);
        values = values && (got == r.expected);
        signs = signs && sign_certified(got) == r.sign;
    }
    double sec = sw.seconds();
    bool pass = values && signs && sec < 1.0;
    report(1, pass, values ? "exact values and signs (-,+,-) reproduced" : "value mismatch", sec);
    CHECK(values);
    CHECK(signs);
    CHECK(sec < 1.0);
}

TEST_CASE("criterion 2: exact eighth-derivative value at x = 4") {
    Stopwatch sw;
    ExpPolySum r8 = diff_exppoly(
        ExpPolySum::on_positive_axis({{Q(1, 2), Q(-1, 2), Q(-1)}, {Q(1), Q(1, 2), Q(-1)}}), 8);
    SymbolicValue v = eval_exact(r8, Q(4)).scaled(Q(1), -1);
    bool pass = v.terms.size() == 1 && v.terms[0].q == Q(-11598375, 67108864) &&
                v.terms[0].r == Q(-4) && v.terms[0].pi_half == -1;
    double sec = sw.seconds();
    pass = pass && sec < 1.0;
    report(2, pass,
           "e^{-4} pi^{-1/2} coefficient = " +
               (v.terms.size() == 1 ? rat_to_string(v.terms[0].q) : std::string("?")),
           sec);
    CHECK(pass);
    CHECK(sec < 1.0);
}

TEST_CASE("criterion 3: 57th-derivative sign-change count (performance benchmark)") {
    Stopwatch sw;
    Poly den = Poly({Q(1), Q(0), Q(1)}) * Poly({Q(9), Q(0), Q(1)}) * Poly({Q(16), Q(0), Q(1)});
    RationalFunctionExact f(Poly::constant(1), den);
    RationalFunctionExact d57 = diff_rational(f, 57);
    long count = count_sign_changes_exact(d57);
    double sec = sw.seconds();
    bool pass = count == 61 && sec < 600.0;
    report(3, pass, "count = " + std::to_string(count) + " (expected 61)", sec);
    CHECK(count == 61);
    CHECK(sec < 600.0);
}

TEST_CASE("criterion 4: transform identities at 20 points") {
    Stopwatch sw;
    PrecisionGuard guard(45);
    double worst61 = 0, worst63 = 0;
    for (int i = 1; i <= 20; ++i) {
        double x = -10.0 + 20.0 * (i - 0.5) / 20.0;
        worst61 = std::max(worst61, cnorm(transform_from_representation(rep61(), Real(x)) -
                                          closed_form_61(Real(x))));
        worst63 = std::max(worst63, cnorm(transform_from_representation(rep63(), Real(x)) -
                                          closed_form_63(Real(x))));
    }
    bool pass = worst61 <= 1e-10 && worst63 <= 1e-10;
    char buf[128];
    std::snprintf(buf, sizeof buf, "max errors %.2e and %.2e (tol 1e-10)", worst61, worst63);
    report(4, pass, buf, sw.seconds());
    CHECK(worst61 <= 1e-10);
    CHECK(worst63 <= 1e-10);
}

TEST_CASE("criterion 5: level-crossing detection") {
    Stopwatch sw;
    auto lc61 = check_level_crossing(phi61());
    bool ok61 = !lc61.pass;
    for (const auto& pl : lc61.per_level) {
        if (pl.k == 1 || pl.k == 2) ok61 = ok61 && pl.sign_changes == 3 && !pl.pass;
        else ok61 = ok61 && pl.pass;
    }
    auto lc63 = check_level_crossing(phi63());
    bool ok63 = !lc63.pass;
    bool k1_failed = false;
    for (const auto& pl : lc63.per_level)
        if (pl.k == 1) k1_failed = !pl.pass;
    ok63 = ok63 && k1_failed;

    bool random_ok = true;
    for (int trial = 0; trial < 500; ++trial) {
        PhiFunction phi = random_valid_phi(true); // non-decreasing integer staircases
        random_ok = random_ok && check_level_crossing(phi).pass;
    }
    bool pass = ok61 && ok63 && random_ok;
    report(5, pass,
           std::string("6.1 fails k=1,2 with 3 changes: ") + (ok61 ? "yes" : "NO") +
               "; 6.3 fails k=1: " + (ok63 ? "yes" : "NO") + "; 500 monotone pass: " +
               (random_ok ? "yes" : "NO"),
           sw.seconds());
    CHECK(ok61);
    CHECK(ok63);
    CHECK(random_ok);
}

TEST_CASE("criterion 6: numeric failure reproduction") {
    PrecisionGuard guard(45);
    QuadratureOptions opts;
    opts.rel_tol = 1e-11;

    // 6.1 sub-criterion, faithful to the stated t = 1e-3. The measured truth is
    // count = 2 there (the shallow dip of f'' near x ~ 0.78 is already smoothed
    // away; the >= 4 count appears for t <~ 5e-4), so this check reports its
    // honest failure and the witness at t = 5e-4 alongside.
    {
        Stopwatch sw;
        TransformFn F = [&](const Real& xi) { return transform_from_representation(rep61(), xi); };
        GridSpec grid;
        grid.points = 2001;
        BellTestReport at_stated = bell_test(F, 2, 1e-3, grid, opts, std::vector<long>{2});
        const auto* o = at_stated.order(2);
        long count_stated = o ? o->count : -1;
        double sec = sw.seconds();
        bool stated_pass = o && o->stable && count_stated >= 4;

        Stopwatch sw2;
        BellTestReport at_witness = bell_test(F, 2, 5e-4, grid, opts, std::vector<long>{2});
        const auto* w = at_witness.order(2);
        long count_witness = w ? w->count : -1;
        double sec2 = sw2.seconds();

        report(6, stated_pass,
               "6.1 at t=1e-3: count = " + std::to_string(count_stated) +
                   " (stated expectation >= 4); measured witness: t=5e-4 gives count = " +
                   std::to_string(count_witness),
               sec);
        CHECK(sec < 120.0);
        CHECK(sec2 < 120.0);
        // the criterion as stated; see the witness line above for the measured threshold
        CHECK(count_stated >= 4);
        CHECK(count_witness >= 4);
    }

    // 6.3 sub-criterion: descending t until n = 8 shows >= 9 sign changes
    {
        Stopwatch sw;
        PrecisionGuard g63(60);
        TransformFn F = [&](const Real& xi) { return transform_from_representation(rep63(), xi); };
        bool found = false;
        double witness_t = 0;
        long witness_count = 0;
        double worst_run = 0;
        for (double t : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
            Stopwatch run;
            GridSpec grid;
            grid.lo = -3;
            grid.hi = 6;
            grid.points = 301;
            GridSpec::Focus focus;
            double w = 30 * std::sqrt(t);
            focus.lo = -w;
            focus.hi = w;
            focus.points = 801;
            grid.focus = focus;
            QuadratureOptions q;
            q.rel_tol = 1e-12;
            q.max_subdivisions = 20000;
            BellTestReport bt = bell_test(F, 8, t, grid, q, std::vector<long>{8});
            worst_run = std::max(worst_run, run.seconds());
            const auto* o8 = bt.order(8);
            if (o8 && o8->stable && o8->count >= 9) {
                found = true;
                witness_t = t;
                witness_count = o8->count;
                break;
            }
        }
        bool pass = found && worst_run < 120.0;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "6.3 at n=8: count = %ld >= 9 at t = %g (longest single run %.1fs)",
                      witness_count, witness_t, worst_run);
        report(6, pass, buf, sw.seconds());
        CHECK(found);
        CHECK(worst_run < 120.0);
    }
}

TEST_CASE("criterion 7: positive controls") {
    PrecisionGuard guard(45);
    Stopwatch sw;
    QuadratureOptions opts;

    GridSpec grid;
    grid.points = 2001;

    BellTestReport gauss = bell_test(
        [](const Real& xi) { return Complex{exp(-xi * xi), Real(0)}; }, 10, 0.1, grid, opts);
    BellTestReport cauchy = bell_test(
        [](const Real& xi) { return Complex{exp(-abs(xi)), Real(0)}; }, 8, 0.1, grid, opts);
    BellTestReport twopole = bell_test(
        [](const Real& xi) { return two_pole_density_transform(Q(1), Q(2), xi); }, 6, 0.1, grid,
        opts);
    BellTestReport stable_half = bell_test(
        [](const Real& xi) { return stable_transform(Q(1, 2), Q(1), Q(1), xi); }, 6, 0.1, grid,
        opts);
    BellTestReport stable_three_half = bell_test(
        [](const Real& xi) { return stable_transform(Q(3, 2), Q(1), Q(1), xi); }, 6, 0.1, grid,
        opts);

    auto v = [](const BellTestReport& r) { return r.verdict == "pass"; };
    bool pass = v(gauss) && v(cauchy) && v(twopole) && v(stable_half) && v(stable_three_half);
    report(7, pass,
           "gaussian n<=10: " + gauss.verdict + "; cauchy n<=8: " + cauchy.verdict +
               "; two-pole n<=6: " + twopole.verdict + "; stable 1/2: " + stable_half.verdict +
               "; stable 3/2: " + stable_three_half.verdict,
           sw.seconds());
    CHECK(v(gauss));
    CHECK(v(cauchy));
    CHECK(v(twopole));
    CHECK(v(stable_half));
    CHECK(v(stable_three_half));
}

TEST_CASE("criterion 8: decomposition round trip on 500 random valid phi") {
    Stopwatch sw;
    PrecisionGuard guard(45);
    bool exact_ok = true, invariant_ok = true;
    double worst = 0;
    for (int trial = 0; trial < 500; ++trial) {
        PhiFunction phi = random_valid_phi(false);
        BellRepresentation rep;
        rep.a = Q(static_cast<long>(rng()() % 2));
        rep.b = testutil::random_rational(5, 3);
        rep.c = testutil::random_rational(2, 5);
        rep.phi = phi;
        SplitRepresentation split = split_representation(rep);

        exact_ok = exact_ok && (step_sum(split.phi1, split.phi2) == phi);
        Rational prev;
        bool first = true;
        for (const auto& p : split.phi2.steps) {
            invariant_ok = invariant_ok && den(p.value) == 1;
            if (!first) invariant_ok = invariant_ok && prev <= p.value;
            if (p.lo.kind != ExtReal::MinusInf && p.lo.value >= 0)
                invariant_ok = invariant_ok && p.lo.value > 0;
            if (p.hi.kind != ExtReal::PlusInf && p.hi.value <= 0)
                invariant_ok = invariant_ok && p.hi.value < 0;
            prev = p.value;
            first = false;
        }
        for (const auto& p : split.phi1.steps) {
            bool positive_side = p.lo.kind != ExtReal::MinusInf && p.lo.value >= 0;
            invariant_ok = invariant_ok &&
                           (positive_side ? (p.value >= 0 && p.value <= 1)
                                          : (p.value <= 0 && p.value >= -1));
        }
        // factorised transforms agree with the whole representation
        if (trial % 5 == 0) {
            for (double x : {0.5, -0.5, 1.0, -1.0, 5.0, -5.0}) {
                Complex whole = transform_from_representation(rep, Real(x));
                Complex s1 = transform_amcm_side(split.c_tilde, split.phi1, Real(x));
                Complex s2 =
                    transform_polya_side(split.a_tilde, split.b_tilde, split.phi2, Real(x));
                worst = std::max(worst, cnorm(whole - s1 * s2));
            }
        }
    }
    bool pass = exact_ok && invariant_ok && worst <= 1e-9;
    char buf[128];
    std::snprintf(buf, sizeof buf, "exact sum: %s; invariants: %s; max transform gap %.2e",
                  exact_ok ? "yes" : "NO", invariant_ok ? "yes" : "NO", worst);
    report(8, pass, buf, sw.seconds());
    CHECK(exact_ok);
    CHECK(invariant_ok);
    CHECK(worst <= 1e-9);
}

TEST_CASE("criterion 9: certified negativity of the self-decomposability derivative") {
    Stopwatch sw;
    // exact reduction: h = -3 + 6 e^{-2x} - 34 e^{-15x}; critical point e^{13x} = 85/2;
    // maximum value -3 + (26/5)(2/85)^{2/13}
    ExpPolySum h = ExpPolySum::on_positive_axis(
        {{Q(-3), Q(0), Q(0)}, {Q(6), Q(0), Q(-2)}, {Q(-34), Q(0), Q(-15)}});
    ExpPolySum hp = diff_exppoly(h, 1).rate_shifted(Q(15)).scaled(Q(1, 6));
    bool crit_ok =
        hp == ExpPolySum::on_positive_axis({{Q(-2), Q(0), Q(13)}, {Q(85), Q(0), Q(0)}});
    bool coeff_ok = (Q(6) - Q(34) * Q(2, 85)) == Q(26, 5);
    CertifiedInterval power = pow_enclosure(Q(2, 85), Q(2, 13), 140);
    CertifiedInterval max_value = CertifiedInterval::point(Q(-3)) + Q(26, 5) * power;
    bool negative = max_value.hi < 0;
    double sec = sw.seconds();
    bool pass = crit_ok && coeff_ok && negative && sec < 1.0;
    report(9, pass,
           "max value in [" + rat_to_decimal(max_value.lo, 12) + ", " +
               rat_to_decimal(max_value.hi, 12) + "] < 0",
           sec);
    CHECK(crit_ok);
    CHECK(coeff_ok);
    CHECK(negative);
    CHECK(sec < 1.0);
}

TEST_CASE("criterion 10: oracle agreements") {
    Stopwatch sw;
    PrecisionGuard guard(45);

    // exact 6.1 density against Fourier inversion of its transform at 10 points
    double worst_inv = 0;
    {
        QuadratureOptions opts;
        opts.tail = QuadratureOptions::Tail::power;
        opts.power_tail_degree = 4;
        opts.power_tail_constant = 30000;
        opts.power_tail_from = 30;
        opts.abs_tol = 1e-9;
        opts.max_subdivisions = 40000;
        ExpPolySum f = f61();
        TransformFn F = [&](const Real& xi) { return transform_from_representation(rep61(), xi); };
        for (int i = 1; i <= 10; ++i) {
            Rational x = Q(i, 4) + Q(1, 8); // interior points in (0, 2.75]
            Real inverted = invert_transform(F, Real(x), 0, 0.0, opts);
            SymbolicValue sv = eval_exact(f, x);
            Real exact(0);
            for (const auto& term : sv.terms) exact += Real(term.q) * exp(Real(term.r));
            worst_inv = std::max(worst_inv, std::abs((inverted - exact).to_double()));
        }
    }

    // semigroup of the Gauss-Weierstrass kernel through direct quadrature
    double worst_semi = 0;
    for (auto [s, t, x] : {std::tuple{0.3, 0.5, 0.7}, {1.0, 0.25, -1.3}, {0.1, 0.1, 2.0}}) {
        Real st(s), tt(t), xx(x);
        Real conv = adaptive_gauss(
            [&](const Real& y) {
                Real ga = exp(-y * y / (Real(4) * st)) / sqrt(Real(4) * real_pi() * st);
                Real gb =
                    exp(-(xx - y) * (xx - y) / (Real(4) * tt)) / sqrt(Real(4) * real_pi() * tt);
                return ga * gb;
            },
            Real(-40), Real(40), 1e-14);
        double expected = std::exp(-x * x / (4 * (s + t))) /
                          std::sqrt(4 * 3.14159265358979323846 * (s + t));
        worst_semi = std::max(worst_semi, std::abs(conv.to_double() - expected));
    }

    // Hermite-type sign-change counts up to n = 10
    bool hermite_ok = true;
    {
        Poly p = Poly::constant(1);
        Poly x_half({Q(0), Q(-1, 2)});
        for (int n = 1; n <= 10; ++n) {
            p = p.derivative() + x_half * p;
            std::vector<std::pair<double, double>> vals;
            for (int i = 0; i <= 1200; ++i) {
                double x = -12 + 24.0 * i / 1200;
                double g = std::exp(-x * x / 4);
                vals.emplace_back(x, p.eval(Rational(std::lround(x * 4096), 4096)).get_d() * g);
            }
            hermite_ok = hermite_ok && count_sign_changes_grid(vals, 1e-30) == n;
        }
    }

    bool pass = worst_inv <= 1e-8 && worst_semi <= 1e-10 && hermite_ok;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "inversion gap %.2e (tol 1e-8); semigroup gap %.2e (tol 1e-10); hermite "
                  "counts: %s",
                  worst_inv, worst_semi, hermite_ok ? "all n" : "MISMATCH");
    report(10, pass, buf, sw.seconds());
    CHECK(worst_inv <= 1e-8);
    CHECK(worst_semi <= 1e-10);
    CHECK(hermite_ok);
}

TEST_CASE("catalog: full reproduction suite has no claim failures") {
    Stopwatch sw;
    CatalogOptions opts; // defaults: full numeric runs included
    SuiteReport suite = run_all(opts);
    std::printf("%s", suite_summary_table(suite).c_str());
    std::fflush(stdout);
    CHECK(suite.failures() == 0);
    report(0, suite.failures() == 0, "reproduction catalog (run_all)", sw.seconds());
}
