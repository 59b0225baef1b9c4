#pragma once

#include <functional>
#include <map>
#include <vector>

#include "bellshape/errors.hpp"
#include "bellshape/real.hpp"

namespace bellshape {

// Options shared by the numeric integration and inversion routines.
struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_subdivisions = 4000;
    long precision_digits = 60; // >= 30

    // tail cutoff strategy for Fourier inversion
    enum class Tail { gaussian, power };
    Tail tail = Tail::gaussian;
    double power_tail_constant = 0;  // |F(i xi)| <= C / xi^k for xi >= power_tail_from
    double power_tail_degree = 0;
    double power_tail_from = 1;

    void validate() const {
        if (abs_tol <= 0 || rel_tol <= 0) throw BadInput("tolerances must be positive");
        if (precision_digits < 30) throw BadInput("working precision must be >= 30 digits");
    }
};

using RealFn = std::function<Real(const Real&)>;

// tanh-sinh quadrature on a finite interval; good with endpoint singularities
inline Real tanh_sinh(const RealFn& f, const Real& a, const Real& b, double abs_tol,
                      double rel_tol = 1e-15, int max_level = 12) {
    Real mid = (a + b) / Real(2);
    Real half = (b - a) / Real(2);
    Real pi_half = real_pi() / Real(2);

    auto node_sum = [&](double h, bool odd_only) {
        Real sum(0);
        int consecutive_small = 0;
        for (int j = odd_only ? 1 : 0;; j += odd_only ? 2 : 1) {
            Real t = Real(h) * Real(j);
            Real s = sinh(t);
            Real c = cosh(t);
            Real u = pi_half * s;
            Real ch = cosh(u);
            Real x = tanh(u);
            Real w = pi_half * c / (ch * ch);
            if (w.to_double() < 1e-400) break;
            Real contrib(0);
            {
                Real xp = mid + half * x;
                if (xp > a && xp < b) contrib += f(xp) * w;
            }
            if (j > 0) {
                Real xm = mid - half * x;
                if (xm > a && xm < b) contrib += f(xm) * w;
            }
            sum += contrib;
            double mag = std::abs(contrib.to_double());
            double tot = std::abs(sum.to_double()) + 1e-300;
            if (mag < tot * 1e-40 || mag < 1e-320) {
                if (++consecutive_small >= 3) break;
            } else {
                consecutive_small = 0;
            }
            if (j == 0 && odd_only) break;
            if (j > 8000) break;
        }
        return sum;
    };

    double h = 1.0;
    Real integral = node_sum(h, false) * Real(h) * half;
    for (int level = 1; level <= max_level; ++level) {
        h /= 2;
        Real addition = node_sum(h, true);
        Real refined = integral / Real(2) + addition * Real(h) * half;
        double diff = std::abs((refined - integral).to_double());
        double scale = std::abs(refined.to_double());
        integral = refined;
        if (level >= 3 && (diff <= abs_tol || diff <= rel_tol * scale)) return integral;
    }
    return integral; // best effort; callers compare refinement levels when it matters
}

namespace detail {

struct GLRule {
    std::vector<Real> nodes;   // on (0, 1], positive half; node 0 included when n odd
    std::vector<Real> weights; // matching weights for [-1, 1]
};

inline const GLRule& gauss_legendre(int n, mpfr_prec_t prec) {
    thread_local std::map<std::pair<int, mpfr_prec_t>, GLRule> cache;
    auto key = std::make_pair(n, prec);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    GLRule rule;
    // Newton refinement of double-precision seeds for the Legendre roots
    for (int i = 1; i <= n / 2 + (n % 2); ++i) {
        double seed = std::cos(3.14159265358979323846 * (i - 0.25) / (n + 0.5));
        Real x(seed);
        Real dp(0);
        for (int iter = 0; iter < 8; ++iter) {
            Real p0(1), p1(0);
            for (int k = 0; k < n; ++k) {
                Real p2 = p1;
                p1 = p0;
                p0 = (Real(2 * k + 1) * x * p1 - Real(k) * p2) / Real(k + 1);
            }
            dp = Real(n) * (x * p0 - p1) / (x * x - Real(1));
            Real dx = p0 / dp;
            x = x - dx;
            if (std::abs(dx.to_double()) < 1e-60 && iter >= 4) break;
        }
        Real w = Real(2) / ((Real(1) - x * x) * dp * dp);
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
    }
    return cache.emplace(key, std::move(rule)).first->second;
}

} // namespace detail

// fixed-order Gauss-Legendre on [a, b]
inline Real gauss_panel(const RealFn& f, const Real& a, const Real& b, int order = 32) {
    const auto& rule = detail::gauss_legendre(order, detail::current_precision());
    Real mid = (a + b) / Real(2);
    Real half = (b - a) / Real(2);
    Real sum(0);
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const Real& x = rule.nodes[i];
        if (order % 2 == 1 && x.to_double() < 1e-30) {
            sum += f(mid) * rule.weights[i];
            continue;
        }
        sum += (f(mid + half * x) + f(mid - half * x)) * rule.weights[i];
    }
    return sum * half;
}

// adaptive Gauss-Legendre by interval halving; error estimated from the
// whole-panel vs two-half difference
inline Real adaptive_gauss(const RealFn& f, const Real& a, const Real& b, double abs_tol,
                           double rel_tol = 1e-14, int max_panels = 4000, int order = 24) {
    struct Seg {
        Real a, b, value;
        double err;
    };
    auto eval_seg = [&](const Real& x, const Real& y) {
        Real whole = gauss_panel(f, x, y, order);
        Real m = (x + y) / Real(2);
        Real halves = gauss_panel(f, x, m, order) + gauss_panel(f, m, y, order);
        return Seg{x, y, halves, std::abs((whole - halves).to_double())};
    };
    std::vector<Seg> segs{eval_seg(a, b)};
    int panels = 3;
    while (panels < max_panels) {
        double total_err = 0, total_mag = 0;
        size_t worst = 0;
        for (size_t i = 0; i < segs.size(); ++i) {
            total_err += segs[i].err;
            total_mag += std::abs(segs[i].value.to_double());
            if (segs[i].err > segs[worst].err) worst = i;
        }
        if (total_err <= abs_tol || total_err <= rel_tol * total_mag) break;
        Seg s = segs[worst];
        Real m = (s.a + s.b) / Real(2);
        segs[worst] = eval_seg(s.a, m);
        segs.push_back(eval_seg(m, s.b));
        panels += 4;
    }
    // canonical summation order for reproducibility
    std::sort(segs.begin(), segs.end(),
              [](const Seg& x, const Seg& y) { return x.a < y.a; });
    Real total(0);
    for (const auto& s : segs) total += s.value;
    return total;
}

} // namespace bellshape
