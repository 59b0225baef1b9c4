#pragma once

#include <functional>
#include <map>

#include "bellshape/bell_representation.hpp"
#include "bellshape/quadrature.hpp"

namespace bellshape {

using TransformFn = std::function<Complex(const Real&)>; // xi -> L f(i xi)

// ---- Polya frequency parameters ----

struct PolyaParams {
    Rational a = 0; // Gaussian coefficient
    Rational b = 0; // shift
    std::vector<Rational> zeros;        // finite list of nonzero z_n
    std::optional<Rational> geometric_m; // adds the family z_n = m 2^n, n >= 1

    void validate() const {
        if (a < 0) throw BadInput("Gaussian coefficient must be nonnegative");
        for (const auto& z : zeros)
            if (z == 0) throw BadInput("zero z_n");
        if (geometric_m && *geometric_m <= 0) throw BadInput("geometric family needs m > 0");
    }
};

namespace detail {

// sum_{n > N} (z/z_n - log(1+z/z_n)) for the geometric family, bounded via
// |z/u - log(1+z/u)| <= |z|^2/(2|u|^2 (1-|z/u|))
inline Complex geometric_polya_log(const Rational& m, const Complex& z, double tol) {
    Real az = abs(z);
    Complex total{Real(0), Real(0)};
    Rational zn = m * 2;
    int n = 1;
    while (true) {
        Real znr{zn};
        // tail bound starting at the next factor
        Rational zn_next = zn * 2;
        Real tail_first{zn_next};
        if (Real(2) * az < tail_first) {
            double t = az.to_double() / tail_first.to_double();
            double bound = az.to_double() * az.to_double() /
                           (2 * tail_first.to_double() * tail_first.to_double() * (1 - t));
            bound *= 4.0 / 3.0; // geometric sum of 1/z_n^2
            if (bound < tol / 8 && n > 1) break;
        }
        Complex ratio = z / Complex{znr, Real(0)};
        total = total + ratio - log(Complex{Real(1) + ratio.re, ratio.im});
        zn = zn_next;
        if (++n > 4096) throw ToleranceNotMet("geometric family truncation failed");
    }
    return total;
}

// inner compensation for geometric factors with z_n < 1:
// int_{z_n}^1 (1/s - z/s^2) ds = ln(1/z_n) - z (1/z_n - 1), per unit level
inline Complex geometric_inner_correction(const Rational& m, const Complex& z) {
    Complex total{Real(0), Real(0)};
    Rational zn = m * 2;
    while (zn < 1) {
        total = total + Complex{log(Real(1) / Real(zn)), Real(0)} -
                z * Complex{Real(1) / Real(zn) - Real(1), Real(0)};
        zn *= 2;
    }
    return total;
}

// cached base integral for power-law pieces at xi = 1:
//   B = int_0^1 (s^{a+1} - s^{1-a})/(1+s^2) ds  +  i int_0^1 (s^{2-a} - s^a)/(1+s^2) ds
inline Complex powerlaw_base_integral(const Rational& alpha) {
    thread_local std::map<std::pair<Rational, mpfr_prec_t>, Complex> cache;
    auto key = std::make_pair(alpha, current_precision());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Real al{alpha};
    double tol = std::pow(10.0, -30.0);
    Real re = tanh_sinh(
        [&](const Real& s) {
            return (pow(s, al + Real(1)) - pow(s, Real(1) - al)) / (Real(1) + s * s);
        },
        Real(0), Real(1), tol);
    Real im = tanh_sinh(
        [&](const Real& s) {
            return (pow(s, Real(2) - al) - pow(s, al)) / (Real(1) + s * s);
        },
        Real(0), Real(1), tol);
    Complex b{re, im};
    cache.emplace(key, b);
    return b;
}

// contribution of a positive-side power-law piece to the exponent, xi > 0:
// scaling collapses the kernel integral onto the cached base integral
inline Complex powerlaw_exponent(const PowerLawPiece& pw, const Real& xi) {
    Real C = Real(pw.levy_coeff) / gamma(Real(pw.alpha) + Real(1));
    Complex B = powerlaw_base_integral(pw.alpha);
    Real xa = pow(xi, Real(pw.alpha));
    if (pw.alpha == 1) {
        Complex v = Complex{C * xi, Real(0)} * B;
        return v + Complex{C * (Real(1) - xi), C * xi * log(xi)};
    }
    Real al{pw.alpha};
    Complex v = Complex{C * xa, Real(0)} * B;
    v = v + Complex{C * (Real(1) - xa) / al, Real(0)};
    v = v - Complex{Real(0), C * (xi - xa) / (al - Real(1))};
    return v;
}

// Two-pole piece, phi = (p s + psi(s))/pi with psi bounded and periodic. The
// piece enters through the normalized kernel 1/(z+s) - 1/s + (z/s^2) 1_{|s|>=1}
// (full 1/s compensation), which differs from the bell kernel by the constant
// -int_{(-1,1)} phi/s ds; this pins the piece's exponent to 0 at xi -> 0, the
// normalisation under which the two-pole density has a = b = c = 0. Pairing s
// with -s (phi is odd) collapses the kernel to 2s/(s^2+xi^2) - 2/s, so the
// linear part contributes exactly -p xi and the psi part the real integral
// -2 xi^2 int_0^inf psi(s)/(pi s (s^2+xi^2)) ds.
inline Complex twopole_exponent(const TwoPoleArgPiece& tp, const Real& xi, double tol) {
    Real p{tp.p}, q{tp.q};
    Real pi = real_pi();
    Real linear = -p * xi;

    auto psi_over_pi = [&](const Real& s) {
        Real theta = (q - p) * s;
        return atan2(-p * sin(theta), q - p * cos(theta)) / pi;
    };
    auto integrand = [&](const Real& s) {
        return -psi_over_pi(s) * Real(2) * xi * xi / (s * (s * s + xi * xi));
    };
    // period of psi; the tail after S decays like xi^2/S^3
    double period = 2 * 3.14159265358979323846 / (q - p).to_double();
    double x = xi.to_double();
    double S = std::max({4.0, 2.0 * x, std::cbrt(8.0 * period * x * x / std::max(tol, 1e-30))});
    S = std::ceil(S / period) * period;
    Real head = adaptive_gauss(integrand, Real(0), Real(1), tol / 4, 1e-14, 600);
    long panels = static_cast<long>((S - 1.0) / period * 2) + 2;
    Real osc(0);
    Real a(1);
    Real step = (Real(S) - Real(1)) / Real(panels);
    for (long i = 0; i < panels; ++i) {
        Real b = a + step;
        osc += gauss_panel(integrand, a, b, 32);
        a = b;
    }
    return Complex{linear + head + osc, Real(0)};
}

// antiderivative of the bell kernel on {|s| >= 1}: Log(z+s) - ln|s| - z/s
inline Complex bell_kernel_outer(const Real& xi, const ExtReal& s) {
    if (s.kind == ExtReal::PlusInf) return Complex{Real(0), Real(0)};
    if (s.kind == ExtReal::MinusInf) return Complex{Real(0), real_pi()}; // xi > 0
    Real sv{s.value};
    Complex lg = log(Complex{sv, xi});
    return lg - Complex{log(abs(sv)), Real(0)} - Complex{Real(0), xi / sv};
}

// antiderivative inside (-1, 1): Log(z+s)
inline Complex bell_kernel_inner(const Real& xi, const Rational& s) {
    return log(Complex{Real(s), xi});
}

// kernel integral of one step piece against the bell compensation, xi > 0
inline Complex step_piece_exponent(const StepPiece& piece, const Real& xi) {
    Complex total{Real(0), Real(0)};
    // clip to (-inf, -1], [-1, 1], [1, inf)
    struct Seg {
        ExtReal a, b;
        bool outer;
    };
    std::vector<Seg> segs;
    ExtReal lo = piece.lo, hi = piece.hi;
    ExtReal m1 = ExtReal::finite(-1), p1 = ExtReal::finite(1);
    if (lo < m1) segs.push_back({lo, std::min(hi, m1, [](const ExtReal& x, const ExtReal& y) {
                                     return x < y;
                                 }),
                                 true});
    {
        ExtReal a = std::max(lo, m1, [](const ExtReal& x, const ExtReal& y) { return x < y; });
        ExtReal b = std::min(hi, p1, [](const ExtReal& x, const ExtReal& y) { return x < y; });
        if (a < b) segs.push_back({a, b, false});
    }
    if (p1 < hi)
        segs.push_back(
            {std::max(lo, p1, [](const ExtReal& x, const ExtReal& y) { return x < y; }), hi,
             true});

    for (const auto& seg : segs) {
        if (!(seg.a < seg.b)) continue;
        Complex va, vb;
        if (seg.outer) {
            va = bell_kernel_outer(xi, seg.a);
            vb = bell_kernel_outer(xi, seg.b);
        } else {
            va = bell_kernel_inner(xi, seg.a.value);
            vb = bell_kernel_inner(xi, seg.b.value);
        }
        total = total + (vb - va);
    }
    return Complex{Real(piece.value), Real(0)} * total;
}

} // namespace detail

// L f(i xi) = exp(-a xi^2 - i b xi + c + int K(i xi, s) phi(s) ds), where
// K(z, s) = 1/(z+s) - (1/s - z/s^2) 1_{|s| >= 1}
inline Complex transform_from_representation(const BellRepresentation& rep, const Real& xi,
                                             const QuadratureOptions& opts = {}) {
    rep.validate();
    if (xi.sgn() == 0) throw BadInput("transform is evaluated away from xi = 0");
    TailIntegrabilityReport tail = check_tail_integrability(rep.phi);
    if (!tail.finite) throw DivergentRepresentation("phi tail integral diverges");

    bool flip = xi.sgn() < 0;
    Real x = abs(xi);
    Complex expo{Real(rep.c) - Real(rep.a) * x * x, -Real(rep.b) * x};
    for (const auto& piece : rep.phi.steps) expo = expo + detail::step_piece_exponent(piece, x);
    for (const auto& a : rep.phi.analytic) {
        if (std::holds_alternative<PowerLawPiece>(a)) {
            const auto& pw = std::get<PowerLawPiece>(a);
            Complex v = detail::powerlaw_exponent(pw, x);
            expo = expo + (pw.side > 0 ? v : v.conj());
        } else if (std::holds_alternative<TwoPoleArgPiece>(a)) {
            expo = expo +
                   detail::twopole_exponent(std::get<TwoPoleArgPiece>(a), x, opts.abs_tol);
        } else if (std::holds_alternative<PolyaGeometricPiece>(a)) {
            const auto& pg = std::get<PolyaGeometricPiece>(a);
            Complex z{Real(0), x};
            expo = expo + detail::geometric_polya_log(pg.m, z, opts.abs_tol) +
                   detail::geometric_inner_correction(pg.m, z);
        } else {
            throw UnsupportedAnalyticPiece("bessel pieces have no transform evaluation");
        }
    }
    Complex value = exp(expo);
    return flip ? value.conj() : value;
}

// L f(z) = e^{a z^2 - b z} prod e^{z/z_n}/(1 + z/z_n) at z = i xi
inline Complex polya_transform(const PolyaParams& params, const Real& xi, double tol = 1e-12) {
    params.validate();
    Real x = xi;
    Complex z{Real(0), x};
    Complex expo = Complex{-Real(params.a) * x * x, -Real(params.b) * x};
    for (const auto& zn : params.zeros) {
        Complex ratio = z / Complex{Real(zn), Real(0)};
        expo = expo + ratio - log(Complex{Real(1) + ratio.re, ratio.im});
    }
    if (params.geometric_m)
        expo = expo + detail::geometric_polya_log(*params.geometric_m, z, tol);
    return exp(expo);
}

// Stieltjes-side transform: exp(c~ + int (1/(z+s) - 1_{|s|>=1}/s) phi1 ds)
inline Complex transform_amcm_side(const LogLinear& c_tilde, const PhiFunction& phi1,
                                   const Real& xi) {
    if (xi.sgn() == 0) throw BadInput("transform is evaluated away from xi = 0");
    bool flip = xi.sgn() < 0;
    Real x = abs(xi);
    Complex expo{c_tilde.value(), Real(0)};
    for (const auto& piece : phi1.steps) {
        // same segment split as the bell kernel, but without the z/s^2 compensation
        auto outer = [&](const ExtReal& s) -> Complex {
            if (s.kind == ExtReal::PlusInf) return Complex{Real(0), Real(0)};
            if (s.kind == ExtReal::MinusInf) return Complex{Real(0), real_pi()};
            return log(Complex{Real(s.value), x}) - Complex{log(abs(Real(s.value))), Real(0)};
        };
        StepPiece rest = piece;
        ExtReal m1 = ExtReal::finite(-1), p1 = ExtReal::finite(1);
        auto emin = [](const ExtReal& a, const ExtReal& b) { return a < b ? a : b; };
        auto emax = [](const ExtReal& a, const ExtReal& b) { return a < b ? b : a; };
        Complex total{Real(0), Real(0)};
        if (rest.lo < m1) total = total + (outer(emin(rest.hi, m1)) - outer(rest.lo));
        {
            ExtReal a = emax(rest.lo, m1), b = emin(rest.hi, p1);
            if (a < b)
                total = total + (detail::bell_kernel_inner(x, b.value) -
                                 detail::bell_kernel_inner(x, a.value));
        }
        if (p1 < rest.hi) total = total + (outer(rest.hi) - outer(emax(rest.lo, p1)));
        expo = expo + Complex{Real(piece.value), Real(0)} * total;
    }
    Complex value = exp(expo);
    return flip ? value.conj() : value;
}

// Polya-side transform through phi2: exp(a z^2 - b z + int (1/(z+s) - 1/s + z/s^2) phi2 ds)
inline Complex transform_polya_side(const Rational& a_tilde, const Rational& b_tilde,
                                    const PhiFunction& phi2, const Real& xi) {
    if (xi.sgn() == 0) throw BadInput("transform is evaluated away from xi = 0");
    bool flip = xi.sgn() < 0;
    Real x = abs(xi);
    Complex expo{-Real(a_tilde) * x * x, -Real(b_tilde) * x};
    for (const auto& piece : phi2.steps) {
        Complex va = detail::bell_kernel_outer(x, piece.lo);
        Complex vb = detail::bell_kernel_outer(x, piece.hi);
        expo = expo + Complex{Real(piece.value), Real(0)} * (vb - va);
    }
    Complex value = exp(expo);
    return flip ? value.conj() : value;
}

// stable law via the representation route: phi(s) = sign(s) c |s|^alpha / Gamma(1+alpha)
inline Complex stable_transform(const Rational& alpha, const Rational& c_plus,
                                const Rational& c_minus, const Real& xi,
                                const QuadratureOptions& opts = {}) {
    if (!(alpha > 0 && alpha < 2)) throw InvalidIndex("stable index must lie in (0,2)");
    if (c_plus < 0 || c_minus < 0 || c_plus + c_minus == 0)
        throw BadInput("stable coefficients must be nonnegative with positive sum");
    BellRepresentation rep;
    rep.phi = phi_from_nu(StablePowerForm{c_plus, c_minus, alpha});
    return transform_from_representation(rep, xi, opts);
}

// closed-form transform of the two-pole product density
// f(x) = (1/pi) p q (p+q) / ((p^2+x^2)(q^2+x^2))
inline Complex two_pole_density_transform(const Rational& p, const Rational& q, const Real& xi) {
    if (!(p > 0 && p < q)) throw BadInput("two-pole needs 0 < p < q");
    Real ax = abs(xi);
    Real v = (Real(q) * exp(-Real(p) * ax) - Real(p) * exp(-Real(q) * ax)) / Real(q - p);
    return Complex{v, Real(0)};
}

// ---- numeric evidence for the boundary condition (d) ----

struct BoundaryConditionEvidence {
    std::vector<std::pair<double, double>> re_integrals; // (delta, int_delta^1 Re F)
    std::vector<std::pair<double, double>> t_im_values;  // (t, t Im F(i t))
    bool re_integral_converging = false;
    bool im_limit_zero = false;
    bool ok = false; // numeric evidence, never a certificate
};

inline BoundaryConditionEvidence check_boundary_condition(const TransformFn& F) {
    BoundaryConditionEvidence ev;
    double deltas[] = {1e-2, 1e-4, 1e-6};
    for (double d : deltas) {
        Real val = adaptive_gauss([&](const Real& t) { return F(t).re; }, Real(d), Real(1),
                                  1e-10, 1e-10, 2000);
        ev.re_integrals.emplace_back(d, val.to_double());
    }
    double j0 = ev.re_integrals[0].second;
    double inc1 = std::abs(ev.re_integrals[1].second - j0);
    double inc2 = std::abs(ev.re_integrals[2].second - ev.re_integrals[1].second);
    ev.re_integral_converging = inc2 <= 0.5 * inc1 + 1e-9 || inc2 < 1e-6 * (1 + std::abs(j0));

    double scale = 1e-300;
    for (double t : deltas) {
        double v = (Real(t) * F(Real(t)).im).to_double();
        ev.t_im_values.emplace_back(t, v);
        scale = std::max(scale, std::abs(F(Real(t)).re.to_double()));
    }
    ev.im_limit_zero = std::abs(ev.t_im_values.back().second) < 1e-4 * (1 + scale);
    ev.ok = ev.re_integral_converging && ev.im_limit_zero;
    return ev;
}

} // namespace bellshape
