#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "bellshape/rational.hpp"

namespace bellshape {

namespace detail {
inline mpfr_prec_t& current_precision() {
    thread_local mpfr_prec_t prec = 200; // ~60 decimal digits
    return prec;
}
} // namespace detail

inline mpfr_prec_t digits_to_bits(long digits) {
    return static_cast<mpfr_prec_t>(digits * 3.3219280948873626 + 16);
}

// RAII scope for the working precision of all subsequently created Reals
struct PrecisionGuard {
    explicit PrecisionGuard(long decimal_digits) : saved_(detail::current_precision()) {
        detail::current_precision() = digits_to_bits(decimal_digits);
    }
    ~PrecisionGuard() { detail::current_precision() = saved_; }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

  private:
    mpfr_prec_t saved_;
};

// Value-semantic arbitrary-precision float (MPFR), round-to-nearest.
class Real {
  public:
    Real() { mpfr_init2(v_, detail::current_precision()); mpfr_set_zero(v_, 1); }
    Real(double x) : Real() { mpfr_set_d(v_, x, MPFR_RNDN); }
    Real(long x) : Real() { mpfr_set_si(v_, x, MPFR_RNDN); }
    Real(int x) : Real() { mpfr_set_si(v_, x, MPFR_RNDN); }
    Real(const Rational& q) : Real() { mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }

    Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, MPFR_PREC_MIN);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sgn() const { return mpfr_sgn(v_); }

    std::string to_string(int digits = 17) const {
        char fmt[32];
        std::snprintf(fmt, sizeof fmt, "%%.%dRg", digits);
        char buf[256];
        mpfr_snprintf(buf, sizeof buf, fmt, v_);
        return buf;
    }

#define BELLSHAPE_REAL_BINOP(op, fn)                                     \
    friend Real operator op(const Real& a, const Real& b) {              \
        Real r;                                                          \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                                 \
        return r;                                                        \
    }                                                                    \
    Real& operator op##=(const Real& b) {                                \
        fn(v_, v_, b.v_, MPFR_RNDN);                                     \
        return *this;                                                    \
    }
    BELLSHAPE_REAL_BINOP(+, mpfr_add)
    BELLSHAPE_REAL_BINOP(-, mpfr_sub)
    BELLSHAPE_REAL_BINOP(*, mpfr_mul)
    BELLSHAPE_REAL_BINOP(/, mpfr_div)
#undef BELLSHAPE_REAL_BINOP

    friend Real operator-(const Real& a) {
        Real r;
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_); }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_); }
    friend bool operator>=(const Real& a, const Real& b) {
        return mpfr_greaterequal_p(a.v_, b.v_);
    }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_); }
    friend bool operator!=(const Real& a, const Real& b) { return !mpfr_equal_p(a.v_, b.v_); }

  private:
    mpfr_t v_;
};

#define BELLSHAPE_REAL_UNARY(name, fn)      \
    inline Real name(const Real& a) {       \
        Real r;                             \
        fn(r.raw(), a.raw(), MPFR_RNDN);    \
        return r;                           \
    }
BELLSHAPE_REAL_UNARY(abs, mpfr_abs)
BELLSHAPE_REAL_UNARY(sqrt, mpfr_sqrt)
BELLSHAPE_REAL_UNARY(exp, mpfr_exp)
BELLSHAPE_REAL_UNARY(log, mpfr_log)
BELLSHAPE_REAL_UNARY(sin, mpfr_sin)
BELLSHAPE_REAL_UNARY(cos, mpfr_cos)
BELLSHAPE_REAL_UNARY(tan, mpfr_tan)
BELLSHAPE_REAL_UNARY(atan, mpfr_atan)
BELLSHAPE_REAL_UNARY(sinh, mpfr_sinh)
BELLSHAPE_REAL_UNARY(cosh, mpfr_cosh)
BELLSHAPE_REAL_UNARY(tanh, mpfr_tanh)
BELLSHAPE_REAL_UNARY(erf, mpfr_erf)
BELLSHAPE_REAL_UNARY(erfc, mpfr_erfc)
BELLSHAPE_REAL_UNARY(gamma, mpfr_gamma)
#undef BELLSHAPE_REAL_UNARY

inline Real atan2(const Real& y, const Real& x) {
    Real r;
    mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
    return r;
}
inline void sin_cos(Real& s, Real& c, const Real& x) {
    mpfr_sin_cos(s.raw(), c.raw(), x.raw(), MPFR_RNDN);
}
inline Real pow(const Real& a, const Real& b) {
    Real r;
    mpfr_pow(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}
inline Real pow_int(const Real& a, long e) {
    Real r;
    mpfr_pow_si(r.raw(), a.raw(), e, MPFR_RNDN);
    return r;
}
inline Real real_pi() {
    Real r;
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}
inline Real real_max(const Real& a, const Real& b) { return a > b ? a : b; }
inline Real real_min(const Real& a, const Real& b) { return a < b ? a : b; }

// complex numbers over Real; principal branches throughout
struct Complex {
    Real re, im;

    Complex() = default;
    Complex(Real r) : re(std::move(r)), im(0) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    Complex(double r) : re(r), im(0) {}

    friend Complex operator+(const Complex& a, const Complex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend Complex operator-(const Complex& a, const Complex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator/(const Complex& a, const Complex& b) {
        Real d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    Complex conj() const { return {re, -im}; }
};

inline Real abs(const Complex& z) { return sqrt(z.re * z.re + z.im * z.im); }
inline Real arg(const Complex& z) { return atan2(z.im, z.re); }

inline Complex exp(const Complex& z) {
    Real m = exp(z.re);
    return {m * cos(z.im), m * sin(z.im)};
}

inline Complex log(const Complex& z) { return {log(abs(z)), arg(z)}; }

inline Complex sqrt(const Complex& z) {
    Real m = abs(z);
    Real u = sqrt((m + z.re) / Real(2));
    Real v = sqrt((m - z.re) / Real(2));
    if (z.im.sgn() < 0) v = -v;
    return {u, v};
}

inline Complex pow_int(const Complex& z, long e) {
    if (e == 0) return Complex(Real(1));
    bool inv = e < 0;
    unsigned long n = static_cast<unsigned long>(inv ? -e : e);
    Complex r(Real(1)), b = z;
    while (n) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return inv ? Complex(Real(1)) / r : r;
}

// z^{p/q}, principal branch
inline Complex pow_rational(const Complex& z, const Rational& e) {
    Complex lg = log(z);
    Real ex(e);
    return exp(Complex{lg.re * ex, lg.im * ex});
}

} // namespace bellshape
