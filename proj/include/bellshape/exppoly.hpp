#pragma once

#include <algorithm>
#include <vector>

#include "bellshape/symbolic_value.hpp"

namespace bellshape {

// one term c * x^beta * e^{rate x}
struct ExpPolyTerm {
    Rational coeff;
    Rational beta;
    Rational rate;
};

// piecewise sum of exponential-polynomial terms with disjoint supports;
// closed under differentiation on piece interiors
struct ExpPolySum {
    struct Piece {
        ExtReal lo = ExtReal::minus_inf();
        ExtReal hi = ExtReal::plus_inf();
        std::vector<ExpPolyTerm> terms;
    };
    std::vector<Piece> pieces;

    static ExpPolySum on_positive_axis(std::vector<ExpPolyTerm> terms) {
        ExpPolySum f;
        Piece p;
        p.lo = ExtReal::finite(0);
        p.hi = ExtReal::plus_inf();
        p.terms = std::move(terms);
        f.pieces.push_back(std::move(p));
        f.canonicalize();
        return f;
    }

    void canonicalize() {
        for (auto& piece : pieces) {
            std::sort(piece.terms.begin(), piece.terms.end(),
                      [](const ExpPolyTerm& a, const ExpPolyTerm& b) {
                          if (a.beta != b.beta) return a.beta < b.beta;
                          return a.rate < b.rate;
                      });
            std::vector<ExpPolyTerm> merged;
            for (const auto& t : piece.terms) {
                if (!merged.empty() && merged.back().beta == t.beta &&
                    merged.back().rate == t.rate)
                    merged.back().coeff += t.coeff;
                else
                    merged.push_back(t);
            }
            merged.erase(std::remove_if(merged.begin(), merged.end(),
                                        [](const ExpPolyTerm& t) { return t.coeff == 0; }),
                         merged.end());
            piece.terms = std::move(merged);
        }
        std::sort(pieces.begin(), pieces.end(),
                  [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
        for (size_t i = 0; i + 1 < pieces.size(); ++i)
            if (!(pieces[i].hi <= pieces[i + 1].lo))
                throw BadInput("overlapping support pieces");
    }

    ExpPolySum scaled(const Rational& s) const {
        ExpPolySum f = *this;
        for (auto& piece : f.pieces)
            for (auto& t : piece.terms) t.coeff *= s;
        f.canonicalize();
        return f;
    }

    // multiply by e^{delta x}
    ExpPolySum rate_shifted(const Rational& delta) const {
        ExpPolySum f = *this;
        for (auto& piece : f.pieces)
            for (auto& t : piece.terms) t.rate += delta;
        f.canonicalize();
        return f;
    }

    friend bool operator==(const ExpPolySum& a, const ExpPolySum& b) {
        if (a.pieces.size() != b.pieces.size()) return false;
        for (size_t i = 0; i < a.pieces.size(); ++i) {
            const auto& pa = a.pieces[i];
            const auto& pb = b.pieces[i];
            if (!(pa.lo == pb.lo) || !(pa.hi == pb.hi) || pa.terms.size() != pb.terms.size())
                return false;
            for (size_t j = 0; j < pa.terms.size(); ++j)
                if (pa.terms[j].coeff != pb.terms[j].coeff ||
                    pa.terms[j].beta != pb.terms[j].beta || pa.terms[j].rate != pb.terms[j].rate)
                    return false;
        }
        return true;
    }
};

// sum of two ExpPolySums with identical piece boundaries (the common case here:
// both live on a single shared support)
inline ExpPolySum exppoly_add(const ExpPolySum& a, const ExpPolySum& b) {
    if (a.pieces.empty()) return b;
    if (b.pieces.empty()) return a;
    if (a.pieces.size() != b.pieces.size()) throw BadInput("piece layouts differ in exppoly_add");
    ExpPolySum r = a;
    for (size_t i = 0; i < r.pieces.size(); ++i) {
        if (!(r.pieces[i].lo == b.pieces[i].lo) || !(r.pieces[i].hi == b.pieces[i].hi))
            throw BadInput("piece layouts differ in exppoly_add");
        r.pieces[i].terms.insert(r.pieces[i].terms.end(), b.pieces[i].terms.begin(),
                                 b.pieces[i].terms.end());
    }
    r.canonicalize();
    return r;
}

// exact n-th derivative on piece interiors; jumps at piece boundaries are not encoded
inline ExpPolySum diff_exppoly(const ExpPolySum& f, unsigned long n) {
    ExpPolySum g = f;
    for (unsigned long step = 0; step < n; ++step) {
        for (auto& piece : g.pieces) {
            std::vector<ExpPolyTerm> d;
            d.reserve(piece.terms.size() * 2);
            for (const auto& t : piece.terms) {
                if (t.beta != 0) d.push_back({t.coeff * t.beta, t.beta - 1, t.rate});
                if (t.rate != 0) d.push_back({t.coeff * t.rate, t.beta, t.rate});
            }
            piece.terms = std::move(d);
        }
        g.canonicalize();
    }
    return g;
}

namespace detail {

// exact x^beta for rational x and beta, when it is rational
inline Rational rational_power(const Rational& x, const Rational& beta) {
    if (den(beta) == 1) {
        if (x == 0 && beta < 0) throw NonRepresentablePoint("0 raised to negative power");
        if (x == 0) return beta == 0 ? Rational(1) : Rational(0);
        return rat_pow(x, num(beta).get_si());
    }
    if (x < 0) throw NonRepresentablePoint("fractional power of a negative point");
    if (x == 0) {
        if (beta > 0) return 0;
        throw NonRepresentablePoint("0 raised to nonpositive fractional power");
    }
    auto root = rat_root_exact(x, den(beta).get_ui());
    if (!root) throw NonRepresentablePoint("x^beta is irrational at this point");
    return rat_pow(*root, num(beta).get_si());
}

} // namespace detail

// Exact evaluation at a rational point in the interior of a piece; points outside
// every piece evaluate to zero, piece boundaries are rejected.
inline SymbolicValue eval_exact(const ExpPolySum& f, const Rational& x) {
    ExtReal xe = ExtReal::finite(x);
    for (const auto& piece : f.pieces) {
        bool above = piece.lo.kind == ExtReal::MinusInf ||
                     (piece.lo.kind == ExtReal::Finite && piece.lo.value < x);
        bool below = piece.hi.kind == ExtReal::PlusInf ||
                     (piece.hi.kind == ExtReal::Finite && x < piece.hi.value);
        if (above && below) {
            SymbolicValue v;
            for (const auto& t : piece.terms) {
                Rational xb = detail::rational_power(x, t.beta);
                v += SymbolicValue::single(t.coeff * xb, t.rate * x);
            }
            return v;
        }
        if ((piece.lo == xe) || (piece.hi == xe))
            throw BadInput("evaluation at a piece boundary");
    }
    return SymbolicValue::zero();
}

// certified signs at the sample points; the number of strict alternations is a
// rigorous lower bound for the sign-change count
inline long sign_changes_lower_bound(const ExpPolySum& f, const std::vector<Rational>& samples) {
    std::vector<Rational> pts = samples;
    std::sort(pts.begin(), pts.end());
    long count = 0;
    int prev = 0;
    for (const auto& x : pts) {
        int s = sign_certified(eval_exact(f, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

// convolution with the exponential density rho e^{-rho y} 1_{(0,inf)}(y), for f
// supported on (0,inf) with nonnegative integer powers and rates distinct from rho
inline ExpPolySum convolve_exponential(const ExpPolySum& f, const Rational& rho) {
    if (rho <= 0) throw BadInput("exponential rate must be positive");
    if (f.pieces.size() != 1 || !(f.pieces[0].lo == ExtReal::finite(0)) ||
        f.pieces[0].hi.kind != ExtReal::PlusInf)
        throw BadInput("convolve_exponential needs a single piece on (0,inf)");
    std::vector<ExpPolyTerm> out;
    for (const auto& t : f.pieces[0].terms) {
        if (den(t.beta) != 1 || t.beta < 0)
            throw UnsupportedFractionalPower("convolve_exponential needs integer powers >= 0");
        long k = num(t.beta).get_si();
        Rational lambda = -t.rate; // term decays as e^{-lambda x}
        Rational mu = lambda - rho;
        if (mu == 0) throw BadInput("coinciding rates in convolve_exponential");
        // int_0^x y^k e^{-mu y} dy = k!/mu^{k+1} - e^{-mu x} sum_j k!/(j! mu^{k+1-j}) x^j
        Rational kfact(1);
        for (long j = 2; j <= k; ++j) kfact *= j;
        Rational c_exp = t.coeff * rho * kfact / rat_pow(mu, k + 1);
        out.push_back({c_exp, Rational(0), -rho});
        Rational jfact(1);
        for (long j = 0; j <= k; ++j) {
            if (j >= 2) jfact *= j;
            Rational cj = -t.coeff * rho * kfact / (jfact * rat_pow(mu, k + 1 - j));
            out.push_back({cj, Rational(j), -lambda});
        }
    }
    return ExpPolySum::on_positive_axis(std::move(out));
}

// rational upper bound for sup_{x>0} |f(x)|, for single-piece f on (0,inf) with
// integer powers >= 0 and strictly negative rates
inline Rational sup_abs_bound_positive_axis(const ExpPolySum& f) {
    if (f.pieces.size() != 1) throw BadInput("sup bound needs a single piece");
    Rational total(0);
    for (const auto& t : f.pieces[0].terms) {
        if (den(t.beta) != 1 || t.beta < 0 || t.rate >= 0)
            throw BadInput("sup bound needs integer powers and negative rates");
        long k = num(t.beta).get_si();
        Rational lambda = -t.rate;
        if (k == 0) {
            total += rat_abs(t.coeff);
        } else {
            // max of x^k e^{-lambda x} is (k/lambda)^k e^{-k}
            Rational peak = rat_pow(Rational(k) / lambda, k);
            Rational e_mk_hi = exp_enclosure(Rational(-k), make_rational(1, 1000000)).hi;
            total += rat_abs(t.coeff) * peak * e_mk_hi;
        }
    }
    return total;
}

} // namespace bellshape
