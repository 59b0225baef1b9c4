#pragma once

#include <utility>
#include <vector>

#include "bellshape/rational.hpp"

namespace bellshape {

// Dense univariate polynomial over Q, coefficients lowest-degree first,
// trimmed so the leading (last) coefficient is nonzero. Empty = zero polynomial.
struct Poly {
    std::vector<Rational> c;

    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { trim(); }
    static Poly constant(const Rational& v) { return Poly(std::vector<Rational>{v}); }
    static Poly x() { return Poly({Rational(0), Rational(1)}); }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }
    const Rational& lc() const { return c.back(); }
    Rational coeff(size_t i) const { return i < c.size() ? c[i] : Rational(0); }

    Rational eval(const Rational& x) const {
        Rational v(0);
        for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly();
        std::vector<Rational> d(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * Rational(static_cast<long>(i));
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rational> r(std::max(a.c.size(), b.c.size()), Rational(0));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<Rational> r(std::max(a.c.size(), b.c.size()), Rational(0));
        for (size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
        return Poly(std::move(r));
    }
    friend Poly operator-(const Poly& a) {
        std::vector<Rational> r = a.c;
        for (auto& v : r) v = -v;
        Poly p;
        p.c = std::move(r);
        return p;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rational> r(a.c.size() + b.c.size() - 1, Rational(0));
        for (size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i] == 0) continue;
            for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        }
        return Poly(std::move(r));
    }
    friend Poly operator*(const Rational& s, const Poly& a) {
        if (s == 0) return Poly();
        std::vector<Rational> r = a.c;
        for (auto& v : r) v *= s;
        Poly p;
        p.c = std::move(r);
        return p;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
};

inline Poly poly_pow(const Poly& base, unsigned long e) {
    Poly r = Poly::constant(1);
    Poly b = base;
    while (e) {
        if (e & 1) r = r * b;
        if (e >>= 1) b = b * b;
    }
    return r;
}

// quotient and remainder over Q
inline std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw BadInput("polynomial division by zero");
    Poly r = a;
    std::vector<Rational> q(a.c.size() > b.c.size() ? a.c.size() - b.c.size() + 1 : 1,
                            Rational(0));
    while (!r.is_zero() && r.degree() >= b.degree()) {
        long k = r.degree() - b.degree();
        Rational f = r.lc() / b.lc();
        q[static_cast<size_t>(k)] += f;
        for (size_t i = 0; i < b.c.size(); ++i)
            r.c[static_cast<size_t>(k) + i] -= f * b.c[i];
        r.trim();
    }
    return {Poly(std::move(q)), r};
}

inline Poly poly_divide_exact(const Poly& a, const Poly& b) {
    auto [q, r] = poly_divmod(a, b);
    if (!r.is_zero()) throw BadInput("inexact polynomial division");
    return q;
}

// ---- integer-coefficient machinery (PRS, Sturm) ----

using IPoly = std::vector<Integer>; // lowest-degree first, trimmed

namespace ipoly {

inline void trim(IPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}
inline bool is_zero(const IPoly& p) { return p.empty(); }
inline long degree(const IPoly& p) { return static_cast<long>(p.size()) - 1; }

inline Integer content(const IPoly& p) {
    Integer g = 0;
    for (const auto& c : p) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

// divide by the (positive) content, keeping signs
inline IPoly primitive(const IPoly& p) {
    if (is_zero(p)) return p;
    Integer g = content(p);
    if (g == 1) return p;
    IPoly r(p.size());
    for (size_t i = 0; i < p.size(); ++i) mpz_divexact(r[i].get_mpz_t(), p[i].get_mpz_t(), g.get_mpz_t());
    return r;
}

inline IPoly derivative(const IPoly& p) {
    if (p.size() <= 1) return {};
    IPoly d(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<long>(i);
    return d;
}

inline IPoly negate(IPoly p) {
    for (auto& c : p) c = -c;
    return p;
}

inline IPoly mul_scalar(IPoly p, const Integer& s) {
    for (auto& c : p) c *= s;
    return p;
}

inline IPoly div_scalar_exact(IPoly p, const Integer& s) {
    for (auto& c : p) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), s.get_mpz_t());
    return p;
}

// pseudo-remainder: lc(b)^{deg a - deg b + 1} * a  mod  b
inline IPoly prem(const IPoly& a, const IPoly& b) {
    if (is_zero(b)) throw BadInput("prem by zero polynomial");
    IPoly r = a;
    trim(r);
    long db = degree(b);
    const Integer& lb = b.back();
    long e = degree(r) - db + 1;
    if (e < 0) e = 0;
    while (!is_zero(r) && degree(r) >= db) {
        long k = degree(r) - db;
        Integer lr = r.back();
        for (auto& c : r) c *= lb;
        for (size_t i = 0; i < b.size(); ++i) r[static_cast<size_t>(k) + i] -= lr * b[i];
        trim(r);
        --e;
    }
    while (e-- > 0)
        for (auto& c : r) c *= lb;
    return r;
}

// Sturm chain by primitive PRS. Each S_{i+1} is a negative positive-rational
// multiple of S_{i-1} mod S_i, which is exactly the Sturm recurrence.
inline std::vector<IPoly> sturm_chain(const IPoly& p) {
    std::vector<IPoly> chain;
    IPoly s0 = primitive(p);
    trim(s0);
    if (is_zero(s0)) throw BadInput("sturm chain of zero polynomial");
    chain.push_back(s0);
    IPoly s1 = primitive(derivative(s0));
    if (is_zero(s1)) return chain; // constant polynomial
    chain.push_back(s1);
    while (true) {
        const IPoly& a = chain[chain.size() - 2];
        const IPoly& b = chain[chain.size() - 1];
        long delta = degree(a) - degree(b);
        IPoly r = prem(a, b);
        if (is_zero(r)) break;
        // prem multiplier is lc(b)^{delta+1}; flip if that is negative
        if (sign(b.back()) < 0 && (delta + 1) % 2 == 1) r = negate(std::move(r));
        r = negate(primitive(r));
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int sign_at(const IPoly& p, const Rational& x) {
    if (is_zero(p)) return 0;
    const Integer& a = num(x);
    const Integer& b = den(x);
    Integer v = p.back();
    Integer bp = 1;
    for (size_t i = p.size() - 1; i-- > 0;) {
        bp *= b;
        v = v * a + p[i] * bp;
    }
    return sign(v);
}

inline int sign_at_pos_inf(const IPoly& p) { return is_zero(p) ? 0 : sign(p.back()); }
inline int sign_at_neg_inf(const IPoly& p) {
    if (is_zero(p)) return 0;
    int s = sign(p.back());
    return degree(p) % 2 == 0 ? s : -s;
}

inline int variations(const std::vector<int>& signs) {
    int count = 0, prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

struct SturmEvaluator {
    std::vector<IPoly> chain;

    explicit SturmEvaluator(const IPoly& p) : chain(sturm_chain(p)) {}

    int var_at(const Rational& x) const {
        std::vector<int> s;
        s.reserve(chain.size());
        for (const auto& q : chain) s.push_back(sign_at(q, x));
        return variations(s);
    }
    int var_at_neg_inf() const {
        std::vector<int> s;
        for (const auto& q : chain) s.push_back(sign_at_neg_inf(q));
        return variations(s);
    }
    int var_at_pos_inf() const {
        std::vector<int> s;
        for (const auto& q : chain) s.push_back(sign_at_pos_inf(q));
        return variations(s);
    }

    // distinct real roots of the chain's base polynomial
    long count_all() const { return var_at_neg_inf() - var_at_pos_inf(); }
    // distinct real roots in (a, b]
    long count_in(const Rational& a, const Rational& b) const { return var_at(a) - var_at(b); }

    // degree of the last chain element; 0 means the base polynomial is squarefree
    long gcd_degree() const { return degree(chain.back()); }
};

// strict bound B (power of two) with all real roots in (-B, B)
inline Rational root_bound(const IPoly& p) {
    if (is_zero(p)) throw BadInput("root bound of zero polynomial");
    Rational maxr(0);
    Rational lead = Rational(abs(p.back()));
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        Rational r = Rational(abs(p[i])) / lead;
        if (r > maxr) maxr = r;
    }
    Rational bound = 1 + maxr;
    Rational b(2);
    while (b < bound) b *= 2;
    return b;
}

} // namespace ipoly

// convert a rational polynomial to a primitive integer polynomial times a positive scale
inline std::pair<IPoly, Rational> to_integer_primitive(const Poly& p) {
    if (p.is_zero()) return {IPoly{}, Rational(1)};
    Integer lcm_den = 1;
    for (const auto& q : p.c) {
        Integer g;
        mpz_gcd(g.get_mpz_t(), lcm_den.get_mpz_t(), den(q).get_mpz_t());
        lcm_den = lcm_den / g * den(q);
    }
    IPoly ip(p.c.size());
    for (size_t i = 0; i < p.c.size(); ++i) {
        Integer scaled = num(p.c[i]) * (lcm_den / den(p.c[i]));
        ip[i] = scaled;
    }
    Integer cont = ipoly::content(ip);
    ip = ipoly::div_scalar_exact(std::move(ip), cont);
    return {std::move(ip), make_rational(cont, lcm_den)};
}

inline Poly from_integer(const IPoly& ip) {
    std::vector<Rational> c(ip.size());
    for (size_t i = 0; i < ip.size(); ++i) c[i] = Rational(ip[i]);
    return Poly(std::move(c));
}

// gcd by the subresultant PRS; result is primitive with positive leading coefficient
inline Poly poly_gcd(const Poly& pa, const Poly& pb) {
    if (pa.is_zero() && pb.is_zero()) return Poly();
    if (pa.is_zero()) return from_integer(to_integer_primitive(pb).first);
    if (pb.is_zero()) return from_integer(to_integer_primitive(pa).first);
    IPoly a = to_integer_primitive(pa).first;
    IPoly b = to_integer_primitive(pb).first;
    if (ipoly::degree(a) < ipoly::degree(b)) std::swap(a, b);
    Integer g = 1, h = 1;
    while (true) {
        long delta = ipoly::degree(a) - ipoly::degree(b);
        IPoly r = ipoly::prem(a, b);
        if (ipoly::is_zero(r)) {
            IPoly res = ipoly::primitive(b);
            if (sign(res.back()) < 0) res = ipoly::negate(std::move(res));
            return from_integer(res);
        }
        if (ipoly::degree(r) == 0) return Poly::constant(1);
        a = std::move(b);
        Integer divisor = g;
        for (long i = 0; i < delta; ++i) divisor *= h;
        b = ipoly::div_scalar_exact(std::move(r), divisor);
        g = a.back();
        if (delta > 0) {
            // h = g^delta / h^{delta-1}, exact by subresultant theory
            Integer hn = g;
            for (long i = 1; i < delta; ++i) hn *= g;
            Integer hd = 1;
            for (long i = 1; i < delta; ++i) hd *= h;
            mpz_divexact(hn.get_mpz_t(), hn.get_mpz_t(), hd.get_mpz_t());
            h = hn;
        }
    }
}

// Yun's squarefree decomposition: p = prod a_i^i up to a constant,
// returned as the list [a_1, a_2, ...] (entries may be constant 1).
inline std::vector<Poly> squarefree_decomposition(const Poly& p) {
    if (p.is_zero()) throw BadInput("squarefree decomposition of zero");
    std::vector<Poly> out;
    if (p.degree() == 0) return out;
    Poly g = poly_gcd(p, p.derivative());
    if (g.degree() == 0) {
        out.push_back(p);
        return out;
    }
    Poly c = poly_divide_exact(p, g);
    Poly d = poly_divide_exact(p.derivative(), g) - c.derivative();
    while (c.degree() > 0) {
        Poly a = poly_gcd(c, d);
        out.push_back(a);
        c = poly_divide_exact(c, a);
        d = poly_divide_exact(d, a) - c.derivative();
    }
    return out;
}

struct RootInterval {
    Rational lo;
    Rational hi; // lo == hi marks an exactly-known rational root
    long multiplicity = 1;
};

namespace detail {

// isolate the (simple) real roots of a squarefree integer polynomial into
// half-open cells (a, b], then trim so roots are interior or exactly pinned
inline std::vector<std::pair<Rational, Rational>> isolate_squarefree(
    const IPoly& p, const Rational& max_width = make_rational(1, 4)) {
    std::vector<std::pair<Rational, Rational>> out;
    if (ipoly::degree(p) <= 0) return out;
    ipoly::SturmEvaluator sturm(p);
    Rational bound = ipoly::root_bound(p);
    struct Cell {
        Rational a, b;
        long count;
    };
    std::vector<Cell> stack;
    long total = sturm.count_in(-bound, bound);
    if (total > 0) stack.push_back({-bound, bound, total});
    while (!stack.empty()) {
        Cell cell = stack.back();
        stack.pop_back();
        if (cell.count == 1) {
            // shrink until both endpoints are non-roots (then the root is interior)
            Rational a = cell.a, b = cell.b;
            while (ipoly::sign_at(p, b) == 0 || ipoly::sign_at(p, a) == 0) {
                if (ipoly::sign_at(p, b) == 0) {
                    out.emplace_back(b, b);
                    goto next_cell;
                }
                Rational m = (a + b) / 2;
                if (ipoly::sign_at(p, m) == 0) {
                    out.emplace_back(m, m);
                    goto next_cell;
                }
                if (sturm.count_in(a, m) == 1) b = m;
                else a = m;
            }
            // endpoints are now non-roots, so the simple root sits strictly inside
            // and plain sign bisection can tighten the cell
            while (b - a > max_width) {
                Rational m = (a + b) / 2;
                int sm = ipoly::sign_at(p, m);
                if (sm == 0) {
                    out.emplace_back(m, m);
                    goto next_cell;
                }
                if (sm == ipoly::sign_at(p, a)) a = m;
                else b = m;
            }
            out.emplace_back(a, b);
        } else if (cell.count > 1) {
            Rational m = (cell.a + cell.b) / 2;
            long left = sturm.count_in(cell.a, m);
            if (left > 0) stack.push_back({cell.a, m, left});
            if (cell.count - left > 0) stack.push_back({m, cell.b, cell.count - left});
        }
    next_cell:;
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    // make the cells pairwise disjoint as closed sets
    for (size_t i = 0; i + 1 < out.size(); ++i) {
        while (out[i].second >= out[i + 1].first) {
            auto& cur = out[i];
            if (cur.first == cur.second) {
                auto& nxt = out[i + 1];
                Rational m = (nxt.first + nxt.second) / 2;
                if (ipoly::sign_at(p, m) == 0) {
                    nxt = {m, m};
                    break;
                }
                if (sturm.count_in(nxt.first, m) == 1) nxt.second = m;
                else nxt.first = m;
                continue;
            }
            Rational m = (cur.first + cur.second) / 2;
            if (ipoly::sign_at(p, m) == 0) {
                cur = {m, m};
                continue;
            }
            if (sturm.count_in(cur.first, m) == 1) cur.second = m;
            else cur.first = m;
        }
    }
    return out;
}

} // namespace detail

// One interval per distinct real root, pairwise disjoint, with multiplicities
// from the squarefree decomposition. Exact rational roots come back as points.
inline std::vector<RootInterval> isolate_real_roots(
    const Poly& p, const Rational& max_width = make_rational(1, 4)) {
    if (p.is_zero()) throw BadInput("isolate_real_roots: zero polynomial");
    std::vector<Poly> sqf = squarefree_decomposition(p);
    // squarefree part = product of all factors
    Poly sf = Poly::constant(1);
    for (const auto& a : sqf) sf = sf * a;
    if (sf.degree() <= 0) return {};
    IPoly isf = to_integer_primitive(sf).first;
    auto cells = detail::isolate_squarefree(isf, max_width);

    std::vector<RootInterval> out;
    std::vector<std::pair<IPoly, long>> factors;
    for (size_t i = 0; i < sqf.size(); ++i)
        if (sqf[i].degree() > 0)
            factors.emplace_back(to_integer_primitive(sqf[i]).first, static_cast<long>(i + 1));

    for (const auto& cell : cells) {
        long mult = 1;
        for (const auto& [fac, m] : factors) {
            if (cell.first == cell.second) {
                if (ipoly::sign_at(fac, cell.first) == 0) {
                    mult = m;
                    break;
                }
            } else {
                ipoly::SturmEvaluator es(fac);
                if (es.count_in(cell.first, cell.second) == 1) {
                    mult = m;
                    break;
                }
            }
        }
        out.push_back({cell.first, cell.second, mult});
    }
    return out;
}

// distinct real roots of p (any multiplicities), whole line
inline long count_distinct_real_roots(const Poly& p) {
    if (p.is_zero()) throw BadInput("count_distinct_real_roots: zero polynomial");
    if (p.degree() == 0) return 0;
    ipoly::SturmEvaluator s(to_integer_primitive(p).first);
    return s.count_all();
}

} // namespace bellshape
