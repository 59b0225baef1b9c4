#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "bellshape/exppoly.hpp"
#include "bellshape/real.hpp"

namespace bellshape {

// ---- analytic piece tags ----

// phi(s) = sign(s) * levy_coeff * |s|^alpha / Gamma(1+alpha) on the given side
struct PowerLawPiece {
    Rational levy_coeff; // Levy-density coefficient c+ or c-
    Rational alpha;      // in (0, 2)
    int side = 1;        // +1: supported on s > 0, -1: on s < 0
};

// phi(s) = continuous arg(q e^{ips} - p e^{iqs}) for s > 0, odd in s; 0 < p < q
struct TwoPoleArgPiece {
    Rational p, q;
};

// phi(s) = (1/pi) arg(i J_{p-1/2}(|s|) - Y_{p-1/2}(|s|)) sign(s), continuous version
struct BesselArgPiece {
    Rational p;
};

// phi(s) = sum_{n>=1} 1_{[m 2^n, inf)}(s): the geometric exponential family
struct PolyaGeometricPiece {
    Rational m;
};

using AnalyticPiece =
    std::variant<PowerLawPiece, TwoPoleArgPiece, BesselArgPiece, PolyaGeometricPiece>;

// step piece [lo, hi) with a constant rational value
struct StepPiece {
    ExtReal lo, hi;
    Rational value;
};

// The Fourier-side weight function phi. Regions not covered by any piece have
// value 0; phi(0) is fixed to 0; step pieces are right-open [lo, hi).
struct PhiFunction {
    std::vector<StepPiece> steps;
    std::vector<AnalyticPiece> analytic;

    static PhiFunction from_steps(std::vector<StepPiece> s) {
        PhiFunction f;
        f.steps = std::move(s);
        f.canonicalize();
        return f;
    }

    bool pure_step() const { return analytic.empty(); }

    void canonicalize() {
        steps.erase(std::remove_if(steps.begin(), steps.end(),
                                   [](const StepPiece& p) {
                                       return p.value == 0 || !(p.lo < p.hi);
                                   }),
                    steps.end());
        std::sort(steps.begin(), steps.end(),
                  [](const StepPiece& a, const StepPiece& b) { return a.lo < b.lo; });
        for (size_t i = 0; i + 1 < steps.size(); ++i) {
            if (!(steps[i].hi <= steps[i + 1].lo))
                throw BadInput("overlapping phi step pieces");
        }
        // merge adjacent pieces with equal values
        std::vector<StepPiece> merged;
        for (const auto& p : steps) {
            if (!merged.empty() && merged.back().hi == p.lo && merged.back().value == p.value)
                merged.back().hi = p.hi;
            else
                merged.push_back(p);
        }
        steps = std::move(merged);
    }

    Rational step_value_at(const Rational& s) const {
        ExtReal e = ExtReal::finite(s);
        for (const auto& p : steps)
            if (p.lo <= e && e < p.hi) return p.value;
        return 0;
    }

    // equality of the canonical step parts; analytic parts must both be absent
    friend bool operator==(const PhiFunction& a, const PhiFunction& b) {
        if (!a.analytic.empty() || !b.analytic.empty()) return false;
        if (a.steps.size() != b.steps.size()) return false;
        for (size_t i = 0; i < a.steps.size(); ++i)
            if (!(a.steps[i].lo == b.steps[i].lo) || !(a.steps[i].hi == b.steps[i].hi) ||
                a.steps[i].value != b.steps[i].value)
                return false;
        return true;
    }
};

// ---- numeric evaluation (steps + analytic tags) ----

namespace detail {

inline Real eval_two_pole(const TwoPoleArgPiece& t, const Real& s_abs) {
    // (1/pi) arg(q e^{ips} - p e^{iqs}); the argument splits as
    // p s + arg(q - p e^{i(q-p)s}) and the second factor stays in the right
    // half-plane (p < q), so the principal branch is continuous
    Real p(t.p), q(t.q);
    Real theta = (q - p) * s_abs;
    return (p * s_abs + atan2(-p * sin(theta), q - p * cos(theta))) / real_pi();
}

inline Real eval_bessel(const BesselArgPiece& b, const Real& s_abs) {
    // W_nu = i J_nu - Y_nu = sqrt(2/(pi x)) e^{ix} R_nu(1/x) for half-integer nu,
    // with R_{-1/2} = i, R_{1/2} = 1, R_{nu+1} = (2 nu / x) R_nu - R_{nu-1}
    if (den(b.p) != 1 || b.p < 1 || b.p > 16)
        throw UnsupportedAnalyticPiece("bessel phi needs small integer order p");
    long pint = num(b.p).get_si();
    Real u = Real(1) / s_abs;
    Complex r_prev{Real(0), Real(1)}; // R_{-1/2}
    Complex r_cur{Real(1), Real(0)};  // R_{1/2}
    for (long k = 1; k < pint; ++k) {
        // nu = k - 1/2
        Real two_nu = Real(2 * k - 1);
        Complex r_next = Complex{two_nu, Real(0)} * Complex{u, Real(0)} * r_cur - r_prev;
        r_prev = r_cur;
        r_cur = r_next;
    }
    // Im R < 0 for p in the supported range, so the principal argument is continuous
    return (s_abs + arg(r_cur)) / real_pi();
}

} // namespace detail

inline Real phi_value(const PhiFunction& phi, const Real& s) {
    Real total(0);
    for (const auto& p : phi.steps) {
        bool lo_ok = p.lo.kind == ExtReal::MinusInf || Real(p.lo.value) <= s;
        bool hi_ok = p.hi.kind == ExtReal::PlusInf || s < Real(p.hi.value);
        if (lo_ok && hi_ok) total += Real(p.value);
    }
    for (const auto& a : phi.analytic) {
        if (std::holds_alternative<PowerLawPiece>(a)) {
            const auto& pw = std::get<PowerLawPiece>(a);
            if ((pw.side > 0 && s.sgn() > 0) || (pw.side < 0 && s.sgn() < 0)) {
                Real mag = pow(abs(s), Real(pw.alpha)) * Real(pw.levy_coeff) /
                           gamma(Real(pw.alpha) + Real(1));
                total += s.sgn() > 0 ? mag : -mag;
            }
        } else if (std::holds_alternative<TwoPoleArgPiece>(a)) {
            if (s.sgn() != 0) {
                Real v = detail::eval_two_pole(std::get<TwoPoleArgPiece>(a), abs(s));
                total += s.sgn() > 0 ? v : -v;
            }
        } else if (std::holds_alternative<BesselArgPiece>(a)) {
            if (s.sgn() != 0) {
                Real v = detail::eval_bessel(std::get<BesselArgPiece>(a), abs(s));
                total += s.sgn() > 0 ? v : -v;
            }
        } else {
            const auto& pg = std::get<PolyaGeometricPiece>(a);
            if (s.sgn() > 0) {
                // count n >= 1 with m 2^n <= s
                Real z = Real(pg.m) * Real(2);
                long count = 0;
                while (z <= s && count < 4096) {
                    ++count;
                    z = z * Real(2);
                }
                total += Real(count);
            }
        }
    }
    return total;
}

// ---- level crossing ----

struct LevelCrossingReport {
    struct PerLevel {
        long k = 0;
        long sign_changes = 0;
        bool pass = true;
        std::optional<double> violation_near; // sample location inside an extra change
    };
    std::vector<PerLevel> per_level;
    bool sign_condition_ok = true; // phi >= 0 on (0,inf), <= 0 on (-inf,0)
    bool zero_change_at_origin = true;
    bool approximate = false; // grid-based because analytic pieces are present
    bool pass = false;
};

namespace detail {

// contiguous regions of a pure step phi over the whole line, split at 0
struct StepRegion {
    ExtReal lo, hi;
    Rational value;
};

inline std::vector<StepRegion> step_regions(const PhiFunction& phi) {
    std::vector<Rational> cuts{Rational(0)};
    for (const auto& p : phi.steps) {
        if (p.lo.is_finite()) cuts.push_back(p.lo.value);
        if (p.hi.is_finite()) cuts.push_back(p.hi.value);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<StepRegion> regions;
    ExtReal prev = ExtReal::minus_inf();
    for (const auto& c : cuts) {
        ExtReal cur = ExtReal::finite(c);
        if (prev < cur) {
            Rational probe = prev.is_finite() ? Rational((prev.value + c) / 2) : Rational(c - 1);
            regions.push_back({prev, cur, phi.step_value_at(probe)});
        }
        prev = cur;
    }
    Rational probe = prev.is_finite() ? Rational(prev.value + 1) : Rational(0);
    regions.push_back({prev, ExtReal::plus_inf(), phi.step_value_at(probe)});
    return regions;
}

inline double region_sample(const StepRegion& r) {
    if (r.lo.is_finite() && r.hi.is_finite())
        return Rational((r.lo.value + r.hi.value) / 2).get_d();
    if (r.lo.is_finite()) return r.lo.value.get_d() + 1.0;
    if (r.hi.is_finite()) return r.hi.value.get_d() - 1.0;
    return 0.0;
}

} // namespace detail

inline LevelCrossingReport check_level_crossing(const PhiFunction& phi, long k_max = -1) {
    LevelCrossingReport report;

    if (phi.pure_step()) {
        auto regions = detail::step_regions(phi);
        Rational sup_abs(0);
        for (const auto& r : regions) sup_abs = std::max(sup_abs, rat_abs(r.value));
        if (k_max < 0) k_max = rat_ceil(sup_abs).get_si();

        // 0 is always a cut, so every region lies wholly in one half-line
        for (const auto& r : regions) {
            bool positive_side = r.lo.kind != ExtReal::MinusInf && r.lo.value >= 0;
            bool negative_side = r.hi.kind != ExtReal::PlusInf && r.hi.value <= 0;
            if (positive_side && r.value < 0) report.sign_condition_ok = false;
            if (negative_side && r.value > 0) report.sign_condition_ok = false;
        }
        report.zero_change_at_origin = report.sign_condition_ok;

        for (long k = -k_max; k <= k_max; ++k) {
            LevelCrossingReport::PerLevel pl;
            pl.k = k;
            int prev = 0;
            long changes = 0;
            for (const auto& r : regions) {
                int s = sign(r.value - Rational(k));
                if (s == 0) continue;
                if (prev != 0 && s != prev) {
                    ++changes;
                    if (changes == 2 && !pl.violation_near)
                        pl.violation_near = detail::region_sample(r);
                }
                prev = s;
            }
            pl.sign_changes = changes;
            pl.pass = changes <= 1;
            report.per_level.push_back(pl);
        }
    } else {
        report.approximate = true;
        bool monotone_tags_only = true;
        for (const auto& a : phi.analytic)
            if (!std::holds_alternative<PowerLawPiece>(a) &&
                !std::holds_alternative<PolyaGeometricPiece>(a))
                monotone_tags_only = false;

        // dense grid: 10^4 points per decade over [1e-2, S], mirrored
        double S = 128.0;
        std::vector<double> grid;
        for (double base = 0.01; base < S; base *= 10)
            for (int i = 0; i < 10000; ++i) grid.push_back(base * (1.0 + 9.0 * i / 10000.0));
        grid.push_back(S);

        std::vector<Real> values_pos, values_neg;
        values_pos.reserve(grid.size());
        values_neg.reserve(grid.size());
        double sup_abs = 0;
        for (double g : grid) {
            Real vp = phi_value(phi, Real(g));
            Real vn = phi_value(phi, Real(-g));
            sup_abs = std::max({sup_abs, std::abs(vp.to_double()), std::abs(vn.to_double())});
            if (vp.to_double() < -1e-12 || vn.to_double() > 1e-12)
                report.sign_condition_ok = false;
            values_pos.push_back(vp);
            values_neg.push_back(vn);
        }
        report.zero_change_at_origin = report.sign_condition_ok;
        if (k_max < 0) k_max = monotone_tags_only && phi.steps.empty()
                                   ? 1
                                   : static_cast<long>(std::ceil(sup_abs));
        k_max = std::min<long>(k_max, 64);

        for (long k = -k_max; k <= k_max; ++k) {
            LevelCrossingReport::PerLevel pl;
            pl.k = k;
            long changes = 0;
            int prev = 0;
            for (size_t i = values_neg.size(); i-- > 0;) {
                double v = values_neg[i].to_double() - k;
                int s = std::abs(v) < 1e-12 ? 0 : (v > 0 ? 1 : -1);
                if (s == 0) continue;
                if (prev != 0 && s != prev) {
                    ++changes;
                    if (changes == 2 && !pl.violation_near) pl.violation_near = -grid[i];
                }
                prev = s;
            }
            for (size_t i = 0; i < values_pos.size(); ++i) {
                double v = values_pos[i].to_double() - k;
                int s = std::abs(v) < 1e-12 ? 0 : (v > 0 ? 1 : -1);
                if (s == 0) continue;
                if (prev != 0 && s != prev) {
                    ++changes;
                    if (changes == 2 && !pl.violation_near) pl.violation_near = grid[i];
                }
                prev = s;
            }
            pl.sign_changes = changes;
            pl.pass = changes <= 1;
            report.per_level.push_back(pl);
        }
    }

    report.pass = report.sign_condition_ok;
    for (const auto& pl : report.per_level) report.pass = report.pass && pl.pass;
    return report;
}

// ---- tail integrability:  int_{|s|>=1} |phi(s)| / |s|^3 ds ----

struct TailIntegrabilityReport {
    bool finite = true;
    bool exact = false;
    Rational exact_value = 0; // set when exact
    double upper_bound = 0;   // always set when finite
};

inline TailIntegrabilityReport check_tail_integrability(const PhiFunction& phi) {
    TailIntegrabilityReport rep;
    Rational exact_sum(0);
    double approx = 0;
    bool all_exact = true;

    // int_a^b s^-3 ds for 1 <= a <= b (b may be infinite)
    auto tail_piece = [](const Rational& a, const ExtReal& b) -> Rational {
        Rational lo = Rational(1) / (2 * a * a);
        if (b.kind == ExtReal::PlusInf) return lo;
        return lo - Rational(1) / (2 * b.value * b.value);
    };

    for (const auto& p : phi.steps) {
        // positive part of the support clipped to [1, inf)
        if (p.hi.kind == ExtReal::PlusInf || p.hi.value > 1) {
            Rational a =
                (p.lo.kind == ExtReal::MinusInf || p.lo.value < 1) ? Rational(1) : p.lo.value;
            exact_sum += rat_abs(p.value) * tail_piece(a, p.hi);
        }
        // negative part clipped to (-inf, -1], mirrored
        if (p.lo.kind == ExtReal::MinusInf || p.lo.value < -1) {
            Rational am =
                (p.hi.kind == ExtReal::PlusInf || p.hi.value > -1) ? Rational(1) : -p.hi.value;
            ExtReal bm = p.lo.kind == ExtReal::MinusInf ? ExtReal::plus_inf()
                                                        : ExtReal::finite(-p.lo.value);
            exact_sum += rat_abs(p.value) * tail_piece(am, bm);
        }
    }

    for (const auto& a : phi.analytic) {
        if (std::holds_alternative<PowerLawPiece>(a)) {
            const auto& pw = std::get<PowerLawPiece>(a);
            if (pw.alpha >= 2) {
                rep.finite = false;
                continue;
            }
            all_exact = false;
            Real g = gamma(Real(pw.alpha) + Real(1));
            Real v = abs(Real(pw.levy_coeff)) / (g * (Real(2) - Real(pw.alpha)));
            approx += v.to_double();
        } else if (std::holds_alternative<PolyaGeometricPiece>(a)) {
            const auto& pg = std::get<PolyaGeometricPiece>(a);
            // sum_n 1/(2 max(z_n,1)^2), z_n = m 2^n: finitely many z_n < 1, then geometric
            Rational z = pg.m * 2;
            long n0 = 1;
            Rational below(0);
            while (z < 1 && n0 < 8192) {
                below += make_rational(1, 2);
                z *= 2;
                ++n0;
            }
            // sum_{n >= n0} 1/(2 m^2 4^n) = (1/(2 m^2)) 4^{-n0} * 4/3
            Rational geo = make_rational(2, 3) / (pg.m * pg.m * rat_pow(Rational(4), n0));
            exact_sum += below + geo;
        } else if (std::holds_alternative<TwoPoleArgPiece>(a)) {
            const auto& tp = std::get<TwoPoleArgPiece>(a);
            all_exact = false;
            // |phi(s)| <= p|s| + pi/2: tail <= 2(p + pi/8)
            approx += 2.0 * (tp.p.get_d() + 3.14159265358979 / 8.0);
        } else {
            all_exact = false;
            // |phi| <= (|s| + c_p)/pi with a generous constant
            approx += 2.0 * (1.0 / 3.14159265358979) * (1.0 + 4.0);
        }
    }

    rep.exact = all_exact;
    if (all_exact) rep.exact_value = exact_sum;
    rep.upper_bound = exact_sum.get_d() + approx;
    return rep;
}

// ---- the phi1 + phi2 decomposition ----

struct PhiDecomposition {
    PhiFunction phi1; // bounded by 1 in absolute value, correct sign per side
    PhiFunction phi2; // integer-valued non-decreasing step, zero near 0
};

namespace detail {

// Positive-side jump locations of phi2: s_k = sup{s > 0 : phi(s) < k}, falling
// back to sup{phi <= k} when phi never dips strictly below k (phi touching the
// level exactly near 0 still admits phi1 = phi in [0,1] there). Both choices
// keep phi1 = phi - phi2 inside [0,1]; the strict version makes phi2 = phi for
// integer-valued non-decreasing staircases.
inline std::vector<Rational> positive_jumps(const std::vector<StepRegion>& regions) {
    std::vector<StepRegion> pos;
    for (const auto& r : regions)
        if (r.lo.kind != ExtReal::MinusInf && r.lo.value >= 0) pos.push_back(r);

    Rational supv(0);
    for (const auto& r : pos) supv = std::max(supv, r.value);
    long kmax = rat_ceil(supv).get_si();

    std::vector<Rational> jumps;
    for (long k = 1; k <= kmax; ++k) {
        std::optional<ExtReal> sk;
        for (const auto& r : pos)
            if (r.value < k) sk = r.hi;
        if (!sk.has_value()) {
            // phi never dips strictly below k: take the connected component of
            // {phi <= k} whose closure contains 0 (phi1 may equal 1 there)
            for (const auto& r : pos) {
                if (r.value <= k) sk = r.hi;
                else break;
            }
        }
        if (!sk.has_value() || (sk->is_finite() && sk->value == 0))
            throw LevelCrossingViolated(
                "phi > " + std::to_string(k) +
                " on every right-neighbourhood of 0: no valid decomposition");
        if (sk->kind == ExtReal::PlusInf) break; // this and all higher levels never settle
        jumps.push_back(sk->value);
    }
    return jumps;
}

} // namespace detail

inline PhiDecomposition decompose_phi(const PhiFunction& phi) {
    if (!phi.pure_step())
        throw UnsupportedAnalyticPiece("decompose_phi supports step phi only");
    LevelCrossingReport lc = check_level_crossing(phi);
    if (!lc.pass) throw LevelCrossingViolated("level crossing condition fails");

    auto regions = detail::step_regions(phi);

    std::vector<Rational> pos_jumps = detail::positive_jumps(regions);

    // negative side via the mirror phi~(s) = -phi(-s); [lo,hi) maps to (-hi,-lo],
    // which agrees with the mirrored region decomposition except on a null set of
    // endpoints, handled by rebuilding regions for the mirrored step function
    PhiFunction mirrored;
    for (const auto& p : phi.steps) {
        StepPiece m;
        m.lo = p.hi.kind == ExtReal::PlusInf ? ExtReal::minus_inf()
                                             : ExtReal::finite(-p.hi.value);
        m.hi = p.lo.kind == ExtReal::MinusInf ? ExtReal::plus_inf()
                                              : ExtReal::finite(-p.lo.value);
        m.value = -p.value;
        mirrored.steps.push_back(m);
    }
    mirrored.canonicalize();
    std::vector<Rational> neg_jumps_m = detail::positive_jumps(detail::step_regions(mirrored));

    std::vector<StepPiece> phi2_steps;
    for (size_t k = 0; k < pos_jumps.size(); ++k) {
        ExtReal hi = (k + 1 < pos_jumps.size()) ? ExtReal::finite(pos_jumps[k + 1])
                                                : ExtReal::plus_inf();
        phi2_steps.push_back({ExtReal::finite(pos_jumps[k]), hi, Rational(static_cast<long>(k + 1))});
    }
    for (size_t k = 0; k < neg_jumps_m.size(); ++k) {
        // mirrored jump at s~_k means phi2 = -k below -s~_k on the real side;
        // [lo,hi) pieces: value -(k+1) on [-s~_{k+1}, -s~_k)
        ExtReal lo = (k + 1 < neg_jumps_m.size()) ? ExtReal::finite(-neg_jumps_m[k + 1])
                                                  : ExtReal::minus_inf();
        phi2_steps.push_back({lo, ExtReal::finite(-neg_jumps_m[k]),
                              Rational(-static_cast<long>(k + 1))});
    }

    PhiDecomposition d;
    d.phi2 = PhiFunction::from_steps(std::move(phi2_steps));

    // phi1 = phi - phi2 over the merged breakpoints
    std::vector<Rational> cuts;
    for (const auto& p : phi.steps) {
        if (p.lo.is_finite()) cuts.push_back(p.lo.value);
        if (p.hi.is_finite()) cuts.push_back(p.hi.value);
    }
    for (const auto& p : d.phi2.steps) {
        if (p.lo.is_finite()) cuts.push_back(p.lo.value);
        if (p.hi.is_finite()) cuts.push_back(p.hi.value);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // with every breakpoint of both functions among the cuts, each [cut_i, cut_{i+1})
    // cell has constant phi and phi2, so the probe value is the cell value
    std::vector<StepPiece> phi1_steps;
    for (size_t i = 0; i < cuts.size(); ++i) {
        ExtReal lo = ExtReal::finite(cuts[i]);
        ExtReal hi = (i + 1 < cuts.size()) ? ExtReal::finite(cuts[i + 1]) : ExtReal::plus_inf();
        Rational v = phi.step_value_at(cuts[i]) - d.phi2.step_value_at(cuts[i]);
        if (v != 0) phi1_steps.push_back({lo, hi, v});
    }
    if (!cuts.empty()) {
        // leading region (-inf, first cut)
        Rational probe = cuts.front() - 1;
        Rational v = phi.step_value_at(probe) - d.phi2.step_value_at(probe);
        if (v != 0)
            phi1_steps.push_back({ExtReal::minus_inf(), ExtReal::finite(cuts.front()), v});
    }
    d.phi1 = PhiFunction::from_steps(std::move(phi1_steps));

    // unconditional verification: phi with level-touching plateaus can defeat any
    // jump-point rule, and such inputs must be rejected, not mis-decomposed
    for (const auto& p : d.phi1.steps) {
        bool positive_side = p.lo.kind != ExtReal::MinusInf && p.lo.value >= 0;
        if (positive_side ? (p.value < 0 || p.value > 1) : (p.value > 0 || p.value < -1))
            throw LevelCrossingViolated(
                "no decomposition with phi2 vanishing near 0 exists for this phi");
    }
    return d;
}

// ---- interlacing pole/zero data -> step phi ----

struct LocatedMultiplicity {
    Rational location;     // nonzero; sign gives the half-line
    Rational multiplicity; // > 0; rational values cover fractional powers
};

inline PhiFunction phi_from_interlacing_rational(std::vector<LocatedMultiplicity> poles,
                                                 std::vector<LocatedMultiplicity> zeros) {
    struct Event {
        Rational location;
        Rational delta;
    };
    std::vector<Event> pos, neg;
    for (const auto& p : poles) {
        if (p.location == 0 || p.multiplicity <= 0) throw BadInput("bad pole data");
        (p.location > 0 ? pos : neg).push_back({p.location, p.multiplicity});
    }
    for (const auto& z : zeros) {
        if (z.location == 0 || z.multiplicity <= 0) throw BadInput("bad zero data");
        (z.location > 0 ? pos : neg).push_back({z.location, -z.multiplicity});
    }

    std::vector<StepPiece> steps;
    auto scan = [&steps](std::vector<Event>& events, bool positive_side) {
        std::sort(events.begin(), events.end(), [&](const Event& a, const Event& b) {
            return rat_abs(a.location) < rat_abs(b.location);
        });
        // merge coincident locations
        std::vector<Event> merged;
        for (const auto& e : events) {
            if (!merged.empty() && merged.back().location == e.location)
                merged.back().delta += e.delta;
            else
                merged.push_back(e);
        }
        Rational level(0);
        for (size_t i = 0; i < merged.size(); ++i) {
            level += merged[i].delta;
            if (level < 0)
                throw NotExpRepresentable(
                    "cumulative pole-minus-zero multiplicity becomes negative");
            if (level == 0) continue;
            if (positive_side) {
                ExtReal hi = (i + 1 < merged.size()) ? ExtReal::finite(merged[i + 1].location)
                                                     : ExtReal::plus_inf();
                steps.push_back({ExtReal::finite(merged[i].location), hi, level});
            } else {
                ExtReal lo = (i + 1 < merged.size()) ? ExtReal::finite(merged[i + 1].location)
                                                     : ExtReal::minus_inf();
                steps.push_back({lo, ExtReal::finite(merged[i].location), -level});
            }
        }
    };
    scan(pos, true);
    scan(neg, false);
    return PhiFunction::from_steps(std::move(steps));
}

// ---- Laplace duality between phi and the Levy density nu ----

struct ExpOverXForm {
    // nu(x) = x^{-1} sum w e^{-lambda x} for x > 0, and nu(-x) likewise for x > 0
    std::vector<std::pair<Rational, Rational>> plus_terms;  // (weight, rate)
    std::vector<std::pair<Rational, Rational>> minus_terms;
};

struct StablePowerForm {
    Rational c_plus, c_minus, alpha; // nu(x) = c+ x^{-1-alpha}, nu(-x) = c- x^{-1-alpha}
};

using LevyDensityForm = std::variant<ExpOverXForm, StablePowerForm>;

// nu(x) for x > 0 as an exact exp-poly: a step [u,w) of height v contributes
// v (e^{-ux} - e^{-wx})/x
inline ExpPolySum levy_density_exact(const PhiFunction& phi, bool positive_side) {
    if (!phi.pure_step())
        throw UnsupportedAnalyticPiece("exact Levy density requires a step phi");
    std::vector<ExpPolyTerm> terms;
    for (const auto& p : phi.steps) {
        if (positive_side) {
            if (!(p.lo.kind != ExtReal::MinusInf && p.lo.value >= 0)) continue;
            terms.push_back({p.value, Rational(-1), -p.lo.value});
            if (p.hi.kind != ExtReal::PlusInf)
                terms.push_back({-p.value, Rational(-1), -p.hi.value});
        } else {
            // -phi(-s) on s > 0: piece [lo,hi) with hi <= 0 maps to [−hi, −lo)
            if (!(p.hi.kind != ExtReal::PlusInf && p.hi.value <= 0)) continue;
            terms.push_back({-p.value, Rational(-1), p.hi.value});
            if (p.lo.kind != ExtReal::MinusInf)
                terms.push_back({p.value, Rational(-1), p.lo.value});
        }
    }
    return ExpPolySum::on_positive_axis(std::move(terms));
}

// numeric Laplace-dual evaluation at x != 0 (steps and power-law tags)
inline Real nu_from_phi(const PhiFunction& phi, const Real& x) {
    if (x.sgn() == 0) throw BadInput("nu is defined away from 0");
    bool positive = x.sgn() > 0;
    Real ax = abs(x);
    Real total(0);
    for (const auto& p : phi.steps) {
        Real u, w;
        bool unbounded = false;
        if (positive) {
            if (!(p.lo.kind != ExtReal::MinusInf && p.lo.value >= 0)) continue;
            u = Real(p.lo.value);
            unbounded = p.hi.kind == ExtReal::PlusInf;
            if (!unbounded) w = Real(p.hi.value);
            Real contrib = exp(-u * ax);
            if (!unbounded) contrib -= exp(-w * ax);
            total += Real(p.value) * contrib / ax;
        } else {
            if (!(p.hi.kind != ExtReal::PlusInf && p.hi.value <= 0)) continue;
            u = Real(-p.hi.value);
            unbounded = p.lo.kind == ExtReal::MinusInf;
            if (!unbounded) w = Real(-p.lo.value);
            Real contrib = exp(-u * ax);
            if (!unbounded) contrib -= exp(-w * ax);
            total += Real(-p.value) * contrib / ax;
        }
    }
    for (const auto& a : phi.analytic) {
        if (std::holds_alternative<PowerLawPiece>(a)) {
            const auto& pw = std::get<PowerLawPiece>(a);
            if ((pw.side > 0) == positive)
                total += Real(pw.levy_coeff) * pow(ax, -Real(pw.alpha) - Real(1));
        } else {
            throw UnsupportedAnalyticPiece("nu_from_phi supports steps and power-law tags");
        }
    }
    return total;
}

inline PhiFunction phi_from_nu(const LevyDensityForm& nu) {
    PhiFunction phi;
    if (std::holds_alternative<ExpOverXForm>(nu)) {
        const auto& form = std::get<ExpOverXForm>(nu);
        // x^{-1} e^{-lambda x} is the Laplace transform of 1_{[lambda, inf)}
        std::vector<StepPiece> steps;
        // accumulate overlapping indicators by splitting at all rates
        auto build = [](const std::vector<std::pair<Rational, Rational>>& terms, bool pos_side) {
            std::vector<Rational> rates;
            for (const auto& [w, l] : terms) {
                if (l < 0) throw DivergentLaplace("negative rate in exp-over-x form");
                rates.push_back(l);
            }
            std::sort(rates.begin(), rates.end());
            rates.erase(std::unique(rates.begin(), rates.end()), rates.end());
            std::vector<StepPiece> out;
            for (size_t i = 0; i < rates.size(); ++i) {
                Rational level(0);
                for (const auto& [w, l] : terms)
                    if (l <= rates[i]) level += w;
                if (level == 0) continue;
                if (pos_side) {
                    ExtReal hi = (i + 1 < rates.size()) ? ExtReal::finite(rates[i + 1])
                                                        : ExtReal::plus_inf();
                    out.push_back({ExtReal::finite(rates[i]), hi, level});
                } else {
                    ExtReal lo = (i + 1 < rates.size()) ? ExtReal::finite(-rates[i + 1])
                                                        : ExtReal::minus_inf();
                    out.push_back({lo, ExtReal::finite(-rates[i]), -level});
                }
            }
            return out;
        };
        auto pos = build(form.plus_terms, true);
        auto neg = build(form.minus_terms, false);
        pos.insert(pos.end(), neg.begin(), neg.end());
        phi = PhiFunction::from_steps(std::move(pos));
    } else {
        const auto& s = std::get<StablePowerForm>(nu);
        if (!(s.alpha > 0 && s.alpha < 2)) throw InvalidIndex("alpha must lie in (0,2)");
        if (s.c_plus > 0) phi.analytic.push_back(PowerLawPiece{s.c_plus, s.alpha, +1});
        if (s.c_minus > 0) phi.analytic.push_back(PowerLawPiece{s.c_minus, s.alpha, -1});
    }
    return phi;
}

// ---- Stieltjes data ----

struct RatComplex {
    Rational re, im;

    friend RatComplex operator+(const RatComplex& a, const RatComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend RatComplex operator-(const RatComplex& a, const RatComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend RatComplex operator*(const RatComplex& a, const RatComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend RatComplex operator/(const RatComplex& a, const RatComplex& b) {
        Rational d = b.re * b.re + b.im * b.im;
        if (d == 0) throw BadInput("division by complex zero");
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
};

struct StieltjesData {
    Rational m = 0;                                        // atom at 0
    std::vector<std::pair<Rational, Rational>> plus_atoms; // (location > 0, mass > 0)
    std::vector<std::pair<Rational, Rational>> minus_atoms;

    void validate() const {
        if (m < 0) throw BadInput("negative atom at 0");
        for (const auto& [s, w] : plus_atoms)
            if (s <= 0 || w <= 0) throw BadInput("bad plus atom");
        for (const auto& [s, w] : minus_atoms)
            if (s <= 0 || w <= 0) throw BadInput("bad minus atom");
    }
};

// F(z) = m + sum w/(z+s) - sum w/(z-u), exact over rational complex points
inline RatComplex stieltjes_eval(const StieltjesData& data, const RatComplex& z) {
    data.validate();
    RatComplex total{data.m, 0};
    for (const auto& [s, w] : data.plus_atoms) {
        RatComplex d{z.re + s, z.im};
        if (d.re == 0 && d.im == 0) throw PoleHit("z hits a plus atom pole");
        total = total + RatComplex{w, 0} / d;
    }
    for (const auto& [u, w] : data.minus_atoms) {
        RatComplex d{z.re - u, z.im};
        if (d.re == 0 && d.im == 0) throw PoleHit("z hits a minus atom pole");
        total = total - RatComplex{w, 0} / d;
    }
    return total;
}

} // namespace bellshape
