#pragma once

#include <json.hpp>

#include "bellshape/phi_function.hpp"

namespace bellshape {

// rational + rational combination of logarithms: q0 + sum c_i ln(a_i), a_i > 0
struct LogLinear {
    Rational base = 0;
    std::vector<std::pair<Rational, Rational>> logs; // (coefficient, argument)

    LogLinear() = default;
    LogLinear(Rational b) : base(std::move(b)) {}

    void add_log(const Rational& coeff, const Rational& arg) {
        if (arg <= 0) throw BadInput("log of nonpositive argument");
        if (coeff == 0 || arg == 1) return;
        for (auto& [c, a] : logs) {
            if (a == arg) {
                c += coeff;
                return;
            }
        }
        logs.emplace_back(coeff, arg);
    }

    bool is_rational() const {
        for (const auto& [c, a] : logs)
            if (c != 0) return false;
        return true;
    }

    Real value() const {
        Real v{Rational(base)};
        for (const auto& [c, a] : logs) v += Real(c) * log(Real(a));
        return v;
    }

    CertifiedInterval enclosure(unsigned bits) const {
        CertifiedInterval total = CertifiedInterval::point(base);
        for (const auto& [c, a] : logs) total = total + c * log_enclosure(a, bits);
        return total.rounded_outward(bits);
    }
};

// the (a, b, c, phi) data of the Fourier-side representation
struct BellRepresentation {
    Rational a = 0; // Gaussian coefficient, >= 0
    Rational b = 0; // drift/shift
    Rational c = 0;
    PhiFunction phi;

    void validate() const {
        if (a < 0) throw BadInput("Gaussian coefficient must be nonnegative");
    }
};

// ---- splitting into the Stieltjes and Polya factors ----

struct SplitRepresentation {
    // Stieltjes side: exp(c~ + int (1/(z+s) - 1_{|s|>=1}/s) phi1 ds)
    LogLinear c_tilde;
    PhiFunction phi1;
    // Polya side: exp(a~ z^2 - b~ z + int (1/(z+s) - 1/s + z/s^2) phi2 ds)
    Rational a_tilde = 0;
    Rational b_tilde = 0;
    PhiFunction phi2;
};

namespace detail {

// int over piece intersect {|s|>=1} of value/s^2
inline Rational outer_inverse_square_integral(const PhiFunction& phi) {
    Rational total(0);
    auto segment = [](const Rational& a, const ExtReal& b) { // 0 < a <= b
        if (b.kind == ExtReal::PlusInf) return Rational(Rational(1) / a);
        return Rational(Rational(1) / a - Rational(1) / b.value);
    };
    for (const auto& p : phi.steps) {
        if (p.hi.kind == ExtReal::PlusInf || p.hi.value > 1) {
            Rational a =
                (p.lo.kind == ExtReal::MinusInf || p.lo.value < 1) ? Rational(1) : p.lo.value;
            total += p.value * segment(a, p.hi);
        }
        if (p.lo.kind == ExtReal::MinusInf || p.lo.value < -1) {
            Rational am =
                (p.hi.kind == ExtReal::PlusInf || p.hi.value > -1) ? Rational(1) : -p.hi.value;
            ExtReal bm = p.lo.kind == ExtReal::MinusInf ? ExtReal::plus_inf()
                                                        : ExtReal::finite(-p.lo.value);
            total += p.value * segment(am, bm);
        }
    }
    return total;
}

// int over piece intersect (-1,1) of value/s^2 (pieces must avoid 0)
inline Rational inner_inverse_square_integral(const PhiFunction& phi) {
    Rational total(0);
    for (const auto& p : phi.steps) {
        // clip [lo, hi) to (-1, 1)
        Rational a = (p.lo.kind == ExtReal::MinusInf || p.lo.value < -1) ? Rational(-1)
                                                                         : p.lo.value;
        Rational b =
            (p.hi.kind == ExtReal::PlusInf || p.hi.value > 1) ? Rational(1) : p.hi.value;
        if (!(a < b)) continue;
        if (a < 0 && b > 0) throw BadInput("phi2 piece crosses 0");
        total += p.value * (Rational(1) / a - Rational(1) / b);
    }
    return total;
}

// int over piece intersect (-1,1) of value/s, as a log combination
inline LogLinear inner_inverse_integral(const PhiFunction& phi) {
    LogLinear total;
    for (const auto& p : phi.steps) {
        Rational a = (p.lo.kind == ExtReal::MinusInf || p.lo.value < -1) ? Rational(-1)
                                                                         : p.lo.value;
        Rational b =
            (p.hi.kind == ExtReal::PlusInf || p.hi.value > 1) ? Rational(1) : p.hi.value;
        if (!(a < b)) continue;
        if (a < 0 && b > 0) throw BadInput("phi2 piece crosses 0");
        total.add_log(p.value, b / a); // int_a^b ds/s = ln(b/a), valid on either side
    }
    return total;
}

} // namespace detail

// Splits the representation across the decomposition phi = phi1 + phi2:
//   b = b~ + int_{|s|>=1} phi1/s^2 - int_{(-1,1)} phi2/s^2
//   c = c~ - int_{(-1,1)} phi2/s
inline SplitRepresentation split_representation(const BellRepresentation& rep) {
    rep.validate();
    PhiDecomposition d = decompose_phi(rep.phi);
    SplitRepresentation out;
    out.phi1 = d.phi1;
    out.phi2 = d.phi2;
    out.a_tilde = rep.a;
    out.b_tilde = rep.b - detail::outer_inverse_square_integral(d.phi1) +
                  detail::inner_inverse_square_integral(d.phi2);
    out.c_tilde = LogLinear(rep.c);
    LogLinear corr = detail::inner_inverse_integral(d.phi2);
    out.c_tilde.base += corr.base;
    for (const auto& [coef, arg] : corr.logs) out.c_tilde.add_log(coef, arg);
    return out;
}

// ---- JSON (exact round trip; rationals as "p/q" strings) ----

using json = nlohmann::ordered_json;

inline json phi_to_json(const PhiFunction& phi) {
    json steps = json::array();
    for (const auto& p : phi.steps)
        steps.push_back({ext_to_string(p.lo), ext_to_string(p.hi), rat_to_string(p.value)});
    json analytic = json::array();
    for (const auto& a : phi.analytic) {
        if (std::holds_alternative<PowerLawPiece>(a)) {
            const auto& pw = std::get<PowerLawPiece>(a);
            analytic.push_back({{"kind", "power-law"},
                                {"levy_coefficient", rat_to_string(pw.levy_coeff)},
                                {"alpha", rat_to_string(pw.alpha)},
                                {"side", pw.side > 0 ? "positive" : "negative"}});
        } else if (std::holds_alternative<TwoPoleArgPiece>(a)) {
            const auto& tp = std::get<TwoPoleArgPiece>(a);
            analytic.push_back({{"kind", "two-pole"},
                                {"p", rat_to_string(tp.p)},
                                {"q", rat_to_string(tp.q)}});
        } else if (std::holds_alternative<BesselArgPiece>(a)) {
            analytic.push_back(
                {{"kind", "bessel"}, {"p", rat_to_string(std::get<BesselArgPiece>(a).p)}});
        } else {
            analytic.push_back({{"kind", "polya-geometric"},
                                {"m", rat_to_string(std::get<PolyaGeometricPiece>(a).m)}});
        }
    }
    return json{{"steps", steps}, {"analytic", analytic}};
}

inline PhiFunction phi_from_json(const json& j) {
    PhiFunction phi;
    if (j.contains("steps")) {
        for (const auto& s : j.at("steps")) {
            if (!s.is_array() || s.size() != 3) throw BadInput("phi step must be [lo, hi, value]");
            phi.steps.push_back({ext_from_string(s[0].get<std::string>()),
                                 ext_from_string(s[1].get<std::string>()),
                                 rat_from_string(s[2].get<std::string>())});
        }
    }
    if (j.contains("analytic")) {
        for (const auto& a : j.at("analytic")) {
            std::string kind = a.at("kind").get<std::string>();
            if (kind == "power-law") {
                PowerLawPiece pw;
                pw.levy_coeff = rat_from_string(a.at("levy_coefficient").get<std::string>());
                pw.alpha = rat_from_string(a.at("alpha").get<std::string>());
                pw.side = a.at("side").get<std::string>() == "negative" ? -1 : 1;
                if (!(pw.alpha > 0 && pw.alpha < 2))
                    throw InvalidIndex("power-law alpha must lie in (0,2)");
                phi.analytic.push_back(pw);
            } else if (kind == "two-pole") {
                TwoPoleArgPiece tp{rat_from_string(a.at("p").get<std::string>()),
                                   rat_from_string(a.at("q").get<std::string>())};
                if (!(tp.p > 0 && tp.p < tp.q)) throw BadInput("two-pole needs 0 < p < q");
                phi.analytic.push_back(tp);
            } else if (kind == "bessel") {
                phi.analytic.push_back(
                    BesselArgPiece{rat_from_string(a.at("p").get<std::string>())});
            } else if (kind == "polya-geometric") {
                PolyaGeometricPiece pg{rat_from_string(a.at("m").get<std::string>())};
                if (pg.m <= 0) throw BadInput("polya-geometric needs m > 0");
                phi.analytic.push_back(pg);
            } else {
                throw BadInput("unknown analytic phi kind: " + kind);
            }
        }
    }
    phi.canonicalize();
    return phi;
}

inline json representation_to_json(const BellRepresentation& rep) {
    return json{{"a", rat_to_string(rep.a)},
                {"b", rat_to_string(rep.b)},
                {"c", rat_to_string(rep.c)},
                {"phi", phi_to_json(rep.phi)}};
}

inline BellRepresentation representation_from_json(const json& j) {
    BellRepresentation rep;
    rep.a = rat_from_string(j.at("a").get<std::string>());
    rep.b = rat_from_string(j.at("b").get<std::string>());
    rep.c = rat_from_string(j.at("c").get<std::string>());
    rep.phi = phi_from_json(j.at("phi"));
    rep.validate();
    return rep;
}

} // namespace bellshape
