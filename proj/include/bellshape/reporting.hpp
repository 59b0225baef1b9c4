#pragma once

#include <iomanip>
#include <sstream>

#include "bellshape/bell_representation.hpp"
#include "bellshape/catalog.hpp"
#include "bellshape/fourier_inversion.hpp"

namespace bellshape {

// numbers cross the JSON boundary as strings with explicit precision, so that
// identical invocations serialize byte-identically
inline std::string format_double(double v, int digits = 17) {
    std::ostringstream os;
    os << std::setprecision(digits) << (v == 0 ? 0.0 : v); // normalize -0
    return os.str();
}

inline json bell_report_to_json(const BellTestReport& rep, bool include_samples = false) {
    json orders = json::array();
    for (const auto& o : rep.orders) {
        json jo{{"n", o.n},
                {"count", o.count},
                {"expected", o.expected},
                {"verdict", o.pass ? "pass" : (o.stable ? "fail" : "unstable")},
                {"stable", o.stable},
                {"grid_points", o.grid_points},
                {"min_abs_at_crossings", format_double(o.min_abs_at_crossings)}};
        if (include_samples) {
            json samples = json::array();
            for (const auto& [x, v] : o.samples)
                samples.push_back({format_double(x), format_double(v)});
            jo["samples"] = samples;
        }
        orders.push_back(jo);
    }
    return json{{"t", format_double(rep.t)},
                {"verdict", rep.verdict},
                {"boundary_evidence_ok", rep.boundary_evidence_ok},
                {"orders", orders}};
}

inline std::string bell_report_to_csv(const BellTestReport& rep, long n) {
    std::ostringstream os;
    os << "x,value\n";
    for (const auto& o : rep.orders) {
        if (o.n != n) continue;
        for (const auto& [x, v] : o.samples)
            os << format_double(x) << "," << format_double(v) << "\n";
    }
    return os.str();
}

inline json case_report_to_json(const CaseReport& rep) {
    json claims = json::array();
    for (const auto& c : rep.claims) {
        json jc{{"kind", c.kind},
                {"method", c.method},
                {"description", c.description},
                {"expected", c.expected},
                {"observed", c.observed},
                {"verdict", c.verdict}};
        if (c.count >= 0) jc["count"] = c.count;
        claims.push_back(jc);
    }
    // timings stay out of the JSON so that identical invocations serialize
    // byte-identically; the text renderers report them instead
    return json{{"id", rep.id}, {"title", rep.title}, {"pass", rep.pass()}, {"claims", claims}};
}

inline json suite_report_to_json(const SuiteReport& suite) {
    json cases = json::array();
    for (const auto& c : suite.cases) cases.push_back(case_report_to_json(c));
    return json{{"failures", suite.failures()}, {"cases", cases}};
}

inline std::string suite_summary_table(const SuiteReport& suite) {
    std::ostringstream os;
    os << std::left << std::setw(7) << "case" << std::setw(8) << "result" << std::setw(9)
       << "claims" << "title\n";
    for (const auto& c : suite.cases) {
        long ok = 0;
        for (const auto& cl : c.claims)
            if (cl.verdict == "pass") ++ok;
        os << std::left << std::setw(7) << c.id << std::setw(8)
           << (c.pass() ? "PASS" : "FAIL") << std::setw(9)
           << (std::to_string(ok) + "/" + std::to_string(c.claims.size())) << c.title << "\n";
    }
    os << "failures: " << suite.failures() << "\n";
    return os.str();
}

inline std::string case_detail_text(const CaseReport& rep) {
    std::ostringstream os;
    os << "case " << rep.id << ": " << rep.title << "\n";
    for (const auto& c : rep.claims) {
        os << "  [" << (c.verdict == "pass" ? "PASS" : (c.verdict == "fail" ? "FAIL" : "INCONCLUSIVE"))
           << "] " << c.description << "\n"
           << "        expected: " << c.expected << "  observed: " << c.observed << "  ("
           << c.method << ")\n";
    }
    return os.str();
}

inline json level_crossing_to_json(const LevelCrossingReport& rep) {
    json levels = json::array();
    for (const auto& pl : rep.per_level) {
        json jl{{"k", pl.k}, {"sign_changes", pl.sign_changes}, {"pass", pl.pass}};
        if (pl.violation_near) jl["violation_near"] = format_double(*pl.violation_near, 8);
        levels.push_back(jl);
    }
    return json{{"pass", rep.pass},
                {"sign_condition_ok", rep.sign_condition_ok},
                {"zero_change_at_origin", rep.zero_change_at_origin},
                {"approximate", rep.approximate},
                {"levels", levels}};
}

inline json tail_report_to_json(const TailIntegrabilityReport& rep) {
    json j{{"finite", rep.finite}};
    if (rep.exact) j["exact_value"] = rat_to_string(rep.exact_value);
    if (rep.finite) j["upper_bound"] = format_double(rep.upper_bound, 12);
    return j;
}

inline json boundary_evidence_to_json(const BoundaryConditionEvidence& ev) {
    json re = json::array(), im = json::array();
    for (const auto& [d, v] : ev.re_integrals)
        re.push_back({format_double(d, 6), format_double(v, 12)});
    for (const auto& [t, v] : ev.t_im_values)
        im.push_back({format_double(t, 6), format_double(v, 12)});
    return json{{"label", "numeric evidence"},
                {"re_integrals", re},
                {"t_im_values", im},
                {"re_integral_converging", ev.re_integral_converging},
                {"im_limit_zero", ev.im_limit_zero},
                {"ok", ev.ok}};
}

} // namespace bellshape
