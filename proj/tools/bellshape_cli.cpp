// command-line front end: scripted verification and plot-data export

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "bellshape/bellshape.hpp"

using namespace bellshape;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitClaimFailure = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitPrecision = 3;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw BadInput("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

std::vector<Rational> parse_rational_list(const std::string& csv) {
    std::vector<Rational> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(rat_from_string(item));
    }
    if (out.empty()) throw BadInput("empty list");
    return out;
}

std::vector<long> parse_long_list(const std::string& csv) {
    std::vector<long> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stol(item));
    }
    return out;
}

Poly poly_from_json(const json& coeffs) {
    std::vector<Rational> c;
    for (const auto& v : coeffs) c.push_back(rat_from_string(v.get<std::string>()));
    return Poly(std::move(c));
}

ExpPolySum exppoly_from_json(const json& j) {
    ExpPolySum f;
    for (const auto& piece : j.at("pieces")) {
        ExpPolySum::Piece p;
        p.lo = ext_from_string(piece.at("lo").get<std::string>());
        p.hi = ext_from_string(piece.at("hi").get<std::string>());
        for (const auto& t : piece.at("terms")) {
            if (!t.is_array() || t.size() != 3)
                throw BadInput("exp-poly term must be [coeff, power, rate]");
            p.terms.push_back({rat_from_string(t[0].get<std::string>()),
                               rat_from_string(t[1].get<std::string>()),
                               rat_from_string(t[2].get<std::string>())});
        }
        f.pieces.push_back(std::move(p));
    }
    f.canonicalize();
    return f;
}

struct CommonFlags {
    long precision = 60;
    std::string format = "text"; // json | csv | text
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_subdivisions = 4000;
    double tail_degree = 0;
    double tail_constant = 0;
    double tail_from = 1;

    QuadratureOptions quad() const {
        QuadratureOptions q;
        q.abs_tol = abs_tol;
        q.rel_tol = rel_tol;
        q.max_subdivisions = max_subdivisions;
        q.precision_digits = precision;
        if (tail_degree > 0) {
            q.tail = QuadratureOptions::Tail::power;
            q.power_tail_degree = tail_degree;
            q.power_tail_constant = tail_constant;
            q.power_tail_from = tail_from;
        }
        return q;
    }
};

int cmd_check_phi(const std::string& path, long kmax, const CommonFlags& flags) {
    BellRepresentation rep = representation_from_json(load_json(path));
    PrecisionGuard guard(flags.precision);

    auto lc = check_level_crossing(rep.phi, kmax);
    auto tail = check_tail_integrability(rep.phi);
    json out{{"level_crossing", level_crossing_to_json(lc)},
             {"tail_integrability", tail_report_to_json(tail)}};
    bool boundary_ok = true;
    if (tail.finite) {
        try {
            auto ev = check_boundary_condition(
                [&](const Real& t) { return transform_from_representation(rep, t, flags.quad()); });
            out["boundary_condition"] = boundary_evidence_to_json(ev);
            boundary_ok = ev.ok;
        } catch (const UnsupportedAnalyticPiece&) {
            out["boundary_condition"] = json{{"label", "skipped: unsupported analytic piece"}};
        }
    }
    bool pass = lc.pass && tail.finite && boundary_ok;
    out["pass"] = pass;

    if (flags.format == "json") {
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "level crossing: " << (lc.pass ? "pass" : "FAIL")
                  << (lc.approximate ? " (approximate)" : "") << "\n";
        for (const auto& pl : lc.per_level)
            if (!pl.pass)
                std::cout << "  k = " << pl.k << ": " << pl.sign_changes << " sign changes\n";
        std::cout << "tail integral finite: " << (tail.finite ? "yes" : "NO");
        if (tail.exact) std::cout << ", exact value " << rat_to_string(tail.exact_value);
        std::cout << "\nboundary condition (numeric evidence): " << (boundary_ok ? "ok" : "FAIL")
                  << "\n";
    }
    return pass ? kExitPass : kExitClaimFailure;
}

int cmd_eval(const std::string& path, const std::string& xi_csv, const CommonFlags& flags) {
    BellRepresentation rep = representation_from_json(load_json(path));
    PrecisionGuard guard(flags.precision);
    auto xis = parse_rational_list(xi_csv);

    json rows = json::array();
    std::ostringstream csv;
    csv << "xi,re,im\n";
    for (const auto& xi : xis) {
        Complex v = transform_from_representation(rep, Real(xi), flags.quad());
        rows.push_back({rat_to_string(xi), format_double(v.re.to_double()),
                        format_double(v.im.to_double())});
        csv << rat_to_string(xi) << "," << format_double(v.re.to_double()) << ","
            << format_double(v.im.to_double()) << "\n";
    }
    if (flags.format == "json")
        std::cout << json{{"precision_digits", flags.precision}, {"values", rows}}.dump(2) << "\n";
    else
        std::cout << csv.str();
    return kExitPass;
}

int cmd_density(const std::string& path, const std::string& x_csv, double t, long n,
                const CommonFlags& flags) {
    BellRepresentation rep = representation_from_json(load_json(path));
    PrecisionGuard guard(flags.precision);
    auto xs = parse_rational_list(x_csv);
    TransformFn F = [&](const Real& xi) { return transform_from_representation(rep, xi, flags.quad()); };

    json rows = json::array();
    std::ostringstream csv;
    csv << "x,value\n";
    for (const auto& x : xs) {
        Real v = invert_transform(F, Real(x), n, t, flags.quad());
        rows.push_back({rat_to_string(x), format_double(v.to_double())});
        csv << rat_to_string(x) << "," << format_double(v.to_double()) << "\n";
    }
    if (flags.format == "json")
        std::cout << json{{"t", format_double(t)},
                          {"n", n},
                          {"precision_digits", flags.precision},
                          {"values", rows}}
                         .dump(2)
                  << "\n";
    else
        std::cout << csv.str();
    return kExitPass;
}

int cmd_bell_test(const std::string& path, long nmax, double t, int points, double lo, double hi,
                  const std::string& orders_csv, long csv_order, const CommonFlags& flags) {
    BellRepresentation rep = representation_from_json(load_json(path));
    PrecisionGuard guard(flags.precision);
    TransformFn F = [&](const Real& xi) { return transform_from_representation(rep, xi, flags.quad()); };

    GridSpec grid;
    grid.points = points;
    grid.lo = lo;
    grid.hi = hi;
    std::optional<std::vector<long>> orders;
    if (!orders_csv.empty()) orders = parse_long_list(orders_csv);

    BellTestReport bt = bell_test(F, nmax, t, grid, flags.quad(), orders);
    if (csv_order >= 0) {
        std::cout << bell_report_to_csv(bt, csv_order);
    } else if (flags.format == "json") {
        std::cout << bell_report_to_json(bt).dump(2) << "\n";
    } else {
        std::cout << "bell test at t = " << format_double(t, 6) << ": " << bt.verdict << "\n";
        for (const auto& o : bt.orders)
            std::cout << "  n = " << o.n << ": " << o.count << " sign changes (expected "
                      << o.expected << ") "
                      << (o.pass ? "PASS" : (o.stable ? "FAIL" : "UNSTABLE")) << "\n";
    }
    if (bt.verdict == "unstable") return kExitPrecision;
    return bt.verdict == "pass" ? kExitPass : kExitClaimFailure;
}

int cmd_sign_changes(const std::string& path, long n, const std::string& samples_csv,
                     const CommonFlags& flags) {
    json j = load_json(path);
    std::string kind = j.at("kind").get<std::string>();
    PrecisionGuard guard(flags.precision);

    if (kind == "rational") {
        RationalFunctionExact f(poly_from_json(j.at("numerator")),
                                poly_from_json(j.at("denominator")));
        RationalFunctionExact d = diff_rational(f, static_cast<unsigned long>(n));
        long count = count_sign_changes_exact(d);
        json out{{"kind", "rational"},
                 {"derivative_order", n},
                 {"sign_changes", count},
                 {"certificate", "Sturm chain over exact integers"}};
        if (d.num().degree() > 0 && d.num().degree() <= 64) {
            json roots = json::array();
            for (const auto& r : isolate_real_roots(d.num())) {
                roots.push_back({{"lo", rat_to_string(r.lo)},
                                 {"hi", rat_to_string(r.hi)},
                                 {"multiplicity", r.multiplicity}});
            }
            out["numerator_root_intervals"] = roots;
        }
        if (flags.format == "json") std::cout << out.dump(2) << "\n";
        else
            std::cout << "sign changes of the " << n << "th derivative: " << count << "\n";
        return kExitPass;
    }
    if (kind == "exppoly") {
        if (samples_csv.empty())
            throw BadInput("exp-poly sign counting needs --samples (piece-interior points)");
        ExpPolySum f = exppoly_from_json(j);
        ExpPolySum d = diff_exppoly(f, static_cast<unsigned long>(n));
        auto samples = parse_rational_list(samples_csv);
        long lb = sign_changes_lower_bound(d, samples);
        json signs = json::array();
        for (const auto& x : samples) {
            int s = sign_certified(eval_exact(d, x));
            signs.push_back({rat_to_string(x), s});
        }
        json out{{"kind", "exppoly"},
                 {"derivative_order", n},
                 {"certified_lower_bound", lb},
                 {"certified_signs", signs}};
        if (flags.format == "json") std::cout << out.dump(2) << "\n";
        else
            std::cout << "certified sign-change lower bound of the " << n
                      << "th derivative: " << lb << "\n";
        return kExitPass;
    }
    throw BadInput("unknown function kind: " + kind);
}

int cmd_verify(const std::string& case_id, bool skip_numeric, int grid_points,
               const CommonFlags& flags) {
    CatalogOptions opts;
    opts.include_numeric = !skip_numeric;
    opts.grid_points = grid_points;
    opts.quad = flags.quad();

    if (!case_id.empty()) {
        CaseReport rep = run_case(case_id, opts);
        if (flags.format == "json") std::cout << case_report_to_json(rep).dump(2) << "\n";
        else
            std::cout << case_detail_text(rep);
        // spot summaries for counting claims
        for (const auto& c : rep.claims) {
            if (c.count >= 0 && flags.format != "json")
                std::cout << "  -> " << c.description << ": " << c.count << " (" << c.expected
                          << ") " << (c.verdict == "pass" ? "PASS" : "FAIL") << "\n";
        }
        return rep.pass() ? kExitPass : kExitClaimFailure;
    }

    SuiteReport suite = run_all(opts);
    if (flags.format == "json") std::cout << suite_report_to_json(suite).dump(2) << "\n";
    else
        std::cout << suite_summary_table(suite);
    return suite.failures() == 0 ? kExitPass : kExitClaimFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bell-shaped function toolkit: representation checks, exact sign "
                 "certificates and numeric bell tests"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    CommonFlags flags;
    if (const char* env = std::getenv("BELLSHAPE_PRECISION")) flags.precision = std::atol(env);
    app.add_option("--precision", flags.precision, "working precision in decimal digits");
    app.add_option("--format", flags.format, "output format: text | json | csv");
    app.add_option("--abs-tol", flags.abs_tol, "absolute quadrature tolerance");
    app.add_option("--rel-tol", flags.rel_tol, "relative quadrature tolerance");
    app.add_option("--max-subdivisions", flags.max_subdivisions, "quadrature panel budget");
    app.add_option("--tail-degree", flags.tail_degree,
                   "power-law tail certificate degree (needed when --t 0)");
    app.add_option("--tail-const", flags.tail_constant, "power-law tail certificate constant");
    app.add_option("--tail-from", flags.tail_from, "power-law tail certificate threshold");

    std::string repr_path, xi_csv, x_csv, fn_path, samples_csv, case_id, orders_csv;
    long kmax = -1, n = 0, nmax = 4;
    double t = 1e-2;
    int points = 2001;
    double lo = 0, hi = 0;
    long csv_order = -1;
    bool skip_numeric = false;
    int grid_points = 2001;

    auto* check = app.add_subcommand("check-phi",
                                     "level-crossing, tail-integrability and boundary report");
    check->add_option("repr", repr_path, "representation JSON file")->required();
    check->add_option("--kmax", kmax, "largest |k| level to check");

    auto* ev = app.add_subcommand("eval", "evaluate the transform at given xi");
    ev->add_option("repr", repr_path)->required();
    ev->add_option("--xi", xi_csv, "comma-separated rational xi values")->required();

    auto* dens = app.add_subcommand("density", "inverted (f*G_t)^{(n)} values, CSV-ready");
    dens->add_option("repr", repr_path)->required();
    dens->add_option("--x", x_csv, "comma-separated rational x values")->required();
    dens->add_option("--t", t, "heat parameter (default 1e-2)");
    dens->add_option("--n", n, "derivative order");

    auto* bell = app.add_subcommand("bell-test", "sign-change counts of (f*G_t)^{(n)}");
    bell->add_option("repr", repr_path)->required();
    bell->add_option("--nmax", nmax, "test orders n = 0..nmax")->required();
    bell->add_option("--t", t, "heat parameter")->required();
    bell->add_option("--points", points, "grid points");
    bell->add_option("--lo", lo, "grid lower end (auto when lo==hi)");
    bell->add_option("--hi", hi, "grid upper end");
    bell->add_option("--orders", orders_csv, "restrict to these orders, e.g. 2,8");
    bell->add_option("--csv-order", csv_order, "emit x,value samples for this order as CSV");

    auto* sc = app.add_subcommand("sign-changes", "exact counts/certificates");
    sc->add_option("--exact", fn_path, "function JSON (rational or exppoly)")->required();
    sc->add_option("--n", n, "derivative order");
    sc->add_option("--samples", samples_csv, "sample points for exp-poly lower bounds");

    auto* ver = app.add_subcommand("verify", "run the reproduction catalog");
    ver->add_option("--case", case_id, "single case id (e.g. 6.5b)");
    ver->add_flag("--skip-numeric", skip_numeric, "exact claims only");
    ver->add_option("--grid-points", grid_points, "bell-test grid size");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) return cmd_check_phi(repr_path, kmax, flags);
        if (*ev) return cmd_eval(repr_path, xi_csv, flags);
        if (*dens) return cmd_density(repr_path, x_csv, t, n, flags);
        if (*bell)
            return cmd_bell_test(repr_path, nmax, t, points, lo, hi, orders_csv, csv_order, flags);
        if (*sc) return cmd_sign_changes(fn_path, n, samples_csv, flags);
        if (*ver) return cmd_verify(case_id, skip_numeric, grid_points, flags);
    } catch (const PrecisionExhausted& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const ToleranceNotMet& e) {
        std::cerr << "tolerance not met: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const NonIntegrable& e) {
        std::cerr << "not integrable: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}
