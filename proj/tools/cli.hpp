#pragma once

// Command-line front end: one executable, one subcommand per operation.
// run() writes to the given streams so it can be exercised in-process.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brody/brody.hpp"
#include "brody/io/json.hpp"

namespace brody::cli {

using io::json;
using io::to_json;

struct RunConfig {
    bool json = false;
    std::uint64_t seed = 0;
    std::string out;
};

// ---------------------------------------------------------------------------
// Input helpers

inline std::string complex_text(Complex z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << 'i';
    return os.str();
}

inline std::vector<double> parse_radii(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::logic_error&) {
            used = 0;
        }
        while (used < item.size() && item[used] == ' ') ++used;
        if (used == 0 || used != item.size()) throw Error(ErrorCode::ParseError, "bad radius '" + item + "'");
        out.push_back(x);
    }
    if (out.empty()) throw Error(ErrorCode::ParseError, "empty radius list");
    return out;
}

/// CSV with header re,im.
inline std::vector<Complex> read_seeds_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open seed file " + path);
    std::string line;
    std::vector<Complex> seeds;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header) {
            if (line != "re,im") throw Error(ErrorCode::ParseError, "seed CSV: expected header re,im");
            header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error(ErrorCode::ParseError, "seed CSV: expected two fields");
        try {
            seeds.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::ParseError, "seed CSV: bad number");
        }
    }
    return seeds;
}

/// "squares:K" or "geometric:ratio:count".
inline Divisor divisor_from_generator(const std::string& spec) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    try {
        if (parts.size() == 2 && parts[0] == "squares") return Divisor::squares(std::stol(parts[1]));
        if (parts.size() == 3 && parts[0] == "geometric") return Divisor::geometric(std::stod(parts[1]), std::stol(parts[2]));
    } catch (const std::logic_error&) {
    }
    throw Error(ErrorCode::ParseError, "unknown divisor generator '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Text rendering: scalars as "key: value", arrays of flat objects as CSV.

inline std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

inline bool flat_object(const json& v) {
    if (!v.is_object()) return false;
    return std::all_of(v.begin(), v.end(), [](const json& x) { return !x.is_object(); });
}

inline std::string render_text(const json& j) {
    std::ostringstream os;
    if (!j.is_object()) {
        os << scalar_text(j) << '\n';
        return os.str();
    }
    for (const auto& [key, v] : j.items()) {
        if (v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), flat_object)) {
            os << key << ":\n";
            const json& first = v.front();
            bool head = true;
            for (const auto& [k, _] : first.items()) {
                os << (head ? "" : ",") << k;
                head = false;
            }
            os << '\n';
            for (const auto& row : v) {
                head = true;
                for (const auto& [k, _] : first.items()) {
                    os << (head ? "" : ",") << (row.contains(k) ? scalar_text(row.at(k)) : "");
                    head = false;
                }
                os << '\n';
            }
        } else {
            os << key << ": " << scalar_text(v) << '\n';
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Experiments

namespace experiments {

inline RationalFunction z_poly() { return RationalFunction::identity(); }

struct ExpRationalCase {
    std::string label;
    RationalFunction r;
    RationalFunction q;
};

/// R e^z + Q pairs, including f_t = e^z + z/(tz+1) and f_{s,t} = s e^z + z/(tz-1).
inline std::vector<ExpRationalCase> exp_rational_cases() {
    const RationalFunction z = z_poly();
    const RationalFunction one(1.0);
    auto f_t = [&](Complex t) { return z / (RationalFunction(t) * z + one); };
    auto f_st = [&](Complex t) { return z / (RationalFunction(t) * z - one); };
    return {
        {"R=0, Q=z^3", RationalFunction(0.0), z * z * z},
        {"R=1, Q=z", one, z},
        {"R=z, Q=0", z, RationalFunction(0.0)},
        {"R=z, Q=z", z, z},
        {"R=1, Q=1", one, one},
        {"R=z, Q=1/z", z, one / z},
        {"f_t t=0", one, f_t(0.0)},
        {"f_t t=2", one, f_t(2.0)},
        {"f_t t=i", one, f_t(Complex{0.0, 1.0})},
        {"R=1/z, Q=z^2", one / z, z * z},
        {"R=(z+1)/(z-1), Q=(2z+1)/(z-1)", (z + one) / (z - one), (RationalFunction(2.0) * z + one) / (z - one)},
        {"f_{s,t} s=0 t=0", RationalFunction(0.0), f_st(0.0)},
        {"f_{s,t} s=1 t=0", one, f_st(0.0)},
    };
}

inline std::vector<Complex> two_exp_grid() {
    return {2.0, -2.0, 1.0, -1.0, 0.5, -0.5, Complex{0, 1}, Complex{0, -1}, Complex{1, 1}, Complex{1, -1}, Complex{0, 2}};
}

inline json case1_table() {
    json rows = json::array();
    for (const auto& c : exp_rational_cases()) {
        const auto v = classify_exp_rational(c.r, c.q);
        json row = {{"case", c.label}, {"status", to_string(v.status)}, {"reason", v.reason()}};
        const Expr f = exp_rational_expr(c.r, c.q);
        for (const double radius : {10.0, 20.0, 40.0}) {
            row["sup_r" + std::to_string(static_cast<int>(radius))] = sup_search(f, radius, 20000).max_value;
        }
        if (v.status == BrodyStatus::NotBrody) {
            const auto w = exp_rational_witness(c.r, c.q);
            row["witness_monotone"] = w.has_value() && w->monotone;
        }
        rows.push_back(row);
    }
    return {{"experiment", "case1-table"}, {"rows", rows}};
}

inline json two_exp_scan() {
    json rows = json::array();
    for (const Complex lam : two_exp_grid()) {
        const TwoExpParams p{lam};
        const auto v = classify_two_exponentials(p);
        json row = {{"lambda_re", lam.real()}, {"lambda_im", lam.imag()}, {"status", to_string(v.status)}};
        if (lam != Complex{1.0}) row["slope_ratio"] = two_exp_slope_ratio(p);
        if (v.bound) {
            row["bound"] = *v.bound;
            row["sup_r30"] = sup_search(two_exp_expr(p), 30.0, 20000).max_value;
        }
        if (v.witness) row["witness_max"] = v.witness->points.back().value;
        rows.push_back(row);
    }
    return {{"experiment", "two-exp-scan"}, {"rows", rows}};
}

inline Complex k2_closed_form(Complex z) {
    if (std::abs(z) < 1e-12) return 1.0;
    const Complex s = std::sqrt(z);
    return std::sin(std::numbers::pi * s) / (std::numbers::pi * s);
}

inline json k2_divisor(std::uint64_t seed) {
    const CanonicalProduct prod(Divisor::squares(10000));
    json sups = json::array();
    for (const double radius : {50.0, 200.0, 800.0}) {
        const auto rep = sup_search([&](Complex z) { return prod.fsharp(z); }, radius, 100000);
        sups.push_back({{"radius", radius}, {"max_value", rep.max_value}, {"argmax_re", rep.argmax.real()},
                        {"argmax_im", rep.argmax.imag()}});
    }
    json slopes = json::array();
    for (int k = 1; k <= 20; ++k) {
        const double fp = std::abs(prod.derivative_at_support(static_cast<std::size_t>(k - 1), 1e-9));
        slopes.push_back({{"k", k}, {"abs_fprime", fp}, {"expected", 1.0 / (2.0 * k * k)}});
    }
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Complex z = std::polar(50.0 * std::sqrt(uniform()), 2.0 * std::numbers::pi * uniform());
        const Complex want = k2_closed_form(z);
        worst = std::max(worst, std::abs(prod.eval(z, 1e-6).value - want) / std::abs(want));
    }
    return {{"experiment", "k2-divisor"}, {"seed", seed}, {"sup", sups}, {"fprime", slopes}, {"max_rel_err_closed_form", worst}};
}

inline json slow_divisor() {
    const GrowthBound rho = GrowthBound::log_squared(1.0);
    const auto built = construct_slow_detailed(rho, 30, 1e12);
    const Divisor& d = built.divisor;
    const auto verdict = theorem_verdict(d, 0.5, 0.3);
    const auto prod = CanonicalProduct::three_times_shifted(d);
    std::vector<double> radii;
    for (int i = 0; i < 1000; ++i) radii.push_back(std::pow(1e6, i / 999.0));
    const auto rep = characteristic(product_log_modulus(prod), d, radii, 512);
    long rho_violations = 0, k_violations = 0;
    double max_excess = -std::numeric_limits<double>::infinity();
    for (const auto& s : rep.samples) {
        max_excess = std::max(max_excess, s.T - rho(s.r));
        if (s.T > rho(s.r)) ++rho_violations;
        for (std::size_t k = 0; k < d.size(); ++k) {
            if (s.r <= 2.0 * std::abs(d[k].a) && s.T > static_cast<double>(k + 1) * std::log(4.0 * s.r)) ++k_violations;
        }
    }
    json pts = json::array();
    for (std::size_t k = 0; k < d.size(); ++k) {
        pts.push_back({{"k", k + 1}, {"re", d[k].a.real()}, {"im", d[k].a.imag()}, {"threshold", built.thresholds[k]}});
    }
    return {{"experiment", "slow-divisor"},
            {"rho", rho.describe()},
            {"points", pts},
            {"separation", separation_ratio(d)},
            {"verdict", to_json(verdict)},
            {"samples", rep.samples.size()},
            {"T_monotone", rep.monotone},
            {"rho_violations", rho_violations},
            {"k_bound_violations", k_violations},
            {"max_T_minus_rho", max_excess}};
}

inline json growth_theorem() {
    const GrowthBound rho = GrowthBound::log(2.0);
    json pre = {{"rho", rho.describe()}};
    try {
        construct_slow(rho, 5, 1e12);
        pre["precondition_failed"] = false;
    } catch (const Error& e) {
        pre["precondition_failed"] = e.code() == ErrorCode::PreconditionFailed;
        pre["error"] = std::string(e.name());
    }
    const Divisor d = Divisor::from_points({2.0, 3.0, 5.0});
    const CanonicalProduct prod(d);
    std::vector<double> radii;
    for (int i = 0; i < 200; ++i) radii.push_back(std::exp(1.0) * std::pow(1e4 / std::exp(1.0), i / 199.0));
    const auto rep = characteristic(product_log_modulus(prod), d, radii, 512);
    json first = nullptr;
    json first_n = nullptr;
    for (const auto& s : rep.samples) {
        if (first.is_null() && s.T > rho(s.r)) first = {{"r", s.r}, {"T", s.T}, {"rho", rho(s.r)}};
        if (first_n.is_null() && s.N > rho(s.r)) first_n = {{"r", s.r}, {"N", s.N}, {"rho", rho(s.r)}};
    }
    return {{"experiment", "growth-theorem"}, {"precondition", pre},   {"zeros", "2,3,5"},
            {"first_violation", first},      {"first_N_violation", first_n}, {"violated", !first.is_null()}};
}

inline json discussion_families() {
    const std::vector<Complex> values{0.0, 1.0, -1.0, 2.0, Complex{0.0, 1.0}};
    const RationalFunction z = z_poly();
    json rows = json::array();
    bool all_match = true;
    for (const Complex s : values) {
        for (const Complex t : values) {
            const RationalFunction q = z / (RationalFunction(t) * z - RationalFunction(1.0));
            const auto v = classify_exp_rational(RationalFunction(s), q);
            const bool expected = s == Complex{} || t != Complex{};
            const bool brody = v.status == BrodyStatus::Brody;
            all_match = all_match && (expected == brody);
            rows.push_back({{"s", complex_text(s)}, {"t", complex_text(t)}, {"status", to_string(v.status)},
                            {"expected_brody", expected}});
        }
    }
    const RationalFunction zr = z;
    const auto zez = classify_exp_rational(zr, zr);
    return {{"experiment", "discussion-families"}, {"rows", rows}, {"all_match", all_match},
            {"z_exp_z_plus_z", to_string(zez.status)}};
}

inline json run(const std::string& name, std::uint64_t seed) {
    if (name == "case1-table") return case1_table();
    if (name == "two-exp-scan") return two_exp_scan();
    if (name == "k2-divisor") return k2_divisor(seed);
    if (name == "slow-divisor") return slow_divisor();
    if (name == "growth-theorem") return growth_theorem();
    if (name == "discussion-families") return discussion_families();
    throw Error(ErrorCode::UnknownExperiment, "unknown experiment '" + name + "'");
}

}  // namespace experiments

// ---------------------------------------------------------------------------
// Dispatch

struct Output {
    json body;
    /// Raw text written instead of body (divisor CSV).
    std::optional<std::string> raw;
};

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spherical derivatives, Brody verdicts, canonical products and Nevanlinna functions"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_flag("--json", cfg.json, "JSON output");
    app.add_option("--seed", cfg.seed, "Seed for randomized checks")->capture_default_str();
    app.add_option("--out", cfg.out, "Write the output to a file");

    std::function<Output()> action;

    // eval
    std::string expr_src;
    std::string z_src = "0";
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate f and f# at a point");
    eval_cmd->add_option("--expr", expr_src, "Expression in z")->required();
    eval_cmd->add_option("--z", z_src, "Point, e.g. 1+2i")->capture_default_str();
    eval_cmd->callback([&] {
        action = [&] {
            const Expr f = parse(expr_src);
            const Complex z = parse_complex(z_src);
            const auto e = eval(f, z);
            json j = {{"expr", unparse(f)}, {"z", to_json(z)}, {"value", to_json(e.value)}, {"overflow", e.overflow},
                      {"indeterminate", e.indeterminate}};
            j["fsharp"] = sph_deriv(f, z);
            return Output{j, {}};
        };
    });

    // sup
    double radius = 10.0;
    long budget = 100000;
    std::string center_src = "0";
    auto* sup_cmd = app.add_subcommand("sup", "Sampled supremum of f# over a disk");
    sup_cmd->add_option("--expr", expr_src, "Expression in z")->required();
    sup_cmd->add_option("--radius", radius, "Disk radius")->capture_default_str();
    sup_cmd->add_option("--budget", budget, "Number of f# evaluations")->capture_default_str();
    sup_cmd->add_option("--center", center_src, "Disk center")->capture_default_str();
    sup_cmd->callback([&] {
        action = [&] {
            SupSearchOptions opts;
            opts.center = parse_complex(center_src);
            return Output{to_json(sup_search(parse(expr_src), radius, budget, opts)), {}};
        };
    });

    // witness
    std::string seeds_path;
    int steps = 400;
    auto* wit_cmd = app.add_subcommand("witness", "Search for points with growing f#");
    wit_cmd->add_option("--expr", expr_src, "Expression in z")->required();
    wit_cmd->add_option("--seeds", seeds_path, "CSV file with header re,im")->required();
    wit_cmd->add_option("--steps", steps, "Hill-climb steps per seed")->capture_default_str();
    wit_cmd->callback([&] {
        action = [&] {
            const auto seeds = read_seeds_csv(seeds_path);
            const auto w = witness_search(parse(expr_src), seeds, steps);
            json j = w ? to_json(*w) : json{{"points", json::array()}, {"monotone", false}};
            j["found"] = w.has_value();
            return Output{j, {}};
        };
    });

    // classify
    std::string r_src, q_src, lambda_src;
    auto* cls = app.add_subcommand("classify", "Brody verdicts for the exact families");
    cls->require_subcommand(1);
    auto* cls_er = cls->add_subcommand("exp-rational", "R(z) e^z + Q(z)");
    cls_er->add_option("--R", r_src, "Rational function as JSON {\"num\":[[re,im],...],\"den\":[...]}")->required();
    cls_er->add_option("--Q", q_src, "Rational function as JSON")->required();
    cls_er->callback([&] {
        action = [&] {
            const auto r = io::rational_from_text(r_src);
            const auto q = io::rational_from_text(q_src);
            auto v = classify_exp_rational(r, q);
            if (v.status == BrodyStatus::NotBrody) v.witness = exp_rational_witness(r, q);
            return Output{to_json(v), {}};
        };
    });
    auto* cls_te = cls->add_subcommand("two-exp", "e^z + e^{lambda z}");
    cls_te->add_option("--lambda", lambda_src, "lambda, e.g. 0+1i")->required();
    cls_te->callback([&] {
        action = [&] { return Output{to_json(classify_two_exponentials({parse_complex(lambda_src)})), {}}; };
    });
    auto* cls_pr = cls->add_subcommand("product", "R f for Brody f");
    cls_pr->add_option("--R", r_src, "Rational function as JSON")->required();
    cls_pr->callback([&] { action = [&] { return Output{to_json(classify_product(io::rational_from_text(r_src))), {}}; }; });

    // product
    std::string divisor_path, generator;
    double tol = 1e-6;
    double fprime_tol = 1e-9;
    std::size_t index = 0;
    auto load_divisor = [&] {
        if (!divisor_path.empty() && !generator.empty()) {
            throw Error(ErrorCode::InvalidArgument, "give either --divisor or --generator");
        }
        if (!generator.empty()) return divisor_from_generator(generator);
        if (divisor_path.empty()) throw Error(ErrorCode::InvalidArgument, "--divisor or --generator is required");
        return read_divisor_csv(divisor_path);
    };
    auto* prod = app.add_subcommand("product", "Canonical products over a divisor");
    prod->require_subcommand(1);
    auto* prod_eval = prod->add_subcommand("eval", "Evaluate the product at z");
    prod_eval->add_option("--divisor", divisor_path, "Divisor CSV (re,im,mult)");
    prod_eval->add_option("--generator", generator, "squares:K or geometric:ratio:count");
    prod_eval->add_option("--z", z_src, "Point")->required();
    prod_eval->add_option("--tol", tol, "Relative tail tolerance in (0, 0.1)")->capture_default_str();
    prod_eval->callback([&] {
        action = [&] {
            const Divisor d = load_divisor();
            return Output{to_json(eval_product(d, parse_complex(z_src), tol)), {}};
        };
    });
    auto* prod_fp = prod->add_subcommand("fprime", "Derivative at a support point");
    prod_fp->add_option("--divisor", divisor_path, "Divisor CSV (re,im,mult)");
    prod_fp->add_option("--generator", generator, "squares:K or geometric:ratio:count");
    prod_fp->add_option("--index", index, "Zero-based support index")->required();
    prod_fp->add_option("--tol", fprime_tol, "Relative tail tolerance in (0, 0.1)")->capture_default_str();
    prod_fp->callback([&] {
        action = [&] {
            const Divisor d = load_divisor();
            const Complex v = product_derivative_at_support(d, index, fprime_tol);
            return Output{{{"index", index}, {"a", to_json(d[index].a)}, {"fprime", to_json(v)}, {"abs", std::abs(v)}}, {}};
        };
    });

    // divisor
    std::string file_path, rho_src = "logsq:1";
    double tail = 0.5, eps = 0.3, horizon = 1e12;
    int count = 30;
    auto* div = app.add_subcommand("divisor", "Divisor hypotheses and the slow-growth construction");
    div->require_subcommand(1);
    auto* div_check = div->add_subcommand("check", "Separation and direction hypotheses");
    div_check->add_option("--file", file_path, "Divisor CSV")->required();
    div_check->add_option("--tail", tail, "Fraction of points used for directions")->capture_default_str();
    div_check->add_option("--eps", eps, "Cluster radius in radians")->capture_default_str();
    div_check->callback([&] {
        action = [&] { return Output{to_json(theorem_verdict(read_divisor_csv(file_path), tail, eps)), {}}; };
    });
    auto* div_con = div->add_subcommand("construct", "Divisor with T(r) <= rho(r) and dense directions");
    div_con->add_option("--rho", rho_src, "logsq:c, log:c, pow:c:alpha or table:t/v,...")->capture_default_str();
    div_con->add_option("--count", count, "Number of points")->capture_default_str();
    div_con->add_option("--horizon", horizon, "Sampling horizon")->capture_default_str();
    div_con->callback([&] {
        action = [&] {
            const auto built = construct_slow_detailed(GrowthBound::parse(rho_src), count, horizon);
            if (!cfg.json) return Output{{}, divisor_to_csv(built.divisor)};
            json pts = json::array();
            for (const auto& p : built.divisor.points()) pts.push_back({{"re", p.a.real()}, {"im", p.a.imag()}, {"mult", p.mult}});
            return Output{{{"rho", rho_src}, {"points", pts}, {"thresholds", built.thresholds}}, {}};
        };
    });

    // nevanlinna
    std::string radii_src = "1,2,5,10,20,50,100,200,500,1000";
    bool paper_norm = false, three_shifted = false;
    int quad = 512;
    auto* nev = app.add_subcommand("nevanlinna", "m, N and T of 1/f on circles");
    auto* nev_expr = nev->add_option("--expr", expr_src, "Entire function in z");
    auto* nev_div = nev->add_option("--divisor", divisor_path, "Zero divisor CSV; alone it selects the canonical product");
    nev->add_option("--radii", radii_src, "Comma-separated increasing radii")->capture_default_str();
    nev->add_flag("--paper-normalization", paper_norm, "Omit the 1/(2 pi) factor in m");
    nev->add_flag("--three-shifted", three_shifted, "Use 3 prod (z/a - 1) instead of prod (1 - z/a)");
    nev->add_option("--quad", quad, "Quadrature points")->capture_default_str();
    nev->callback([&] {
        action = [&] {
            if (nev_expr->count() == 0 && nev_div->count() == 0) {
                throw Error(ErrorCode::InvalidArgument, "--expr or --divisor is required");
            }
            const auto radii = parse_radii(radii_src);
            const Normalization norm = paper_norm ? Normalization::Unnormalized : Normalization::Standard;
            const Divisor d = nev_div->count() ? read_divisor_csv(divisor_path) : Divisor{};
            NevanlinnaReport rep;
            json j;
            if (nev_expr->count()) {
                rep = characteristic(expr_log_modulus(parse(expr_src)), d, radii, quad, norm);
                j["function"] = unparse(parse(expr_src));
            } else {
                const auto p = three_shifted ? CanonicalProduct::three_times_shifted(d) : CanonicalProduct(d);
                rep = characteristic(product_log_modulus(p), d, radii, quad, norm);
                j["function"] = three_shifted ? "3 prod (z/a - 1)" : "prod (1 - z/a)";
            }
            j.update(to_json(rep));
            long positive = 0;
            for (const auto& s : rep.samples) positive += s.T > 0.0;
            if (positive >= 8) j["order"] = to_json(order_estimate(rep));
            return Output{j, {}};
        };
    });

    // experiments
    std::string exp_name;
    auto* exps = app.add_subcommand("experiments", "Reproduce a named scenario");
    exps->add_option("name", exp_name,
                     "case1-table, two-exp-scan, k2-divisor, slow-divisor, growth-theorem or discussion-families")
        ->required();
    exps->callback([&] { action = [&] { return Output{experiments::run(exp_name, cfg.seed), {}}; }; });

    auto fail = [&](const Error& e, int code) {
        if (cfg.json) {
            out << io::error_json(e).dump() << '\n';
        }
        err << e.what() << '\n';
        return code;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return fail(Error(ErrorCode::InvalidArgument, e.what()), 2);
    }

    try {
        const Output result = action();
        std::string text = result.raw ? *result.raw : (cfg.json ? result.body.dump() + "\n" : render_text(result.body));
        if (!cfg.out.empty()) {
            std::ofstream f(cfg.out, std::ios::binary);
            if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + cfg.out);
            f << text;
        } else {
            out << text;
        }
        return 0;
    } catch (const Error& e) {
        return fail(e, is_numeric_failure(e.code()) ? 3 : 2);
    } catch (const json::exception& e) {
        return fail(Error(ErrorCode::ParseError, e.what()), 2);
    }
}

}  // namespace brody::cli
