#pragma once

// JSON encodings of the library types. Complex numbers are [re, im].

#include <json.hpp>

#include "brody/algebra.hpp"
#include "brody/classify.hpp"
#include "brody/divisor.hpp"
#include "brody/divisors.hpp"
#include "brody/error.hpp"
#include "brody/nevanlinna.hpp"
#include "brody/products.hpp"
#include "brody/spherical.hpp"

namespace brody::io {

using nlohmann::json;

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorCode::ParseError, "complex number must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const ExtendedComplex& z) { return z.is_finite() ? to_json(z.value()) : json("inf"); }

inline json to_json(const Polynomial& p) {
    json a = json::array();
    for (const auto& c : p.coeffs()) a.push_back(to_json(c));
    return a;
}

inline Polynomial polynomial_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, "polynomial must be an array of [re, im]");
    std::vector<Complex> c;
    for (const auto& x : j) c.push_back(complex_from_json(x));
    return Polynomial(std::move(c));
}

inline json to_json(const RationalFunction& r) { return {{"num", to_json(r.num())}, {"den", to_json(r.den())}}; }

/// {"num": [...], "den": [...]}; "den" defaults to 1.
inline RationalFunction rational_from_json(const json& j) {
    if (!j.is_object() || !j.contains("num")) throw Error(ErrorCode::ParseError, "rational function needs \"num\"");
    const Polynomial num = polynomial_from_json(j.at("num"));
    const Polynomial den = j.contains("den") ? polynomial_from_json(j.at("den")) : Polynomial::constant(1.0);
    if (den.is_zero()) throw Error(ErrorCode::InvalidArgument, "zero denominator polynomial");
    return {num, den};
}

inline RationalFunction rational_from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
    }
    return rational_from_json(j);
}

inline json to_json(const SupReport& s) {
    return {{"radius", s.radius},       {"center", to_json(s.center)}, {"samples", s.samples}, {"skipped", s.skipped},
            {"max_value", s.max_value}, {"argmax", to_json(s.argmax)}, {"refined", s.refined}};
}

inline json to_json(const WitnessSequence& w) {
    json pts = json::array();
    for (const auto& p : w.points) pts.push_back({{"z", to_json(p.z)}, {"value", p.value}});
    return {{"points", pts}, {"monotone", w.monotone}};
}

inline json to_json(const BrodyVerdict& v) {
    json j = {{"status", to_string(v.status)}, {"rule", v.rule}, {"reason", v.reason()}};
    if (v.witness) j["witness"] = to_json(*v.witness);
    if (v.bound) j["bound"] = *v.bound;
    return j;
}

inline json to_json(const ProductEval& e) {
    return {{"value", to_json(e.value)}, {"terms_used", e.terms_used}, {"tail_bound", e.tail_bound}};
}

inline json to_json(const DivisorVerdict& v) {
    json dirs = json::array();
    for (const auto& u : v.directions) dirs.push_back(to_json(u));
    return {{"separation_lambda", v.separation_lambda ? json(*v.separation_lambda) : json(nullptr)},
            {"directions", dirs},
            {"hull_ok", v.hull_ok},
            {"non_realizable", v.non_realizable},
            {"notes", v.notes}};
}

inline json to_json(const NevanlinnaReport& r) {
    json s = json::array();
    for (const auto& x : r.samples) s.push_back({{"r", x.r}, {"m", x.m}, {"N", x.N}, {"T", x.T}});
    return {{"samples", s},
            {"normalization", r.normalization == Normalization::Standard ? "standard" : "unnormalized"},
            {"monotone", r.monotone}};
}

inline json to_json(const OrderEstimate& e) {
    return {{"slope", e.slope}, {"r_range", {e.r_min, e.r_max}}, {"residual", e.residual}};
}

inline json error_json(const Error& e) { return {{"error", std::string(e.name())}, {"message", e.what()}}; }

}  // namespace brody::io
