#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sfkit/chain.hpp"
#include "sfkit/fan.hpp"
#include "sfkit/hj.hpp"
#include "sfkit/orbirep.hpp"
#include "sfkit/parabolic.hpp"
#include "sfkit/rational.hpp"

namespace sfkit {

// Insertion-ordered documents: reports read top-down and CSV columns keep
// their documented order.
using json = nlohmann::ordered_json;

// Integers are serialized as JSON numbers when they fit in 64 bits and as
// decimal strings otherwise; parsers accept both.
inline json int_to_json(const Int& v) {
    if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
        return static_cast<long long>(v);
    return v.str();
}

inline Int int_from_json(const json& j) {
    if (j.is_string()) return Int(j.get<std::string>());
    return Int(j.get<long long>());
}

inline std::string rational_to_string(const Rational& r) {
    std::string s = rational_num(r).str();
    if (rational_den(r) != 1) s += "/" + rational_den(r).str();
    return s;
}

inline json to_json(const ReducedFraction& f) {
    return json{{"p", int_to_json(f.num())}, {"q", int_to_json(f.den())}};
}

inline ReducedFraction fraction_from_json(const json& j) {
    return ReducedFraction(int_from_json(j.at("p")), int_from_json(j.at("q")));
}

inline json to_json(const HJExpansion& e) {
    json coeffs = json::array();
    for (const Int& c : e.coefficients) coeffs.push_back(int_to_json(c));
    return json{{"coefficients", coeffs}};
}

inline HJExpansion expansion_from_json(const json& j) {
    HJExpansion e;
    for (const auto& c : j.at("coefficients")) e.coefficients.push_back(int_from_json(c));
    return e;
}

inline json to_json(const LatticeFan& fan) {
    json rays = json::array();
    for (const Ray& r : fan.rays()) rays.push_back(json::array({int_to_json(r.x), int_to_json(r.y)}));
    return json{{"rays", rays}};
}

inline LatticeFan fan_from_json(const json& j) {
    std::vector<Ray> rays;
    for (const auto& r : j.at("rays")) rays.emplace_back(int_from_json(r.at(0)), int_from_json(r.at(1)));
    return LatticeFan(std::move(rays));
}

inline json chain_to_json(const CurveChain& chain) {
    json entries = json::array();
    for (const Int& c : chain) entries.push_back(int_to_json(c));
    return json{{"chain", entries}};
}

inline json to_json(const Psu2& g) {
    return json{{"w", g.w()}, {"x", g.x()}, {"y", g.y()}, {"z", g.z()}};
}

inline Psu2 psu2_from_json(const json& j) {
    return Psu2(j.at("w").get<double>(), j.at("x").get<double>(), j.at("y").get<double>(),
                j.at("z").get<double>());
}

inline json to_json(const OrbPresentation& p) {
    return json{{"genus", p.genus}, {"orders", p.orders}};
}

inline OrbPresentation presentation_from_json(const json& j) {
    OrbPresentation p;
    p.genus = j.at("genus").get<int>();
    for (const auto& q : j.at("orders")) p.orders.push_back(q.get<int>());
    p.validate();
    return p;
}

inline json to_json(const ParabolicStructure& ps) {
    json marks = json::array();
    for (const Mark& m : ps.marks)
        marks.push_back(json{{"point", m.point_id},
                             {"value", m.value.to_string()},
                             {"weight", to_json(m.weight)}});
    return json{{"genus", ps.genus}, {"marks", marks}};
}

inline ParabolicStructure parabolic_from_json(const json& j) {
    ParabolicStructure ps;
    ps.genus = j.at("genus").get<int>();
    for (const auto& m : j.at("marks"))
        ps.marks.push_back(Mark{m.at("point").get<std::string>(),
                                FiberValue::parse(m.at("value").get<std::string>()),
                                fraction_from_json(m.at("weight"))});
    ps.validate();
    return ps;
}

} // namespace sfkit
