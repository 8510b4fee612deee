#include "hk/json_io.hpp"

namespace hk {

namespace {

const char* sign_name(EndSign s) {
    switch (s) {
        case EndSign::Minus: return "-";
        case EndSign::Plus: return "+";
        default: return "";
    }
}

EndSign sign_from(const std::string& s) {
    if (s == "-") return EndSign::Minus;
    if (s == "+") return EndSign::Plus;
    if (s.empty()) return EndSign::None;
    throw UserError("endpoint sign must be '+', '-' or empty");
}

Json poly_coeffs(const Poly& p) {
    Json a = Json::array();
    for (const auto& c : p.coeffs()) a.push_back(to_string(c));
    return a;
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw UserError("rational must be a \"p/q\" string");
}

Json to_json(const Poly& p) { return poly_coeffs(p); }

Json to_json(const PiecewisePoly& f) {
    Json bp = Json::array(), pieces = Json::array();
    for (const auto& b : f.breakpoints()) bp.push_back(to_string(b));
    for (const auto& p : f.pieces()) pieces.push_back(poly_coeffs(p));
    return Json{{"breakpoints", bp},
                {"pieces", pieces},
                {"left", to_string(f.left())},
                {"right", to_string(f.right())}};
}

PiecewisePoly pp_from_json(const Json& j) {
    try {
        std::vector<Rational> bp;
        for (const auto& b : j.at("breakpoints")) bp.push_back(rational_from_json(b));
        std::vector<Poly> pieces;
        for (const auto& p : j.at("pieces")) {
            std::vector<Rational> c;
            for (const auto& x : p) c.push_back(rational_from_json(x));
            pieces.emplace_back(std::move(c));
        }
        return PiecewisePoly(std::move(bp), std::move(pieces), rational_from_json(j.at("left")),
                             rational_from_json(j.at("right")));
    } catch (const nlohmann::json::exception& e) {
        throw UserError(std::string("bad piecewise polynomial JSON: ") + e.what());
    }
}

Json to_json(const Measure& m) {
    Json atoms = Json::array();
    for (const auto& a : m.atoms())
        atoms.push_back(Json{{"t", to_string(a.loc)}, {"mass", to_string(a.mass)}});
    Json out{{"atoms", atoms}};
    out["density"] = m.density() ? to_json(*m.density()) : Json(nullptr);
    out["lo"] = Json{{"value", to_string(m.lo().value)}, {"sign", sign_name(m.lo().sign)}};
    out["hi"] = Json{{"value", to_string(m.hi().value)}, {"sign", sign_name(m.hi().sign)}};
    return out;
}

Measure measure_from_json(const Json& j) {
    try {
        std::vector<Atom> atoms;
        for (const auto& a : j.at("atoms"))
            atoms.push_back({rational_from_json(a.at("t")), rational_from_json(a.at("mass"))});
        std::optional<PiecewisePoly> d;
        if (j.contains("density") && !j.at("density").is_null()) d = pp_from_json(j.at("density"));
        SignedEndpoint lo{0, EndSign::Minus}, hi{0, EndSign::Plus};
        if (j.contains("lo")) {
            lo = {rational_from_json(j["lo"].at("value")), sign_from(j["lo"].value("sign", ""))};
            hi = {rational_from_json(j["hi"].at("value")), sign_from(j["hi"].value("sign", ""))};
        } else {
            bool any = false;
            auto widen = [&](const Rational& x) {
                if (!any || x < lo.value) lo.value = x;
                if (!any || x > hi.value) hi.value = x;
                any = true;
            };
            for (const auto& a : atoms) widen(a.loc);
            if (d) widen(d->lo()), widen(d->hi());
        }
        return Measure(std::move(atoms), std::move(d), lo, hi);
    } catch (const nlohmann::json::exception& e) {
        throw UserError(std::string("bad measure JSON: ") + e.what());
    }
}

Json to_json(const Piecewise2D& k) {
    Json regions = Json::array();
    for (const auto& r : k.regions()) {
        Json ineqs = Json::array();
        for (const auto& h : r.ineqs)
            ineqs.push_back(Json{{"a", h.a}, {"b", h.b}, {"c", to_string(h.c)}});
        Json grid = Json::array();
        for (const auto& row : r.poly.c) {
            Json jr = Json::array();
            for (const auto& v : row) jr.push_back(to_string(v));
            grid.push_back(jr);
        }
        regions.push_back(Json{{"label", r.label}, {"ineqs", ineqs}, {"poly", grid}});
    }
    Json dom{{"x", Json::array({to_string(k.x_lo()), to_string(k.x_hi())})},
             {"t", Json::array({to_string(k.t_lo()),
                                k.t_hi() ? Json(to_string(*k.t_hi())) : Json(nullptr)})}};
    return Json{{"domain", dom}, {"regions", regions}};
}

Piecewise2D piecewise2d_from_json(const Json& j) {
    try {
        const auto& dom = j.at("domain");
        std::optional<Rational> t_hi;
        if (!dom.at("t").at(1).is_null()) t_hi = rational_from_json(dom["t"][1]);
        std::vector<Region> regions;
        for (const auto& r : j.at("regions")) {
            Region reg;
            reg.label = r.value("label", "");
            for (const auto& h : r.at("ineqs"))
                reg.ineqs.push_back({h.at("a").get<int>(), h.at("b").get<int>(),
                                     rational_from_json(h.at("c"))});
            for (const auto& row : r.at("poly")) {
                std::vector<Rational> vr;
                for (const auto& v : row) vr.push_back(rational_from_json(v));
                reg.poly.c.push_back(std::move(vr));
            }
            regions.push_back(std::move(reg));
        }
        return Piecewise2D(rational_from_json(dom["x"][0]), rational_from_json(dom["x"][1]),
                           rational_from_json(dom["t"][0]), t_hi, std::move(regions));
    } catch (const nlohmann::json::exception& e) {
        throw UserError(std::string("bad kernel slice JSON: ") + e.what());
    }
}

}  // namespace hk
