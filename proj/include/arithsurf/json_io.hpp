#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "arithsurf/cone.hpp"
#include "arithsurf/fiber_model.hpp"
#include "arithsurf/reduction.hpp"

// JSON schemas for cones, chains, fiber models and reports.  All quantities
// are integers; serialization uses a fixed canonical key order so that every
// fixture round-trips byte-identically.

namespace arithsurf {

using ordered_json = nlohmann::ordered_json;

namespace jio {

inline void reject_unknown_keys(const ordered_json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument(where + ": unknown key \"" + it.key() + "\"");
}

inline i64 get_int(const ordered_json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw std::invalid_argument(where + ": missing key \"" + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_number_integer())
        throw std::invalid_argument(where + ": \"" + key + "\" must be an integer (no floats)");
    return v.get<i64>();
}

inline i64 get_int_or(const ordered_json& j, const std::string& key, i64 fallback,
                      const std::string& where) {
    if (!j.contains(key)) return fallback;
    return get_int(j, key, where);
}

inline bool get_bool(const ordered_json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw std::invalid_argument(where + ": missing key \"" + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_boolean()) throw std::invalid_argument(where + ": \"" + key + "\" must be a boolean");
    return v.get<bool>();
}

inline bool get_bool_or(const ordered_json& j, const std::string& key, bool fallback,
                        const std::string& where) {
    if (!j.contains(key)) return fallback;
    return get_bool(j, key, where);
}

inline std::string get_str(const ordered_json& j, const std::string& key,
                           const std::string& where) {
    if (!j.contains(key)) throw std::invalid_argument(where + ": missing key \"" + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_string()) throw std::invalid_argument(where + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

inline LatticeVector get_vec(const ordered_json& j, const std::string& key,
                             const std::string& where) {
    if (!j.contains(key)) throw std::invalid_argument(where + ": missing key \"" + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
        throw std::invalid_argument(where + ": \"" + key + "\" must be a pair of integers");
    return {v[0].get<i64>(), v[1].get<i64>()};
}

}  // namespace jio

inline Cone2 parse_cone(const ordered_json& j) {
    jio::reject_unknown_keys(j, {"u", "v"}, "cone");
    return Cone2(jio::get_vec(j, "u", "cone"), jio::get_vec(j, "v", "cone"));
}

inline std::vector<i64> parse_weights(const ordered_json& j) {
    jio::reject_unknown_keys(j, {"weights"}, "chain");
    if (!j.contains("weights") || !j.at("weights").is_array())
        throw std::invalid_argument("chain: missing \"weights\" array");
    std::vector<i64> w;
    for (const auto& v : j.at("weights")) {
        if (!v.is_number_integer())
            throw std::invalid_argument("chain: weights must be integers");
        w.push_back(v.get<i64>());
    }
    return w;
}

inline ordered_json cone_to_json(const Cone2& c) {
    ordered_json j;
    j["u"] = {c.u.x, c.u.y};
    j["v"] = {c.v.x, c.v.y};
    return j;
}

inline ordered_json rays_to_json(const std::vector<LatticeVector>& rays) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rays) arr.push_back({r.x, r.y});
    return arr;
}

inline ordered_json chain_to_json(const ResolutionChain& chain) {
    ordered_json j;
    j["rays"] = rays_to_json(chain.rays);
    j["weights"] = chain.weights;
    return j;
}

inline ComponentKind parse_kind(const std::string& s) {
    if (s == "P1") return ComponentKind::rational_with_point;
    if (s == "conic") return ComponentKind::conic;
    if (s == "node") return ComponentKind::node_rational;
    if (s == "general") return ComponentKind::general;
    throw std::invalid_argument("component: unknown kind \"" + s + "\"");
}

inline FiberModel parse_model(const ordered_json& j) {
    jio::reject_unknown_keys(
        j, {"p", "components", "edges", "branches", "regular", "singular"}, "model");
    FiberModel m;
    m.p = jio::get_int_or(j, "p", 0, "model");
    if (!j.contains("components") || !j.at("components").is_array())
        throw std::invalid_argument("model: missing \"components\" array");
    for (const auto& cj : j.at("components")) {
        jio::reject_unknown_keys(cj, {"id", "m", "kd", "sep", "kind", "s", "g", "normal", "k2sep"},
                                 "component");
        PrimeComponent c;
        c.id = jio::get_str(cj, "id", "component");
        c.multiplicity = jio::get_int(cj, "m", c.id);
        c.constant_field = {jio::get_int(cj, "kd", c.id), jio::get_bool(cj, "sep", c.id)};
        c.kind = parse_kind(jio::get_str(cj, "kind", c.id));
        c.self_intersection = jio::get_int(cj, "s", c.id);
        c.genus = jio::get_int_or(cj, "g", 0, c.id);
        c.normal = jio::get_bool_or(cj, "normal", true, c.id);
        c.node_ext_separable = jio::get_bool_or(cj, "k2sep", true, c.id);
        m.components.push_back(std::move(c));
    }
    if (j.contains("edges"))
        for (const auto& ej : j.at("edges")) {
            jio::reject_unknown_keys(ej, {"a", "b", "deg", "sep", "split"}, "edge");
            IntersectionEdge e;
            e.a = jio::get_str(ej, "a", "edge");
            e.b = jio::get_str(ej, "b", "edge");
            e.point = {jio::get_int(ej, "deg", "edge"), jio::get_bool(ej, "sep", "edge")};
            e.split = jio::get_bool_or(ej, "split", true, "edge");
            m.edges.push_back(std::move(e));
        }
    if (j.contains("branches"))
        for (const auto& bj : j.at("branches")) {
            jio::reject_unknown_keys(bj, {"id", "on", "e", "f", "sep", "at"}, "branch");
            MarkedBranch b;
            b.id = jio::get_str(bj, "id", "branch");
            b.on = bj.contains("on") ? jio::get_str(bj, "on", b.id) : std::string();
            b.ram_index = jio::get_int(bj, "e", b.id);
            b.residue = {jio::get_int(bj, "f", b.id), jio::get_bool(bj, "sep", b.id)};
            if (bj.contains("at")) b.at_singular = jio::get_str(bj, "at", b.id);
            m.branches.push_back(std::move(b));
        }
    if (j.contains("singular"))
        for (const auto& sj : j.at("singular")) {
            jio::reject_unknown_keys(
                sj, {"id", "weights", "exc", "str", "kd", "sep", "embdim", "incident"}, "singular");
            SingularPointRecord s;
            s.id = jio::get_str(sj, "id", "singular");
            for (const auto& w : sj.at("weights")) {
                if (!w.is_number_integer())
                    throw std::invalid_argument("singular: weights must be integers");
                s.weights.push_back(w.get<i64>());
            }
            s.exc_variant = jio::get_str(sj, "exc", s.id);
            s.str_variant = jio::get_str(sj, "str", s.id);
            s.residue = {jio::get_int(sj, "kd", s.id), jio::get_bool(sj, "sep", s.id)};
            s.embedding_dim = jio::get_int(sj, "embdim", s.id);
            for (const auto& ij : sj.at("incident")) {
                jio::reject_unknown_keys(ij, {"type", "id"}, "incidence");
                std::string type = jio::get_str(ij, "type", "incidence");
                if (type != "component" && type != "branch")
                    throw std::invalid_argument("incidence type must be component or branch");
                s.incident.push_back({type == "branch", jio::get_str(ij, "id", "incidence")});
            }
            m.singular_points.push_back(std::move(s));
        }
    m.regular = jio::get_bool_or(j, "regular", m.singular_points.empty(), "model");
    return m;
}

inline ordered_json model_to_json(const FiberModel& m) {
    ordered_json j;
    j["p"] = m.p;
    j["components"] = ordered_json::array();
    for (const auto& c : m.components) {
        ordered_json cj;
        cj["id"] = c.id;
        cj["m"] = c.multiplicity;
        cj["kd"] = c.constant_field.degree;
        cj["sep"] = c.constant_field.separable;
        cj["kind"] = kind_name(c.kind);
        cj["s"] = c.self_intersection;
        if (c.kind == ComponentKind::general) {
            cj["g"] = c.genus;
            cj["normal"] = c.normal;
        }
        if (c.kind == ComponentKind::node_rational) cj["k2sep"] = c.node_ext_separable;
        j["components"].push_back(std::move(cj));
    }
    j["edges"] = ordered_json::array();
    for (const auto& e : m.edges) {
        ordered_json ej;
        ej["a"] = e.a;
        ej["b"] = e.b;
        ej["deg"] = e.point.degree;
        ej["sep"] = e.point.separable;
        if (e.is_loop()) ej["split"] = e.split;
        j["edges"].push_back(std::move(ej));
    }
    j["branches"] = ordered_json::array();
    for (const auto& b : m.branches) {
        ordered_json bj;
        bj["id"] = b.id;
        if (!b.on.empty()) bj["on"] = b.on;
        bj["e"] = b.ram_index;
        bj["f"] = b.residue.degree;
        bj["sep"] = b.residue.separable;
        if (!b.at_singular.empty()) bj["at"] = b.at_singular;
        j["branches"].push_back(std::move(bj));
    }
    if (!m.regular) {
        j["regular"] = false;
        j["singular"] = ordered_json::array();
        for (const auto& s : m.singular_points) {
            ordered_json sj;
            sj["id"] = s.id;
            sj["weights"] = s.weights;
            sj["exc"] = s.exc_variant;
            sj["str"] = s.str_variant;
            sj["kd"] = s.residue.degree;
            sj["sep"] = s.residue.separable;
            sj["embdim"] = s.embedding_dim;
            sj["incident"] = ordered_json::array();
            for (const auto& inc : s.incident) {
                ordered_json ij;
                ij["type"] = inc.is_branch ? "branch" : "component";
                ij["id"] = inc.id;
                sj["incident"].push_back(std::move(ij));
            }
            j["singular"].push_back(std::move(sj));
        }
    }
    return j;
}

inline ordered_json report_to_json(const ModelReport& rep) {
    ordered_json j;
    j["input"] = model_to_json(rep.input);
    j["p"] = rep.p;
    j["g"] = rep.g;
    j["r"] = rep.r;
    j["ncd"] = model_to_json(rep.ncd);
    j["lreg"] = ordered_json();
    j["lreg"]["model"] = model_to_json(rep.lreg.model);
    j["lreg"]["absolute_minimal"] = rep.lreg.absolute_minimal;
    j["log_smooth"] = rep.log_smooth;
    j["log_smooth_witnesses"] = ordered_json::array();
    for (const auto& w : rep.log_smooth_witnesses) {
        ordered_json wj;
        wj["kind"] = w.kind;
        wj["id"] = w.id;
        wj["clause"] = w.clause;
        j["log_smooth_witnesses"].push_back(std::move(wj));
    }
    j["semistable"] = rep.semistable;
    j["stable"] = rep.stable;
    if (rep.e_min_value)
        j["e_min"] = *rep.e_min_value;
    else
        j["e_min"] = nullptr;
    j["notes"] = rep.notes;
    return j;
}

inline std::string dump_canonical(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace arithsurf
