#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "arithsurf/fiber_model.hpp"

// E-set computation, the (Exc)/(Str) condition variants, Artin fundamental
// cycles, and contraction of E_{<=-2} configurations to the minimal log
// regular model.

namespace arithsurf {

struct precondition_error : std::runtime_error {
    std::string stage;
    precondition_error(std::string st, const std::string& what)
        : std::runtime_error(st + ": " + what), stage(std::move(st)) {}
};

// A contact of a component with the rest of C_k u D: another component
// through an edge, a marked branch, or a contracted singular point.
struct Contact {
    enum class Kind { edge, branch, singular } kind;
    std::string other;   // component id (edge), branch id, or singular id
    i64 degree_over_k;   // residue degree of the point over k
    bool separable;
    size_t edge_index = 0;
};

inline std::vector<Contact> contacts_of(const FiberModel& m, const std::string& id) {
    std::vector<Contact> out;
    for (size_t i = 0; i < m.edges.size(); ++i) {
        const auto& e = m.edges[i];
        if (e.is_loop() || !e.touches(id)) continue;
        out.push_back({Contact::Kind::edge, e.a == id ? e.b : e.a, e.point.degree,
                       e.point.separable, i});
    }
    for (const auto& b : m.branches)
        if (b.on == id)
            out.push_back({Contact::Kind::branch, b.id, b.residue.degree, b.residue.separable, 0});
    // a contracted point is an intersection with other components only when
    // some other divisor passes through it (Str0-type points, where the one
    // incident divisor meets its own image, contribute nothing)
    for (const auto& s : m.singular_points) {
        bool mine = false, others = false;
        for (const auto& inc : s.incident) {
            if (!inc.is_branch && inc.id == id)
                mine = true;
            else
                others = true;
        }
        if (mine && others)
            out.push_back({Contact::Kind::singular, s.id, s.residue.degree, s.residue.separable, 0});
    }
    return out;
}

inline bool has_self_loop(const FiberModel& m, const std::string& id) {
    for (const auto& e : m.edges)
        if (e.is_loop() && e.a == id) return true;
    return false;
}

inline bool touches_singular_point(const FiberModel& m, const std::string& id) {
    for (const auto& s : m.singular_points)
        for (const auto& inc : s.incident)
            if (!inc.is_branch && inc.id == id) return true;
    return false;
}

// Smooth genus-0 curve over its constant field (the E_{0,1'} shape test).
inline bool is_smooth_genus_zero(const PrimeComponent& c) {
    switch (c.kind) {
        case ComponentKind::rational_with_point:
        case ComponentKind::conic: return true;
        case ComponentKind::general: return c.genus == 0 && c.normal;
        case ComponentKind::node_rational: return false;
    }
    return false;
}

struct ESets {
    std::set<std::string> p2, p1, p1p, zo1p, node, eq_minus1, le_minus2;
};

inline ESets e_sets(const FiberModel& m) {
    ESets out;
    for (const auto& c : m.components) {
        if (has_self_loop(m, c.id)) continue;  // not smooth, not a badcurves node shape
        auto cs = contacts_of(m, c.id);
        i64 kd = c.constant_field.degree;

        bool two_rational = cs.size() == 2 && cs[0].degree_over_k == kd && cs[1].degree_over_k == kd;
        bool one_rational = cs.size() == 1 && cs[0].degree_over_k == kd;
        bool one_quadratic =
            cs.size() == 1 && cs[0].degree_over_k == mul_i64(2, kd) && cs[0].separable;

        bool is_p1 = c.kind == ComponentKind::rational_with_point;
        if (is_p1 && two_rational) out.p2.insert(c.id);
        if (is_p1 && one_rational) out.p1.insert(c.id);
        if (is_p1 && one_quadratic) out.p1p.insert(c.id);
        if (is_smooth_genus_zero(c) && one_quadratic) out.zo1p.insert(c.id);
        if (c.kind == ComponentKind::node_rational && one_quadratic) out.node.insert(c.id);

        // normal-crossing condition (i): fails next to a contracted point
        bool ncd_around = !touches_singular_point(m, c.id);
        if (!ncd_around || c.self_intersection % kd != 0) continue;
        i64 normalized = c.self_intersection / kd;
        bool in_minus1_shapes = out.p2.count(c.id) || out.p1.count(c.id) || out.p1p.count(c.id);
        bool in_minus2_shapes = out.p2.count(c.id) || out.zo1p.count(c.id) || out.node.count(c.id);
        if (in_minus1_shapes && normalized == -1) out.eq_minus1.insert(c.id);
        if (in_minus2_shapes && normalized <= -2) out.le_minus2.insert(c.id);
    }
    return out;
}

struct ExcResult {
    bool ok = false;
    std::string variant;   // Exc_x | Exc_o | Exc_e
    std::string failure;   // first violated clause, with the component
    std::vector<i64> weights;
    ResidueDatum k_prime;  // k' = H^0(E, O_E) over k
};

namespace detail {

// Exactly one edge between consecutive chain members, none otherwise.
inline bool chain_shape_ok(const FiberModel& m, const std::vector<std::string>& ids,
                           std::string& failure) {
    std::map<std::string, size_t> pos;
    for (size_t i = 0; i < ids.size(); ++i) {
        if (!m.find_component(ids[i])) {
            failure = "unknown component " + ids[i];
            return false;
        }
        if (pos.count(ids[i])) {
            failure = "repeated component " + ids[i];
            return false;
        }
        pos[ids[i]] = i;
        if (has_self_loop(m, ids[i])) {
            failure = "(Exc): " + ids[i] + " crosses itself";
            return false;
        }
        if (touches_singular_point(m, ids[i])) {
            failure = "(cExc): model is not a normal crossing divisor around " + ids[i];
            return false;
        }
    }
    std::map<std::pair<size_t, size_t>, int> counts;
    for (const auto& e : m.edges) {
        if (e.is_loop()) continue;
        auto ia = pos.find(e.a), ib = pos.find(e.b);
        if (ia == pos.end() || ib == pos.end()) continue;
        size_t lo = std::min(ia->second, ib->second), hi = std::max(ia->second, ib->second);
        counts[{lo, hi}]++;
    }
    for (const auto& [key, n] : counts) {
        if (key.second - key.first != 1) {
            failure = "(Exc iv): " + ids[key.first] + " and " + ids[key.second] + " intersect";
            return false;
        }
    }
    for (size_t i = 0; i + 1 < ids.size(); ++i) {
        int n = counts.count({i, i + 1}) ? counts[{i, i + 1}] : 0;
        if (n != 1) {
            failure = "(Exc iii): " + ids[i] + " and " + ids[i + 1] +
                      " must meet at exactly one point";
            return false;
        }
    }
    return true;
}

inline const IntersectionEdge& consecutive_edge(const FiberModel& m, const std::string& a,
                                                const std::string& b) {
    for (const auto& e : m.edges)
        if (!e.is_loop() && e.touches(a) && e.touches(b)) return e;
    throw std::logic_error("consecutive chain edge vanished");
}

}  // namespace detail

// Decides which variant of condition (Exc) the ordered chain satisfies, with
// weights in the variant's normalization (degrees over k' resp. k'').
inline ExcResult check_exc(const FiberModel& m, const std::vector<std::string>& ids) {
    ExcResult res;
    if (ids.empty()) {
        res.failure = "empty chain";
        return res;
    }
    if (!detail::chain_shape_ok(m, ids, res.failure)) return res;
    size_t mm = ids.size();
    const PrimeComponent& last = m.component(ids.back());

    auto normalized_weight = [&](const PrimeComponent& c, i64 field_degree,
                                 const char* clause) -> std::optional<i64> {
        if (c.self_intersection % field_degree != 0 || c.self_intersection / field_degree > -2) {
            res.failure = std::string(clause) + ": " + c.id +
                          " has normalized self-intersection > -2 or non-integral";
            return std::nullopt;
        }
        return c.self_intersection / field_degree;
    };

    // (Exc_x): every member a P^1 over the common field k'
    {
        bool shapes = true;
        for (const auto& id : ids) {
            const auto& c = m.component(id);
            if (c.kind != ComponentKind::rational_with_point ||
                c.constant_field != last.constant_field)
                shapes = false;
        }
        if (shapes) {
            ResidueDatum kp = last.constant_field;
            std::vector<i64> w;
            for (const auto& id : ids) {
                auto a = normalized_weight(m.component(id), kp.degree, "(Exc_x ii)");
                if (!a) return res;
                w.push_back(*a);
            }
            for (size_t i = 0; i + 1 < mm; ++i) {
                const auto& e = detail::consecutive_edge(m, ids[i], ids[i + 1]);
                if (e.point.degree != kp.degree || e.point.separable != kp.separable) {
                    res.failure = "(Exc_x iii): " + ids[i] + "^" + ids[i + 1] +
                                  " is not a k'-rational point";
                    return res;
                }
            }
            res.ok = true;
            res.variant = "Exc_x";
            res.weights = std::move(w);
            res.k_prime = kp;
            return res;
        }
    }

    // (Exc_o) / (Exc_e): interior members are P^1 over a quadratic extension
    // k'' of k' = k(E_m); the last member is smooth genus 0 (o) or the
    // badcurves node shape (e).
    {
        ResidueDatum kp = last.constant_field;
        i64 dp = kp.degree;
        bool is_o = is_smooth_genus_zero(last);
        bool is_e = last.kind == ComponentKind::node_rational;
        if (!is_o && !is_e) {
            res.failure = "(Exc i_m): " + last.id + " is neither smooth genus 0 nor a node shape";
            return res;
        }
        for (size_t i = 0; i + 1 < mm; ++i) {
            const auto& c = m.component(ids[i]);
            if (c.kind != ComponentKind::rational_with_point ||
                c.constant_field.degree != mul_i64(2, dp)) {
                res.failure = "(Exc_o/e i): " + ids[i] + " is not a P^1 over the quadratic extension k''";
                return res;
            }
            if (kp.separable && !c.constant_field.separable) {
                res.failure = "(Exc_o/e i): k''/k' not separable at " + ids[i];
                return res;
            }
        }
        if (is_e && mm >= 2) {
            // the chain's k'' and the node's own quadratic datum must agree
            if (!last.node_ext_separable && m.component(ids[0]).constant_field.separable) {
                res.failure = "(Exc_e i_m): node extension of " + last.id +
                              " does not match the chain's k''";
                return res;
            }
        }
        std::vector<i64> w;
        for (size_t i = 0; i + 1 < mm; ++i) {
            auto a = normalized_weight(m.component(ids[i]), mul_i64(2, dp), "(Exc_o/e ii)");
            if (!a) return res;
            w.push_back(*a);
        }
        auto am = normalized_weight(last, dp, "(Exc_o/e ii_m)");
        if (!am) return res;
        w.push_back(*am);
        for (size_t i = 0; i + 1 < mm; ++i) {
            const auto& e = detail::consecutive_edge(m, ids[i], ids[i + 1]);
            if (e.point.degree != mul_i64(2, dp) || !e.point.separable) {
                res.failure = "(Exc_o/e iii): " + ids[i] + "^" + ids[i + 1] +
                              " is not a k''-rational point";
                return res;
            }
        }
        res.ok = true;
        res.variant = is_e ? "Exc_e" : "Exc_o";
        res.weights = std::move(w);
        res.k_prime = kp;
        return res;
    }
}

struct StrResult {
    bool ok = false;
    std::string variant;  // Str0 | Str1x | Str1 | Str2
    std::string failure;
    std::vector<SingularPointRecord::Incidence> outside;  // the divisor(s) D'
};

// Classifies how the outside divisors meet the chain ends, given a passing
// (Exc) variant.
inline StrResult check_str(const FiberModel& m, const std::vector<std::string>& ids) {
    StrResult res;
    ExcResult exc = check_exc(m, ids);
    if (!exc.ok) {
        res.failure = "chain fails (Exc): " + exc.failure;
        return res;
    }
    size_t mm = ids.size();
    std::set<std::string> in_chain(ids.begin(), ids.end());

    struct OutsideContact {
        SingularPointRecord::Incidence divisor;
        i64 degree;
        bool separable;
        size_t at;  // chain position
    };
    std::vector<OutsideContact> oc;
    for (size_t i = 0; i < mm; ++i) {
        for (const auto& c : contacts_of(m, ids[i])) {
            if (c.kind == Contact::Kind::edge && in_chain.count(c.other)) continue;
            if (c.kind == Contact::Kind::singular) {
                res.failure = "(cStr): chain touches a contracted point at " + ids[i];
                return res;
            }
            oc.push_back({{c.kind == Contact::Kind::branch, c.other}, c.degree_over_k,
                          c.separable, i});
        }
    }
    for (const auto& c : oc) {
        if (c.at != 0 && c.at != mm - 1) {
            res.failure = "(Str): D' ^ E_i must be empty for 1 < i < m, violated at " + ids[c.at];
            return res;
        }
    }
    i64 dp = exc.k_prime.degree;

    if (oc.size() == 2 && oc[0].degree == dp && oc[1].degree == dp) {
        // (Str_0) / (Str_2): two k'-rational transversal contacts
        if (exc.variant != "Exc_x") {
            res.failure = "(Str): two rational contacts require condition (Exc_x)";
            return res;
        }
        if (oc[0].separable != exc.k_prime.separable || oc[1].separable != exc.k_prime.separable) {
            res.failure = "(Str): contact point is not k'-rational";
            return res;
        }
        if (mm >= 2 && oc[0].at == oc[1].at) {
            res.failure = "(Str): both contacts on one end of a chain of length >= 2";
            return res;
        }
        if (oc[0].at > oc[1].at) std::swap(oc[0], oc[1]);
        if (oc[0].divisor == oc[1].divisor) {
            res.variant = "Str0";
            res.outside = {oc[0].divisor};
        } else {
            res.variant = "Str2";
            res.outside = {oc[0].divisor, oc[1].divisor};
        }
        res.ok = true;
        return res;
    }
    if (oc.size() == 1 && oc[0].degree == mul_i64(2, dp) && oc[0].separable) {
        // (Str_1x) / (Str_1): one separable degree-2 contact
        if (exc.variant == "Exc_x") {
            if (mm != 1) {
                res.failure = "(Str_1x): a single degree-2 contact needs m = 1";
                return res;
            }
            res.variant = "Str1x";
        } else {
            if (oc[0].at != 0) {
                res.failure = "(Str_1): the degree-2 contact must lie on E_1";
                return res;
            }
            res.variant = "Str1";
        }
        res.outside = {oc[0].divisor};
        res.ok = true;
        return res;
    }
    res.failure = "(Str): D' ^ E is not finite etale of rank 2 over k' (" +
                  std::to_string(oc.size()) + " contact(s))";
    return res;
}

// Artin's incremental algorithm: start from the reduced cycle and add E_j
// while (Z . E_j) > 0.  The capped loop deliberately accepts the negative
// SEMIdefinite star shapes (affine Dynkin configurations) and reports
// non-convergence otherwise.
inline std::vector<i64> fundamental_cycle(const FiberModel& m,
                                          const std::vector<std::string>& subset) {
    if (subset.empty()) throw std::invalid_argument("fundamental_cycle: empty subset");
    {
        std::set<std::string> seen(subset.begin(), subset.end());
        if (seen.size() != subset.size())
            throw std::invalid_argument("fundamental_cycle: repeated component");
        std::set<std::string> reach{subset.front()};
        std::vector<std::string> stack{subset.front()};
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            for (const auto& e : m.edges) {
                if (e.is_loop() || !e.touches(cur)) continue;
                const std::string& o = e.a == cur ? e.b : e.a;
                if (seen.count(o) && reach.insert(o).second) stack.push_back(o);
            }
        }
        if (reach.size() != subset.size())
            throw std::invalid_argument("fundamental_cycle: subset not connected");
    }
    IntersectionMatrix gram = intersection_matrix(m, subset);
    size_t n = subset.size();
    std::vector<i64> c(n, 1);
    i64 cap = 64 * static_cast<i64>(n) * static_cast<i64>(n) + 256;
    for (i64 step = 0; step <= cap; ++step) {
        bool done = true;
        for (size_t j = 0; j < n && done; ++j) {
            i64 deg = 0;
            for (size_t i = 0; i < n; ++i) deg = add_i64(deg, mul_i64(c[i], gram.entries[i][j]));
            if (deg > 0) {
                c[j] = add_i64(c[j], 1);
                done = false;
            }
        }
        if (done) return c;
    }
    throw std::invalid_argument(
        "fundamental_cycle: no convergence; the intersection matrix is not negative (semi)definite");
}

struct LregResult {
    FiberModel model;
    bool absolute_minimal = false;

    const std::vector<SingularPointRecord>& singular_points() const {
        return model.singular_points;
    }
};

namespace detail {

inline std::string fresh_singular_id(const FiberModel& m) {
    for (int n = 1;; ++n) {
        std::string id = "x" + std::to_string(n);
        bool taken = false;
        for (const auto& s : m.singular_points) taken = taken || s.id == id;
        if (!taken) return id;
    }
}

}  // namespace detail

// Contracts a verified (cExc)+(cStr) chain to a singular surface point.  The
// surviving components keep their self-intersections as computed on the
// minimal desingularization; the record stores everything needed to resolve
// the point back into the chain.
inline std::pair<FiberModel, SingularPointRecord> contract_chain(
    const FiberModel& m, const std::vector<std::string>& ids) {
    std::set<std::string> in_chain(ids.begin(), ids.end());
    if (in_chain.size() == m.components.size())
        throw precondition_error("contract_chain",
                                 "chain equals the whole fiber; 2g + r - 2 > 0 rules this out");
    ExcResult exc = check_exc(m, ids);
    if (!exc.ok) throw precondition_error("contract_chain", exc.failure);
    StrResult str = check_str(m, ids);
    if (!str.ok) throw precondition_error("contract_chain", str.failure);

    FiberModel out = m;
    SingularPointRecord rec;
    rec.id = detail::fresh_singular_id(out);
    rec.weights = exc.weights;
    rec.exc_variant = exc.variant;
    rec.str_variant = str.variant;
    rec.residue = exc.k_prime;
    // Exc_x chains read the same from either end; store the lexicographically
    // smaller orientation so that records are traversal-independent.
    if (exc.variant == "Exc_x") {
        std::vector<i64> reversed(rec.weights.rbegin(), rec.weights.rend());
        if (reversed < rec.weights) {
            rec.weights = std::move(reversed);
            std::reverse(str.outside.begin(), str.outside.end());
        }
    }
    i64 defect = 0;
    for (i64 a : exc.weights) defect = add_i64(defect, add_i64(a, 2));
    rec.embedding_dim = sub_i64(3, defect);
    rec.incident = str.outside;

    std::erase_if(out.components, [&](const auto& c) { return in_chain.count(c.id) > 0; });
    std::erase_if(out.edges,
                  [&](const auto& e) { return in_chain.count(e.a) || in_chain.count(e.b); });
    for (auto& b : out.branches) {
        if (!b.on.empty() && in_chain.count(b.on)) {
            b.on.clear();
            b.at_singular = rec.id;
        }
    }
    out.singular_points.push_back(rec);
    out.regular = false;
    return {std::move(out), std::move(rec)};
}

// Contracts every connected union of E_{<=-2} members of a minimal n.c.d.
// model.  Per the uniqueness theorem each union must satisfy (cExc)/(cStr);
// a failure means the input was not a valid minimal n.c.d. model.
inline LregResult build_lreg(const FiberModel& input) {
    FiberModel cur = input;
    if (input.regular) {
        require_valid(input);
        i64 g = arithmetic_genus(input);
        i64 r = boundary_rank(input);
        if (add_i64(mul_i64(2, g), r) - 2 <= 0)
            throw precondition_error("build_lreg", "2g + r - 2 <= 0");
        if (!e_sets(input).eq_minus1.empty())
            throw precondition_error("build_lreg",
                                     "input has exceptional curves of the first kind; "
                                     "apply minimal_ncd first");
    }

    ESets es = e_sets(cur);
    std::set<std::string> pending(es.le_minus2.begin(), es.le_minus2.end());
    while (!pending.empty()) {
        // connected component of the union, as an induced path
        std::string seed = *pending.begin();
        std::set<std::string> comp{seed};
        std::vector<std::string> stack{seed};
        while (!stack.empty()) {
            std::string v = stack.back();
            stack.pop_back();
            for (const auto& e : cur.edges) {
                if (e.is_loop() || !e.touches(v)) continue;
                const std::string& o = e.a == v ? e.b : e.a;
                if (pending.count(o) && comp.insert(o).second) stack.push_back(o);
            }
        }
        std::map<std::string, std::vector<std::string>> adj;
        for (const auto& v : comp) adj[v] = {};
        for (const auto& e : cur.edges) {
            if (e.is_loop() || !comp.count(e.a) || !comp.count(e.b)) continue;
            adj[e.a].push_back(e.b);
            adj[e.b].push_back(e.a);
        }
        std::vector<std::string> order;
        std::string start = *comp.begin();
        for (const auto& [v, ns] : adj)
            if (ns.size() <= 1) start = v;
        std::set<std::string> used;
        std::string v = start;
        while (true) {
            order.push_back(v);
            used.insert(v);
            std::string next;
            for (const auto& n : adj[v])
                if (!used.count(n)) next = n;
            if (next.empty()) break;
            v = next;
        }
        if (order.size() != comp.size())
            throw precondition_error("build_lreg",
                                     "E_{<=-2} union is not a chain; input model is invalid");
        // orientation: the Exc_o/Exc_e variants put the special member last
        if (!check_exc(cur, order).ok) std::reverse(order.begin(), order.end());
        auto [contracted, rec] = contract_chain(cur, order);
        cur = std::move(contracted);
        for (const auto& id : order) pending.erase(id);
    }

    LregResult res{std::move(cur), false};
    ESets post = e_sets(res.model);
    if (!post.p2.empty() || !post.zo1p.empty() || !post.node.empty())
        throw std::logic_error("build_lreg postcondition failed: contractible members remain");
    res.absolute_minimal = post.p1.empty();
    return res;
}

// Test utility: resolves the stored singular points back into explicit
// chains, recovering the minimal desingularization.  Not part of the public
// CLI surface.
inline FiberModel resolve_singular_points(const FiberModel& m) {
    FiberModel out = m;
    int counter = 0;
    for (const auto& s : m.singular_points) {
        size_t mm = s.weights.size();
        std::vector<std::string> ids;
        for (size_t i = 0; i < mm; ++i)
            ids.push_back("r" + std::to_string(++counter) + "_" + std::to_string(i));
        bool exc_x = s.exc_variant == "Exc_x";
        for (size_t i = 0; i < mm; ++i) {
            PrimeComponent c;
            c.id = ids[i];
            c.kind = ComponentKind::rational_with_point;
            c.constant_field = s.residue;
            if (!exc_x && i + 1 < mm) c.constant_field.degree = mul_i64(2, s.residue.degree);
            if (!exc_x && i + 1 == mm && s.exc_variant == "Exc_e")
                c.kind = ComponentKind::node_rational;
            if (!exc_x && i + 1 == mm && s.exc_variant == "Exc_o")
                c.kind = ComponentKind::conic;
            c.self_intersection = mul_i64(s.weights[i], c.constant_field.degree);
            c.multiplicity = 0;  // recomputed below from numerical triviality
            out.components.push_back(c);
        }
        i64 internal_deg = exc_x ? s.residue.degree : mul_i64(2, s.residue.degree);
        for (size_t i = 0; i + 1 < mm; ++i)
            out.edges.push_back({ids[i], ids[i + 1], {internal_deg, s.residue.separable}, true});
        // re-attach the outside divisors to the chain ends
        std::vector<std::pair<bool, std::string>> ends;
        if (s.str_variant == "Str2") {
            ends = {{false, ids.front()}, {false, ids.back()}};
        } else if (s.str_variant == "Str0") {
            ends = {{false, ids.front()}, {false, ids.back()}};
        } else {
            ends = {{true, ids.front()}};
        }
        for (size_t ei = 0; ei < ends.size(); ++ei) {
            const auto& inc = s.incident[std::min(ei, s.incident.size() - 1)];
            i64 deg = ends[ei].first ? mul_i64(2, s.residue.degree) : s.residue.degree;
            if (inc.is_branch) {
                for (auto& b : out.branches)
                    if (b.id == inc.id) {
                        b.on = ends[ei].second;
                        b.at_singular.clear();
                    }
            } else {
                out.edges.push_back({inc.id, ends[ei].second, {deg, s.residue.separable}, true});
            }
        }
        // multiplicities of the resolved chain from numerical triviality:
        // a tridiagonal integer system, solved exactly by Cramer's rule
        {
            std::vector<std::vector<__int128>> a(mm, std::vector<__int128>(mm, 0));
            std::vector<__int128> rhs(mm, 0);
            for (size_t i = 0; i < mm; ++i) {
                const auto* ci = out.find_component(ids[i]);
                a[i][i] = ci->self_intersection;
                for (const auto& e : out.edges) {
                    if (e.is_loop() || !e.touches(ids[i])) continue;
                    const std::string& o = e.a == ids[i] ? e.b : e.a;
                    bool internal = false;
                    for (size_t j = 0; j < mm; ++j)
                        if (ids[j] == o) {
                            a[i][j] += e.point.degree;
                            internal = true;
                        }
                    if (!internal)
                        rhs[i] -= static_cast<__int128>(out.component(o).multiplicity) *
                                  e.point.degree;
                }
            }
            auto det = [](std::vector<std::vector<__int128>> mtx) -> __int128 {
                size_t n = mtx.size();
                __int128 prev = 1;
                for (size_t k = 0; k + 1 < n; ++k) {
                    if (mtx[k][k] == 0) {
                        size_t swap_row = k + 1;
                        while (swap_row < n && mtx[swap_row][k] == 0) ++swap_row;
                        if (swap_row == n) return 0;
                        std::swap(mtx[k], mtx[swap_row]);
                        for (auto& v : mtx[k]) v = -v;
                    }
                    for (size_t i = k + 1; i < n; ++i)
                        for (size_t j = k + 1; j < n; ++j)
                            mtx[i][j] = (mtx[i][j] * mtx[k][k] - mtx[i][k] * mtx[k][j]) / prev;
                    prev = mtx[k][k];
                }
                return mtx[n - 1][n - 1];
            };
            __int128 d0 = det(a);
            if (d0 == 0) throw std::logic_error("resolved chain system is singular");
            for (size_t i = 0; i < mm; ++i) {
                auto ai = a;
                for (size_t r = 0; r < mm; ++r) ai[r][i] = rhs[r];
                __int128 mi = det(ai);
                if (mi % d0 != 0 || mi / d0 < 1)
                    throw std::logic_error("resolved chain multiplicities are not positive integers");
                out.find_component(ids[i])->multiplicity = static_cast<i64>(mi / d0);
            }
        }
    }
    std::erase_if(out.singular_points, [](const auto&) { return true; });
    out.regular = true;
    return out;
}

}  // namespace arithsurf
