#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arithsurf/classify.hpp"
#include "arithsurf/fiber_model.hpp"

// Birational moves on fiber models: blow-up at a closed point, blow-down of
// an exceptional curve of the first kind, and reduction to the minimal
// regular n.c.d. model.  All degree bookkeeping follows the contraction
// formulas (F'_1.F'_2) = (F_1.F_2) - (F_1.E)(F_2.E)/(E.E) and
// (F'.F') = (F.F) + (F.E)^2/[k(E):k].

namespace arithsurf {

// Either a point on one component away from the double points, or an
// existing double point given by its edge index.
struct PointSpec {
    std::optional<std::string> component;  // smooth-point case
    ResidueDatum point;                    // its residue datum over k
    std::optional<size_t> edge_index;      // node case

    static PointSpec on_component(std::string id, ResidueDatum rd) {
        PointSpec s;
        s.component = std::move(id);
        s.point = rd;
        return s;
    }
    static PointSpec at_edge(size_t index) {
        PointSpec s;
        s.edge_index = index;
        return s;
    }
};

namespace detail {

inline std::string fresh_component_id(const FiberModel& m) {
    for (int n = 1;; ++n) {
        std::string id = "E" + std::to_string(n);
        if (!m.find_component(id)) return id;
    }
}

}  // namespace detail

inline FiberModel blow_up(const FiberModel& m, const PointSpec& where,
                          std::string new_id = std::string()) {
    if (!m.regular)
        throw precondition_error("blow_up", "model has contracted singular points");
    FiberModel out = m;
    if (new_id.empty()) new_id = detail::fresh_component_id(m);
    if (m.find_component(new_id))
        throw precondition_error("blow_up", "component id already taken: " + new_id);

    PrimeComponent exc;
    exc.id = new_id;
    exc.kind = ComponentKind::rational_with_point;

    if (where.component) {
        // blow-up at a closed point on one component, away from the nodes
        const std::string fid = *where.component;
        PrimeComponent* f = out.find_component(fid);
        if (!f) throw precondition_error("blow_up", "unknown component " + fid);
        i64 d = where.point.degree;
        if (d < 1 || d % f->constant_field.degree != 0)
            throw precondition_error(
                "blow_up", "point residue degree must be a positive multiple of [k(F):k]");
        exc.multiplicity = f->multiplicity;
        exc.constant_field = where.point;
        exc.self_intersection = neg_i64(d);
        f->self_intersection = sub_i64(f->self_intersection, d);
        out.components.push_back(exc);
        out.edges.push_back({fid, new_id, where.point, true});
        return out;
    }
    if (!where.edge_index) throw precondition_error("blow_up", "empty point specification");
    if (*where.edge_index >= m.edges.size())
        throw precondition_error("blow_up", "edge index out of range");
    IntersectionEdge e = m.edges[*where.edge_index];
    i64 d = e.point.degree;
    exc.constant_field = e.point;
    exc.self_intersection = neg_i64(d);
    out.edges.erase(out.edges.begin() + static_cast<long>(*where.edge_index));
    if (!e.is_loop()) {
        PrimeComponent* f = out.find_component(e.a);
        PrimeComponent* g = out.find_component(e.b);
        exc.multiplicity = add_i64(f->multiplicity, g->multiplicity);
        f->self_intersection = sub_i64(f->self_intersection, d);
        g->self_intersection = sub_i64(g->self_intersection, d);
        out.components.push_back(exc);  // f, g dangle past this point
        out.edges.push_back({e.a, new_id, e.point, true});
        out.edges.push_back({e.b, new_id, e.point, true});
        return out;
    }
    // self-loop: the node separates into E meeting the strict transform at
    // the two branches; the component's own arithmetic genus drops
    PrimeComponent* f = out.find_component(e.a);
    if (f->kind != ComponentKind::general)
        throw precondition_error("blow_up", "self-loop on a non-general component");
    i64 delta = exact_div(d, f->constant_field.degree);
    if (f->genus < delta)
        throw precondition_error("blow_up", "self-loop genus bookkeeping underflow");
    exc.multiplicity = mul_i64(2, f->multiplicity);
    f->self_intersection = sub_i64(f->self_intersection, mul_i64(4, d));
    f->genus = sub_i64(f->genus, delta);
    bool loops_left = false;
    for (const auto& other : out.edges) loops_left = loops_left || (other.is_loop() && other.a == e.a);
    if (!loops_left && f->genus == 0) f->normal = true;
    out.components.push_back(exc);  // f dangles past this point
    if (e.split) {
        out.edges.push_back({e.a, new_id, {d, e.point.separable}, true});
        out.edges.push_back({e.a, new_id, {d, e.point.separable}, true});
    } else {
        // conjugate branches form a single quadratic point on E
        out.edges.push_back({e.a, new_id, {mul_i64(2, d), e.point.separable}, true});
    }
    return out;
}

inline FiberModel blow_down(const FiberModel& m, const std::string& e_id) {
    const PrimeComponent& exc = m.component(e_id);
    if (exc.kind != ComponentKind::rational_with_point)
        throw precondition_error("blow_down", e_id + " is not a projective line over k(E)");
    i64 d = exc.constant_field.degree;
    if (exc.self_intersection != neg_i64(d))
        throw precondition_error("blow_down",
                                 e_id + " is not an exceptional curve of the first kind: (E.E) != -[k(E):k]");
    ESets es = e_sets(m);
    if (!es.eq_minus1.count(e_id))
        throw precondition_error("blow_down", e_id + " is not a member of E_{=-1}");

    // gather the contact points of E (each edge or branch is one point)
    struct ContactPoint {
        bool is_branch;
        std::string other;   // component id or branch id
        i64 degree;          // over k
        bool separable;
    };
    std::vector<ContactPoint> pts;
    for (const auto& e : m.edges) {
        if (e.is_loop() && e.a == e_id)
            throw precondition_error("blow_down", e_id + " crosses itself");
        if (!e.touches(e_id)) continue;
        pts.push_back({false, e.a == e_id ? e.b : e.a, e.point.degree, e.point.separable});
    }
    for (const auto& b : m.branches)
        if (b.on == e_id) pts.push_back({true, b.id, b.residue.degree, b.residue.separable});

    size_t fiber_contacts = 0;
    for (const auto& c : pts)
        if (!c.is_branch) ++fiber_contacts;
    if (fiber_contacts == 0)
        throw precondition_error("blow_down", "no fiber component passes through the image point");

    FiberModel out = m;
    std::erase_if(out.components, [&](const auto& c) { return c.id == e_id; });
    std::erase_if(out.edges, [&](const auto& e) { return e.touches(e_id); });

    // self-intersection updates: (F'.F') = (F.F) + (F.E)^2 / (E.E) sign-corrected
    std::map<std::string, i64> pairing;  // (F.E) per neighbor component
    for (const auto& c : pts)
        if (!c.is_branch) pairing[c.other] = add_i64(pairing.count(c.other) ? pairing[c.other] : 0,
                                                     c.degree);
    for (const auto& [fid, fe] : pairing) {
        PrimeComponent* f = out.find_component(fid);
        f->self_intersection = add_i64(f->self_intersection, exact_div(mul_i64(fe, fe), d));
    }

    // marked branches on E re-attach to the unique fiber component through
    // the image point
    for (auto& b : out.branches) {
        if (b.on != e_id) continue;
        if (fiber_contacts != 1 || pts.size() != 2)
            throw precondition_error(
                "blow_down", "branch through E needs exactly one fiber component at the image point");
        std::string target;
        for (const auto& c : pts)
            if (!c.is_branch) target = c.other;
        const PrimeComponent& f = out.component(target);
        if (b.ram_index != f.multiplicity)
            throw precondition_error("blow_down",
                                     "re-attached branch would violate the ramification-index "
                                     "invariant on " + target);
        b.on = target;
    }

    if (pts.size() == 2) {
        // two k(E)-rational image branches through the image point
        const ContactPoint &c1 = pts[0], &c2 = pts[1];
        auto attach = [&](const ContactPoint& c) { return c.is_branch ? std::string() : c.other; };
        std::string f1 = attach(c1), f2 = attach(c2);
        bool sep = exc.constant_field.separable;
        if (!f1.empty() && !f2.empty()) {
            if (f1 != f2) {
                // new double point of residue k(E): increment (F.G) by
                // (F.E)(G.E)/[k(E):k] = d
                out.edges.push_back({f1, f2, {d, sep}, true});
            } else {
                // both branches on one component: it acquires a split node
                PrimeComponent* f = out.find_component(f1);
                i64 delta = exact_div(d, f->constant_field.degree);
                if (f->kind == ComponentKind::node_rational)
                    out.edges.push_back(
                        {f1, f1, {f->constant_field.degree, f->node_ext_separable}, false});
                f->genus = add_i64(f->pa(), delta);
                f->kind = ComponentKind::general;
                f->normal = false;
                out.edges.push_back({f1, f1, {d, sep}, true});
            }
        }
        // branch + component pairs need no new edge: the branch re-attachment
        // above already records the contact
        return out;
    }

    // single contact point
    const ContactPoint& c = pts[0];
    if (c.is_branch) throw precondition_error("blow_down", "image point carries only a branch");
    i64 over_e = exact_div(c.degree, d);
    if (over_e == 1) return out;  // plain inverse of a smooth-point blow-up

    // over_e == 2 (E in E_{P,1'}): the image component folds at the point
    PrimeComponent* f = out.find_component(c.other);
    i64 kd_f = f->constant_field.degree;
    if (c.degree == kd_f) {
        // the contact point is k(F)-rational: badcurves shape; constants drop
        // to k(E) and the normalization stays P^1 over the old k(F)
        if (f->kind != ComponentKind::rational_with_point)
            throw precondition_error("blow_down",
                                     "cannot record a node shape on a component without a "
                                     "rational point: " + c.other);
        f->kind = ComponentKind::node_rational;
        f->node_ext_separable = c.separable;
        f->constant_field = exc.constant_field;
    } else if (c.degree == mul_i64(2, kd_f)) {
        // conjugate pair of branches on one component: geometrically
        // irreducible node
        i64 delta = exact_div(d, kd_f);
        if (f->kind == ComponentKind::node_rational)
            out.edges.push_back(
                {f->id, f->id, {f->constant_field.degree, f->node_ext_separable}, false});
        f->genus = add_i64(f->pa(), delta);
        f->kind = ComponentKind::general;
        f->normal = false;
        out.edges.push_back({f->id, f->id, {d, exc.constant_field.separable}, false});
    } else {
        throw precondition_error("blow_down", "contact degree incompatible with k(F)");
    }
    return out;
}

// Contracts E_{=-1} members until none remain.  Deterministic order (lowest
// id) by default; the chooser hook lets the tests drive other orders for the
// confluence property.
inline FiberModel minimal_ncd(
    const FiberModel& m,
    const std::function<std::string(const std::vector<std::string>&)>& chooser = {}) {
    require_valid(m);
    if (!m.regular) throw precondition_error("minimal_ncd", "model has contracted singular points");
    i64 g = arithmetic_genus(m);
    i64 r = boundary_rank(m);
    if (add_i64(mul_i64(2, g), r) - 2 <= 0)
        throw precondition_error("minimal_ncd",
                                 "2g + r - 2 <= 0: minimal n.c.d. models need not be unique");
    FiberModel cur = m;
    while (true) {
        ESets es = e_sets(cur);
        if (es.eq_minus1.empty()) return cur;
        std::vector<std::string> candidates(es.eq_minus1.begin(), es.eq_minus1.end());
        std::string pick = chooser ? chooser(candidates) : candidates.front();
        cur = blow_down(cur, pick);
    }
}

}  // namespace arithsurf
