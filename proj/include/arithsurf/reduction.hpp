#pragma once

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "arithsurf/classify.hpp"
#include "arithsurf/fiber_model.hpp"
#include "arithsurf/moves.hpp"

// Reduction-type verdicts: log smoothness over the log base, semistability,
// stability, e_min, and the base-change divisibility predicate.  p = 0
// encodes residue characteristic zero: divisibility clauses pass vacuously,
// separability flags are still enforced.

namespace arithsurf {

inline bool log_smooth_at_node(i64 m1, i64 m2, ResidueDatum point, i64 p) {
    if (m1 < 1 || m2 < 1) throw std::invalid_argument("node multiplicities must be >= 1");
    if (p != 0 && !is_prime_i64(p)) throw std::invalid_argument("p must be 0 or prime");
    bool prime_to_p = (p == 0) || (gcd_i64(m1, m2) % p != 0);
    return prime_to_p && point.separable;
}

struct Witness {
    std::string kind;  // component | edge | branch | node
    std::string id;
    std::string clause;
};

struct LogSmoothResult {
    bool ok = false;
    std::vector<Witness> witnesses;
    std::vector<std::string> notes;
};

namespace detail {

// Independent re-derivation of the structural consequence for p-divisible
// components of a log smooth model: each such F satisfies condition ((0,2)),
// i.e. F is a smooth genus-0 curve with separable constants meeting the rest
// in an etale double locus, and its neighbors have prime-to-p multiplicity.
// Deliberately avoids e_sets so that the cross-check is a real consistency
// test and not a tautology.
inline bool pstr_consistent(const FiberModel& m, i64 p) {
    if (p == 0) return true;
    for (const auto& c : m.components) {
        if (c.multiplicity % p != 0) continue;
        if (!is_smooth_genus_zero(c) || !c.constant_field.separable) return false;
        i64 rank_over_kf = 0;
        for (const auto& e : m.edges) {
            if (e.is_loop() && e.a == c.id) return false;
            if (e.is_loop() || !e.touches(c.id)) continue;
            if (!e.point.separable) return false;
            const auto& other = m.component(e.a == c.id ? e.b : e.a);
            if (other.multiplicity % p == 0) return false;
            rank_over_kf += e.point.degree / c.constant_field.degree;
        }
        for (const auto& b : m.branches)
            if (b.on == c.id) return false;  // D ^ F must be empty
        if (rank_over_kf != 2) return false;
    }
    return true;
}

}  // namespace detail

// Log smoothness of the minimal n.c.d. model over the log base, clause by
// clause, with a structured witness per violation.
inline LogSmoothResult is_log_smooth(const FiberModel& m, i64 p) {
    if (p != 0 && !is_prime_i64(p)) throw std::invalid_argument("p must be 0 or prime");
    if (!m.regular) throw precondition_error("is_log_smooth", "expects a regular n.c.d. model");
    if (!e_sets(m).eq_minus1.empty())
        throw precondition_error("is_log_smooth", "expects the minimal n.c.d. model");
    LogSmoothResult res;
    auto witness = [&](const std::string& kind, const std::string& id, const std::string& clause) {
        res.witnesses.push_back({kind, id, clause});
    };

    // branches: at most tame ramification over O_K
    for (const auto& b : m.branches) {
        if (p != 0 && b.ram_index % p == 0)
            witness("branch", b.id, "ramification index divisible by p (wild)");
        if (!b.residue.separable) witness("branch", b.id, "inseparable branch residue field");
    }

    ESets es = e_sets(m);
    for (const auto& c : m.components) {
        bool p_divides = p != 0 && c.multiplicity % p == 0;
        if (!p_divides) {
            if (!c.constant_field.separable)
                witness("component", c.id, "constant field k(F) inseparable over k");
            if (c.kind == ComponentKind::general && !c.normal && !has_self_loop(m, c.id))
                witness("component", c.id, "not smooth outside the double points");
        } else {
            if (!es.p2.count(c.id) && !es.zo1p.count(c.id))
                witness("component", c.id,
                        "p | m_F but F is not in E_{0,1'} u E_{P,2}");
            if (!c.constant_field.separable)
                witness("component", c.id, "p | m_F and k(F) inseparable over k");
            for (const auto& e : m.edges) {
                if (e.is_loop() || !e.touches(c.id)) continue;
                const auto& other = m.component(e.a == c.id ? e.b : e.a);
                if (other.multiplicity % p == 0)
                    witness("component", c.id,
                            "p | m_F and p divides the multiplicity of neighbor " + other.id);
            }
        }
    }

    // the double points: gcd of the two multiplicities prime to p, residue
    // separable
    for (const auto& e : m.edges) {
        i64 m1 = m.component(e.a).multiplicity;
        i64 m2 = m.component(e.b).multiplicity;
        if (!log_smooth_at_node(m1, m2, e.point, p)) {
            std::string clause = (p != 0 && gcd_i64(m1, m2) % p == 0)
                                     ? "p | gcd(m_1, m_2) at the node"
                                     : "inseparable residue field at the node";
            witness("node", e.a + "^" + e.b, clause);
        }
    }
    for (const auto& c : m.components) {
        if (c.kind != ComponentKind::node_rational) continue;
        ResidueDatum node_pt = c.constant_field;  // the node is k(F)-rational
        if (!log_smooth_at_node(c.multiplicity, c.multiplicity, node_pt, p)) {
            std::string clause = (p != 0 && c.multiplicity % p == 0)
                                     ? "p | m_F at the self-node"
                                     : "inseparable residue field at the self-node";
            witness("node", c.id + "^" + c.id, clause);
        }
    }
    // branch attach points are nodes of C_k u D with multiplicities (m_F, 0);
    // their condition coincides with branch tameness, already recorded above

    res.ok = res.witnesses.empty();
    if (res.ok && !detail::pstr_consistent(m, p))
        res.notes.push_back(
            "internally inconsistent: passes the clause checks but violates the p-divisible "
            "structure theorem");
    return res;
}

// Semistable <=> the special fiber is reduced with only ordinary double
// points: all multiplicities 1, all crossings transversal with separable
// residue, no internal non-node singularities.
inline bool is_semistable(const FiberModel& m) {
    if (!m.regular) throw precondition_error("is_semistable", "expects a regular n.c.d. model");
    for (const auto& c : m.components) {
        if (c.multiplicity != 1) return false;
        switch (c.kind) {
            case ComponentKind::rational_with_point:
            case ComponentKind::conic: break;
            case ComponentKind::node_rational:
                if (!c.node_ext_separable || !c.constant_field.separable) return false;
                break;
            case ComponentKind::general:
                if (!c.normal && !has_self_loop(m, c.id)) return false;
                if (!c.constant_field.separable) return false;
                break;
        }
    }
    for (const auto& e : m.edges)
        if (!e.point.separable) return false;
    return true;
}

struct StableResult {
    bool stable = false;
    std::vector<std::string> notes;
};

namespace detail {

// Geometric special points on one geometric copy of a smooth rational
// component: nodes, branch points and contracted singular points, counted on
// the geometric fiber.
inline bool stable_three_points(const FiberModel& m) {
    for (const auto& c : m.components) {
        i64 kd = c.constant_field.degree;
        bool smooth_rational = is_smooth_genus_zero(c) && !has_self_loop(m, c.id);
        bool node_lines = c.kind == ComponentKind::node_rational;
        if (!smooth_rational && !node_lines) continue;
        i64 copies_scale = node_lines ? mul_i64(2, kd) : kd;
        i64 count = node_lines ? 1 : 0;  // each line of the node shape sees the node once
        for (const auto& e : m.edges) {
            if (e.is_loop() || !e.touches(c.id)) continue;
            count = add_i64(count, floor_div(e.point.degree, copies_scale));
        }
        for (const auto& b : m.branches)
            if (b.on == c.id) count = add_i64(count, floor_div(b.residue.degree, copies_scale));
        for (const auto& s : m.singular_points)
            for (const auto& inc : s.incident)
                if (!inc.is_branch && inc.id == c.id)
                    count = add_i64(count, floor_div(s.residue.degree, copies_scale));
        if (count < 3) return false;
    }
    return true;
}

}  // namespace detail

// Stability of the minimal log regular model: reduced fiber, nodes only,
// every genus-0 component with >= 3 special geometric points, marked branches
// etale.  Cross-checked against the prime-to-p shortcut
// stable <=> (log smooth and reduced fiber).
inline StableResult is_stable(const LregResult& lreg, const LogSmoothResult& log_smooth) {
    StableResult res;
    const FiberModel& m = lreg.model;
    bool reduced = true;
    for (const auto& c : m.components) reduced = reduced && c.multiplicity == 1;

    bool nodal = true;
    for (const auto& c : m.components) {
        switch (c.kind) {
            case ComponentKind::rational_with_point:
            case ComponentKind::conic: break;
            case ComponentKind::node_rational:
                nodal = nodal && c.node_ext_separable && c.constant_field.separable;
                break;
            case ComponentKind::general:
                if (!c.normal && !has_self_loop(m, c.id)) nodal = false;
                nodal = nodal && c.constant_field.separable;
                break;
        }
    }
    for (const auto& e : m.edges) nodal = nodal && e.point.separable;
    for (const auto& s : m.singular_points) nodal = nodal && s.residue.separable;

    bool branches_etale = true;
    for (const auto& b : m.branches)
        branches_etale = branches_etale && b.ram_index == 1 && b.residue.separable;

    res.stable = reduced && nodal && branches_etale && detail::stable_three_points(m);

    if (log_smooth.ok && res.stable != (log_smooth.ok && reduced))
        res.notes.push_back(
            "internally inconsistent: direct stability check disagrees with the "
            "log-smooth-and-reduced criterion");
    return res;
}

// Least common multiple of the multiplicities of the C_lreg fiber; the
// structure theorem guarantees p never divides it on log smooth models.
inline i64 e_min(const LregResult& lreg, i64 p, bool log_smooth_ok) {
    if (!log_smooth_ok)
        throw precondition_error("e_min", "defined only for models with log smooth reduction");
    i64 e = 1;
    for (const auto& c : lreg.model.components) e = lcm_i64(e, c.multiplicity);
    if (p != 0 && e % p == 0)
        throw precondition_error("e_min",
                                 "p divides lcm of multiplicities on a log smooth model; "
                                 "input is inconsistent");
    return e;
}

inline bool stable_after_base_change(i64 e_min_value, i64 e_prime) {
    if (e_min_value < 1 || e_prime < 1)
        throw std::invalid_argument("ramification indices must be >= 1");
    return e_prime % e_min_value == 0;
}

struct ModelReport {
    FiberModel input;
    i64 p = 0;
    i64 g = 0;
    i64 r = 0;
    FiberModel ncd;
    LregResult lreg;
    bool log_smooth = false;
    std::vector<Witness> log_smooth_witnesses;
    bool semistable = false;
    bool stable = false;
    std::optional<i64> e_min_value;
    std::vector<std::string> notes;
};

inline ModelReport classify_model(const FiberModel& input, std::optional<i64> p_override = {}) {
    bool verbose = std::getenv("ARITHSURF_LOG") != nullptr;
    auto log = [&](const char* stage) {
        if (verbose) std::fprintf(stderr, "[arithsurf] %s\n", stage);
    };
    ModelReport rep;
    rep.input = input;
    rep.p = p_override.value_or(input.p);
    if (rep.p < 0 || (rep.p != 0 && !is_prime_i64(rep.p)))
        throw precondition_error("classify", "p must be 0 or prime");
    FiberModel work = input;
    work.p = rep.p;

    log("validate");
    auto diags = validate(work);
    if (!diags.empty())
        throw precondition_error("validate", diags.front().where + ": " + diags.front().what);
    rep.g = arithmetic_genus(work);
    rep.r = boundary_rank(work);
    if (add_i64(mul_i64(2, rep.g), rep.r) - 2 <= 0)
        throw precondition_error("hyperbolicity", "2g + r - 2 <= 0");

    log("minimal_ncd");
    rep.ncd = minimal_ncd(work);
    log("build_lreg");
    rep.lreg = build_lreg(rep.ncd);
    log("verdicts");
    LogSmoothResult ls = is_log_smooth(rep.ncd, rep.p);
    rep.log_smooth = ls.ok;
    rep.log_smooth_witnesses = ls.witnesses;
    for (const auto& n : ls.notes) rep.notes.push_back(n);
    rep.semistable = is_semistable(rep.ncd);
    StableResult st = is_stable(rep.lreg, ls);
    rep.stable = st.stable;
    for (const auto& n : st.notes) rep.notes.push_back(n);
    if (ls.ok) {
        try {
            rep.e_min_value = e_min(rep.lreg, rep.p, true);
        } catch (const precondition_error& ex) {
            rep.notes.push_back(ex.what());
        }
    }
    if (rep.stable && !rep.semistable)
        rep.notes.push_back("internally inconsistent: stable without semistable");
    if (rep.semistable && !rep.log_smooth)
        rep.notes.push_back("internally inconsistent: semistable without log smooth");
    return rep;
}

}  // namespace arithsurf
