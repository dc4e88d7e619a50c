#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "arithsurf/checked_int.hpp"

// Decorated dual graphs of special fibers of regular n.c.d. models (C, D):
// components with multiplicities, constant fields and self-intersections;
// edges for the double points of the fiber; marked boundary branches; and,
// after contraction, first-class singular-point records.

namespace arithsurf {

struct ResidueDatum {
    i64 degree = 1;    // degree over the base residue field k
    bool separable = true;

    friend bool operator==(const ResidueDatum&, const ResidueDatum&) = default;
    friend auto operator<=>(const ResidueDatum&, const ResidueDatum&) = default;
};

enum class ComponentKind {
    rational_with_point,  // isomorphic to P^1 over k(F)
    conic,                // smooth genus 0, no assumed rational point
    node_rational,        // irreducible, one geometric node, normalization P^1 over k''
    general,              // arbitrary genus, normal flag
};

inline const char* kind_name(ComponentKind k) {
    switch (k) {
        case ComponentKind::rational_with_point: return "P1";
        case ComponentKind::conic: return "conic";
        case ComponentKind::node_rational: return "node";
        case ComponentKind::general: return "general";
    }
    return "?";
}

struct PrimeComponent {
    std::string id;
    i64 multiplicity = 1;          // m_F in C_k
    ResidueDatum constant_field;   // k(F) = H^0(F, O_F) over k
    ComponentKind kind = ComponentKind::rational_with_point;
    i64 self_intersection = 0;     // the k-valued pairing (F.F)
    i64 genus = 0;                 // general kind: arithmetic genus over k(F)
    bool normal = true;            // general kind
    bool node_ext_separable = true;  // node_rational: the quadratic datum k''/k(F)

    // Arithmetic genus over k(F).  The node_rational kind contributes 0: its
    // geometric fiber is a conjugate pair of lines, so H^1(F, O_F) = 0.
    i64 pa() const {
        switch (kind) {
            case ComponentKind::general: return genus;
            default: return 0;
        }
    }

    friend bool operator==(const PrimeComponent&, const PrimeComponent&) = default;
};

struct IntersectionEdge {
    std::string a, b;     // endpoint component ids; a == b is a self-loop
    ResidueDatum point;   // k(c) over k
    bool split = true;    // self-loops only: two rational branches vs a conjugate pair

    bool is_loop() const { return a == b; }
    bool touches(const std::string& id) const { return a == id || b == id; }

    friend bool operator==(const IntersectionEdge&, const IntersectionEdge&) = default;
};

struct MarkedBranch {
    std::string id;
    std::string on;        // attached component id; empty if re-attached at a singular point
    i64 ram_index = 1;     // ramification index of O_K in the branch; equals m_{on}
    ResidueDatum residue;  // residue field of the branch's closed point over k
    std::string at_singular;  // singular point id when `on` is empty

    friend bool operator==(const MarkedBranch&, const MarkedBranch&) = default;
};

// Record of a contracted chain: the data that determines the toric structure
// of the resulting log regular point.
struct SingularPointRecord {
    struct Incidence {
        bool is_branch = false;
        std::string id;
        friend bool operator==(const Incidence&, const Incidence&) = default;
        friend auto operator<=>(const Incidence&, const Incidence&) = default;
    };

    std::string id;
    std::vector<i64> weights;    // a_1..a_m in the variant's normalization
    std::string exc_variant;     // Exc_x | Exc_o | Exc_e
    std::string str_variant;     // Str0 | Str1x | Str1 | Str2
    ResidueDatum residue;        // k' = H^0(E, O_E) over k
    i64 embedding_dim = 3;
    std::vector<Incidence> incident;

    friend bool operator==(const SingularPointRecord&, const SingularPointRecord&) = default;
};

struct FiberModel {
    i64 p = 0;  // residue characteristic, 0 or prime
    std::vector<PrimeComponent> components;
    std::vector<IntersectionEdge> edges;
    std::vector<MarkedBranch> branches;
    std::vector<SingularPointRecord> singular_points;
    bool regular = true;

    const PrimeComponent* find_component(const std::string& id) const {
        for (const auto& c : components)
            if (c.id == id) return &c;
        return nullptr;
    }
    PrimeComponent* find_component(const std::string& id) {
        for (auto& c : components)
            if (c.id == id) return &c;
        return nullptr;
    }
    const PrimeComponent& component(const std::string& id) const {
        const PrimeComponent* c = find_component(id);
        if (!c) throw std::invalid_argument("unknown component id: " + id);
        return *c;
    }
};

struct Diagnostic {
    std::string where;
    std::string what;
};

inline i64 intersection_number(const FiberModel& m, const std::string& i, const std::string& j) {
    const PrimeComponent& ci = m.component(i);
    if (i == j) return ci.self_intersection;
    m.component(j);
    i64 total = 0;
    for (const auto& e : m.edges)
        if (!e.is_loop() && e.touches(i) && e.touches(j)) total = add_i64(total, e.point.degree);
    return total;
}

struct IntersectionMatrix {
    std::vector<std::string> ids;
    std::vector<std::vector<i64>> entries;
    bool negative_definite = false;
};

namespace detail {

// Sign of the k-th leading principal minor via fraction-free elimination.
inline bool leading_minors_alternate(const std::vector<std::vector<i64>>& m) {
    size_t n = m.size();
    std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    __int128 prev = 1;
    for (size_t k = 0; k < n; ++k) {
        // Bareiss step; a[k][k] after elimination is the k+1-st leading minor
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        __int128 minor = a[k][k];
        bool want_negative = (k % 2 == 0);
        if (minor == 0) return false;
        if ((minor < 0) != want_negative) return false;
        prev = minor;
        if (prev == 0) return false;
    }
    return true;
}

}  // namespace detail

inline IntersectionMatrix intersection_matrix(const FiberModel& m,
                                              const std::vector<std::string>& subset) {
    IntersectionMatrix out;
    out.ids = subset;
    size_t n = subset.size();
    out.entries.assign(n, std::vector<i64>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            out.entries[i][j] = intersection_number(m, subset[i], subset[j]);
    out.negative_definite = n > 0 && detail::leading_minors_alternate(out.entries);
    return out;
}

// Arithmetic genus of the generic fiber from the special fiber:
// g = 1 + sum_i m_i ( [k(F_i):k] (pa_i - 1) - (F_i.F_i)/2 ).
// Cross-component double points enter through numerical triviality, which
// pins the self-intersections; self-loop edges are annotations of nodes
// already included in the component's own pa.
inline i64 arithmetic_genus(const FiberModel& m) {
    if (!m.regular)
        throw std::invalid_argument(
            "arithmetic_genus needs a regular model; resolve singular points first");
    i64 twice = 0;  // 2(g - 1)
    for (const auto& c : m.components) {
        i64 term = sub_i64(mul_i64(2, mul_i64(c.constant_field.degree, sub_i64(c.pa(), 1))),
                           c.self_intersection);
        twice = add_i64(twice, mul_i64(c.multiplicity, term));
    }
    if (twice % 2 != 0)
        throw std::invalid_argument("model is inconsistent: arithmetic genus is not an integer");
    return add_i64(1, twice / 2);
}

// r = sum over branches of e_i * f_i (henselian base: [L:K] = ef).
inline i64 boundary_rank(const FiberModel& m) {
    i64 r = 0;
    for (const auto& b : m.branches) r = add_i64(r, mul_i64(b.ram_index, b.residue.degree));
    return r;
}

inline std::vector<Diagnostic> validate(const FiberModel& m) {
    std::vector<Diagnostic> out;
    auto bad = [&](const std::string& where, const std::string& what) {
        out.push_back({where, what});
    };

    if (m.p < 0 || (m.p != 0 && !is_prime_i64(m.p))) bad("model", "p must be 0 or prime");
    if (m.components.empty()) bad("model", "no components");

    std::set<std::string> ids;
    for (const auto& c : m.components) {
        if (c.id.empty()) bad("component", "empty id");
        if (!ids.insert(c.id).second) bad(c.id, "duplicate component id");
        if (c.multiplicity < 1) bad(c.id, "multiplicity must be >= 1");
        if (c.constant_field.degree < 1) bad(c.id, "constant field degree must be >= 1");
        if (c.genus < 0) bad(c.id, "genus must be >= 0");
        bool needs_divisible = c.kind == ComponentKind::rational_with_point ||
                               c.kind == ComponentKind::conic ||
                               (c.kind == ComponentKind::general && c.normal);
        if (needs_divisible && c.constant_field.degree >= 1 &&
            c.self_intersection % c.constant_field.degree != 0)
            bad(c.id, "(F.F) must be divisible by [k(F):k]");
        if (c.kind == ComponentKind::node_rational && !c.node_ext_separable)
            bad(c.id, "node component needs a separable quadratic extension k''/k(F)");
        if (c.kind != ComponentKind::general && c.genus != 0)
            bad(c.id, "genus field is only meaningful for kind general");
    }

    std::set<std::string> singular_ids;
    for (const auto& s : m.singular_points) {
        if (!singular_ids.insert(s.id).second) bad(s.id, "duplicate singular point id");
        if (s.weights.empty()) bad(s.id, "singular point needs chain weights");
        i64 defect = 0;
        for (i64 a : s.weights) {
            if (a > -2) bad(s.id, "singular point weights must be <= -2");
            defect = add_i64(defect, add_i64(a, 2));
        }
        if (s.embedding_dim != sub_i64(3, defect))
            bad(s.id, "embedding dimension must equal 3 - sum(a_i + 2)");
        if (s.incident.empty()) bad(s.id, "singular point needs incident divisors");
        for (const auto& inc : s.incident) {
            if (inc.is_branch) {
                bool found = false;
                for (const auto& b : m.branches) found = found || b.id == inc.id;
                if (!found) bad(s.id, "incident branch does not exist: " + inc.id);
            } else if (!ids.count(inc.id)) {
                bad(s.id, "incident component does not exist: " + inc.id);
            }
        }
    }
    if (m.regular != m.singular_points.empty())
        bad("model", "regular flag must match absence of singular points");

    for (const auto& e : m.edges) {
        if (!ids.count(e.a) || !ids.count(e.b)) {
            bad(e.a + "-" + e.b, "edge endpoint does not exist");
            continue;
        }
        if (e.point.degree < 1) bad(e.a + "-" + e.b, "edge point degree must be >= 1");
        for (const std::string& end : {e.a, e.b}) {
            i64 kd = m.component(end).constant_field.degree;
            if (kd >= 1 && e.point.degree % kd != 0)
                bad(e.a + "-" + e.b, "point degree not divisible by [k(" + end + "):k]");
        }
        if (e.is_loop()) {
            const PrimeComponent& c = m.component(e.a);
            if (c.kind != ComponentKind::general || c.normal)
                bad(e.a, "self-loop nodes require kind general with normal = false");
        }
    }

    std::set<std::string> branch_ids;
    for (const auto& b : m.branches) {
        if (!branch_ids.insert(b.id).second) bad(b.id, "duplicate branch id");
        if (b.residue.degree < 1) bad(b.id, "branch residue degree must be >= 1");
        if (b.ram_index < 1) bad(b.id, "ramification index must be >= 1");
        if (b.on.empty()) {
            if (!singular_ids.count(b.at_singular))
                bad(b.id, "branch attached to unknown singular point");
            continue;
        }
        if (!ids.count(b.on)) {
            bad(b.id, "branch attached to unknown component " + b.on);
            continue;
        }
        const PrimeComponent& c = m.component(b.on);
        if (b.ram_index != c.multiplicity)
            bad(b.id, "ramification index must equal the multiplicity of " + b.on);
        if (c.constant_field.degree >= 1 && b.residue.degree % c.constant_field.degree != 0)
            bad(b.id, "branch residue degree not divisible by [k(" + b.on + "):k]");
    }

    // connectivity of the dual graph (through edges and singular points)
    if (!m.components.empty() && out.empty()) {
        std::map<std::string, std::set<std::string>> adj;
        for (const auto& e : m.edges)
            if (!e.is_loop()) {
                adj[e.a].insert(e.b);
                adj[e.b].insert(e.a);
            }
        for (const auto& s : m.singular_points) {
            std::vector<std::string> comps;
            for (const auto& inc : s.incident)
                if (!inc.is_branch) comps.push_back(inc.id);
            for (size_t i = 0; i + 1 < comps.size(); ++i) {
                adj[comps[i]].insert(comps[i + 1]);
                adj[comps[i + 1]].insert(comps[i]);
            }
        }
        std::set<std::string> seen;
        std::vector<std::string> stack{m.components.front().id};
        while (!stack.empty()) {
            std::string cur = stack.back();
            stack.pop_back();
            if (!seen.insert(cur).second) continue;
            for (const auto& n : adj[cur]) stack.push_back(n);
        }
        if (seen.size() != m.components.size())
            bad("model", "dual graph is not connected");
    }

    // numerical triviality: (F_i . pi O_C) = 0 for every vertical component
    if (m.regular && out.empty()) {
        for (const auto& c : m.components) {
            i64 total = mul_i64(c.multiplicity, c.self_intersection);
            for (const auto& e : m.edges) {
                if (e.is_loop() || !e.touches(c.id)) continue;
                const std::string& other = (e.a == c.id) ? e.b : e.a;
                total = add_i64(total, mul_i64(m.component(other).multiplicity, e.point.degree));
            }
            if (total != 0)
                bad(c.id, "numerical triviality violated: sum m_j (F.F_j) = " + std::to_string(total));
        }
        if (out.empty()) {
            try {
                arithmetic_genus(m);
            } catch (const std::invalid_argument& ex) {
                bad("model", ex.what());
            }
        }
    }
    return out;
}

inline void require_valid(const FiberModel& m) {
    auto diags = validate(m);
    if (!diags.empty())
        throw std::invalid_argument("invalid model: " + diags.front().where + ": " + diags.front().what);
}

// Canonical ordering for model comparison: moves keep component ids stable,
// so two models are compared attribute-by-attribute after sorting.
inline FiberModel canonicalize(FiberModel m) {
    std::sort(m.components.begin(), m.components.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    for (auto& e : m.edges)
        if (e.b < e.a) std::swap(e.a, e.b);
    std::sort(m.edges.begin(), m.edges.end(), [](const auto& a, const auto& b) {
        return std::tie(a.a, a.b, a.point, a.split) < std::tie(b.a, b.b, b.point, b.split);
    });
    std::sort(m.branches.begin(), m.branches.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    std::sort(m.singular_points.begin(), m.singular_points.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    return m;
}

inline bool models_equal(const FiberModel& a, const FiberModel& b) {
    FiberModel ca = canonicalize(a), cb = canonicalize(b);
    return ca.p == cb.p && ca.components == cb.components && ca.edges == cb.edges &&
           ca.branches == cb.branches && ca.singular_points == cb.singular_points &&
           ca.regular == cb.regular;
}

// Decorated-multigraph isomorphism, ignoring ids.  Small models only; used by
// the confluence tests where uniqueness is "up to canonical isomorphism".
inline bool models_isomorphic(const FiberModel& a, const FiberModel& b) {
    if (a.components.size() != b.components.size() || a.edges.size() != b.edges.size() ||
        a.branches.size() != b.branches.size() ||
        a.singular_points.size() != b.singular_points.size())
        return false;
    FiberModel ca = canonicalize(a), cb = canonicalize(b);
    std::vector<size_t> perm(cb.components.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    auto attr_equal = [](const PrimeComponent& x, const PrimeComponent& y) {
        return x.multiplicity == y.multiplicity && x.constant_field == y.constant_field &&
               x.kind == y.kind && x.self_intersection == y.self_intersection &&
               x.genus == y.genus && x.normal == y.normal &&
               x.node_ext_separable == y.node_ext_separable;
    };
    std::sort(perm.begin(), perm.end());
    do {
        std::map<std::string, std::string> rename;  // b id -> a id
        bool ok = true;
        for (size_t i = 0; i < perm.size() && ok; ++i) {
            ok = attr_equal(ca.components[i], cb.components[perm[i]]);
            rename[cb.components[perm[i]].id] = ca.components[i].id;
        }
        if (!ok) continue;
        auto scrub_singular = [](FiberModel& m) {
            for (auto& s : m.singular_points) {
                s.id = "*";
                std::sort(s.incident.begin(), s.incident.end());
            }
            std::sort(m.singular_points.begin(), m.singular_points.end(),
                      [](const SingularPointRecord& x, const SingularPointRecord& y) {
                          return std::tie(x.weights, x.exc_variant, x.str_variant, x.residue,
                                          x.incident) <
                                 std::tie(y.weights, y.exc_variant, y.str_variant, y.residue,
                                          y.incident);
                      });
        };
        FiberModel renamed = cb;
        for (auto& c : renamed.components) c.id = rename[c.id];
        for (auto& e : renamed.edges) {
            e.a = rename[e.a];
            e.b = rename[e.b];
        }
        for (auto& br : renamed.branches)
            if (!br.on.empty()) br.on = rename[br.on];
        for (auto& s : renamed.singular_points)
            for (auto& inc : s.incident)
                if (!inc.is_branch) inc.id = rename[inc.id];
        FiberModel ca2 = ca;
        renamed = canonicalize(renamed);
        ca2 = canonicalize(ca2);
        scrub_singular(renamed);
        scrub_singular(ca2);
        if (ca2.components == renamed.components && ca2.edges == renamed.edges &&
            ca2.branches == renamed.branches && ca2.singular_points == renamed.singular_points)
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace arithsurf
