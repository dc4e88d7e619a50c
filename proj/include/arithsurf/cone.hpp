#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "arithsurf/checked_int.hpp"

// Exact rank-2 lattice geometry: strongly convex cones, their coarsest
// nonsingular subdivisions (Hirzebruch-Jung chains), dual-monoid panels, and
// the chain <-> cone correspondence.

namespace arithsurf {

struct LatticeVector {
    i64 x = 0;
    i64 y = 0;

    friend bool operator==(const LatticeVector&, const LatticeVector&) = default;
    friend auto operator<=>(const LatticeVector&, const LatticeVector&) = default;
};

inline LatticeVector operator+(LatticeVector a, LatticeVector b) {
    return {add_i64(a.x, b.x), add_i64(a.y, b.y)};
}
inline LatticeVector operator-(LatticeVector a, LatticeVector b) {
    return {sub_i64(a.x, b.x), sub_i64(a.y, b.y)};
}
inline LatticeVector operator-(LatticeVector a) { return {neg_i64(a.x), neg_i64(a.y)}; }
inline LatticeVector operator*(i64 c, LatticeVector a) {
    return {mul_i64(c, a.x), mul_i64(c, a.y)};
}

inline i64 det2(LatticeVector a, LatticeVector b) {
    return sub_i64(mul_i64(a.x, b.y), mul_i64(a.y, b.x));
}

inline bool is_zero(LatticeVector a) { return a.x == 0 && a.y == 0; }

inline bool is_primitive(LatticeVector a) {
    return !is_zero(a) && gcd_i64(a.x, a.y) == 1;
}

inline LatticeVector make_primitive(LatticeVector a) {
    if (is_zero(a)) throw std::invalid_argument("zero vector has no primitive representative");
    i64 g = gcd_i64(a.x, a.y);
    return {a.x / g, a.y / g};
}

// An element of the dual lattice L^v, acting by (p,q).(x,y) = px + qy.
struct Functional2 {
    i64 p = 0;
    i64 q = 0;

    i64 operator()(LatticeVector v) const { return add_i64(mul_i64(p, v.x), mul_i64(q, v.y)); }

    friend bool operator==(const Functional2&, const Functional2&) = default;
    friend auto operator<=>(const Functional2&, const Functional2&) = default;
};

inline Functional2 operator+(Functional2 a, Functional2 b) {
    return {add_i64(a.p, b.p), add_i64(a.q, b.q)};
}
inline Functional2 operator-(Functional2 a, Functional2 b) {
    return {sub_i64(a.p, b.p), sub_i64(a.q, b.q)};
}
inline Functional2 operator*(i64 c, Functional2 a) {
    return {mul_i64(c, a.p), mul_i64(c, a.q)};
}

// det(r, .) as an element of L^v; vanishes on the ray through r, positive
// counterclockwise of it.
inline Functional2 ray_normal(LatticeVector r) { return {neg_i64(r.y), r.x}; }

// A strongly convex full-dimensional rational cone, stored with primitive
// generators and det(u, v) > 0.
struct Cone2 {
    LatticeVector u;
    LatticeVector v;

    Cone2(LatticeVector gu, LatticeVector gv) {
        if (is_zero(gu) || is_zero(gv))
            throw std::invalid_argument("cone generator must be nonzero");
        gu = make_primitive(gu);
        gv = make_primitive(gv);
        i64 d = det2(gu, gv);
        if (d == 0)
            throw std::invalid_argument("cone generators are collinear (not strongly convex and full-dimensional)");
        if (d < 0) std::swap(gu, gv);
        u = gu;
        v = gv;
    }

    i64 det() const { return det2(u, v); }

    // Closed membership test.
    bool contains(LatticeVector z) const {
        return det2(u, z) >= 0 && det2(z, v) >= 0;
    }

    friend bool operator==(const Cone2&, const Cone2&) = default;
};

inline bool is_nonsingular(const Cone2& cone) { return cone.det() == 1; }

// Rays l_0..l_{m+1} of the coarsest nonsingular subdivision, listed
// counterclockwise, with the self-intersection weights a_1..a_m of the
// interior rays.  Invariants: det(l_i, l_{i+1}) = 1 and
// l_{i-1} + a_i l_i + l_{i+1} = 0 with a_i <= -2.
struct ResolutionChain {
    std::vector<LatticeVector> rays;
    std::vector<i64> weights;

    int interior_count() const { return static_cast<int>(weights.size()); }

    Cone2 cone() const { return Cone2(rays.front(), rays.back()); }
};

namespace detail {

// Some w with det(base, w) = 1; exists since base is primitive.
inline LatticeVector unimodular_complement(LatticeVector base) {
    // base.x * w.y - base.y * w.x = 1
    i64 old_r = base.x, r = base.y;
    i64 old_s = 1, s = 0;
    i64 old_t = 0, t = 1;
    while (r != 0) {
        i64 q = old_r / r;
        i64 tmp = sub_i64(old_r, mul_i64(q, r));
        old_r = r;
        r = tmp;
        tmp = sub_i64(old_s, mul_i64(q, s));
        old_s = s;
        s = tmp;
        tmp = sub_i64(old_t, mul_i64(q, t));
        old_t = t;
        t = tmp;
    }
    // old_r = gcd = +-1, base.x*old_s + base.y*old_t = old_r
    if (old_r == -1) {
        old_s = neg_i64(old_s);
        old_t = neg_i64(old_t);
    } else if (old_r != 1) {
        throw std::logic_error("unimodular_complement: generator not primitive");
    }
    return {neg_i64(old_t), old_s};
}

inline i64 chain_weight(LatticeVector prev, LatticeVector cur, LatticeVector next) {
    // prev + a*cur + next = 0
    LatticeVector s = prev + next;
    i64 a;
    if (cur.x != 0) {
        a = exact_div(neg_i64(s.x), cur.x);
        if (add_i64(s.y, mul_i64(a, cur.y)) != 0)
            throw std::logic_error("chain relation has no integer solution");
    } else {
        a = exact_div(neg_i64(s.y), cur.y);
        if (s.x != 0) throw std::logic_error("chain relation has no integer solution");
    }
    return a;
}

}  // namespace detail

inline void validate_chain(const ResolutionChain& chain) {
    if (chain.rays.size() < 2) throw std::invalid_argument("chain needs at least the two boundary rays");
    if (chain.weights.size() + 2 != chain.rays.size())
        throw std::invalid_argument("chain weight count must be ray count minus 2");
    for (const auto& r : chain.rays)
        if (!is_primitive(r)) throw std::invalid_argument("chain rays must be primitive");
    for (size_t i = 0; i + 1 < chain.rays.size(); ++i)
        if (det2(chain.rays[i], chain.rays[i + 1]) != 1)
            throw std::invalid_argument("consecutive chain rays must form an oriented Z-basis");
    for (size_t i = 1; i + 1 < chain.rays.size(); ++i) {
        i64 a = detail::chain_weight(chain.rays[i - 1], chain.rays[i], chain.rays[i + 1]);
        if (a != chain.weights[i - 1])
            throw std::invalid_argument("chain relation l_{i-1} + a_i l_i + l_{i+1} = 0 violated");
        if (a > -2) throw std::invalid_argument("interior chain weight must be <= -2");
    }
}

// Coarsest nonsingular subdivision of the cone: the rays are the lattice
// points on the compact edges of the boundary of conv((cone ^ L) \ {0}).
// Computed by iterating the lattice-reduction step: the ray after `cur` is
// the unique w with det(cur, w) = 1 lying in the cone and closest to cur.
// The brute-force hull enumeration lives in the test suite as the oracle.
inline ResolutionChain resolve_cone(const Cone2& cone) {
    ResolutionChain chain;
    chain.rays.push_back(cone.u);
    LatticeVector cur = cone.u;
    while (true) {
        i64 d = det2(cur, cone.v);
        if (d == 1) {
            chain.rays.push_back(cone.v);
            break;
        }
        LatticeVector w = detail::unimodular_complement(cur);
        i64 t = floor_div(det2(w, cone.v), d);
        w = w - t * cur;
        chain.rays.push_back(w);
        cur = w;
    }
    for (size_t i = 1; i + 1 < chain.rays.size(); ++i) {
        i64 a = detail::chain_weight(chain.rays[i - 1], chain.rays[i], chain.rays[i + 1]);
        if (a > -2) throw std::logic_error("resolve_cone produced a weight > -2");
        chain.weights.push_back(a);
    }
    return chain;
}

// Reconstructs a chain from weights via l_0 = (1,0), l_1 = (0,1),
// l_{i+1} = -l_{i-1} - a_i l_i, and spans the cone by the outer rays.
inline ResolutionChain chain_from_weights(const std::vector<i64>& weights) {
    for (i64 a : weights)
        if (a > -2) throw std::invalid_argument("chain weights must all be <= -2");
    ResolutionChain chain;
    chain.weights = weights;
    chain.rays.push_back({1, 0});
    chain.rays.push_back({0, 1});
    for (i64 a : weights) {
        size_t n = chain.rays.size();
        LatticeVector next = -(chain.rays[n - 2]) - a * chain.rays[n - 1];
        chain.rays.push_back(next);
    }
    if (weights.empty()) chain.weights.clear();
    return chain;
}

inline std::pair<Cone2, ResolutionChain> chain_to_cone(const std::vector<i64>& weights) {
    ResolutionChain chain = chain_from_weights(weights);
    return {chain.cone(), chain};
}

// Panels P(i) = { p in P | p(l_i) = 1 } of the dual monoid, i = 1..m,
// as explicit functionals in L^v coordinates.
inline std::vector<std::set<Functional2>> panels(const ResolutionChain& chain) {
    int m = chain.interior_count();
    if (m < 1) throw std::invalid_argument("panels: chain has no interior rays (the point is regular)");
    std::vector<std::set<Functional2>> out;
    for (int i = 1; i <= m; ++i) {
        const LatticeVector li = chain.rays[i];
        const LatticeVector ln = chain.rays[i + 1];
        // dual basis of (l_i, l_{i+1}): l*_{i,i} = det(., l_{i+1}), l*_{i,i+1} = det(l_i, .)
        Functional2 star_ii{ln.y, neg_i64(ln.x)};
        Functional2 star_in{neg_i64(li.y), li.x};
        i64 a = chain.weights[i - 1];
        i64 lo = (i == m) ? 0 : 1;
        i64 hi = sub_i64(neg_i64(a), (i == 1) ? 0 : 1);
        std::set<Functional2> panel;
        for (i64 j = lo; j <= hi; ++j) panel.insert(star_ii + j * star_in);
        out.push_back(std::move(panel));
    }
    return out;
}

inline std::set<Functional2> panel_union(const ResolutionChain& chain) {
    std::set<Functional2> u;
    for (const auto& panel : panels(chain)) u.insert(panel.begin(), panel.end());
    return u;
}

inline i64 degree_one_slab_count(const ResolutionChain& chain) {
    return static_cast<i64>(panel_union(chain).size());
}

// dim m/m^2 of the contracted point: 3 - sum(a_i + 2).
inline i64 embedding_dimension(const ResolutionChain& chain) {
    if (chain.interior_count() < 1)
        throw std::invalid_argument("embedding_dimension: chain has no interior rays (the point is regular)");
    i64 s = 0;
    for (i64 a : chain.weights) s = add_i64(s, add_i64(a, 2));
    return sub_i64(3, s);
}

// Dual cone of sigma in L^v, as a Cone2 over the dual lattice.
inline Cone2 dual_cone(const Cone2& cone) {
    LatticeVector w1{neg_i64(cone.u.y), cone.u.x};  // vanishes on u, >0 on v
    LatticeVector w2{cone.v.y, neg_i64(cone.v.x)};  // vanishes on v, >0 on u
    return Cone2(w1, w2);
}

// Minimal nonzero elements of the dual monoid P = sigma^v ^ L^v.  In rank 2
// these are exactly the lattice points on the compact hull boundary of the
// dual cone, i.e. the rays of its coarsest nonsingular subdivision.
inline std::vector<Functional2> dual_monoid_generators(const Cone2& cone) {
    ResolutionChain dual = resolve_cone(dual_cone(cone));
    std::vector<Functional2> gens;
    gens.reserve(dual.rays.size());
    for (const auto& r : dual.rays) gens.push_back({r.x, r.y});
    return gens;
}

}  // namespace arithsurf
