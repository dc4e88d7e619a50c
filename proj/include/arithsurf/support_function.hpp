#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "arithsurf/cone.hpp"

// Piecewise-linear support functions on a cone and their correspondence with
// coherent fractional ideals of the dual monoid.  Convention throughout: a
// support function is the pointwise minimum of its piece functionals
// (f_J(z) = min over generators), so convexity means the graph lies above
// chords: f(s) + f(t) <= f(s + t) on the cone.

namespace arithsurf {

struct SupportFunction {
    Cone2 cone;
    std::vector<LatticeVector> rays;   // l'_0..l'_{t+1}, ccw, boundary included
    std::vector<Functional2> pieces;   // pieces[j] is linear on [rays[j], rays[j+1]]

    i64 operator()(LatticeVector z) const {
        for (size_t j = 0; j + 1 < rays.size(); ++j)
            if (det2(rays[j], z) >= 0 && det2(z, rays[j + 1]) >= 0) return pieces[j](z);
        throw std::invalid_argument("support function evaluated outside its cone");
    }
};

namespace detail {

inline void check_subdivision_rays(const Cone2& cone, const std::vector<LatticeVector>& rays) {
    if (rays.size() < 2) throw std::invalid_argument("subdivision needs at least the boundary rays");
    if (rays.front() != cone.u || rays.back() != cone.v)
        throw std::invalid_argument("subdivision must start at u and end at v");
    for (const auto& r : rays) {
        if (!is_primitive(r)) throw std::invalid_argument("subdivision rays must be primitive");
        if (!cone.contains(r)) throw std::invalid_argument("subdivision ray outside the cone");
    }
    for (size_t j = 0; j + 1 < rays.size(); ++j)
        if (det2(rays[j], rays[j + 1]) <= 0)
            throw std::invalid_argument("subdivision rays must be strictly counterclockwise");
}

}  // namespace detail

// Validates the (*) invariants: cover, continuity on shared rays, convexity.
inline void validate_support_function(const SupportFunction& f) {
    detail::check_subdivision_rays(f.cone, f.rays);
    if (f.pieces.size() + 1 != f.rays.size())
        throw std::invalid_argument("support function needs one functional per piece");
    for (size_t j = 0; j + 1 < f.pieces.size(); ++j) {
        Functional2 delta = f.pieces[j] - f.pieces[j + 1];
        LatticeVector r = f.rays[j + 1];
        if (delta(r) != 0)
            throw std::invalid_argument("pieces disagree on a shared ray (not continuous)");
        // min-of-linear convexity: the earlier piece must dominate beyond the
        // shared ray.  Detected on the next ray; a failure here is exactly a
        // midpoint violation f(a) + f(b) > f(a + b).
        if (delta(f.rays[j + 2]) < 0)
            throw std::invalid_argument("support function is not convex across an interior ray");
    }
}

// Ordered ray list of the fan on which f is linear (maximal linearity cones).
inline std::vector<LatticeVector> subdivision_of(const SupportFunction& f) {
    validate_support_function(f);
    std::vector<LatticeVector> out;
    out.push_back(f.rays.front());
    for (size_t j = 0; j + 1 < f.pieces.size(); ++j)
        if (f.pieces[j] != f.pieces[j + 1]) out.push_back(f.rays[j + 1]);
    out.push_back(f.rays.back());
    return out;
}

// Constructive form of the existence lemma for (*) functions: with
// g_k = det(l'_k, .), the function min_j ( -sum_{1<=k<=j} g_k ) is convex,
// integral, and breaks exactly at the interior rays of the subdivision.
inline SupportFunction support_function_for(const Cone2& cone,
                                            const std::vector<LatticeVector>& rays) {
    detail::check_subdivision_rays(cone, rays);
    SupportFunction f{cone, rays, {}};
    Functional2 mu{0, 0};
    f.pieces.push_back(mu);
    for (size_t j = 1; j + 1 < rays.size(); ++j) {
        mu = mu - ray_normal(rays[j]);
        f.pieces.push_back(mu);
    }
    return f;
}

inline SupportFunction support_function_for(const ResolutionChain& chain,
                                            const std::vector<LatticeVector>& rays) {
    return support_function_for(chain.cone(), rays);
}

// A coherent fractional ideal of the dual monoid, stored as an antichain of
// generators under the pointwise order on the cone (a <= b iff b - a is
// nonnegative on sigma).
struct FractionalIdeal2 {
    std::vector<Functional2> generators;

    FractionalIdeal2(std::vector<Functional2> gens, const Cone2& cone) {
        if (gens.empty()) throw std::invalid_argument("fractional ideal needs a nonempty generator set");
        std::sort(gens.begin(), gens.end());
        gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
        auto dominates = [&](Functional2 a, Functional2 b) {
            // b <= a pointwise on sigma
            Functional2 d = a - b;
            return d(cone.u) >= 0 && d(cone.v) >= 0;
        };
        for (const auto& g : gens) {
            bool minimal = true;
            for (const auto& h : gens)
                if (h != g && dominates(g, h)) {
                    minimal = false;
                    break;
                }
            if (minimal) generators.push_back(g);
        }
    }

    friend bool operator==(const FractionalIdeal2&, const FractionalIdeal2&) = default;
};

// f_J(z) = min { mu(z) | mu in J }, returned with its linearity fan: the
// lower envelope of the generators, swept from u to v.
inline SupportFunction ideal_to_function(const FractionalIdeal2& ideal, const Cone2& cone) {
    const auto& gens = ideal.generators;
    auto better_at = [&](const Functional2& a, const Functional2& b, LatticeVector at) {
        i64 va = a(at), vb = b(at);
        if (va != vb) return va < vb;
        return a(cone.v) < b(cone.v);
    };
    auto argmin_at = [&](LatticeVector at) {
        size_t best = 0;
        for (size_t i = 1; i < gens.size(); ++i)
            if (better_at(gens[i], gens[best], at)) best = i;
        return best;
    };

    SupportFunction f{cone, {cone.u}, {}};
    LatticeVector start = cone.u;
    size_t cur = argmin_at(start);
    for (size_t guard = 0; guard <= gens.size() + 1; ++guard) {
        // earliest ray past `start` where some generator overtakes gens[cur]
        std::optional<LatticeVector> best_ray;
        for (size_t i = 0; i < gens.size(); ++i) {
            if (i == cur) continue;
            Functional2 delta = gens[i] - gens[cur];
            if (delta == Functional2{0, 0}) continue;
            if (delta(start) <= 0) continue;   // not strictly worse at start => never overtakes later
            if (delta(cone.v) >= 0) continue;  // never better before v
            Functional2 n = delta;
            LatticeVector r{n.q, neg_i64(n.p)};  // kernel direction of delta
            if (det2(start, r) <= 0 || det2(r, cone.v) <= 0) r = -r;
            if (det2(start, r) <= 0 || det2(r, cone.v) <= 0)
                throw std::logic_error("envelope crossing ray not inside the cone");
            r = make_primitive(r);
            if (!best_ray || det2(r, *best_ray) > 0) best_ray = r;
        }
        if (!best_ray) {
            f.pieces.push_back(gens[cur]);
            f.rays.push_back(cone.v);
            return f;
        }
        f.pieces.push_back(gens[cur]);
        f.rays.push_back(*best_ray);
        start = *best_ray;
        cur = argmin_at(start);
    }
    throw std::logic_error("lower envelope sweep did not terminate");
}

// J_f = { a in L^v | a >= f on sigma }, returned as the full antichain of its
// minimal elements (the saturation of any generating set of f).  Works in the
// coordinates s = a(u), t = a(v), where the pointwise order on sigma is the
// product order; minimal elements live in an explicitly bounded box.
inline FractionalIdeal2 function_to_ideal(const SupportFunction& f, const Cone2& cone) {
    validate_support_function(f);
    i64 d = cone.det();
    i64 cu = f(cone.u);
    i64 cv = f(cone.v);

    struct InteriorConstraint {
        i64 coeff_s;  // det(r, v) > 0
        i64 coeff_t;  // det(u, r) > 0
        i64 rhs;      // d * f(r)
    };
    std::vector<InteriorConstraint> interior;
    for (size_t j = 1; j + 1 < f.rays.size(); ++j) {
        LatticeVector r = f.rays[j];
        interior.push_back({det2(r, cone.v), det2(cone.u, r), mul_i64(d, f(r))});
    }

    // A point with a(u) > s_hi keeps all constraints after subtracting the
    // dual generator vanishing on v (which lowers s by d), so it is not
    // minimal; symmetrically for t.
    i64 s_hi = add_i64(cu, d);
    i64 t_hi = add_i64(cv, d);
    for (const auto& c : interior) {
        i64 s_need = add_i64(ceil_div(sub_i64(c.rhs, mul_i64(c.coeff_t, cv)), c.coeff_s), d);
        i64 t_need = add_i64(ceil_div(sub_i64(c.rhs, mul_i64(c.coeff_s, cu)), c.coeff_t), d);
        s_hi = std::max(s_hi, s_need);
        t_hi = std::max(t_hi, t_need);
    }
    if (mul_i64(sub_i64(s_hi, cu) + 1, sub_i64(t_hi, cv) + 1) > 4'000'000)
        throw std::invalid_argument("function_to_ideal: saturation search box too large");

    auto in_ideal = [&](Functional2 a) {
        if (a(cone.u) < cu || a(cone.v) < cv) return false;
        for (const auto& c : interior) {
            i64 lhs = add_i64(mul_i64(c.coeff_s, a(cone.u)), mul_i64(c.coeff_t, a(cone.v)));
            if (lhs < c.rhs) return false;
        }
        return true;
    };

    std::vector<Functional2> members;
    for (i64 s = cu; s <= s_hi; ++s) {
        for (i64 t = cv; t <= t_hi; ++t) {
            // recover a from (a(u), a(v)) = (s, t); integral only on a sublattice
            i64 ax_num = sub_i64(mul_i64(s, cone.v.y), mul_i64(t, cone.u.y));
            i64 ay_num = sub_i64(mul_i64(t, cone.u.x), mul_i64(s, cone.v.x));
            if (ax_num % d != 0 || ay_num % d != 0) continue;
            Functional2 a{ax_num / d, ay_num / d};
            if (in_ideal(a)) members.push_back(a);
        }
    }
    if (members.empty()) throw std::logic_error("function_to_ideal found no lattice members");
    return FractionalIdeal2(std::move(members), cone);
}

// The log blow-up at the closed point: subdivision associated to the
// fractional ideal P \ {1}, whose generators are the minimal nonzero
// elements of the dual monoid.  On a nonsingular cone this inserts u + v.
inline std::vector<LatticeVector> star_subdivision_max_ideal(const Cone2& cone) {
    FractionalIdeal2 ideal(dual_monoid_generators(cone), cone);
    return subdivision_of(ideal_to_function(ideal, cone));
}

}  // namespace arithsurf
