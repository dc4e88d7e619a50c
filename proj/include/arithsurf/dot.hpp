#pragma once

#include <sstream>
#include <string>

#include "arithsurf/fiber_model.hpp"

// DOT rendering of decorated dual graphs: components as labeled ellipses,
// double points as labeled edges, contracted singular points as diamonds.

namespace arithsurf {

inline std::string to_dot(const FiberModel& m, const std::string& name = "fiber") {
    std::ostringstream os;
    os << "graph \"" << name << "\" {\n";
    os << "  node [shape=ellipse];\n";
    for (const auto& c : m.components) {
        os << "  \"" << c.id << "\" [label=\"" << c.id << " m=" << c.multiplicity
           << " d=" << c.constant_field.degree << " s=" << c.self_intersection << " "
           << kind_name(c.kind) << "\"];\n";
    }
    for (const auto& b : m.branches) {
        os << "  \"" << b.id << "\" [shape=box,label=\"" << b.id << " e=" << b.ram_index
           << " f=" << b.residue.degree << "\"];\n";
        if (!b.on.empty())
            os << "  \"" << b.on << "\" -- \"" << b.id << "\" [style=dashed];\n";
    }
    for (const auto& s : m.singular_points) {
        os << "  \"" << s.id << "\" [shape=diamond,label=\"" << s.id << " (";
        for (size_t i = 0; i < s.weights.size(); ++i)
            os << (i ? "," : "") << s.weights[i];
        os << ")\"];\n";
        for (const auto& inc : s.incident)
            os << "  \"" << inc.id << "\" -- \"" << s.id << "\" [style=bold];\n";
    }
    for (const auto& e : m.edges)
        os << "  \"" << e.a << "\" -- \"" << e.b << "\" [label=\"" << e.point.degree << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace arithsurf
