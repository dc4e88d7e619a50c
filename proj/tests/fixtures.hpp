#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arithsurf/json_io.hpp"

inline std::string fixture_path(const std::string& name) {
    return std::string(ARITHSURF_FIXTURES) + "/" + name;
}

inline std::string fixture_text(const std::string& name) {
    std::ifstream in(fixture_path(name));
    if (!in) throw std::runtime_error("missing fixture: " + fixture_path(name));
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline arithsurf::FiberModel load_fixture(const std::string& name) {
    return arithsurf::parse_model(arithsurf::ordered_json::parse(fixture_text(name)));
}

inline const std::vector<std::string>& all_fixture_names() {
    static const std::vector<std::string> names = {
        "genus2_two_lines.json", "aeb_chain.json",  "chain32.json",  "genus3_mult2.json",
        "deg2_node.json",        "tame_mult2.json", "r3_pointed.json", "elliptic.json",
        "i3_cycle.json",
    };
    return names;
}

// The fixtures with 2g + r - 2 > 0 (the classify pipeline's domain).
inline const std::vector<std::string>& hyperbolic_fixture_names() {
    static const std::vector<std::string> names = {
        "genus2_two_lines.json", "aeb_chain.json",  "chain32.json", "genus3_mult2.json",
        "deg2_node.json",        "tame_mult2.json", "r3_pointed.json",
    };
    return names;
}
