#include <catch2/catch_amalgamated.hpp>

#include "arithsurf/dot.hpp"
#include "arithsurf/json_io.hpp"
#include "fixtures.hpp"

using namespace arithsurf;

TEST_CASE("every fixture round-trips byte-identically") {
    for (const auto& name : all_fixture_names()) {
        INFO(name);
        std::string text = fixture_text(name);
        FiberModel m = parse_model(ordered_json::parse(text));
        CHECK(dump_canonical(model_to_json(m)) == text);
    }
}

TEST_CASE("parse -> serialize -> parse is stable for models with singular points") {
    FiberModel m = load_fixture("aeb_chain.json");
    ModelReport rep = classify_model(m);
    std::string once = dump_canonical(model_to_json(rep.lreg.model));
    FiberModel back = parse_model(ordered_json::parse(once));
    CHECK(dump_canonical(model_to_json(back)) == once);
    CHECK(models_equal(back, rep.lreg.model));
}

TEST_CASE("cone and chain literals") {
    Cone2 c = parse_cone(ordered_json::parse(R"({"u":[1,0],"v":[1,2]})"));
    CHECK(c == Cone2({1, 0}, {1, 2}));
    auto w = parse_weights(ordered_json::parse(R"({"weights":[-3,-2]})"));
    CHECK(w == std::vector<i64>{-3, -2});
    CHECK(dump_canonical(cone_to_json(c)) == "{\n  \"u\": [\n    1,\n    0\n  ],\n  \"v\": [\n    1,\n    2\n  ]\n}\n");
}

TEST_CASE("floats and unknown keys are rejected") {
    CHECK_THROWS_AS(parse_cone(ordered_json::parse(R"({"u":[1.5,0],"v":[0,1]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_cone(ordered_json::parse(R"({"u":[1,0],"v":[0,1],"w":[1,1]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_model(ordered_json::parse(
            R"({"p":2,"components":[{"id":"A","m":1.0,"kd":1,"sep":true,"kind":"P1","s":0}]})")),
        std::invalid_argument);
    CHECK_THROWS_AS(
        parse_model(ordered_json::parse(
            R"({"p":2,"components":[{"id":"A","m":1,"kd":1,"sep":true,"kind":"oval","s":0}]})")),
        std::invalid_argument);
}

TEST_CASE("report serialization carries the verdicts") {
    ModelReport rep = classify_model(load_fixture("genus2_two_lines.json"));
    ordered_json j = report_to_json(rep);
    CHECK(j["g"] == 2);
    CHECK(j["stable"] == true);
    CHECK(j["e_min"] == 1);
    CHECK(j["lreg"]["absolute_minimal"] == true);

    ModelReport wild = classify_model(load_fixture("genus3_mult2.json"), 2);
    ordered_json k = report_to_json(wild);
    CHECK(k["log_smooth"] == false);
    CHECK(k["e_min"].is_null());
    CHECK_FALSE(k["log_smooth_witnesses"].empty());
}

TEST_CASE("DOT output names components, degrees and singular points") {
    ModelReport rep = classify_model(load_fixture("aeb_chain.json"));
    std::string dot = to_dot(rep.lreg.model, "lreg");
    CHECK(dot.find("graph \"lreg\"") != std::string::npos);
    CHECK(dot.find("\"A\" [label=\"A m=1 d=1 s=-3 P1\"]") != std::string::npos);
    CHECK(dot.find("shape=diamond") != std::string::npos);
    CHECK(dot.find("(-2)") != std::string::npos);
    CHECK(dot.find("-- \"B\"") != std::string::npos);
}
