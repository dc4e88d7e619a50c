#include <catch2/catch_amalgamated.hpp>

#include "arithsurf/classify.hpp"
#include "arithsurf/cone.hpp"
#include "arithsurf/moves.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace arithsurf;

TEST_CASE("e_sets on the worked examples") {
    ESets g2 = e_sets(load_fixture("genus2_two_lines.json"));
    CHECK(g2.p2.empty());
    CHECK(g2.p1.empty());
    CHECK(g2.p1p.empty());
    CHECK(g2.zo1p.empty());
    CHECK(g2.node.empty());
    CHECK(g2.eq_minus1.empty());
    CHECK(g2.le_minus2.empty());

    ESets aeb = e_sets(load_fixture("aeb_chain.json"));
    CHECK(aeb.p2 == std::set<std::string>{"E"});
    CHECK(aeb.le_minus2 == std::set<std::string>{"E"});
    CHECK(aeb.eq_minus1.empty());

    // P^1 meeting one other component at a single degree-2 separable point
    // with normalized self-intersection -1
    FiberModel m;
    m.components.push_back({"E", 2, {1, true}, ComponentKind::rational_with_point, -1});
    m.components.push_back({"F", 1, {1, true}, ComponentKind::rational_with_point, -5});
    m.components.push_back({"G", 1, {1, true}, ComponentKind::rational_with_point, -1});
    m.edges.push_back({"F", "E", {2, true}, true});
    m.edges.push_back({"F", "G", {1, true}, true});
    ESets es = e_sets(m);
    CHECK(es.p1p.count("E") == 1);
    CHECK(es.zo1p.count("E") == 1);
    CHECK(es.eq_minus1.count("E") == 1);
    CHECK(es.p1.count("G") == 1);

    // inclusion invariants on every fixture
    for (const auto& name : all_fixture_names()) {
        ESets e = e_sets(load_fixture(name));
        for (const auto& id : e.p1p) CHECK(e.zo1p.count(id) == 1);
        for (const auto& id : e.eq_minus1)
            CHECK((e.p2.count(id) || e.p1.count(id) || e.p1p.count(id)));
        for (const auto& id : e.le_minus2)
            CHECK((e.p2.count(id) || e.zo1p.count(id) || e.node.count(id)));
    }
}

TEST_CASE("check_exc on the worked examples") {
    // single P^1 with normalized self-intersection -2
    ExcResult one = check_exc(load_fixture("aeb_chain.json"), {"E"});
    CHECK(one.ok);
    CHECK(one.variant == "Exc_x");
    CHECK(one.weights == std::vector<i64>{-2});

    // chain of a P^1 over the quadratic field ending in a node shape
    FiberModel m;
    m.components.push_back({"E1", 1, {2, true}, ComponentKind::rational_with_point, -4});
    m.components.push_back({"E2", 1, {1, true}, ComponentKind::node_rational, -2});
    m.components.push_back({"A", 2, {1, true}, ComponentKind::general, -3, 2, true});
    m.edges.push_back({"E1", "E2", {2, true}, true});
    m.edges.push_back({"E1", "A", {2, true}, true});
    m.edges.push_back({"E2", "A", {1, true}, true});
    ExcResult e = check_exc(m, {"E1", "E2"});
    CHECK(e.ok);
    CHECK(e.variant == "Exc_e");
    CHECK(e.weights == std::vector<i64>{-2, -2});
    CHECK(e.k_prime.degree == 1);

    // a -1 member fails clause (ii)
    FiberModel bad = load_fixture("aeb_chain.json");
    bad.find_component("E")->self_intersection = -1;
    ExcResult f = check_exc(bad, {"E"});
    CHECK_FALSE(f.ok);
    CHECK(f.failure.find("(Exc_x ii)") != std::string::npos);
}

TEST_CASE("check_str on the worked examples") {
    StrResult aeb = check_str(load_fixture("aeb_chain.json"), {"E"});
    CHECK(aeb.ok);
    CHECK(aeb.variant == "Str2");
    REQUIRE(aeb.outside.size() == 2);

    // single -2 chain met twice by the same outside component
    StrResult g3 = check_str(load_fixture("genus3_mult2.json"), {"A"});
    CHECK(g3.ok);
    CHECK(g3.variant == "Str0");
    REQUIRE(g3.outside.size() == 1);
    CHECK(g3.outside[0].id == "E");

    // interior contact is rejected
    FiberModel m;
    m.components.push_back({"E1", 1, {1, true}, ComponentKind::rational_with_point, -2});
    m.components.push_back({"E2", 1, {1, true}, ComponentKind::rational_with_point, -3});
    m.components.push_back({"E3", 1, {1, true}, ComponentKind::rational_with_point, -2});
    m.components.push_back({"A", 1, {1, true}, ComponentKind::general, -1, 3, true});
    m.edges.push_back({"E1", "E2", {1, true}, true});
    m.edges.push_back({"E2", "E3", {1, true}, true});
    m.edges.push_back({"E1", "A", {1, true}, true});
    m.edges.push_back({"E3", "A", {1, true}, true});
    m.edges.push_back({"E2", "A", {1, true}, true});  // the offending contact
    StrResult s = check_str(m, {"E1", "E2", "E3"});
    CHECK_FALSE(s.ok);
    CHECK(s.failure.find("1 < i < m") != std::string::npos);

    // node-shape chain end: Str1
    StrResult d2 = check_str(load_fixture("deg2_node.json"), {"C"});
    CHECK(d2.ok);
    CHECK(d2.variant == "Str1");
}

TEST_CASE("fundamental cycle on chains, stars, and singletons") {
    FiberModel aeb = load_fixture("aeb_chain.json");
    CHECK(fundamental_cycle(aeb, {"E"}) == std::vector<i64>{1});

    // every valid Exc chain gives the all-ones cycle
    FiberModel m;
    m.components.push_back({"E1", 1, {1, true}, ComponentKind::rational_with_point, -2});
    m.components.push_back({"E2", 1, {1, true}, ComponentKind::rational_with_point, -3});
    m.components.push_back({"A", 1, {1, true}, ComponentKind::general, -2, 2, true});
    m.components.push_back({"B", 2, {1, true}, ComponentKind::general, -1, 2, true});
    m.edges.push_back({"E1", "E2", {1, true}, true});
    m.edges.push_back({"E1", "A", {1, true}, true});
    m.edges.push_back({"E2", "B", {1, true}, true});
    m.edges.push_back({"A", "B", {1, true}, true});
    CHECK(fundamental_cycle(m, {"E1", "E2"}) == std::vector<i64>{1, 1});
    CHECK(fundamental_cycle(m, {"E1", "E2"}) == oracles::fundamental_cycle_oracle(m, {"E1", "E2"}));

    // star of four -2 curves around a central -2 curve: the center gets 2
    FiberModel star;
    star.components.push_back({"C0", 1, {1, true}, ComponentKind::rational_with_point, -2});
    for (int i = 1; i <= 4; ++i) {
        star.components.push_back({"L" + std::to_string(i), 1, {1, true},
                                   ComponentKind::rational_with_point, -2});
        star.edges.push_back({"C0", "L" + std::to_string(i), {1, true}, true});
    }
    std::vector<std::string> all{"C0", "L1", "L2", "L3", "L4"};
    CHECK(fundamental_cycle(star, all) == std::vector<i64>{2, 1, 1, 1, 1});
    CHECK(fundamental_cycle(star, all) == oracles::fundamental_cycle_oracle(star, all));

    // single -3 curve
    FiberModel single;
    single.components.push_back({"E", 1, {1, true}, ComponentKind::rational_with_point, -3});
    CHECK(fundamental_cycle(single, {"E"}) == std::vector<i64>{1});

    CHECK_THROWS_AS(fundamental_cycle(m, {"E1", "B"}), std::invalid_argument);  // not connected
    FiberModel pos;
    pos.components.push_back({"P", 1, {1, true}, ComponentKind::rational_with_point, 1});
    CHECK_THROWS_AS(fundamental_cycle(pos, {"P"}), std::invalid_argument);
}

TEST_CASE("fundamental cycle agrees with the oracle on random definite trees") {
    auto rng = oracles::rng(5150);
    for (int trial = 0; trial < 40; ++trial) {
        FiberModel m;
        int n = 2 + static_cast<int>(rng() % 5);
        std::vector<std::string> ids;
        for (int i = 0; i < n; ++i) {
            std::string id = "N" + std::to_string(i);
            ids.push_back(id);
            i64 s = -2 - static_cast<i64>(rng() % 3);
            m.components.push_back({id, 1, {1, true}, ComponentKind::rational_with_point, s});
            if (i > 0) m.edges.push_back({ids[rng() % i], id, {1, true}, true});
        }
        if (!intersection_matrix(m, ids).negative_definite) continue;
        CHECK(fundamental_cycle(m, ids) == oracles::fundamental_cycle_oracle(m, ids));
    }
}

TEST_CASE("contract_chain on the A-E-B model") {
    FiberModel m = load_fixture("aeb_chain.json");
    i64 twice_before = 2 * (arithmetic_genus(m) - 1);
    auto [out, rec] = contract_chain(m, {"E"});
    CHECK(rec.weights == std::vector<i64>{-2});
    CHECK(rec.embedding_dim == 3);
    CHECK(rec.exc_variant == "Exc_x");
    CHECK(rec.str_variant == "Str2");
    REQUIRE(rec.incident.size() == 2);
    CHECK_FALSE(out.regular);
    CHECK(out.find_component("E") == nullptr);
    CHECK(validate(out).empty());

    // the rational route through the generalized contraction formula
    oracles::Rat twice = oracles::twice_genus_after_contraction(m, {"E"});
    CHECK(twice == oracles::Rat(twice_before));
}

TEST_CASE("contract_chain computes embedding dimension 4 for a (-3,-2) chain") {
    FiberModel m = load_fixture("chain32.json");
    i64 twice_before = 2 * (arithmetic_genus(m) - 1);
    auto [out, rec] = contract_chain(m, {"E1", "E2"});
    CHECK(rec.embedding_dim == 4);
    CHECK((rec.weights == std::vector<i64>{-2, -3} || rec.weights == std::vector<i64>{-3, -2}));
    CHECK(validate(out).empty());
    CHECK(oracles::twice_genus_after_contraction(m, {"E1", "E2"}) ==
          oracles::Rat(twice_before));
}

TEST_CASE("contracting the whole fiber is rejected") {
    // two -2 curves crossing at a degree-2 point: a valid (g, r) = (1, 0) fiber
    FiberModel m;
    m.components.push_back({"A", 1, {1, true}, ComponentKind::rational_with_point, -2});
    m.components.push_back({"B", 1, {1, true}, ComponentKind::rational_with_point, -2});
    m.edges.push_back({"A", "B", {2, true}, true});
    REQUIRE(validate(m).empty());
    REQUIRE(arithmetic_genus(m) == 1);
    CHECK_THROWS_AS(contract_chain(m, {"A", "B"}), precondition_error);
    try {
        contract_chain(m, {"A", "B"});
    } catch (const precondition_error& ex) {
        CHECK(std::string(ex.what()).find("whole fiber") != std::string::npos);
    }
}

TEST_CASE("contract_chain propagates clause failures") {
    FiberModel m = load_fixture("genus2_two_lines.json");
    // A has three contacts: (Str) rank-2 fails
    CHECK_THROWS_AS(contract_chain(m, {"A"}), precondition_error);
    FiberModel bad = load_fixture("aeb_chain.json");
    bad.find_component("E")->self_intersection = -1;
    CHECK_THROWS_AS(contract_chain(bad, {"E"}), precondition_error);
}

TEST_CASE("genus01 shapes cannot form valid hyperbolic models") {
    // an E_{P,1} member plus E_{<=-2} members: numerical triviality fails
    FiberModel m;
    m.components.push_back({"F", 2, {1, true}, ComponentKind::rational_with_point, -1});
    m.components.push_back({"E", 1, {1, true}, ComponentKind::rational_with_point, -2});
    m.edges.push_back({"F", "E", {1, true}, true});
    CHECK_FALSE(validate(m).empty());

    FiberModel m2;
    m2.components.push_back({"F", 1, {1, true}, ComponentKind::rational_with_point, -1});
    m2.components.push_back({"E", 1, {1, true}, ComponentKind::rational_with_point, -2});
    m2.edges.push_back({"F", "E", {1, true}, true});
    CHECK_FALSE(validate(m2).empty());
}

TEST_CASE("build_lreg is the identity on models without contractible members") {
    FiberModel m = load_fixture("genus2_two_lines.json");
    LregResult lreg = build_lreg(m);
    CHECK(models_equal(lreg.model, m));
    CHECK(lreg.singular_points().empty());
    CHECK(lreg.absolute_minimal);
}

TEST_CASE("build_lreg contracts the A-E-B chain to one A_1 point") {
    LregResult lreg = build_lreg(load_fixture("aeb_chain.json"));
    REQUIRE(lreg.singular_points().size() == 1);
    const auto& s = lreg.singular_points().front();
    CHECK(s.weights == std::vector<i64>{-2});
    CHECK(s.embedding_dim == 3);
    CHECK(lreg.model.components.size() == 2);
    CHECK(lreg.absolute_minimal);
    CHECK(validate(lreg.model).empty());
}

TEST_CASE("build_lreg on the hanging (-3,-2) chain") {
    LregResult lreg = build_lreg(load_fixture("chain32.json"));
    REQUIRE(lreg.singular_points().size() == 1);
    CHECK(lreg.singular_points().front().embedding_dim == 4);
    CHECK(lreg.model.components.size() == 2);
}

TEST_CASE("build_lreg postconditions and idempotence on every fixture") {
    for (const auto& name : hyperbolic_fixture_names()) {
        INFO(name);
        FiberModel ncd = minimal_ncd(load_fixture(name));
        LregResult lreg = build_lreg(ncd);
        ESets es = e_sets(lreg.model);
        CHECK(es.p2.empty());
        CHECK(es.zo1p.empty());
        CHECK(es.node.empty());
        LregResult again = build_lreg(lreg.model);
        CHECK(models_equal(again.model, lreg.model));
        CHECK(validate(lreg.model).empty());
    }
}

TEST_CASE("resolving the stored singular points restores genus and rank") {
    for (const auto& name : hyperbolic_fixture_names()) {
        INFO(name);
        FiberModel ncd = minimal_ncd(load_fixture(name));
        i64 g = arithmetic_genus(ncd), r = boundary_rank(ncd);
        LregResult lreg = build_lreg(ncd);
        FiberModel resolved = resolve_singular_points(lreg.model);
        CHECK(validate(resolved).empty());
        CHECK(arithmetic_genus(resolved) == g);
        CHECK(boundary_rank(resolved) == r);
        // re-contracting the resolution reproduces the lreg model
        LregResult again = build_lreg(resolved);
        CHECK(models_isomorphic(again.model, lreg.model));
    }
}

TEST_CASE("singular descriptors round-trip through the cone module") {
    // a contracted point stores exactly the data of its toric structure: the
    // weights reconstruct a cone whose resolution gives the weights back, and
    // the embedding dimension matches the lattice-side count
    for (const auto& name : hyperbolic_fixture_names()) {
        INFO(name);
        LregResult lreg = build_lreg(minimal_ncd(load_fixture(name)));
        for (const auto& s : lreg.singular_points()) {
            auto [cone, chain] = chain_to_cone(s.weights);
            CHECK(resolve_cone(cone).weights == s.weights);
            CHECK(embedding_dimension(chain) == s.embedding_dim);
            CHECK(degree_one_slab_count(chain) == s.embedding_dim);
        }
    }
}

TEST_CASE("build_lreg refuses non-minimal input") {
    FiberModel m = load_fixture("genus2_two_lines.json");
    FiberModel up = blow_up(m, PointSpec::at_edge(0), "E");
    CHECK_THROWS_AS(build_lreg(up), precondition_error);
}
