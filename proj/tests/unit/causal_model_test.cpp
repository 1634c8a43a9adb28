#include <doctest.h>

#include <random>

#include "causeplan/graph_export.hpp"
#include "causeplan/model_dsl.hpp"
#include "support/oracles.hpp"

using namespace causeplan;
using causeplan::testing::brute_force_fixpoints;
using causeplan::testing::model_roots;
using causeplan::testing::random_valid_model;

namespace {

const char* kAndModel = "goal: light\n\"provide electricity\" AND \"turn electricity into light\" CAUSES light\n";
const char* kChainModel = "goal: light\n\"burn fuel\" CAUSES flame\nflame CAUSES light\n";

std::set<Label> labels(std::initializer_list<const char*> ls) {
  std::set<Label> out;
  for (auto l : ls) out.emplace(l);
  return out;
}

}  // namespace

TEST_CASE("labels are trimmed and case-insensitive") {
  CHECK(Label("  Provide Electricity ") == Label("provide electricity"));
  CHECK(Label("Light").str() == "light");
  CHECK_THROWS_AS(Label("   "), std::invalid_argument);
}

TEST_CASE("parse: one AND rule") {
  auto m = parse_model(kAndModel);
  CHECK(m.goal() == Label("light"));
  REQUIRE(m.rules().size() == 1);
  CHECK(m.function_nodes() == labels({"provide electricity", "turn electricity into light"}));
  CHECK(m.intermediate_nodes().empty());
  CHECK(m.kind_of(Label("light")) == NodeKind::goal);
}

TEST_CASE("parse: two-rule chain with an intermediate effect") {
  auto m = parse_model(kChainModel);
  CHECK(m.function_nodes() == labels({"burn fuel"}));
  CHECK(m.intermediate_nodes() == labels({"flame"}));
  CHECK(m.rules()[0].effect == Label("flame"));  // rule order preserved
  CHECK(m.rules()[1].effect == Label("light"));
}

TEST_CASE("parse: keywords are case-insensitive, labels normalized, comments skipped") {
  auto m = parse_model("# lamp\nGOAL: Light  # trailing\n\"Provide Electricity\" and Bulb causes LIGHT\n");
  CHECK(m.goal() == Label("light"));
  REQUIRE(m.rules().size() == 1);
  CHECK(m.rules()[0].antecedents == std::vector<Label>{Label("bulb"), Label("provide electricity")});
}

TEST_CASE("parse errors carry position and expectation") {
  SUBCASE("self-loop") {
    try {
      parse_model("goal: light\n\"a\" CAUSES a\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 12);
      CHECK(std::string(e.detail()).find("own antecedents") != std::string::npos);
    }
  }
  SUBCASE("duplicate goal") {
    CHECK_THROWS_WITH_AS(parse_model("goal: a\ngoal: b\n"), doctest::Contains("duplicate goal"), ParseError);
  }
  SUBCASE("empty rule body") {
    CHECK_THROWS_WITH_AS(parse_model("goal: a\nCAUSES a\n"), doctest::Contains("empty rule body"), ParseError);
  }
  SUBCASE("unquoted multi-word label") {
    try {
      parse_model("goal: light\nburn fuel CAUSES light\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.column() == 6);
      CHECK(e.detail() == "expected AND or CAUSES, found 'fuel'");
    }
  }
  SUBCASE("missing goal") {
    CHECK_THROWS_WITH_AS(parse_model("a CAUSES b\n"), doctest::Contains("missing goal"), ParseError);
  }
  SUBCASE("dangling AND") {
    CHECK_THROWS_WITH_AS(parse_model("goal: b\na AND CAUSES b\n"), doctest::Contains("expected label after AND"),
                         ParseError);
  }
  SUBCASE("unterminated quote") {
    CHECK_THROWS_WITH_AS(parse_model("goal: \"light\n"), doctest::Contains("unterminated"), ParseError);
  }
  SUBCASE("missing effect") {
    CHECK_THROWS_WITH_AS(parse_model("goal: b\na CAUSES\n"), doctest::Contains("effect label"), ParseError);
  }
}

TEST_CASE("serialize/parse round-trip on random canonical models") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto m = random_valid_model(rng);
    auto text = serialize_model(m);
    CHECK(parse_model(text) == m);
    CHECK(serialize_model(parse_model(text)) == text);
  }
  CausalModel odd(Label("and"), {CausalRule({Label("a \"quoted\" \\ thing"), Label("x,y")}, Label("and"))},
                  {Label("goal")});
  CHECK(parse_model(serialize_model(odd)) == odd);
}

TEST_CASE("validate: examples") {
  CHECK(validate_model(parse_model(kChainModel)).ok());

  auto causeless = validate_model(parse_model("goal: light\nintermediate: flame\nflame CAUSES light\n"));
  REQUIRE(causeless.violations.size() == 1);
  CHECK(causeless.violations[0].kind == ViolationKind::intermediate_without_causes);
  CHECK(causeless.violations[0].message == "intermediate effect without causes: flame");
  CHECK(causeless.violations[0].nodes == std::vector<Label>{Label("flame")});

  auto cyclic = validate_model(parse_model("goal: light\na CAUSES b\nb CAUSES a\na CAUSES light\n"));
  REQUIRE(cyclic.violations.size() == 1);
  CHECK(cyclic.violations[0].kind == ViolationKind::cycle);
  CHECK(cyclic.violations[0].message == "cycle: a→b→a");
}

TEST_CASE("validate: goal must be caused and must not cause") {
  auto r = validate_model(parse_model("goal: light\na CAUSES b\n"));
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].kind == ViolationKind::goal_not_caused);

  auto r2 = validate_model(parse_model("goal: light\na CAUSES light\nlight CAUSES b\n"));
  REQUIRE(r2.violations.size() == 1);
  CHECK(r2.violations[0].kind == ViolationKind::goal_used_as_cause);

  CHECK(validate_model(parse_model("goal: light\n")).violations.front().kind == ViolationKind::no_rules);
}

TEST_CASE("evaluate: AND model") {
  auto m = parse_model(kAndModel);
  CHECK(evaluate(m, labels({"provide electricity", "turn electricity into light"})).goal_reached());
  CHECK_FALSE(evaluate(m, labels({"provide electricity"})).goal_reached());
  // unknown labels are ignored
  CHECK_FALSE(evaluate(m, labels({"provide electricity", "hold things together"})).goal_reached());
}

TEST_CASE("evaluate: shade-dependent model against the flashlight's active set") {
  auto m = parse_model(
      "goal: light\n\"provide electricity\" AND \"turn electricity into light\" CAUSES glow\n"
      "glow AND \"diffuse light\" CAUSES light\n");
  auto v = evaluate(m, labels({"hold things together", "diffuse light", "provide electricity"}));
  CHECK_FALSE(v.goal_reached());
  CHECK_FALSE(v.value(Label("glow")));
  CHECK(v.value(Label("diffuse light")));
}

TEST_CASE("evaluate: alternative rules disjoin") {
  auto m = parse_model("goal: light\na AND b CAUSES light\nc CAUSES light\n");
  CHECK(evaluate(m, labels({"c"})).goal_reached());
  CHECK(evaluate(m, labels({"a", "b"})).goal_reached());
  CHECK_FALSE(evaluate(m, labels({"a"})).goal_reached());
}

TEST_CASE("evaluate rejects invalid models") {
  CHECK_THROWS_AS(evaluate(parse_model("goal: light\na CAUSES b\nb CAUSES a\na CAUSES light\n"), {}), InvalidModel);
  CHECK_THROWS_AS(evaluate(parse_model("goal: light\nintermediate: flame\nflame CAUSES light\n"), {}),
                  InvalidModel);
}

TEST_CASE("evaluate agrees with the brute-force fixpoint oracle") {
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    auto m = random_valid_model(rng);
    ModelEvaluator ev(m);
    auto roots = model_roots(m);
    for (std::size_t mask = 0; mask < (std::size_t{1} << roots.size()); ++mask) {
      std::set<Label> active;
      for (std::size_t r = 0; r < roots.size(); ++r)
        if ((mask >> r) & 1u) active.insert(roots[r]);
      auto fps = brute_force_fixpoints(m, active);
      REQUIRE(fps.size() == 1);
      CHECK(ev.evaluate(active).values == fps.front());
    }
  }
}

TEST_CASE("evaluate is monotone in the active set and in the rule set") {
  std::mt19937 rng(23);
  for (int i = 0; i < 100; ++i) {
    auto m = random_valid_model(rng);
    auto roots = model_roots(m);
    std::set<Label> small, big;
    for (const auto& r : roots) {
      int coin = std::uniform_int_distribution<int>(0, 2)(rng);
      if (coin == 0) small.insert(r);
      if (coin <= 1) big.insert(r);
    }
    auto vs = evaluate(m, small);
    auto vb = evaluate(m, big);
    for (const auto& [node, value] : vs.values) CHECK((!value || vb.value(node)));

    // One extra rule over existing nodes, kept acyclic by following topological order.
    ModelEvaluator ev(m);
    const auto& order = ev.topological_order();
    auto goal_pos = std::find(order.begin(), order.end(), m.goal()) - order.begin();
    if (goal_pos < 1) continue;
    CausalModel extended = m;
    extended.add_rule(CausalRule({order.front()}, m.goal()));
    auto ve = evaluate(extended, big);
    for (const auto& [node, value] : vb.values) CHECK((!value || ve.value(node)));
  }
}

TEST_CASE("validate accepts exactly the models evaluate handles on every root subset") {
  std::mt19937 rng(5);
  for (int i = 0; i < 50; ++i) {
    auto m = random_valid_model(rng);
    CHECK(validate_model(m).ok());
    auto roots = model_roots(m);
    for (std::size_t mask = 0; mask < (std::size_t{1} << roots.size()); ++mask) {
      std::set<Label> active;
      for (std::size_t r = 0; r < roots.size(); ++r)
        if ((mask >> r) & 1u) active.insert(roots[r]);
      CHECK_NOTHROW(evaluate(m, active));
    }
    // Closing a cycle through the goal's producer breaks validity.
    auto broken = m;
    const auto& r0 = m.rules().front();
    if (r0.effect != m.goal()) {
      broken.add_rule(CausalRule({r0.effect}, r0.antecedents.front()));
      CHECK_FALSE(validate_model(broken).ok());
      CHECK_THROWS_AS(evaluate(broken, {}), InvalidModel);
    }
  }
}

TEST_CASE("graph export") {
  SUBCASE("one AND rule") {
    auto g = to_graph_export(parse_model(kAndModel));
    CHECK(g.nodes.size() == 3);
    REQUIRE(g.rule_groups.size() == 1);
    CHECK(g.rule_groups[0].antecedents.size() == 2);
    CHECK(g.edge_count() == 2);
  }
  SUBCASE("chain") {
    auto g = to_graph_export(parse_model(kChainModel));
    CHECK(g.nodes.size() == 3);
    CHECK(g.rule_groups.size() == 2);
    CHECK(g.nodes[0].label == Label("burn fuel"));  // lexicographic
    CHECK(g.nodes[0].kind == NodeKind::function);
    CHECK(g.nodes[1].kind == NodeKind::intermediate);
    CHECK(g.nodes[2].kind == NodeKind::goal);
  }
  SUBCASE("alternatives stay separate groups") {
    auto g = to_graph_export(parse_model("goal: light\nb CAUSES light\na AND c CAUSES light\n"));
    auto goals = std::count_if(g.nodes.begin(), g.nodes.end(), [](const GraphNode& n) { return n.kind == NodeKind::goal; });
    CHECK(goals == 1);
    REQUIRE(g.rule_groups.size() == 2);
    CHECK(g.rule_groups[0].rule_index == 0);
    CHECK(g.rule_groups[1].rule_index == 1);
    auto doc = to_json(g);
    CHECK(doc["rule_groups"][1]["antecedents"] == nlohmann::json::array({"a", "c"}));
    CHECK(doc["nodes"][0] == nlohmann::json{{"label", "a"}, {"kind", "function"}});
  }
}

TEST_CASE("model hash is stable and content-addressed") {
  auto a = parse_model(kAndModel);
  auto b = parse_model("GOAL: Light\n\"turn electricity into light\" and \"provide electricity\" causes light # same\n");
  CHECK(model_hash(a) == model_hash(b));
  CHECK(model_hash(a).size() == 16);
  CHECK(model_hash(a) != model_hash(parse_model(kChainModel)));
}
