#include <doctest.h>

#include <random>

#include "causeplan/documents.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace causeplan;
using causeplan::testing::fixture_catalog;
using causeplan::testing::fixture_entries;
using causeplan::testing::fixture_model;

namespace {

TransferResult transfer(const std::string& model, std::vector<std::string> training, const std::string& object,
                        const BindingEntries& entries) {
  auto m = fixture_model(model);
  const auto& obj = fixture_catalog().at(object);
  return check_transfer(m, fixture_catalog(), training, obj, bind_functions(obj, m, entries), PlannerConfig{});
}

ExperimentSpec load_experiment(const std::string& name) {
  auto dir = causeplan::testing::data_dir() / "experiments";
  return experiment_from_json(read_json_file(dir / (name + ".json")), dir);
}

}  // namespace

TEST_CASE("binding labels against the model vocabulary") {
  const auto& flashlight = fixture_catalog().at("flashlight");
  auto model = fixture_model("desk_lamp_diffuse");

  auto b = bind_functions(flashlight, model, fixture_entries("flashlight_novel"));
  CHECK(b.object_id == "flashlight");
  CHECK(b.entries.size() == 3);
  CHECK(b.provenance.at(Label("provide electricity")) == LabelOrigin::model_vocabulary);
  CHECK(b.provenance.at(Label("hold things together")) == LabelOrigin::novel);
  CHECK(b.novel_labels() == std::set<Label>{Label("hold things together")});
  REQUIRE(b.warnings.size() == 1);
  CHECK(b.warnings[0] == "novel label ignored by the model: \"hold things together\" on part case");

  SUBCASE("labels are normalized") {
    auto n = bind_functions(flashlight, model, {{"head", {"  Diffuse LIGHT "}}});
    CHECK(n.entries.at("head") == std::set<Label>{Label("diffuse light")});
    CHECK(n.entries.at("case").empty());  // every part gets an entry
    CHECK(n.warnings.empty());
  }
  SUBCASE("unknown parts and blank labels") {
    CHECK_THROWS_AS(bind_functions(fixture_catalog().at("desk_lamp"), model, {{"bulbb", {"x"}}}), UnknownPart);
    CHECK_THROWS_AS(bind_functions(flashlight, model, {{"head", {"   "}}}), std::invalid_argument);
  }
  SUBCASE("intermediate and goal labels are not function vocabulary") {
    auto n = bind_functions(flashlight, model, {{"head", {"glow"}}});
    CHECK(n.provenance.at(Label("glow")) == LabelOrigin::novel);
  }
}

TEST_CASE("category relation") {
  const auto& cat = fixture_catalog();
  CHECK(category_relation(cat, {"desk_lamp", "candle"}, "flashlight") == Relation::near);
  CHECK(category_relation(cat, {"desk_lamp", "flashlight"}, "kerosene_lamp") == Relation::far);
  CHECK(category_relation(cat, {"candle", "kerosene_lamp"}, "desk_lamp") == Relation::far);
  // symmetric in the order of training objects
  CHECK(category_relation(cat, {"flashlight", "desk_lamp"}, "kerosene_lamp") ==
        category_relation(cat, {"desk_lamp", "flashlight"}, "kerosene_lamp"));
}

TEST_CASE("transfer outcomes") {
  SUBCASE("annotated vocabulary matches the model") {
    auto r = transfer("desk_lamp_and", {"desk_lamp", "candle"}, "flashlight", fixture_entries("flashlight"));
    CHECK(r.success);
    CHECK_FALSE(r.reason.has_value());
    REQUIRE(r.plan.has_value());
    CHECK(r.plan->steps.size() == 2);
    CHECK(r.relation == Relation::near);
  }
  SUBCASE("novel labels leave the goal unreachable") {
    auto r = transfer("desk_lamp_diffuse", {"desk_lamp", "candle"}, "flashlight", fixture_entries("flashlight_novel"));
    CHECK_FALSE(r.success);
    CHECK(r.reason == FailureReason::goal_unreachable_under_model);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("hold things together") != std::string::npos);
  }
  SUBCASE("a model without the right causal pathway fails on far objects") {
    auto r = transfer("desk_lamp_and", {"desk_lamp", "flashlight"}, "kerosene_lamp", fixture_entries("kerosene_lamp"));
    CHECK_FALSE(r.success);
    CHECK(r.relation == Relation::far);
    CHECK(r.reason == FailureReason::goal_unreachable_under_model);
  }
  SUBCASE("the two-pathway model covers far objects") {
    auto r = transfer("two_branch", {"desk_lamp", "candle"}, "kerosene_lamp", fixture_entries("kerosene_lamp"));
    CHECK(r.success);
  }
  SUBCASE("no compatible connections") {
    const auto& obj = causeplan::testing::two_part_catalog().at("mismatched");
    auto m = parse_model("goal: joined\nleft AND right CAUSES joined\n");
    auto r = check_transfer(m, fixture_catalog(), {"desk_lamp", "candle"}, obj,
                            bind_functions(obj, m, {{"a", {"left"}}, {"b", {"right"}}}), PlannerConfig{});
    CHECK_FALSE(r.success);
    CHECK(r.reason == FailureReason::no_compatible_connections);
  }
  SUBCASE("planner caps become failure reasons") {
    auto m = fixture_model("desk_lamp_and");
    const auto& obj = fixture_catalog().at("flashlight");
    PlannerConfig c;
    c.max_states = 1;
    auto r = check_transfer(m, fixture_catalog(), {"desk_lamp", "candle"}, obj,
                            bind_functions(obj, m, fixture_entries("flashlight")), c);
    CHECK(r.reason == FailureReason::state_space_exceeded);
    CHECK_FALSE(r.plan.has_value());
  }
}

TEST_CASE("transfer invariants") {
  auto model = fixture_model("two_branch");
  auto hash = model_hash(model);
  const auto& cat = fixture_catalog();

  for (const char* object : {"desk_lamp", "flashlight", "candle", "kerosene_lamp"}) {
    CAPTURE(object);
    const auto& obj = cat.at(object);
    auto entries = fixture_entries(object);

    auto base = check_transfer(model, cat, {"desk_lamp", "candle"}, obj, bind_functions(obj, model, entries), {});
    CHECK(model_hash(model) == hash);
    if (base.plan) CHECK(base.plan->model_hash == hash);

    // Novel labels never change the outcome.
    auto with_novel = entries;
    for (auto& [part, labels] : with_novel) labels.push_back("completely unrelated function");
    auto noisy = check_transfer(model, cat, {"desk_lamp", "candle"}, obj, bind_functions(obj, model, with_novel), {});
    CHECK(to_json(noisy).at("plan") == to_json(base).at("plan"));
    CHECK(noisy.success == base.success);

    // Training order does not matter.
    auto swapped = check_transfer(model, cat, {"candle", "desk_lamp"}, obj, bind_functions(obj, model, entries), {});
    CHECK(swapped.relation == base.relation);
    CHECK(swapped.success == base.success);
  }
}

TEST_CASE("adding model vocabulary never turns success into failure") {
  std::mt19937 rng(77);
  for (int i = 0; i < 100; ++i) {
    auto obj = causeplan::testing::random_binary_object(rng, 5, 3);
    std::vector<std::string> roots;
    for (const auto& p : obj.parts()) roots.push_back("f" + p.id);
    auto model = causeplan::testing::random_valid_model(rng, 8, 8, roots);
    auto vocab = model.function_nodes();
    std::vector<Label> pool(vocab.begin(), vocab.end());
    auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    BindingEntries small, large;
    for (const auto& p : obj.parts()) {
      small[p.id];
      large[p.id];
      if (pool.empty()) continue;
      if (pick(2) == 0) {
        auto l = pool[pick(pool.size())].str();
        small[p.id].push_back(l);
        large[p.id].push_back(l);
      }
      if (pick(2) == 0) large[p.id].push_back(pool[pick(pool.size())].str());
    }
    auto a = check_transfer(model, Catalog{}, {}, obj, bind_functions(obj, model, small), {});
    auto b = check_transfer(model, Catalog{}, {}, obj, bind_functions(obj, model, large), {});
    if (a.success) CHECK(b.success);
  }
}

TEST_CASE("experiments") {
  const auto& cat = fixture_catalog();

  SUBCASE("near condition: same-category test transfers, other category does not") {
    auto spec = load_experiment("near_condition");
    auto report = run_experiment(spec, cat);
    REQUIRE(report.results.size() == 2);
    CHECK(report.results[0].test_object == "flashlight");
    CHECK(report.results[0].success);
    CHECK(report.results[0].relation == Relation::near);
    CHECK(report.results[1].test_object == "kerosene_lamp");
    CHECK_FALSE(report.results[1].success);
    CHECK(report.results[1].relation == Relation::far);
    CHECK(unmet_expectations(spec, report).empty());
    CHECK(report.model_hash == model_hash(spec.model));
  }
  SUBCASE("far condition: the abstract model transfers to both categories") {
    auto spec = load_experiment("far_condition");
    auto report = run_experiment(spec, cat);
    REQUIRE(report.results.size() == 2);
    for (const auto& r : report.results) {
      CHECK(r.success);
      CHECK(r.relation == Relation::near);
    }
    CHECK(unmet_expectations(spec, report).empty());
  }
  SUBCASE("declared condition must match the training categories") {
    CHECK_THROWS_AS(run_experiment(load_experiment("far_condition_mismatch"), cat), ConditionMismatch);
    auto spec = load_experiment("near_condition");
    spec.condition = Condition::far;
    CHECK_THROWS_AS(run_experiment(spec, cat), ConditionMismatch);
    spec.condition = Condition::near;
    spec.training = {"desk_lamp", "candle"};
    CHECK_THROWS_AS(run_experiment(spec, cat), ConditionMismatch);
  }
  SUBCASE("unmet expectations are reported") {
    auto spec = load_experiment("near_condition");
    spec.tests[1].expect_success = true;
    auto unmet = unmet_expectations(spec, run_experiment(spec, cat));
    REQUIRE(unmet.size() == 1);
    CHECK(unmet[0].find("kerosene_lamp") != std::string::npos);
  }
  SUBCASE("report documents are stable") {
    auto spec = load_experiment("far_condition");
    auto first = to_json(run_experiment(spec, cat)).dump();
    CHECK(to_json(run_experiment(spec, cat)).dump() == first);
    auto doc = nlohmann::json::parse(first);
    CHECK(doc.at("v") == kSchemaVersion);
    CHECK(doc.at("condition") == "far");
    CHECK(doc.at("results")[0].at("outcome") == "success");
  }
  SUBCASE("conditions parse") {
    CHECK(parse_condition("near") == Condition::near);
    CHECK(parse_condition("far") == Condition::far);
    CHECK_FALSE(parse_condition("middle").has_value());
  }
}

TEST_CASE("experiment configs") {
  auto dir = causeplan::testing::data_dir() / "experiments";
  auto doc = read_json_file(dir / "near_condition.json");
  doc["tests"][0]["binding"] = nlohmann::json{{"case", {"x"}}};
  doc["planner"] = {{"discount", 0.9}};
  auto spec = experiment_from_json(doc, dir);
  CHECK(spec.tests[0].entries.at("case") == std::vector<std::string>{"x"});
  CHECK(spec.config.discount == 0.9);

  auto bad = read_json_file(dir / "near_condition.json");
  bad["condition"] = "sideways";
  CHECK_THROWS(experiment_from_json(bad, dir));
  bad = read_json_file(dir / "near_condition.json");
  bad["tests"][0]["expect"] = "maybe";
  CHECK_THROWS(experiment_from_json(bad, dir));
}
