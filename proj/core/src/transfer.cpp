#include "causeplan/transfer.hpp"

#include <algorithm>
#include <set>

namespace causeplan {

FunctionBinding bind_functions(const ObjectSpec& object, const CausalModel& model, const BindingEntries& entries) {
  FunctionBinding b;
  b.object_id = object.id();
  for (const auto& p : object.parts()) b.entries[p.id];

  const auto vocabulary = model.function_nodes();
  for (const auto& [part, labels] : entries) {
    if (!object.find_part(part)) throw UnknownPart(object.id(), part);
    for (const auto& raw : labels) {
      Label l(raw);
      b.entries[part].insert(l);
      bool known = vocabulary.count(l) > 0;
      b.provenance.emplace(l, known ? LabelOrigin::model_vocabulary : LabelOrigin::novel);
      if (!known) b.warnings.push_back("novel label ignored by the model: \"" + l.str() + "\" on part " + part);
    }
  }
  return b;
}

const char* to_string(Relation r) noexcept { return r == Relation::near ? "near" : "far"; }

namespace {

Relation relation_to(const Catalog& catalog, const std::vector<std::string>& training, const std::string& test_cat) {
  if (test_cat.empty()) return Relation::far;
  for (const auto& t : training)
    if (catalog.at(t).category() == test_cat) return Relation::near;
  return Relation::far;
}

}  // namespace

Relation category_relation(const Catalog& catalog, const std::vector<std::string>& training,
                           const std::string& test_object) {
  return relation_to(catalog, training, catalog.at(test_object).category());
}

const char* to_string(FailureReason r) noexcept {
  switch (r) {
    case FailureReason::goal_unreachable_under_model: return "goal_unreachable_under_model";
    case FailureReason::no_compatible_connections: return "no_compatible_connections";
    case FailureReason::state_space_exceeded: return "state_space_exceeded";
    case FailureReason::planner_did_not_converge: return "planner_did_not_converge";
  }
  return "?";
}

TransferResult check_transfer(const CausalModel& model, const Catalog& catalog,
                              const std::vector<std::string>& training_objects, const ObjectSpec& test_object,
                              const FunctionBinding& binding, const PlannerConfig& config) {
  TransferResult r;
  r.training_objects = training_objects;
  r.test_object = test_object.id();
  r.relation = relation_to(catalog, training_objects, test_object.category());
  r.warnings = binding.warnings;

  auto fail = [&](FailureReason why) {
    r.success = false;
    r.reason = why;
  };

  if (applicable_actions(test_object, AssemblyState{}).empty()) {
    fail(FailureReason::no_compatible_connections);
    return r;
  }
  try {
    PlanningProblem problem(test_object, model, binding, config);
    r.plan = solve(problem);
    r.success = r.plan->achieves_goal;
    if (!r.success) r.reason = FailureReason::goal_unreachable_under_model;
  } catch (const StateSpaceExceeded&) {
    fail(FailureReason::state_space_exceeded);
  } catch (const NonConvergence&) {
    fail(FailureReason::planner_did_not_converge);
  }
  return r;
}

const char* to_string(Condition c) noexcept { return c == Condition::near ? "near" : "far"; }

std::optional<Condition> parse_condition(std::string_view s) noexcept {
  if (s == "near") return Condition::near;
  if (s == "far") return Condition::far;
  return std::nullopt;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const Catalog& catalog) {
  if (spec.training.empty()) throw ConditionMismatch("experiment needs at least one training object");
  std::set<std::string> cats;
  for (const auto& t : spec.training) {
    const auto& c = catalog.at(t).category();
    if (c.empty()) throw ConditionMismatch("training object " + t + " has no category");
    cats.insert(c);
  }
  if (spec.condition == Condition::near && cats.size() != 1)
    throw ConditionMismatch("near condition requires training objects from one category");
  if (spec.condition == Condition::far && cats.size() < 2)
    throw ConditionMismatch("far condition requires training objects from different categories");

  auto report_errors = validate_model(spec.model);
  if (!report_errors.ok()) throw InvalidModel(std::move(report_errors));

  ExperimentReport report;
  report.condition = spec.condition;
  report.training = spec.training;
  report.model_hash = model_hash(spec.model);
  for (const auto& test : spec.tests) {
    const auto& object = catalog.at(test.object_id);
    auto binding = bind_functions(object, spec.model, test.entries);
    report.results.push_back(check_transfer(spec.model, catalog, spec.training, object, binding, spec.config));
  }
  return report;
}

std::vector<std::string> unmet_expectations(const ExperimentSpec& spec, const ExperimentReport& report) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < spec.tests.size() && i < report.results.size(); ++i) {
    const auto& expect = spec.tests[i].expect_success;
    if (!expect || *expect == report.results[i].success) continue;
    out.push_back(spec.tests[i].object_id + ": expected " + (*expect ? "success" : "failure") + ", got " +
                  (report.results[i].success ? "success" : "failure"));
  }
  return out;
}

}  // namespace causeplan
