#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "causeplan/binding.hpp"
#include "causeplan/catalog.hpp"
#include "causeplan/causal_model.hpp"
#include "causeplan/planner.hpp"

namespace causeplan {

class UnknownPart : public std::runtime_error {
public:
  UnknownPart(const std::string& object_id, const std::string& part_id)
      : std::runtime_error("object " + object_id + " has no part '" + part_id + "'"), part_id_(part_id) {}
  const std::string& part_id() const noexcept { return part_id_; }

private:
  std::string part_id_;
};

/// Normalizes labels and tags each one as model vocabulary (a function node of
/// `model`) or novel. Novel labels cannot influence evaluation and are
/// reported as warnings. Throws UnknownPart; blank labels throw
/// std::invalid_argument.
FunctionBinding bind_functions(const ObjectSpec& object, const CausalModel& model, const BindingEntries& entries);

enum class Relation { near, far };
const char* to_string(Relation r) noexcept;

/// near iff the test object shares a category with at least one training
/// object. Uncategorized objects share no category.
Relation category_relation(const Catalog& catalog, const std::vector<std::string>& training,
                           const std::string& test_object);

enum class FailureReason {
  goal_unreachable_under_model,
  no_compatible_connections,
  state_space_exceeded,
  planner_did_not_converge,
};
const char* to_string(FailureReason r) noexcept;

struct TransferResult {
  std::vector<std::string> training_objects;
  std::string test_object;
  Relation relation = Relation::far;
  bool success = false;
  std::optional<FailureReason> reason;  // set iff !success
  std::optional<Plan> plan;             // absent when planning could not run
  std::vector<std::string> warnings;
};

/// Plans for the test object with the frozen model. Planner errors are
/// reported as failure reasons. Training ids are looked up in `catalog`; the
/// test object's own category decides the relation.
TransferResult check_transfer(const CausalModel& model, const Catalog& catalog,
                              const std::vector<std::string>& training_objects, const ObjectSpec& test_object,
                              const FunctionBinding& binding, const PlannerConfig& config);

enum class Condition { near, far };
const char* to_string(Condition c) noexcept;
std::optional<Condition> parse_condition(std::string_view s) noexcept;

class ConditionMismatch : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExperimentTest {
  std::string object_id;
  BindingEntries entries;
  std::optional<bool> expect_success;
};

struct ExperimentSpec {
  Condition condition = Condition::near;
  std::vector<std::string> training;
  CausalModel model;
  std::vector<ExperimentTest> tests;
  PlannerConfig config;
};

struct ExperimentReport {
  Condition condition = Condition::near;
  std::vector<std::string> training;
  std::string model_hash;
  std::vector<TransferResult> results;  // one per test, in input order
};

/// A single model trained on two objects, checked against each test object.
/// Near requires same-category training objects, far requires two categories;
/// otherwise throws ConditionMismatch.
ExperimentReport run_experiment(const ExperimentSpec& spec, const Catalog& catalog);

/// Descriptions of tests whose declared expectation does not match the report.
std::vector<std::string> unmet_expectations(const ExperimentSpec& spec, const ExperimentReport& report);

}  // namespace causeplan
