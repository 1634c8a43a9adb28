#pragma once

#include <string>

#include "causeplan/catalog.hpp"
#include "causeplan/model_dsl.hpp"
#include "causeplan/planner.hpp"
#include "causeplan/transfer.hpp"
#include "support/paths.hpp"

namespace causeplan::testing {

inline const Catalog& fixture_catalog() {
  static const Catalog catalog = load_catalog(data_dir() / "catalog");
  return catalog;
}

inline const Catalog& two_part_catalog() {
  static const Catalog catalog = load_catalog(test_data_dir() / "catalog");
  return catalog;
}

inline CausalModel fixture_model(const std::string& name) {
  return parse_model(read_text_file(data_dir() / "models" / (name + ".cm")));
}

inline BindingEntries fixture_entries(const std::string& name) {
  return binding_from_json(read_json_file(data_dir() / "bindings" / (name + ".json"))).entries;
}

/// Problem for a catalog object with a model and binding from data/.
inline PlanningProblem fixture_problem(const std::string& object, const std::string& model,
                                       const std::string& binding, PlannerConfig config = {}) {
  const auto& obj = fixture_catalog().at(object);
  auto m = fixture_model(model);
  auto b = bind_functions(obj, m, fixture_entries(binding));
  return PlanningProblem(obj, std::move(m), std::move(b), config);
}

inline PlanningProblem two_part_problem(const std::string& object = "two_part", PlannerConfig config = {}) {
  const auto& obj = two_part_catalog().at(object);
  auto m = parse_model(read_text_file(test_data_dir() / "two_part.cm"));
  auto doc = binding_from_json(read_json_file(test_data_dir() / "two_part_binding.json"));
  auto b = bind_functions(obj, m, doc.entries);
  return PlanningProblem(obj, std::move(m), std::move(b), config);
}

}  // namespace causeplan::testing
