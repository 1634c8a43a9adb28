#pragma once

#include <filesystem>

#include <nlohmann/json.hpp>

#include "causeplan/binding.hpp"
#include "causeplan/causal_model.hpp"
#include "causeplan/model_dsl.hpp"
#include "causeplan/planner.hpp"
#include "causeplan/transfer.hpp"

namespace causeplan {

/// Value of the `v` field on every emitted document.
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const ParseError& error);
nlohmann::json to_json(const FunctionBinding& binding);

/// {v, object_id, model_hash, steps[{primitive, from, to, text}],
///  expected_value, achieves_goal, stats{states, iterations, residual}}
nlohmann::json to_json(const Plan& plan);
nlohmann::json to_json(const TransferResult& result);
/// {v, condition, training[], model_hash, results[...]}
nlohmann::json to_json(const ExperimentReport& report);

/// Overrides for any of {discount, epsilon, max_states, max_iterations,
/// rewards{goal, dead_end, step}} present in `doc`.
PlannerConfig planner_config_from_json(const nlohmann::json& doc, PlannerConfig base = {});
nlohmann::json to_json(const PlannerConfig& config);

/// Experiment config: {condition, training[], model, tests[{object, binding,
/// expect}], planner?}. `model` is a path to a .cm file; each `binding` is a
/// path to a binding document or an inline {part: [labels]} object. Relative
/// paths resolve against `base_dir`.
ExperimentSpec experiment_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                                    PlannerConfig base = {});

}  // namespace causeplan
