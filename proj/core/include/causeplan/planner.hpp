#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "causeplan/assembly.hpp"
#include "causeplan/binding.hpp"
#include "causeplan/causal_model.hpp"

namespace causeplan {

struct Rewards {
  double goal = 1.0;
  double dead_end = -1.0;
  double step = -0.01;
};

struct PlannerConfig {
  double discount = 0.95;
  Rewards rewards;
  double epsilon = 1e-6;
  std::size_t max_states = 100000;
  std::size_t max_iterations = 10000;

  /// Throws std::invalid_argument unless 0 < discount < 1, epsilon > 0,
  /// goal > 0 > dead_end and both caps are positive.
  void validate() const;
};

/// The MDP instance: object kit, frozen causal model, parts' function labels.
class PlanningProblem {
public:
  /// Throws InvalidModel, std::invalid_argument (bad config, binding for a
  /// different object or unknown parts).
  PlanningProblem(ObjectSpec object, CausalModel model, FunctionBinding binding, PlannerConfig config = {});

  const ObjectSpec& object() const noexcept { return object_; }
  const CausalModel& model() const noexcept { return model_; }
  const FunctionBinding& binding() const noexcept { return binding_; }
  const PlannerConfig& config() const noexcept { return config_; }

  /// Union of bound labels over the assembled component.
  std::set<Label> active_functions(const AssemblyState& state) const;
  bool is_goal_state(const AssemblyState& state) const;

private:
  ObjectSpec object_;
  CausalModel model_;
  FunctionBinding binding_;
  PlannerConfig config_;
  ModelEvaluator evaluator_;
  std::vector<std::set<Label>> part_labels_;  // by part index
};

inline bool is_goal_state(const PlanningProblem& problem, const AssemblyState& state) {
  return problem.is_goal_state(state);
}

/// +goal if the state satisfies the model, dead_end if it does not and no
/// action applies, otherwise the step cost.
double reward(const PlanningProblem& problem, const AssemblyState& state);

struct Outcome {
  AssemblyState state;
  double probability;
};

/// Success with the connectors' compatibility, otherwise the state is
/// unchanged. Zero-probability branches are omitted.
std::vector<Outcome> transition(const PlanningProblem& problem, const AssemblyState& state,
                                const AssemblyAction& action);

class StateSpaceExceeded : public std::runtime_error {
public:
  explicit StateSpaceExceeded(std::size_t cap)
      : std::runtime_error("state space exceeds max_states = " + std::to_string(cap)), cap_(cap) {}
  std::size_t cap() const noexcept { return cap_; }

private:
  std::size_t cap_;
};

class NonConvergence : public std::runtime_error {
public:
  NonConvergence(std::size_t iterations, double residual);
  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

private:
  std::size_t iterations_;
  double residual_;
};

struct StateTransition {
  AssemblyAction action;
  double success_probability;
  std::size_t successor;
};

/// Reachable states from the empty assembly. State 0 is the empty state.
/// Goal and dead-end states are absorbing and have no outgoing transitions.
struct StateSpace {
  std::vector<AssemblyState> states;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<bool> goal;
  std::vector<bool> dead_end;
  std::vector<std::vector<StateTransition>> transitions;

  std::size_t size() const noexcept { return states.size(); }
  bool absorbing(std::size_t s) const { return goal[s] || dead_end[s]; }
  std::size_t action_count() const;
  std::size_t goal_count() const;
  std::optional<std::size_t> find(const AssemblyState& state) const;
};

using GoalTest = std::function<bool(const AssemblyState&)>;

/// Breadth-first closure over success successors. Throws StateSpaceExceeded.
StateSpace enumerate_states(const ObjectSpec& object, const GoalTest& is_goal, std::size_t max_states);
StateSpace enumerate_states(const PlanningProblem& problem);

struct ValueIterationResult {
  std::vector<double> values;
  std::vector<std::optional<std::size_t>> policy;  // index into space.transitions[s]
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Bellman backups until the max-norm change drops below epsilon. Absorbing
/// states hold their own reward and contribute no continuation value.
/// Throws NonConvergence after config.max_iterations sweeps.
ValueIterationResult value_iteration(const PlanningProblem& problem, const StateSpace& space);

struct PlanStep {
  AssemblyAction action;
  std::string from;  // part.connector
  std::string to;
  std::string text;
};

struct PlanStats {
  std::size_t states = 0;
  std::size_t iterations = 0;
  double residual = 0.0;
};

struct Plan {
  std::string object_id;
  std::string model_hash;
  std::vector<PlanStep> steps;
  double expected_value = 0.0;
  bool achieves_goal = false;
  PlanStats stats;
};

/// Nominal rollout of the policy from the empty state, assuming every action
/// succeeds, until a goal, a dead end or a revisit.
Plan extract_plan(const PlanningProblem& problem, const StateSpace& space, const ValueIterationResult& solved);

/// enumerate_states + value_iteration + extract_plan.
Plan solve(const PlanningProblem& problem);

}  // namespace causeplan
