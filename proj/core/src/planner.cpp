#include "causeplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace causeplan {

void PlannerConfig::validate() const {
  if (!(discount > 0.0 && discount < 1.0)) throw std::invalid_argument("discount must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(rewards.goal > 0.0 && rewards.dead_end < 0.0))
    throw std::invalid_argument("rewards must satisfy goal > 0 > dead_end");
  if (max_states == 0) throw std::invalid_argument("max_states must be positive");
  if (max_iterations == 0) throw std::invalid_argument("max_iterations must be positive");
}

PlanningProblem::PlanningProblem(ObjectSpec object, CausalModel model, FunctionBinding binding, PlannerConfig config)
    : object_(std::move(object)),
      model_(std::move(model)),
      binding_(std::move(binding)),
      config_(config),
      evaluator_(model_) {
  config_.validate();
  if (!binding_.object_id.empty() && binding_.object_id != object_.id())
    throw std::invalid_argument("binding is for object '" + binding_.object_id + "', not '" + object_.id() + "'");
  part_labels_.resize(object_.parts().size());
  for (const auto& [part_id, labels] : binding_.entries) {
    auto idx = object_.find_part(part_id);
    if (!idx) throw std::invalid_argument("binding references unknown part " + part_id);
    part_labels_[*idx] = labels;
  }
}

std::set<Label> PlanningProblem::active_functions(const AssemblyState& state) const {
  std::set<Label> active;
  for (auto p : assembled_component(object_, state)) active.insert(part_labels_[p].begin(), part_labels_[p].end());
  return active;
}

bool PlanningProblem::is_goal_state(const AssemblyState& state) const {
  return evaluator_.goal_reached(active_functions(state));
}

double reward(const PlanningProblem& problem, const AssemblyState& state) {
  const auto& r = problem.config().rewards;
  if (problem.is_goal_state(state)) return r.goal;
  if (applicable_actions(problem.object(), state).empty()) return r.dead_end;
  return r.step;
}

std::vector<Outcome> transition(const PlanningProblem& problem, const AssemblyState& state,
                                const AssemblyAction& action) {
  double p = compatibility(problem.object(), action.from, action.to);
  std::vector<Outcome> out;
  if (p > 0.0) out.push_back({apply_action(problem.object(), state, action), p});
  if (p < 1.0) out.push_back({state, 1.0 - p});
  return out;
}

NonConvergence::NonConvergence(std::size_t iterations, double residual)
    : std::runtime_error("value iteration did not converge after " + std::to_string(iterations) +
                         " sweeps (residual " + std::to_string(residual) + ")"),
      iterations_(iterations),
      residual_(residual) {}

std::size_t StateSpace::action_count() const {
  std::size_t n = 0;
  for (const auto& t : transitions) n += t.size();
  return n;
}

std::size_t StateSpace::goal_count() const { return static_cast<std::size_t>(std::count(goal.begin(), goal.end(), true)); }

std::optional<std::size_t> StateSpace::find(const AssemblyState& state) const {
  auto it = index.find(state.key());
  if (it == index.end()) return std::nullopt;
  return it->second;
}

StateSpace enumerate_states(const ObjectSpec& object, const GoalTest& is_goal, std::size_t max_states) {
  StateSpace space;
  auto intern = [&](AssemblyState s) -> std::size_t {
    auto key = s.key();
    if (auto it = space.index.find(key); it != space.index.end()) return it->second;
    if (space.states.size() >= max_states) throw StateSpaceExceeded(max_states);
    std::size_t id = space.states.size();
    space.index.emplace(std::move(key), id);
    space.states.push_back(std::move(s));
    space.goal.push_back(false);
    space.dead_end.push_back(false);
    space.transitions.emplace_back();
    return id;
  };

  intern(AssemblyState{});
  // States are appended in BFS order, so the vector doubles as the queue.
  for (std::size_t s = 0; s < space.states.size(); ++s) {
    if (is_goal(space.states[s])) {
      space.goal[s] = true;
      continue;
    }
    auto actions = applicable_actions(object, space.states[s]);
    if (actions.empty()) {
      space.dead_end[s] = true;
      continue;
    }
    std::vector<StateTransition> out;
    out.reserve(actions.size());
    for (const auto& a : actions) {
      double p = compatibility(object, a.from, a.to);
      auto next = apply_action(object, space.states[s], a);
      out.push_back({a, p, intern(std::move(next))});
    }
    space.transitions[s] = std::move(out);
  }
  return space;
}

StateSpace enumerate_states(const PlanningProblem& problem) {
  return enumerate_states(
      problem.object(), [&](const AssemblyState& s) { return problem.is_goal_state(s); }, problem.config().max_states);
}

namespace {

double state_reward(const Rewards& r, const StateSpace& space, std::size_t s) {
  if (space.goal[s]) return r.goal;
  if (space.dead_end[s]) return r.dead_end;
  return r.step;
}

// Expected return of taking `t` in `s`, reading values from `v`.
double q_value(const PlannerConfig& cfg, const StateSpace& space, const std::vector<double>& v, std::size_t s,
               const StateTransition& t) {
  const double gamma = cfg.discount;
  auto backup = [&](std::size_t next) {
    double cont = space.absorbing(next) ? 0.0 : v[next];
    return state_reward(cfg.rewards, space, next) + gamma * cont;
  };
  double p = t.success_probability;
  double q = p * backup(t.successor);
  if (p < 1.0) q += (1.0 - p) * backup(s);
  return q;
}

constexpr double kTieTolerance = 1e-12;

}  // namespace

ValueIterationResult value_iteration(const PlanningProblem& problem, const StateSpace& space) {
  const auto& cfg = problem.config();
  const std::size_t n = space.size();
  ValueIterationResult out;
  std::vector<double> v(n, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    if (space.absorbing(s)) v[s] = state_reward(cfg.rewards, space, s);

  std::vector<double> next = v;
  for (;;) {
    double residual = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      if (space.absorbing(s)) continue;
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& t : space.transitions[s]) best = std::max(best, q_value(cfg, space, v, s, t));
      next[s] = best;
      residual = std::max(residual, std::abs(best - v[s]));
    }
    v.swap(next);
    ++out.iterations;
    out.residual = residual;
    if (residual < cfg.epsilon) break;
    if (out.iterations >= cfg.max_iterations) throw NonConvergence(out.iterations, residual);
  }

  out.policy.assign(n, std::nullopt);
  for (std::size_t s = 0; s < n; ++s) {
    if (space.absorbing(s)) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < space.transitions[s].size(); ++a) {
      double q = q_value(cfg, space, v, s, space.transitions[s][a]);
      // Transitions are in (primitive, from, to) order; near-ties keep the first.
      if (q > best + kTieTolerance) {
        best = q;
        out.policy[s] = a;
      }
    }
  }
  out.values = std::move(v);
  return out;
}

Plan extract_plan(const PlanningProblem& problem, const StateSpace& space, const ValueIterationResult& solved) {
  Plan plan;
  plan.object_id = problem.object().id();
  plan.model_hash = model_hash(problem.model());
  plan.expected_value = solved.values.empty() ? 0.0 : solved.values[0];
  plan.stats = {space.size(), solved.iterations, solved.residual};

  std::unordered_set<std::size_t> visited{0};
  std::size_t s = 0;
  for (;;) {
    if (space.goal[s]) {
      plan.achieves_goal = true;
      break;
    }
    if (space.dead_end[s] || !solved.policy[s]) break;
    const auto& t = space.transitions[s][*solved.policy[s]];
    const auto& obj = problem.object();
    plan.steps.push_back({t.action, obj.qualified_name(t.action.from), obj.qualified_name(t.action.to),
                          render_action(obj, t.action)});
    if (!visited.insert(t.successor).second) break;
    s = t.successor;
  }
  return plan;
}

Plan solve(const PlanningProblem& problem) {
  auto space = enumerate_states(problem);
  auto solved = value_iteration(problem, space);
  return extract_plan(problem, space, solved);
}

}  // namespace causeplan
