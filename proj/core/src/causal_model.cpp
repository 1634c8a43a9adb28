#include "causeplan/causal_model.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>

#include "causeplan/model_dsl.hpp"

namespace causeplan {

CausalRule::CausalRule(std::vector<Label> body, Label eff)
    : antecedents(std::move(body)), effect(std::move(eff)) {
  std::sort(antecedents.begin(), antecedents.end());
  antecedents.erase(std::unique(antecedents.begin(), antecedents.end()), antecedents.end());
  if (antecedents.empty()) throw std::invalid_argument("rule has an empty body");
  if (std::binary_search(antecedents.begin(), antecedents.end(), effect))
    throw std::invalid_argument("effect appears in its own antecedents: " + effect.str());
}

const char* to_string(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::function: return "function";
    case NodeKind::intermediate: return "intermediate";
    case NodeKind::goal: return "goal";
  }
  return "?";
}

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::no_rules: return "no_rules";
    case ViolationKind::goal_not_caused: return "goal_not_caused";
    case ViolationKind::goal_used_as_cause: return "goal_used_as_cause";
    case ViolationKind::intermediate_without_causes: return "intermediate_without_causes";
    case ViolationKind::cycle: return "cycle";
  }
  return "?";
}

CausalModel::CausalModel(Label goal, std::vector<CausalRule> rules, std::set<Label> declared)
    : goal_(std::move(goal)), rules_(std::move(rules)), declared_(std::move(declared)) {}

std::set<Label> CausalModel::nodes() const {
  std::set<Label> out{goal_};
  out.insert(declared_.begin(), declared_.end());
  for (const auto& r : rules_) {
    out.insert(r.effect);
    out.insert(r.antecedents.begin(), r.antecedents.end());
  }
  return out;
}

bool CausalModel::contains(const Label& node) const {
  if (node == goal_ || declared_.count(node)) return true;
  return std::any_of(rules_.begin(), rules_.end(), [&](const CausalRule& r) {
    return r.effect == node || std::binary_search(r.antecedents.begin(), r.antecedents.end(), node);
  });
}

NodeKind CausalModel::kind_of(const Label& node) const {
  if (node == goal_) return NodeKind::goal;
  if (declared_.count(node)) return NodeKind::intermediate;
  for (const auto& r : rules_)
    if (r.effect == node) return NodeKind::intermediate;
  return NodeKind::function;
}

std::set<Label> CausalModel::function_nodes() const {
  std::set<Label> out;
  for (const auto& n : nodes())
    if (kind_of(n) == NodeKind::function) out.insert(n);
  return out;
}

std::set<Label> CausalModel::intermediate_nodes() const {
  std::set<Label> out;
  for (const auto& n : nodes())
    if (kind_of(n) == NodeKind::intermediate) out.insert(n);
  return out;
}

namespace {

std::string join_path(const std::vector<Label>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += "→";
    s += path[i].str();
  }
  return s;
}

// Each cycle is reported once, as found by DFS from the smallest label.
std::vector<std::vector<Label>> find_cycles(const CausalModel& model) {
  std::map<Label, std::set<Label>> succ;
  for (const auto& r : model.rules())
    for (const auto& a : r.antecedents) succ[a].insert(r.effect);

  enum class Mark { white, grey, black };
  std::map<Label, Mark> mark;
  std::vector<Label> stack;
  std::vector<std::vector<Label>> cycles;

  std::function<void(const Label&)> visit = [&](const Label& n) {
    mark[n] = Mark::grey;
    stack.push_back(n);
    for (const auto& m : succ[n]) {
      auto mk = mark[m];
      if (mk == Mark::grey) {
        auto it = std::find(stack.begin(), stack.end(), m);
        std::vector<Label> cyc(it, stack.end());
        cyc.push_back(m);
        cycles.push_back(std::move(cyc));
      } else if (mk == Mark::white) {
        visit(m);
      }
    }
    stack.pop_back();
    mark[n] = Mark::black;
  };
  for (const auto& n : model.nodes())
    if (mark[n] == Mark::white) visit(n);
  return cycles;
}

}  // namespace

ValidationReport validate_model(const CausalModel& model) {
  ValidationReport report;
  auto add = [&](ViolationKind k, std::vector<Label> nodes, std::string msg) {
    report.violations.push_back({k, std::move(nodes), std::move(msg)});
  };

  if (model.rules().empty()) add(ViolationKind::no_rules, {}, "model has no rules");

  std::set<Label> effects;
  std::set<Label> causes;
  for (const auto& r : model.rules()) {
    effects.insert(r.effect);
    causes.insert(r.antecedents.begin(), r.antecedents.end());
  }

  const Label& goal = model.goal();
  if (!model.rules().empty() && !effects.count(goal))
    add(ViolationKind::goal_not_caused, {goal}, "goal is not the effect of any rule: " + goal.str());
  if (causes.count(goal))
    add(ViolationKind::goal_used_as_cause, {goal}, "goal is used as a cause: " + goal.str());

  for (const auto& n : model.declared_intermediates()) {
    if (n == goal) continue;
    if (!effects.count(n))
      add(ViolationKind::intermediate_without_causes, {n}, "intermediate effect without causes: " + n.str());
  }

  for (auto& cyc : find_cycles(model)) {
    std::string msg = "cycle: " + join_path(cyc);
    add(ViolationKind::cycle, std::move(cyc), std::move(msg));
  }
  return report;
}

namespace {

std::string summarize(const ValidationReport& report) {
  std::string s = "invalid causal model";
  for (const auto& v : report.violations) s += "; " + v.message;
  return s;
}

}  // namespace

InvalidModel::InvalidModel(ValidationReport report)
    : std::runtime_error(summarize(report)), report_(std::move(report)) {}

bool NodeValuation::value(const Label& node) const {
  auto it = values.find(node);
  return it != values.end() && it->second;
}

ModelEvaluator::ModelEvaluator(const CausalModel& model) {
  auto report = validate_model(model);
  if (!report.ok()) throw InvalidModel(std::move(report));

  // Kahn's algorithm, smallest-label-first for a stable order.
  auto all = model.nodes();
  std::map<Label, std::size_t> indegree;
  std::map<Label, std::set<Label>> succ;
  for (const auto& n : all) indegree[n] = 0;
  for (const auto& r : model.rules())
    for (const auto& a : r.antecedents)
      if (succ[a].insert(r.effect).second) ++indegree[r.effect];

  std::set<Label> ready;
  for (const auto& [n, d] : indegree)
    if (d == 0) ready.insert(n);
  while (!ready.empty()) {
    Label n = *ready.begin();
    ready.erase(ready.begin());
    index_[n] = order_.size();
    order_.push_back(n);
    for (const auto& m : succ[n])
      if (--indegree[m] == 0) ready.insert(m);
  }

  is_root_.assign(order_.size(), false);
  producers_.assign(order_.size(), {});
  for (const auto& n : order_)
    is_root_[index_[n]] = model.kind_of(n) == NodeKind::function;
  for (const auto& r : model.rules()) {
    CompiledRule cr;
    for (const auto& a : r.antecedents) cr.antecedents.push_back(index_.at(a));
    producers_[index_.at(r.effect)].push_back(std::move(cr));
  }
  goal_ = index_.at(model.goal());
}

std::vector<bool> ModelEvaluator::run(const std::set<Label>& active) const {
  std::vector<bool> v(order_.size(), false);
  for (std::size_t i = 0; i < order_.size(); ++i) {
    if (is_root_[i]) {
      v[i] = active.count(order_[i]) > 0;
      continue;
    }
    for (const auto& rule : producers_[i]) {
      bool all = std::all_of(rule.antecedents.begin(), rule.antecedents.end(),
                             [&](std::size_t a) { return v[a]; });
      if (all) {
        v[i] = true;
        break;
      }
    }
  }
  return v;
}

NodeValuation ModelEvaluator::evaluate(const std::set<Label>& active) const {
  auto v = run(active);
  NodeValuation out;
  out.goal = order_[goal_];
  for (std::size_t i = 0; i < order_.size(); ++i) out.values.emplace(order_[i], v[i]);
  return out;
}

bool ModelEvaluator::goal_reached(const std::set<Label>& active) const { return run(active)[goal_]; }

NodeValuation evaluate(const CausalModel& model, const std::set<Label>& active) {
  return ModelEvaluator(model).evaluate(active);
}

std::string model_hash(const CausalModel& model) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_model(model)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace causeplan
