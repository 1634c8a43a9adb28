#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "causeplan/label.hpp"

namespace causeplan {

/// antecedent_1 AND ... AND antecedent_n CAUSES effect
struct CausalRule {
  std::vector<Label> antecedents;  // sorted, unique
  Label effect;

  CausalRule() = default;
  /// Sorts and deduplicates `antecedents`. Throws std::invalid_argument if the
  /// body is empty or contains the effect.
  CausalRule(std::vector<Label> antecedents, Label effect);

  friend bool operator==(const CausalRule&, const CausalRule&) = default;
};

enum class NodeKind { function, intermediate, goal };

const char* to_string(NodeKind kind) noexcept;

/// A user-authored causal model: a goal label plus an ordered list of rules.
///
/// The model is a plain value and may be structurally invalid (cycles,
/// cause-less intermediates). Use validate_model() before evaluating.
class CausalModel {
public:
  CausalModel() = default;
  CausalModel(Label goal, std::vector<CausalRule> rules, std::set<Label> declared_intermediates = {});

  const Label& goal() const noexcept { return goal_; }
  const std::vector<CausalRule>& rules() const noexcept { return rules_; }
  const std::set<Label>& declared_intermediates() const noexcept { return declared_; }

  /// Every label mentioned by the goal, a declaration or a rule.
  std::set<Label> nodes() const;
  NodeKind kind_of(const Label& node) const;
  /// Root nodes: never the effect of a rule, not the goal, not declared intermediate.
  std::set<Label> function_nodes() const;
  std::set<Label> intermediate_nodes() const;
  bool contains(const Label& node) const;

  void add_rule(CausalRule rule) { rules_.push_back(std::move(rule)); }

  friend bool operator==(const CausalModel&, const CausalModel&) = default;

private:
  Label goal_;
  std::vector<CausalRule> rules_;
  std::set<Label> declared_;
};

enum class ViolationKind {
  no_rules,
  goal_not_caused,
  goal_used_as_cause,
  intermediate_without_causes,
  cycle,
};

const char* to_string(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::vector<Label> nodes;  // offending node(s); for cycles, the closed path
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_model(const CausalModel& model);

/// Thrown when an operation that requires a valid model receives an invalid one.
class InvalidModel : public std::runtime_error {
public:
  explicit InvalidModel(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

private:
  ValidationReport report_;
};

/// Binary value of every node in a model.
struct NodeValuation {
  std::map<Label, bool> values;
  Label goal;

  bool value(const Label& node) const;
  bool goal_reached() const { return value(goal); }
};

/// Model compiled for repeated evaluation: nodes indexed in topological order.
/// Construction validates the model and throws InvalidModel on violations.
class ModelEvaluator {
public:
  explicit ModelEvaluator(const CausalModel& model);

  /// Roots take 1 iff active; a non-root is 1 iff some rule producing it has
  /// all antecedents at 1. Labels outside the model's roots are ignored.
  NodeValuation evaluate(const std::set<Label>& active) const;
  bool goal_reached(const std::set<Label>& active) const;

  const std::vector<Label>& topological_order() const noexcept { return order_; }

private:
  std::vector<bool> run(const std::set<Label>& active) const;

  struct CompiledRule {
    std::vector<std::size_t> antecedents;
  };
  std::vector<Label> order_;
  std::map<Label, std::size_t> index_;
  std::vector<bool> is_root_;
  std::vector<std::vector<CompiledRule>> producers_;  // per node
  std::size_t goal_ = 0;
};

NodeValuation evaluate(const CausalModel& model, const std::set<Label>& active);

/// Stable 64-bit FNV-1a of the canonical DSL text, as 16 hex digits.
std::string model_hash(const CausalModel& model);

}  // namespace causeplan
