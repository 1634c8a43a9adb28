#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json.hpp>

#include "causeplan/causal_model.hpp"

namespace causeplan {

struct GraphNode {
  Label label;
  NodeKind kind;
};

/// One rule as a hyperedge: all antecedents jointly cause the effect.
struct RuleGroup {
  std::size_t rule_index;
  Label effect;
  std::vector<Label> antecedents;
};

struct GraphExport {
  std::vector<GraphNode> nodes;         // sorted by label
  std::vector<RuleGroup> rule_groups;   // sorted by (effect, rule_index)

  std::size_t edge_count() const;
};

GraphExport to_graph_export(const CausalModel& model);

nlohmann::json to_json(const GraphExport& graph);

}  // namespace causeplan
