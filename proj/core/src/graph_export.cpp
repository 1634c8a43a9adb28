#include "causeplan/graph_export.hpp"

#include <algorithm>

namespace causeplan {

std::size_t GraphExport::edge_count() const {
  std::size_t n = 0;
  for (const auto& g : rule_groups) n += g.antecedents.size();
  return n;
}

GraphExport to_graph_export(const CausalModel& model) {
  GraphExport g;
  for (const auto& n : model.nodes()) g.nodes.push_back({n, model.kind_of(n)});
  const auto& rules = model.rules();
  for (std::size_t i = 0; i < rules.size(); ++i)
    g.rule_groups.push_back({i, rules[i].effect, rules[i].antecedents});
  std::stable_sort(g.rule_groups.begin(), g.rule_groups.end(),
                   [](const RuleGroup& a, const RuleGroup& b) {
                     if (a.effect != b.effect) return a.effect < b.effect;
                     return a.rule_index < b.rule_index;
                   });
  return g;
}

nlohmann::json to_json(const GraphExport& graph) {
  auto nodes = nlohmann::json::array();
  for (const auto& n : graph.nodes) nodes.push_back({{"label", n.label.str()}, {"kind", to_string(n.kind)}});
  auto groups = nlohmann::json::array();
  for (const auto& g : graph.rule_groups) {
    auto ants = nlohmann::json::array();
    for (const auto& a : g.antecedents) ants.push_back(a.str());
    groups.push_back({{"rule", g.rule_index}, {"effect", g.effect.str()}, {"antecedents", std::move(ants)}});
  }
  return {{"nodes", std::move(nodes)}, {"rule_groups", std::move(groups)}};
}

}  // namespace causeplan
