#include "causeplan/documents.hpp"

#include "causeplan/catalog.hpp"

namespace causeplan {

using nlohmann::json;

json to_json(const ValidationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    json nodes = json::array();
    for (const auto& n : v.nodes) nodes.push_back(n.str());
    violations.push_back({{"kind", to_string(v.kind)}, {"nodes", std::move(nodes)}, {"message", v.message}});
  }
  return {{"ok", report.ok()}, {"violations", std::move(violations)}};
}

json to_json(const ParseError& error) {
  return {{"error", "syntax"}, {"line", error.line()}, {"column", error.column()}, {"message", error.detail()}};
}

json to_json(const FunctionBinding& binding) {
  json entries = json::object();
  for (const auto& [part, labels] : binding.entries) {
    json ls = json::array();
    for (const auto& l : labels) ls.push_back(l.str());
    entries[part] = std::move(ls);
  }
  json provenance = json::object();
  for (const auto& [label, origin] : binding.provenance) provenance[label.str()] = to_string(origin);
  return {{"object_id", binding.object_id},
          {"entries", std::move(entries)},
          {"provenance", std::move(provenance)},
          {"warnings", binding.warnings}};
}

json to_json(const Plan& plan) {
  json steps = json::array();
  for (const auto& s : plan.steps)
    steps.push_back({{"primitive", to_string(s.action.primitive)}, {"from", s.from}, {"to", s.to}, {"text", s.text}});
  return {{"v", kSchemaVersion},
          {"object_id", plan.object_id},
          {"model_hash", plan.model_hash},
          {"steps", std::move(steps)},
          {"expected_value", plan.expected_value},
          {"achieves_goal", plan.achieves_goal},
          {"stats",
           {{"states", plan.stats.states}, {"iterations", plan.stats.iterations}, {"residual", plan.stats.residual}}}};
}

json to_json(const TransferResult& result) {
  json doc = {{"v", kSchemaVersion},
              {"training", result.training_objects},
              {"test_object", result.test_object},
              {"relation", to_string(result.relation)},
              {"outcome", result.success ? "success" : "failure"}};
  if (result.reason) doc["reason"] = to_string(*result.reason);
  if (result.plan) doc["plan"] = to_json(*result.plan);
  doc["warnings"] = result.warnings;
  return doc;
}

json to_json(const ExperimentReport& report) {
  json results = json::array();
  for (const auto& r : report.results) {
    json doc = to_json(r);
    doc.erase("v");
    doc.erase("training");
    results.push_back(std::move(doc));
  }
  return {{"v", kSchemaVersion},
          {"condition", to_string(report.condition)},
          {"training", report.training},
          {"model_hash", report.model_hash},
          {"results", std::move(results)}};
}

namespace {

template <typename T>
void maybe(const json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

}  // namespace

PlannerConfig planner_config_from_json(const json& doc, PlannerConfig cfg) {
  if (!doc.is_object()) throw std::invalid_argument("planner config must be an object");
  maybe(doc, "discount", cfg.discount);
  maybe(doc, "epsilon", cfg.epsilon);
  maybe(doc, "max_states", cfg.max_states);
  maybe(doc, "max_iterations", cfg.max_iterations);
  if (doc.contains("rewards")) {
    const auto& r = doc.at("rewards");
    maybe(r, "goal", cfg.rewards.goal);
    maybe(r, "dead_end", cfg.rewards.dead_end);
    maybe(r, "step", cfg.rewards.step);
  }
  cfg.validate();
  return cfg;
}

json to_json(const PlannerConfig& c) {
  return {{"discount", c.discount},
          {"epsilon", c.epsilon},
          {"max_states", c.max_states},
          {"max_iterations", c.max_iterations},
          {"rewards", {{"goal", c.rewards.goal}, {"dead_end", c.rewards.dead_end}, {"step", c.rewards.step}}}};
}

ExperimentSpec experiment_from_json(const json& doc, const std::filesystem::path& base_dir, PlannerConfig base) {
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  auto require = [&](const json& d, const char* key) -> const json& {
    if (!d.is_object() || !d.contains(key))
      throw std::invalid_argument(std::string("experiment config: missing field '") + key + "'");
    return d.at(key);
  };

  ExperimentSpec spec;
  auto cond = parse_condition(require(doc, "condition").get<std::string>());
  if (!cond) throw std::invalid_argument("experiment config: condition must be 'near' or 'far'");
  spec.condition = *cond;
  spec.training = require(doc, "training").get<std::vector<std::string>>();
  spec.model = parse_model(read_text_file(resolve(require(doc, "model").get<std::string>())));
  spec.config = doc.contains("planner") ? planner_config_from_json(doc.at("planner"), base) : base;

  for (const auto& t : require(doc, "tests")) {
    ExperimentTest test;
    test.object_id = require(t, "object").get<std::string>();
    if (t.contains("binding")) {
      const auto& b = t.at("binding");
      if (b.is_string()) {
        auto bd = binding_from_json(read_json_file(resolve(b.get<std::string>())));
        if (!bd.object_id.empty() && bd.object_id != test.object_id)
          throw std::invalid_argument("binding file is for " + bd.object_id + ", test object is " + test.object_id);
        test.entries = std::move(bd.entries);
      } else {
        test.entries = binding_from_json(json{{"entries", b}}).entries;
      }
    }
    if (t.contains("expect")) {
      auto e = t.at("expect").get<std::string>();
      if (e != "success" && e != "failure")
        throw std::invalid_argument("experiment config: expect must be 'success' or 'failure'");
      test.expect_success = e == "success";
    }
    spec.tests.push_back(std::move(test));
  }
  return spec;
}

}  // namespace causeplan
