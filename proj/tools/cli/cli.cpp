#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>

#include "causeplan/catalog.hpp"
#include "causeplan/documents.hpp"
#include "causeplan/graph_export.hpp"
#include "causeplan/model_dsl.hpp"
#include "causeplan/planner.hpp"
#include "causeplan/transfer.hpp"

namespace causeplan::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string catalog_dir = "data/catalog";
  std::string format = "text";
  std::string out_path;

  std::string model_path;
  std::string binding_path;
  std::string object_id;
  std::vector<std::string> training;
  std::string config_path;

  std::optional<double> discount;
  std::optional<double> epsilon;
  std::optional<std::size_t> max_states;
  std::optional<std::size_t> max_iterations;
};

/// A failure whose message is printed as-is with the given exit code.
struct Failure {
  int code;
  std::string message;
};

PlannerConfig planner_config(const Options& o) {
  PlannerConfig c;
  if (o.discount) c.discount = *o.discount;
  if (o.epsilon) c.epsilon = *o.epsilon;
  if (o.max_states) c.max_states = *o.max_states;
  if (o.max_iterations) c.max_iterations = *o.max_iterations;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw Failure{kExitInputError, e.what()};
  }
  return c;
}

CausalModel load_model(const std::string& path) {
  try {
    return parse_model(read_text_file(path));
  } catch (const ParseError& e) {
    throw Failure{kExitInputError, path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                                       ": syntax error: " + e.detail()};
  }
}

BindingEntries load_binding(const std::string& path, const std::string& object_id) {
  if (path.empty()) return {};
  auto doc = binding_from_json(read_json_file(path));
  if (!doc.object_id.empty() && doc.object_id != object_id)
    throw Failure{kExitInputError, path + ": binding is for object '" + doc.object_id + "', not '" + object_id + "'"};
  return doc.entries;
}

void emit_document(const Options& o, const json& doc, std::ostream& out) {
  std::string text = doc.dump(2) + "\n";
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path, std::ios::binary | std::ios::trunc);
    if (!f) throw Failure{kExitInputError, "cannot write " + o.out_path};
    f << text;
  }
  if (o.format == "document") out << text;
}

std::string fixed(double v) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(6) << v;
  return ss.str();
}

void print_plan_text(const Plan& plan, const ObjectSpec& object, std::ostream& out) {
  out << "plan for " << object.display_name() << " (" << object.id() << "): "
      << (plan.achieves_goal ? "reaches goal" : "does not reach goal") << "\n";
  for (std::size_t i = 0; i < plan.steps.size(); ++i) out << "  " << i + 1 << ". " << plan.steps[i].text << "\n";
  if (plan.steps.empty()) out << "  (no steps)\n";
  out << "expected value: " << fixed(plan.expected_value) << "\n";
  out << "states: " << plan.stats.states << ", sweeps: " << plan.stats.iterations << "\n";
}

int cmd_catalog(const Options& o, std::ostream& out) {
  auto catalog = load_catalog(o.catalog_dir);
  if (o.format == "document") {
    json objects = json::array();
    for (const auto& obj : catalog.objects()) objects.push_back(to_json(obj));
    emit_document(o, {{"v", kSchemaVersion}, {"objects", objects}}, out);
    return kExitOk;
  }
  for (const auto& obj : catalog.objects()) {
    out << obj.id() << "  " << obj.display_name();
    if (!obj.category().empty()) out << "  [" << obj.category() << "]";
    out << "\n";
    for (const auto& p : obj.parts()) {
      out << "  " << p.id << " (" << p.display_name << "):";
      for (const auto& c : p.connectors) out << " " << c.id;
      out << "\n";
    }
  }
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  auto model = load_model(o.model_path);
  auto report = validate_model(model);
  if (o.format == "document") {
    json doc = {{"v", kSchemaVersion}, {"report", to_json(report)}};
    if (report.ok()) doc["graph"] = to_json(to_graph_export(model));
    emit_document(o, doc, out);
  } else if (report.ok()) {
    out << "ok: " << model.function_nodes().size() << " function node(s), " << model.intermediate_nodes().size()
        << " intermediate node(s), " << model.rules().size() << " rule(s), goal '" << model.goal() << "'\n";
  } else {
    for (const auto& v : report.violations) out << v.message << "\n";
  }
  return report.ok() ? kExitOk : kExitNegative;
}

int cmd_plan(const Options& o, std::ostream& out, std::ostream& err) {
  auto catalog = load_catalog(o.catalog_dir);
  const auto& object = catalog.at(o.object_id);
  auto model = load_model(o.model_path);
  auto binding = bind_functions(object, model, load_binding(o.binding_path, object.id()));
  PlanningProblem problem(object, model, binding, planner_config(o));
  auto plan = solve(problem);
  for (const auto& w : binding.warnings) err << "warning: " << w << "\n";
  if (o.format == "text") print_plan_text(plan, object, out);
  emit_document(o, to_json(plan), out);
  return plan.achieves_goal ? kExitOk : kExitNegative;
}

int cmd_transfer(const Options& o, std::ostream& out, std::ostream& err) {
  auto catalog = load_catalog(o.catalog_dir);
  const auto& object = catalog.at(o.object_id);
  for (const auto& t : o.training) catalog.at(t);
  auto model = load_model(o.model_path);
  auto report = validate_model(model);
  if (!report.ok()) throw InvalidModel(report);
  auto binding = bind_functions(object, model, load_binding(o.binding_path, object.id()));
  auto result = check_transfer(model, catalog, o.training, object, binding, planner_config(o));
  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  if (o.format == "text") {
    out << "transfer to " << object.display_name() << " (" << to_string(result.relation)
        << "): " << (result.success ? "success" : "failure");
    if (result.reason) out << " (" << to_string(*result.reason) << ")";
    out << "\n";
    if (result.plan)
      for (std::size_t i = 0; i < result.plan->steps.size(); ++i)
        out << "  " << i + 1 << ". " << result.plan->steps[i].text << "\n";
  }
  emit_document(o, to_json(result), out);
  return result.success ? kExitOk : kExitNegative;
}

int cmd_experiment(const Options& o, std::ostream& out, std::ostream& err) {
  auto catalog = load_catalog(o.catalog_dir);
  fs::path config(o.config_path);
  auto spec = experiment_from_json(read_json_file(config), config.parent_path(), planner_config(o));
  ExperimentReport report;
  try {
    report = run_experiment(spec, catalog);
  } catch (const ConditionMismatch& e) {
    throw Failure{kExitInputError, std::string("condition mismatch: ") + e.what()};
  }
  if (o.format == "text") {
    out << to_string(report.condition) << " condition, training {";
    for (std::size_t i = 0; i < report.training.size(); ++i) out << (i ? ", " : "") << report.training[i];
    out << "}, model " << report.model_hash << "\n";
    for (const auto& r : report.results) {
      out << "  " << r.test_object << " (" << to_string(r.relation) << "): " << (r.success ? "success" : "failure");
      if (r.reason) out << " (" << to_string(*r.reason) << ")";
      out << "\n";
    }
  }
  emit_document(o, to_json(report), out);
  auto unmet = unmet_expectations(spec, report);
  for (const auto& u : unmet) err << "expectation not met: " << u << "\n";
  return unmet.empty() ? kExitOk : kExitNegative;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  auto catalog = load_catalog(o.catalog_dir);
  const auto& object = catalog.at(o.object_id);
  auto cfg = planner_config(o);
  StateSpace space;
  if (!o.model_path.empty()) {
    auto model = load_model(o.model_path);
    auto binding = bind_functions(object, model, load_binding(o.binding_path, object.id()));
    space = enumerate_states(PlanningProblem(object, model, binding, cfg));
  } else {
    space = enumerate_states(object, [](const AssemblyState&) { return false; }, cfg.max_states);
  }
  std::size_t dead = static_cast<std::size_t>(std::count(space.dead_end.begin(), space.dead_end.end(), true));
  if (o.format == "document") {
    emit_document(o,
                  {{"v", kSchemaVersion},
                   {"object_id", object.id()},
                   {"states", space.size()},
                   {"actions", space.action_count()},
                   {"goal_states", space.goal_count()},
                   {"dead_ends", dead}},
                  out);
  } else {
    out << "states: " << space.size() << "\nactions: " << space.action_count()
        << "\ngoal states: " << space.goal_count() << "\ndead ends: " << dead << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal-model assembly planner"};
  app.name("causeplan");
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--catalog", o.catalog_dir, "Object catalog directory")
        ->envname("CAUSEPLAN_CATALOG")
        ->check(CLI::ExistingDirectory)
        ->capture_default_str();
    sub->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"text", "document"}))
        ->capture_default_str();
    sub->add_option("--out", o.out_path, "Also write the JSON document to this file");
  };
  auto add_planner = [&](CLI::App* sub) {
    sub->add_option("--discount", o.discount, "Discount factor in (0,1)");
    sub->add_option("--epsilon", o.epsilon, "Value-iteration convergence threshold");
    sub->add_option("--max-states", o.max_states, "State-space cap");
    sub->add_option("--max-iterations", o.max_iterations, "Value-iteration sweep cap");
  };

  auto* catalog = app.add_subcommand("catalog", "List catalog objects");
  add_common(catalog);

  auto* validate = app.add_subcommand("validate", "Parse and validate a causal model");
  validate->add_option("model", o.model_path, "Model file (.cm)")->required()->check(CLI::ExistingFile);
  add_common(validate);

  auto* plan = app.add_subcommand("plan", "Plan an assembly for an object under a model");
  plan->add_option("--object", o.object_id, "Object id")->required();
  plan->add_option("--model", o.model_path, "Model file (.cm)")->required()->check(CLI::ExistingFile);
  plan->add_option("--binding", o.binding_path, "Binding document")->check(CLI::ExistingFile);
  add_common(plan);
  add_planner(plan);

  auto* transfer = app.add_subcommand("transfer", "Check whether a frozen model transfers to a test object");
  transfer->add_option("--model", o.model_path, "Model file (.cm)")->required()->check(CLI::ExistingFile);
  transfer->add_option("--training", o.training, "Training object ids")->required()->delimiter(',');
  transfer->add_option("--object", o.object_id, "Test object id")->required();
  transfer->add_option("--binding", o.binding_path, "Test-object binding document")->check(CLI::ExistingFile);
  add_common(transfer);
  add_planner(transfer);

  auto* experiment = app.add_subcommand("experiment", "Run a near/far generalization experiment");
  experiment->add_option("config", o.config_path, "Experiment config")->required()->check(CLI::ExistingFile);
  add_common(experiment);
  add_planner(experiment);

  auto* enumerate = app.add_subcommand("enumerate", "Report state-space statistics");
  enumerate->add_option("--object", o.object_id, "Object id")->required();
  enumerate->add_option("--model", o.model_path, "Model file (.cm)")->check(CLI::ExistingFile);
  enumerate->add_option("--binding", o.binding_path, "Binding document")->check(CLI::ExistingFile);
  add_common(enumerate);
  add_planner(enumerate);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*catalog) return cmd_catalog(o, out);
    if (*validate) return cmd_validate(o, out);
    if (*plan) return cmd_plan(o, out, err);
    if (*transfer) return cmd_transfer(o, out, err);
    if (*experiment) return cmd_experiment(o, out, err);
    if (*enumerate) return cmd_enumerate(o, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << "\n";
    return f.code;
  } catch (const StateSpaceExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitStateCap;
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const InvalidModel& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace causeplan::cli
