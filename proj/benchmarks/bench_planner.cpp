#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "causeplan/catalog.hpp"
#include "causeplan/model_dsl.hpp"
#include "causeplan/planner.hpp"
#include "causeplan/transfer.hpp"

namespace {

using namespace causeplan;
namespace fs = std::filesystem;

const fs::path kData = CAUSEPLAN_DATA_DIR;

const Catalog& catalog() {
  static const Catalog c = load_catalog(kData / "catalog");
  return c;
}

PlanningProblem problem(const char* object, const char* model, const char* binding) {
  const auto& obj = catalog().at(object);
  auto m = parse_model(read_text_file(kData / "models" / model));
  auto entries = binding_from_json(read_json_file(kData / "bindings" / binding)).entries;
  return PlanningProblem(obj, m, bind_functions(obj, m, entries));
}

/// Layered model: `width` roots feeding `depth` layers of ANDed pairs.
std::string layered_model(int width, int depth) {
  std::string src = "goal: goal\n";
  for (int d = 0; d < depth; ++d)
    for (int w = 0; w < width; ++w) {
      auto name = [&](int layer, int i) { return (layer == 0 ? "r" : "n" + std::to_string(layer) + "_") + std::to_string(i); };
      src += name(d, w) + " AND " + name(d, (w + 1) % width) + " CAUSES " + name(d + 1, w) + "\n";
    }
  src += "n" + std::to_string(depth) + "_0 CAUSES goal\n";
  return src;
}

void BM_ParseModel(benchmark::State& state) {
  auto src = layered_model(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(parse_model(src));
}
BENCHMARK(BM_ParseModel)->Arg(4)->Arg(16)->Arg(64);

void BM_Evaluate(benchmark::State& state) {
  int width = static_cast<int>(state.range(0));
  auto model = parse_model(layered_model(width, 4));
  ModelEvaluator evaluator(model);
  std::set<Label> active;
  for (int w = 0; w < width; w += 2) active.emplace("r" + std::to_string(w));
  for (auto _ : state) benchmark::DoNotOptimize(evaluator.goal_reached(active));
}
BENCHMARK(BM_Evaluate)->Arg(4)->Arg(16)->Arg(64);

void BM_SolveFixture(benchmark::State& state) {
  auto p = problem("flashlight", "desk_lamp_and.cm", "flashlight.json");
  for (auto _ : state) benchmark::DoNotOptimize(solve(p));
}
BENCHMARK(BM_SolveFixture);

/// Chain of `n` parts, each with a plug and a socket, so every prefix joins.
void BM_SolveChain(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  std::vector<Part> parts;
  BindingEntries entries;
  std::string body;
  for (int i = 0; i < n; ++i) {
    auto id = "p" + std::to_string(i);
    parts.push_back({id, id,
                     {{"plug", ConnectorKind::plug, 1.0, {Primitive::connect}},
                      {"socket", ConnectorKind::socket, 1.0 + 0.1 * i, {Primitive::connect}}}});
    entries[id] = {"f" + id};
    body += (i ? " AND f" : "f") + id;
  }
  ObjectSpec obj("chain", "chain", parts);
  auto model = parse_model("goal: done\n" + body + " CAUSES done\n");
  PlanningProblem p(obj, model, bind_functions(obj, model, entries));
  for (auto _ : state) {
    auto plan = solve(p);
    state.counters["states"] = static_cast<double>(plan.stats.states);
    benchmark::DoNotOptimize(plan);
  }
}
BENCHMARK(BM_SolveChain)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
