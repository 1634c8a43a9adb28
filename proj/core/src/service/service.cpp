#include "causeplan/service/service.hpp"

#include <algorithm>

#include "causeplan/documents.hpp"
#include "causeplan/graph_export.hpp"
#include "causeplan/model_dsl.hpp"
#include "causeplan/transfer.hpp"

namespace causeplan::service {

using nlohmann::json;

namespace {

struct HttpError {
  int status;
  std::string message;
  json extra = json::object();
};

Response error_response(const HttpError& e) {
  json body = e.extra;
  body["v"] = kSchemaVersion;
  body["error"] = e.message;
  return {e.status, std::move(body)};
}

Response ok(json body, int status = 200) {
  body["v"] = kSchemaVersion;
  return {status, std::move(body)};
}

template <typename F>
Response guarded(F&& f) {
  try {
    return f();
  } catch (const HttpError& e) {
    return error_response(e);
  } catch (const SessionNotFound& e) {
    return error_response({404, e.what()});
  } catch (const StaleVersion& e) {
    return error_response({409, e.what()});
  } catch (const UnknownPart& e) {
    return error_response({400, e.what()});
  } catch (const json::exception& e) {
    return error_response({400, std::string("malformed request: ") + e.what()});
  } catch (const std::invalid_argument& e) {
    return error_response({400, e.what()});
  }
}

const json& require(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key))
    throw HttpError{400, std::string("missing field '") + key + "'"};
  return body.at(key);
}

BindingEntries entries_from(const json& j) {
  if (j.is_null()) return {};
  return binding_from_json(json{{"entries", j}}).entries;
}

// Parses and validates stored step-2 source. The stored model always passed
// validation when it was saved.
CausalModel stored_model(const Session& s) {
  if (!s.step2) throw HttpError{409, "no validated causal model in this session (step 2)"};
  return parse_model(s.step2->model_source);
}

json summary(const ObjectSpec& o) {
  json parts = json::array();
  for (const auto& p : o.parts()) {
    json conns = json::array();
    for (const auto& c : p.connectors) conns.push_back(c.id);
    parts.push_back({{"id", p.id}, {"display_name", p.display_name}, {"connectors", std::move(conns)}});
  }
  json doc = {{"id", o.id()}, {"display_name", o.display_name()}, {"parts", std::move(parts)}};
  if (!o.category().empty()) doc["category"] = o.category();
  return doc;
}

template <typename Semaphore>
class SlotGuard {
public:
  explicit SlotGuard(Semaphore& sem) : sem_(sem) { sem_.acquire(); }
  ~SlotGuard() { sem_.release(); }
  SlotGuard(const SlotGuard&) = delete;
  SlotGuard& operator=(const SlotGuard&) = delete;

private:
  Semaphore& sem_;
};

void reject_model_edits(const json& body) {
  for (const char* key : {"model", "model_source", "rules"})
    if (body.is_object() && body.contains(key))
      throw HttpError{400, "the causal model is frozen at step 3; send bindings only"};
}

}  // namespace

Service::Service(Catalog catalog, SessionStore& store, ServiceOptions options)
    : catalog_(std::move(catalog)),
      store_(store),
      options_(options),
      planning_slots_(static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(options.worker_cap, 1, kMaxWorkers))) {
  options_.planner.validate();
}

Response Service::list_objects() const {
  json objects = json::array();
  for (const auto& o : catalog_.objects()) objects.push_back(summary(o));
  return ok({{"objects", std::move(objects)}});
}

Response Service::validate_model(std::string_view source) const {
  return guarded([&]() -> Response {
    CausalModel model;
    try {
      model = parse_model(source);
    } catch (const ParseError& e) {
      return ok(to_json(e), 400);
    }
    auto report = causeplan::validate_model(model);
    if (!report.ok()) return ok({{"ok", false}, {"report", to_json(report)}}, 422);
    return ok({{"ok", true},
               {"report", to_json(report)},
               {"graph", to_json(to_graph_export(model))},
               {"model_hash", model_hash(model)}});
  });
}

Response Service::create_session() {
  return guarded([&] { return ok(to_json(store_.create()), 201); });
}

Response Service::get_session(const std::string& id) const {
  return guarded([&] {
    auto s = store_.load(id);
    if (!s) throw SessionNotFound(id);
    return ok(to_json(*s));
  });
}

Response Service::save_step(const std::string& id, const json& body) {
  return guarded([&]() -> Response {
    auto version = require(body, "version").get<std::uint64_t>();
    auto step = require(body, "step").get<int>();
    const auto& data = require(body, "data");

    auto check_bindings = [&](const std::vector<BindingDocument>& bs) {
      for (const auto& b : bs) {
        const auto* obj = catalog_.find(b.object_id);
        if (!obj) throw HttpError{404, "unknown object " + b.object_id};
        for (const auto& [part, labels] : b.entries) {
          if (!obj->find_part(part)) throw UnknownPart(b.object_id, part);
          for (const auto& l : labels)
            if (normalize_label(l).empty()) throw HttpError{400, "blank function label on part " + part};
        }
      }
    };

    auto saved = store_.update(id, version, [&](Session& s) {
      switch (step) {
        case 1: {
          if (s.step3 && !s.step3->results.empty()) throw HttpError{409, "step 1 is closed once transfer has run"};
          LabelingStep l;
          for (const auto& b : require(data, "bindings")) l.bindings.push_back(binding_from_json(b));
          check_bindings(l.bindings);
          s.step1 = std::move(l);
          break;
        }
        case 2: {
          if (!s.step1) throw HttpError{409, "step 1 must be saved before step 2"};
          if (s.step3) throw HttpError{409, "the causal model is frozen once step 3 has started"};
          auto source = require(data, "model_source").get<std::string>();
          CausalModel model;
          try {
            model = parse_model(source);
          } catch (const ParseError& e) {
            throw HttpError{400, e.what(), to_json(e)};
          }
          auto report = causeplan::validate_model(model);
          if (!report.ok()) throw HttpError{422, "invalid causal model", {{"report", to_json(report)}}};
          s.step2 = ModelStep{std::move(source), to_json(report), std::nullopt};
          break;
        }
        case 3: {
          reject_model_edits(data);
          if (!s.step2 || !s.step2->plan) throw HttpError{409, "step 2 needs a validated model and a plan first"};
          TransferStep t = s.step3.value_or(TransferStep{});
          t.bindings.clear();
          for (const auto& b : require(data, "bindings")) t.bindings.push_back(binding_from_json(b));
          check_bindings(t.bindings);
          s.step3 = std::move(t);
          break;
        }
        default:
          throw HttpError{400, "step must be 1, 2 or 3"};
      }
    });
    return ok(to_json(saved));
  });
}

Response Service::plan(const std::string& id, const json& body) {
  return guarded([&]() -> Response {
    auto object_id = require(body, "object_id").get<std::string>();
    const auto* object = catalog_.find(object_id);
    if (!object) throw HttpError{404, "unknown object " + object_id};

    json result;
    auto saved = store_.update(id, std::nullopt, [&](Session& s) {
      auto model = stored_model(s);
      BindingEntries entries;
      if (body.contains("binding")) {
        entries = entries_from(body.at("binding"));
      } else if (s.step1) {
        for (const auto& b : s.step1->bindings)
          if (b.object_id == object_id) entries = b.entries;
      }
      auto binding = bind_functions(*object, model, entries);

      SlotGuard slot(planning_slots_);

      result = {{"object_id", object_id}, {"warnings", binding.warnings}};
      try {
        PlanningProblem problem(*object, model, binding, options_.planner);
        auto plan = solve(problem);
        json rendered = json::array();
        for (const auto& st : plan.steps) rendered.push_back(st.text);
        result["plan"] = to_json(plan);
        result["rendered"] = std::move(rendered);
        result["achieves_goal"] = plan.achieves_goal;
        if (!plan.achieves_goal)
          result["reason"] = to_string(plan.steps.empty() && applicable_actions(*object, {}).empty()
                                           ? FailureReason::no_compatible_connections
                                           : FailureReason::goal_unreachable_under_model);
      } catch (const StateSpaceExceeded&) {
        result["achieves_goal"] = false;
        result["reason"] = to_string(FailureReason::state_space_exceeded);
      } catch (const NonConvergence&) {
        result["achieves_goal"] = false;
        result["reason"] = to_string(FailureReason::planner_did_not_converge);
      }
      s.step2->plan = result;
    });
    result["session_version"] = saved.version;
    return ok(std::move(result));
  });
}

Response Service::transfer(const std::string& id, const json& body) {
  return guarded([&]() -> Response {
    reject_model_edits(body);
    auto test_id = require(body, "test_object").get<std::string>();
    const auto* object = catalog_.find(test_id);
    if (!object) throw HttpError{404, "unknown object " + test_id};
    auto entries = entries_from(body.contains("binding") ? body.at("binding") : json(nullptr));

    json result;
    auto saved = store_.update(id, std::nullopt, [&](Session& s) {
      if (!s.step2 || !s.step2->plan) throw HttpError{409, "step 2 needs a validated model and a plan first"};
      auto model = stored_model(s);

      std::vector<std::string> training;
      if (s.step1)
        for (const auto& b : s.step1->bindings)
          if (std::find(training.begin(), training.end(), b.object_id) == training.end())
            training.push_back(b.object_id);
      if (training.empty()) training.push_back(s.step2->plan->at("object_id").get<std::string>());

      auto binding = bind_functions(*object, model, entries);
      TransferResult r;
      {
        SlotGuard slot(planning_slots_);
        r = check_transfer(model, catalog_, training, *object, binding, options_.planner);
      }
      result = to_json(r);

      TransferStep t = s.step3.value_or(TransferStep{});
      BindingDocument bd{test_id, entries};
      auto same = [&](const BindingDocument& b) { return b.object_id == test_id; };
      t.bindings.erase(std::remove_if(t.bindings.begin(), t.bindings.end(), same), t.bindings.end());
      t.bindings.push_back(std::move(bd));
      t.results.push_back(result);
      s.step3 = std::move(t);
    });
    result["session_version"] = saved.version;
    return ok(std::move(result));
  });
}

}  // namespace causeplan::service
