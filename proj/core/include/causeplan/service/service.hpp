#pragma once

#include <cstddef>
#include <semaphore>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "causeplan/catalog.hpp"
#include "causeplan/planner.hpp"
#include "causeplan/service/session.hpp"

namespace causeplan::service {

struct Response {
  int status = 200;
  nlohmann::json body;
};

struct ServiceOptions {
  PlannerConfig planner;
  std::size_t worker_cap = 4;
};

/// Transport-independent handlers for the three-step protocol. Every method
/// returns a status code and a JSON body; none throws for client errors.
///
///   GET  /api/objects                      list_objects
///   POST /api/models/validate              validate_model
///   POST /api/sessions                     create_session
///   GET  /api/sessions/{id}                get_session
///   POST /api/sessions/{id}/steps          save_step      {version, step, data}
///   POST /api/sessions/{id}/plan           plan           {object_id, binding?}
///   POST /api/sessions/{id}/transfer       transfer       {test_object, binding}
class Service {
public:
  Service(Catalog catalog, SessionStore& store, ServiceOptions options = {});

  Response list_objects() const;
  Response validate_model(std::string_view source) const;
  Response create_session();
  Response get_session(const std::string& id) const;
  Response save_step(const std::string& id, const nlohmann::json& body);
  Response plan(const std::string& id, const nlohmann::json& body);
  Response transfer(const std::string& id, const nlohmann::json& body);

  const Catalog& catalog() const noexcept { return catalog_; }

private:
  static constexpr std::ptrdiff_t kMaxWorkers = 256;

  Catalog catalog_;
  SessionStore& store_;
  ServiceOptions options_;
  std::counting_semaphore<kMaxWorkers> planning_slots_;
};

}  // namespace causeplan::service
