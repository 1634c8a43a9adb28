#include "causeplan/service/http.hpp"

#include <httplib.h>

namespace causeplan::service {

using nlohmann::json;

namespace {

void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

// Empty bodies parse as {}; anything else must be a JSON document.
bool parse_body(const httplib::Request& req, httplib::Response& res, json& out) {
  if (req.body.empty()) {
    out = json::object();
    return true;
  }
  try {
    out = json::parse(req.body);
    return true;
  } catch (const json::parse_error& e) {
    send(res, {400, {{"v", 1}, {"error", std::string("malformed JSON: ") + e.what()}}});
    return false;
  }
}

}  // namespace

void mount_routes(httplib::Server& server, Service& service) {
  server.Get("/api/objects", [&](const httplib::Request&, httplib::Response& res) { send(res, service.list_objects()); });

  // Accepts raw model text or {"source": "..."}.
  server.Post("/api/models/validate", [&](const httplib::Request& req, httplib::Response& res) {
    std::string source = req.body;
    if (req.get_header_value("Content-Type").rfind("application/json", 0) == 0) {
      json body;
      if (!parse_body(req, res, body)) return;
      if (!body.is_object() || !body.contains("source") || !body.at("source").is_string()) {
        send(res, {400, {{"v", 1}, {"error", "expected {\"source\": \"...\"}"}}});
        return;
      }
      source = body.at("source").get<std::string>();
    }
    send(res, service.validate_model(source));
  });

  server.Post("/api/sessions", [&](const httplib::Request&, httplib::Response& res) {
    send(res, service.create_session());
  });

  server.Get(R"(/api/sessions/([0-9a-zA-Z]+))", [&](const httplib::Request& req, httplib::Response& res) {
    send(res, service.get_session(req.matches[1]));
  });

  auto with_body = [&](auto handler) {
    return [&service, handler](const httplib::Request& req, httplib::Response& res) {
      json body;
      if (!parse_body(req, res, body)) return;
      send(res, (service.*handler)(req.matches[1], body));
    };
  };
  server.Post(R"(/api/sessions/([0-9a-zA-Z]+)/steps)", with_body(&Service::save_step));
  server.Post(R"(/api/sessions/([0-9a-zA-Z]+)/plan)", with_body(&Service::plan));
  server.Post(R"(/api/sessions/([0-9a-zA-Z]+)/transfer)", with_body(&Service::transfer));
}

}  // namespace causeplan::service
