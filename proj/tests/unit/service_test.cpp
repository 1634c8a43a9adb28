#include <doctest.h>

#include <httplib.h>
#include <unistd.h>

#include <atomic>
#include <thread>

#include "causeplan/service/http.hpp"
#include "causeplan/service/service.hpp"
#include "causeplan/service/session.hpp"
#include "causeplan/documents.hpp"
#include "support/fixtures.hpp"

using namespace causeplan;
using namespace causeplan::service;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Fixture {
  fs::path dir;
  SessionStore store;
  Service svc;

  Fixture()
      : dir(make_dir()),
        store(dir, [] { return std::string("2026-01-01T00:00:00Z"); }),
        svc(causeplan::testing::fixture_catalog(), store) {}
  ~Fixture() { fs::remove_all(dir); }

  static fs::path make_dir() {
    static std::atomic<int> counter{0};
    auto d = fs::temp_directory_path() /
             ("causeplan-sessions-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(d);
    return d;
  }

  std::string new_session() {
    auto r = svc.create_session();
    REQUIRE(r.status == 201);
    return r.body.at("id").get<std::string>();
  }

  std::uint64_t version(const std::string& id) { return svc.get_session(id).body.at("version").get<std::uint64_t>(); }

  Response step(const std::string& id, int n, json data) {
    return svc.save_step(id, {{"version", version(id)}, {"step", n}, {"data", std::move(data)}});
  }

  static json lamp_binding() {
    return {{"object_id", "desk_lamp"}, {"entries", to_json(binding_from_json(read_json_file(
                                                        causeplan::testing::data_dir() / "bindings/desk_lamp.json")))
                                                        .at("entries")}};
  }

  /// Session with steps 1 and 2 saved and a desk lamp plan.
  std::string planned_session(const std::string& model = "desk_lamp_and") {
    auto id = new_session();
    REQUIRE(step(id, 1, {{"bindings", {lamp_binding()}}}).status == 200);
    auto src = read_text_file(causeplan::testing::data_dir() / "models" / (model + ".cm"));
    REQUIRE(step(id, 2, {{"model_source", src}}).status == 200);
    REQUIRE(svc.plan(id, {{"object_id", "desk_lamp"}}).status == 200);
    return id;
  }
};

}  // namespace

TEST_CASE("objects listing") {
  Fixture f;
  auto r = f.svc.list_objects();
  CHECK(r.status == 200);
  REQUIRE(r.body.at("objects").size() == 4);
  CHECK(r.body["objects"][1]["id"] == "desk_lamp");
  CHECK(r.body["objects"][1]["category"] == "electric");
  CHECK(r.body.at("v") == kSchemaVersion);
}

TEST_CASE("model validation endpoint") {
  Fixture f;
  auto good = f.svc.validate_model("goal: light\n\"burn fuel\" CAUSES flame\nflame CAUSES light\n");
  CHECK(good.status == 200);
  CHECK(good.body["ok"] == true);
  CHECK(good.body["graph"]["nodes"].size() == 3);
  CHECK(good.body["model_hash"].get<std::string>().size() == 16);

  auto syntax = f.svc.validate_model("goal: light\nburn fuel CAUSES light\n");
  CHECK(syntax.status == 400);
  CHECK(syntax.body["error"] == "syntax");
  CHECK(syntax.body["line"] == 2);
  CHECK(syntax.body["column"] == 6);

  auto invalid = f.svc.validate_model("goal: light\nintermediate: flame\nflame AND \"provide fuel\" CAUSES light\n");
  CHECK(invalid.status == 422);
  CHECK(invalid.body["ok"] == false);
  CHECK(invalid.body["report"]["violations"][0]["message"] == "intermediate effect without causes: flame");
}

TEST_CASE("session lifecycle") {
  Fixture f;
  auto id = f.new_session();
  CHECK(valid_session_id(id));
  CHECK(f.version(id) == 1);
  CHECK(f.svc.get_session("0123456789abcdef0123456789abcdef").status == 404);
  CHECK(f.svc.get_session("../etc/passwd").status == 404);

  SUBCASE("steps must be saved in order") {
    CHECK(f.step(id, 2, {{"model_source", "goal: x\na CAUSES x\n"}}).status == 409);
    CHECK(f.step(id, 4, json::object()).status == 400);
  }
  SUBCASE("stale versions are rejected") {
    auto r = f.svc.save_step(id, {{"version", 1}, {"step", 1}, {"data", {{"bindings", {Fixture::lamp_binding()}}}}});
    CHECK(r.status == 200);
    CHECK(r.body["version"] == 2);
    auto stale = f.svc.save_step(id, {{"version", 1}, {"step", 1}, {"data", {{"bindings", json::array()}}}});
    CHECK(stale.status == 409);
    CHECK(f.svc.get_session(id).body["step1"]["bindings"].size() == 1);
  }
  SUBCASE("step 1 input errors") {
    CHECK(f.step(id, 1, {{"bindings", {{{"object_id", "desk_lamp"}, {"entries", {{"bulbb", {"x"}}}}}}}}).status == 400);
    CHECK(f.step(id, 1, {{"bindings", {{{"object_id", "lantern"}, {"entries", json::object()}}}}}).status == 404);
    CHECK(f.step(id, 1, {{"bindings", {{{"object_id", "desk_lamp"}, {"entries", {{"bulb", {"  "}}}}}}}}).status == 400);
    CHECK(f.svc.save_step(id, {{"step", 1}}).status == 400);
    CHECK(f.version(id) == 1);  // nothing persisted
  }
  SUBCASE("invalid models are not stored") {
    REQUIRE(f.step(id, 1, {{"bindings", {Fixture::lamp_binding()}}}).status == 200);
    auto r = f.step(id, 2, {{"model_source", "goal: light\na CAUSES b\nb CAUSES a\na CAUSES light\n"}});
    CHECK(r.status == 422);
    CHECK(r.body["report"]["ok"] == false);
    CHECK(f.step(id, 2, {{"model_source", "goal: light\nlight CAUSES light\n"}}).status == 400);
    CHECK(f.svc.get_session(id).body["step2"].is_null());
  }
}

TEST_CASE("plan and transfer through a session") {
  Fixture f;
  SUBCASE("plan needs a model") {
    auto id = f.new_session();
    CHECK(f.svc.plan(id, {{"object_id", "desk_lamp"}}).status == 409);
    CHECK(f.svc.plan(id, {{"object_id", "lantern"}}).status == 404);
    CHECK(f.svc.transfer(id, {{"test_object", "flashlight"}}).status == 409);
  }
  SUBCASE("plan uses the step-1 binding and is persisted") {
    auto id = f.planned_session();
    auto s = f.svc.get_session(id).body;
    const auto& plan = s["step2"]["plan"];
    CHECK(plan["achieves_goal"] == true);
    CHECK(plan["rendered"][0] == "connect light bulb (thread) to base with cables (socket)");
  }
  SUBCASE("failed transfer reports the novel label") {
    auto id = f.planned_session("desk_lamp_diffuse");
    auto entries = read_json_file(causeplan::testing::data_dir() / "bindings/flashlight_novel.json").at("entries");
    auto r = f.svc.transfer(id, {{"test_object", "flashlight"}, {"binding", entries}});
    CHECK(r.status == 200);
    CHECK(r.body["outcome"] == "failure");
    CHECK(r.body["reason"] == "goal_unreachable_under_model");
    REQUIRE(r.body["warnings"].size() == 1);
    auto s = f.svc.get_session(id).body;
    CHECK(s["step3"]["results"].size() == 1);
    CHECK(s["step3"]["bindings"][0]["object_id"] == "flashlight");
  }
  SUBCASE("the model is frozen at step 3") {
    auto id = f.planned_session();
    auto entries = read_json_file(causeplan::testing::data_dir() / "bindings/flashlight.json").at("entries");
    CHECK(f.svc.transfer(id, {{"test_object", "flashlight"}, {"binding", entries}, {"model_source", "goal: x"}}).status ==
          400);
    auto r = f.svc.transfer(id, {{"test_object", "flashlight"}, {"binding", entries}});
    CHECK(r.body["outcome"] == "success");
    CHECK(r.body["relation"] == "near");
    CHECK(f.step(id, 2, {{"model_source", "goal: light\nx CAUSES light\n"}}).status == 409);
    CHECK(f.step(id, 3, {{"bindings", json::array()}, {"rules", json::array()}}).status == 400);
  }
}

TEST_CASE("session documents") {
  Fixture f;
  auto id = f.planned_session();
  auto loaded = f.store.load(id);
  REQUIRE(loaded.has_value());
  CHECK(session_from_json(to_json(*loaded)) == *loaded);
  CHECK(loaded->created_at == "2026-01-01T00:00:00Z");

  // A second store over the same directory sees the same data.
  SessionStore other(f.dir);
  CHECK(other.load(id) == loaded);

  // No temporary files are left behind.
  for (const auto& e : fs::directory_iterator(f.dir)) CHECK(e.path().extension() == ".json");
}

TEST_CASE("concurrent updates serialize per session") {
  Fixture f;
  auto id = f.new_session();
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&] {
      for (int i = 0; i < 10; ++i) f.store.update(id, std::nullopt, [](Session&) {});
    });
  for (auto& t : threads) t.join();
  CHECK(f.version(id) == 81);
}

TEST_CASE("http routes") {
  Fixture f;
  httplib::Server server;
  mount_routes(server, f.svc);
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto objects = client.Get("/api/objects");
  REQUIRE(objects);
  CHECK(objects->status == 200);
  CHECK(json::parse(objects->body)["objects"].size() == 4);

  auto valid = client.Post("/api/models/validate", "goal: light\na CAUSES light\n", "text/plain");
  REQUIRE(valid);
  CHECK(valid->status == 200);
  auto valid_json = client.Post("/api/models/validate", json{{"source", "goal: light\n"}}.dump(), "application/json");
  REQUIRE(valid_json);
  CHECK(valid_json->status == 422);

  auto created = client.Post("/api/sessions", "", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  auto id = json::parse(created->body)["id"].get<std::string>();

  json step1 = {{"version", 1}, {"step", 1}, {"data", {{"bindings", {Fixture::lamp_binding()}}}}};
  auto saved = client.Post("/api/sessions/" + id + "/steps", step1.dump(), "application/json");
  REQUIRE(saved);
  CHECK(saved->status == 200);
  auto again = client.Post("/api/sessions/" + id + "/steps", step1.dump(), "application/json");
  REQUIRE(again);
  CHECK(again->status == 409);

  auto bad = client.Post("/api/sessions/" + id + "/steps", "{not json", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);

  auto fetched = client.Get("/api/sessions/" + id);
  REQUIRE(fetched);
  CHECK(json::parse(fetched->body)["version"] == 2);

  auto missing = client.Get("/api/sessions/ffffffffffffffffffffffffffffffff");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  server.stop();
  worker.join();
}
