#include "causeplan/service/session.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <random>

#include "causeplan/documents.hpp"

namespace causeplan::service {

using nlohmann::json;

namespace {

json bindings_to_json(const std::vector<BindingDocument>& bs) {
  json out = json::array();
  for (const auto& b : bs) out.push_back(causeplan::to_json(b));
  return out;
}

std::vector<BindingDocument> bindings_from_json(const json& doc) {
  std::vector<BindingDocument> out;
  for (const auto& b : doc) out.push_back(binding_from_json(b));
  return out;
}

}  // namespace

json to_json(const Session& s) {
  json doc = {{"v", kSchemaVersion},
              {"id", s.id},
              {"version", s.version},
              {"created_at", s.created_at},
              {"updated_at", s.updated_at},
              {"step1", nullptr},
              {"step2", nullptr},
              {"step3", nullptr}};
  if (s.step1) doc["step1"] = {{"bindings", bindings_to_json(s.step1->bindings)}};
  if (s.step2)
    doc["step2"] = {{"model_source", s.step2->model_source},
                    {"validation", s.step2->validation},
                    {"plan", s.step2->plan ? *s.step2->plan : json(nullptr)}};
  if (s.step3) doc["step3"] = {{"bindings", bindings_to_json(s.step3->bindings)}, {"results", s.step3->results}};
  return doc;
}

Session session_from_json(const json& doc) {
  Session s;
  s.id = doc.at("id").get<std::string>();
  s.version = doc.at("version").get<std::uint64_t>();
  s.created_at = doc.at("created_at").get<std::string>();
  s.updated_at = doc.at("updated_at").get<std::string>();
  if (const auto& j = doc.at("step1"); !j.is_null()) s.step1 = LabelingStep{bindings_from_json(j.at("bindings"))};
  if (const auto& j = doc.at("step2"); !j.is_null()) {
    ModelStep m;
    m.model_source = j.at("model_source").get<std::string>();
    m.validation = j.at("validation");
    if (!j.at("plan").is_null()) m.plan = j.at("plan");
    s.step2 = std::move(m);
  }
  if (const auto& j = doc.at("step3"); !j.is_null()) {
    TransferStep t;
    t.bindings = bindings_from_json(j.at("bindings"));
    for (const auto& r : j.at("results")) t.results.push_back(r);
    s.step3 = std::move(t);
  }
  return s;
}

bool valid_session_id(const std::string& id) {
  if (id.size() != 32) return false;
  for (char c : id)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  return true;
}

std::string utc_timestamp() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SessionStore::SessionStore(std::filesystem::path dir, Clock clock)
    : dir_(std::move(dir)), clock_(clock ? std::move(clock) : Clock(utc_timestamp)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path SessionStore::path_for(const std::string& id) const { return dir_ / (id + ".json"); }

std::mutex& SessionStore::lock_for(const std::string& id) {
  std::lock_guard g(locks_mutex_);
  auto& m = locks_[id];
  if (!m) m = std::make_unique<std::mutex>();
  return *m;
}

void SessionStore::write(const Session& s) const {
  auto target = path_for(s.id);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << to_json(s).dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

Session SessionStore::create() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  Session s;
  do {
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                  static_cast<unsigned long long>(rng()));
    s.id = buf;
  } while (std::filesystem::exists(path_for(s.id)));
  s.version = 1;
  s.created_at = s.updated_at = clock_();
  std::lock_guard g(lock_for(s.id));
  write(s);
  return s;
}

std::optional<Session> SessionStore::load(const std::string& id) const {
  if (!valid_session_id(id)) return std::nullopt;
  std::ifstream in(path_for(id), std::ios::binary);
  if (!in) return std::nullopt;
  return session_from_json(json::parse(in));
}

Session SessionStore::update(const std::string& id, std::optional<std::uint64_t> expected_version,
                             const std::function<void(Session&)>& mutate) {
  if (!valid_session_id(id)) throw SessionNotFound(id);
  std::lock_guard g(lock_for(id));
  auto current = load(id);
  if (!current) throw SessionNotFound(id);
  if (expected_version && *expected_version != current->version) throw StaleVersion(*expected_version, current->version);
  Session next = *current;
  mutate(next);
  next.id = current->id;
  next.created_at = current->created_at;
  next.version = current->version + 1;
  next.updated_at = std::max(clock_(), current->created_at);
  write(next);
  return next;
}

}  // namespace causeplan::service
