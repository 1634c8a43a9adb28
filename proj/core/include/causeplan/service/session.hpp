#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causeplan/catalog.hpp"

namespace causeplan::service {

/// Step 1: function labels for the training object(s).
struct LabelingStep {
  std::vector<BindingDocument> bindings;
  friend bool operator==(const LabelingStep&, const LabelingStep&) = default;
};

/// Step 2: the model as authored, its validation report and the last plan.
struct ModelStep {
  std::string model_source;
  nlohmann::json validation;              // ValidationReport document
  std::optional<nlohmann::json> plan;     // plan endpoint response
  friend bool operator==(const ModelStep&, const ModelStep&) = default;
};

/// Step 3: test-object bindings and their transfer verdicts.
struct TransferStep {
  std::vector<BindingDocument> bindings;
  std::vector<nlohmann::json> results;
  friend bool operator==(const TransferStep&, const TransferStep&) = default;
};

struct Session {
  std::string id;
  std::uint64_t version = 0;
  std::string created_at;
  std::string updated_at;
  std::optional<LabelingStep> step1;
  std::optional<ModelStep> step2;
  std::optional<TransferStep> step3;

  friend bool operator==(const Session&, const Session&) = default;
};

nlohmann::json to_json(const Session& s);
Session session_from_json(const nlohmann::json& doc);

class SessionNotFound : public std::runtime_error {
public:
  explicit SessionNotFound(const std::string& id) : std::runtime_error("unknown session " + id) {}
};

class StaleVersion : public std::runtime_error {
public:
  StaleVersion(std::uint64_t expected, std::uint64_t actual)
      : std::runtime_error("stale session version " + std::to_string(expected) + " (current " +
                           std::to_string(actual) + ")") {}
};

/// One JSON document per session under a data directory. Writes for a given
/// session are serialized; different sessions proceed in parallel.
class SessionStore {
public:
  using Clock = std::function<std::string()>;

  explicit SessionStore(std::filesystem::path dir, Clock clock = {});

  Session create();
  std::optional<Session> load(const std::string& id) const;

  /// Applies `mutate` to the current session under its lock and persists the
  /// result with version + 1. Throws SessionNotFound, or StaleVersion when
  /// `expected_version` is given and does not match. If `mutate` throws,
  /// nothing is written.
  Session update(const std::string& id, std::optional<std::uint64_t> expected_version,
                 const std::function<void(Session&)>& mutate);

  const std::filesystem::path& directory() const noexcept { return dir_; }

private:
  std::filesystem::path path_for(const std::string& id) const;
  void write(const Session& s) const;
  std::mutex& lock_for(const std::string& id);

  std::filesystem::path dir_;
  Clock clock_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

/// Session ids are 32 lowercase hex digits.
bool valid_session_id(const std::string& id);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

}  // namespace causeplan::service
