#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "causeplan/assembly.hpp"
#include "causeplan/binding.hpp"

namespace causeplan {

/// Object document:
/// {id, display_name, category?, parts[{id, display_name, connectors[{id, kind,
/// size, accepted_primitives[]}]}], compat_overrides[{a, b, p}]}
ObjectSpec object_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ObjectSpec& object);

/// Objects from a catalog directory, ordered by id.
class Catalog {
public:
  Catalog() = default;
  explicit Catalog(std::vector<ObjectSpec> objects);

  const std::vector<ObjectSpec>& objects() const noexcept { return objects_; }
  const ObjectSpec* find(std::string_view id) const;
  /// Throws CatalogError for unknown ids.
  const ObjectSpec& at(std::string_view id) const;
  /// Category id → member object ids; uncategorized objects are omitted.
  std::map<std::string, std::vector<std::string>> categories() const;

private:
  std::vector<ObjectSpec> objects_;
};

/// Loads every *.json file in `dir`. Throws CatalogError naming the file on
/// malformed documents or duplicate object ids.
Catalog load_catalog(const std::filesystem::path& dir);

/// Binding document: {object_id, entries: {part_id: [labels]}}.
struct BindingDocument {
  std::string object_id;
  BindingEntries entries;
  friend bool operator==(const BindingDocument&, const BindingDocument&) = default;
};

BindingDocument binding_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const BindingDocument& doc);

nlohmann::json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace causeplan
