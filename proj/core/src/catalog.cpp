#include "causeplan/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace causeplan {

using nlohmann::json;

namespace {

const json& field(const json& doc, const char* name, const std::string& where) {
  if (!doc.is_object() || !doc.contains(name)) throw CatalogError(where + ": missing field '" + name + "'");
  return doc.at(name);
}

std::string string_field(const json& doc, const char* name, const std::string& where) {
  const auto& v = field(doc, name, where);
  if (!v.is_string()) throw CatalogError(where + ": field '" + name + "' must be a string");
  return v.get<std::string>();
}

Connector connector_from_json(const json& doc, const std::string& where) {
  Connector c;
  c.id = string_field(doc, "id", where);
  auto kind = parse_connector_kind(string_field(doc, "kind", where));
  if (!kind) throw CatalogError(where + "." + c.id + ": unknown connector kind");
  c.kind = *kind;
  const auto& size = field(doc, "size", where);
  if (!size.is_number()) throw CatalogError(where + "." + c.id + ": size must be a number");
  c.size = size.get<double>();
  const auto& prims = field(doc, "accepted_primitives", where);
  if (!prims.is_array()) throw CatalogError(where + "." + c.id + ": accepted_primitives must be an array");
  for (const auto& p : prims) {
    auto prim = p.is_string() ? parse_primitive(p.get<std::string>()) : std::nullopt;
    if (!prim) throw CatalogError(where + "." + c.id + ": unknown primitive " + p.dump());
    c.accepts.insert(*prim);
  }
  return c;
}

}  // namespace

ObjectSpec object_from_json(const json& doc) {
  std::string id = string_field(doc, "id", "object");
  std::string display = doc.contains("display_name") ? string_field(doc, "display_name", id) : id;
  std::string category = doc.contains("category") ? string_field(doc, "category", id) : std::string{};

  std::vector<Part> parts;
  const auto& jparts = field(doc, "parts", id);
  if (!jparts.is_array()) throw CatalogError(id + ": parts must be an array");
  for (const auto& jp : jparts) {
    Part p;
    p.id = string_field(jp, "id", id);
    p.display_name = jp.contains("display_name") ? string_field(jp, "display_name", id + "." + p.id) : p.id;
    const auto& jcs = field(jp, "connectors", id + "." + p.id);
    if (!jcs.is_array()) throw CatalogError(id + "." + p.id + ": connectors must be an array");
    for (const auto& jc : jcs) p.connectors.push_back(connector_from_json(jc, id + "." + p.id));
    parts.push_back(std::move(p));
  }

  std::vector<std::tuple<std::string, std::string, double>> overrides;
  if (doc.contains("compat_overrides")) {
    const auto& jo = doc.at("compat_overrides");
    if (!jo.is_array()) throw CatalogError(id + ": compat_overrides must be an array");
    for (const auto& o : jo) {
      const auto& p = field(o, "p", id + " override");
      if (!p.is_number()) throw CatalogError(id + ": override p must be a number");
      overrides.emplace_back(string_field(o, "a", id + " override"), string_field(o, "b", id + " override"),
                             p.get<double>());
    }
  }
  return ObjectSpec(std::move(id), std::move(display), std::move(parts), std::move(overrides), std::move(category));
}

json to_json(const ObjectSpec& object) {
  json parts = json::array();
  for (const auto& p : object.parts()) {
    json conns = json::array();
    for (const auto& c : p.connectors) {
      json prims = json::array();
      for (auto prim : all_primitives)
        if (c.accepts.contains(prim)) prims.push_back(to_string(prim));
      conns.push_back({{"id", c.id}, {"kind", to_string(c.kind)}, {"size", c.size}, {"accepted_primitives", prims}});
    }
    parts.push_back({{"id", p.id}, {"display_name", p.display_name}, {"connectors", std::move(conns)}});
  }
  json overrides = json::array();
  for (const auto& [key, p] : object.overrides())
    overrides.push_back({{"a", object.qualified_name(key.first)}, {"b", object.qualified_name(key.second)}, {"p", p}});
  json doc = {{"id", object.id()}, {"display_name", object.display_name()}};
  if (!object.category().empty()) doc["category"] = object.category();
  doc["parts"] = std::move(parts);
  doc["compat_overrides"] = std::move(overrides);
  return doc;
}

Catalog::Catalog(std::vector<ObjectSpec> objects) : objects_(std::move(objects)) {
  std::sort(objects_.begin(), objects_.end(), [](const ObjectSpec& a, const ObjectSpec& b) { return a.id() < b.id(); });
  for (std::size_t i = 1; i < objects_.size(); ++i)
    if (objects_[i].id() == objects_[i - 1].id()) throw CatalogError("duplicate object id " + objects_[i].id());
}

const ObjectSpec* Catalog::find(std::string_view id) const {
  auto it = std::lower_bound(objects_.begin(), objects_.end(), id,
                             [](const ObjectSpec& o, std::string_view k) { return o.id() < k; });
  return it != objects_.end() && it->id() == id ? &*it : nullptr;
}

const ObjectSpec& Catalog::at(std::string_view id) const {
  if (const auto* o = find(id)) return *o;
  throw CatalogError("unknown object " + std::string(id));
}

std::map<std::string, std::vector<std::string>> Catalog::categories() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& o : objects_)
    if (!o.category().empty()) out[o.category()].push_back(o.id());
  return out;
}

Catalog load_catalog(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw CatalogError("catalog directory not found: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<ObjectSpec> objects;
  for (const auto& f : files) {
    try {
      objects.push_back(object_from_json(read_json_file(f)));
    } catch (const std::exception& e) {
      throw CatalogError(f.filename().string() + ": " + e.what());
    }
  }
  return Catalog(std::move(objects));
}

BindingDocument binding_from_json(const json& doc) {
  BindingDocument b;
  if (!doc.is_object()) throw std::invalid_argument("binding document must be an object");
  if (doc.contains("object_id")) {
    if (!doc.at("object_id").is_string()) throw std::invalid_argument("binding object_id must be a string");
    b.object_id = doc.at("object_id").get<std::string>();
  }
  if (!doc.contains("entries")) return b;
  const auto& entries = doc.at("entries");
  if (!entries.is_object()) throw std::invalid_argument("binding entries must be an object");
  for (const auto& [part, labels] : entries.items()) {
    if (!labels.is_array()) throw std::invalid_argument("labels for part " + part + " must be an array");
    auto& out = b.entries[part];
    for (const auto& l : labels) {
      if (!l.is_string()) throw std::invalid_argument("labels for part " + part + " must be strings");
      out.push_back(l.get<std::string>());
    }
  }
  return b;
}

json to_json(const BindingDocument& doc) {
  return {{"object_id", doc.object_id}, {"entries", doc.entries}};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace causeplan
