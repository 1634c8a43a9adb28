#include "causeplan/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace causeplan {

const char* to_string(Primitive p) noexcept {
  switch (p) {
    case Primitive::connect: return "connect";
    case Primitive::insert: return "insert";
    case Primitive::screw: return "screw";
  }
  return "?";
}

std::optional<Primitive> parse_primitive(std::string_view s) noexcept {
  for (auto p : all_primitives)
    if (s == to_string(p)) return p;
  return std::nullopt;
}

const char* to_string(ConnectorKind k) noexcept {
  switch (k) {
    case ConnectorKind::plug: return "plug";
    case ConnectorKind::socket: return "socket";
    case ConnectorKind::surface: return "surface";
    case ConnectorKind::thread: return "thread";
  }
  return "?";
}

std::optional<ConnectorKind> parse_connector_kind(std::string_view s) noexcept {
  for (auto k : {ConnectorKind::plug, ConnectorKind::socket, ConnectorKind::surface, ConnectorKind::thread})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

bool complementary(ConnectorKind a, ConnectorKind b) noexcept {
  using K = ConnectorKind;
  if (a == K::plug) return b == K::socket;
  if (a == K::socket) return b == K::plug;
  return a == b;
}

ObjectSpec::ObjectSpec(std::string id, std::string display_name, std::vector<Part> parts,
                       std::vector<std::tuple<std::string, std::string, double>> overrides, std::string category)
    : id_(std::move(id)), display_name_(std::move(display_name)), category_(std::move(category)), parts_(std::move(parts)) {
  if (id_.empty()) throw CatalogError("object id must not be empty");
  std::set<std::string> part_ids;
  for (const auto& p : parts_) {
    if (p.id.empty() || p.id.find('.') != std::string::npos)
      throw CatalogError(id_ + ": part id must be non-empty and contain no '.': '" + p.id + "'");
    if (!part_ids.insert(p.id).second) throw CatalogError(id_ + ": duplicate part id " + p.id);
    if (p.connectors.empty()) throw CatalogError(id_ + ": part " + p.id + " has no connectors");
    std::set<std::string> conn_ids;
    for (const auto& c : p.connectors) {
      if (c.id.empty()) throw CatalogError(id_ + ": part " + p.id + " has a connector without id");
      if (!conn_ids.insert(c.id).second) throw CatalogError(id_ + ": duplicate connector " + p.id + "." + c.id);
      if (!(c.size > 0) || !std::isfinite(c.size))
        throw CatalogError(id_ + ": connector " + p.id + "." + c.id + " must have positive size");
      if (c.accepts.empty())
        throw CatalogError(id_ + ": connector " + p.id + "." + c.id + " accepts no primitives");
    }
  }
  for (const auto& [a, b, prob] : overrides) {
    auto ra = resolve(a);
    auto rb = resolve(b);
    if (!ra) throw CatalogError(id_ + ": override references unknown connector " + a);
    if (!rb) throw CatalogError(id_ + ": override references unknown connector " + b);
    if (ra->part == rb->part) throw CatalogError(id_ + ": override joins a part to itself: " + a + ", " + b);
    if (!(prob >= 0.0 && prob <= 1.0)) throw CatalogError(id_ + ": override probability outside [0,1]");
    auto key = std::minmax(*ra, *rb);
    if (!overrides_.emplace(OverrideKey{key.first, key.second}, prob).second)
      throw CatalogError(id_ + ": duplicate override for " + a + ", " + b);
  }
}

std::optional<std::size_t> ObjectSpec::find_part(std::string_view part_id) const {
  for (std::size_t i = 0; i < parts_.size(); ++i)
    if (parts_[i].id == part_id) return i;
  return std::nullopt;
}

std::optional<ConnectorRef> ObjectSpec::resolve(std::string_view qualified) const {
  auto dot = qualified.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  auto part = find_part(qualified.substr(0, dot));
  if (!part) return std::nullopt;
  auto conn = qualified.substr(dot + 1);
  const auto& cs = parts_[*part].connectors;
  for (std::size_t j = 0; j < cs.size(); ++j)
    if (cs[j].id == conn) return ConnectorRef{*part, j};
  return std::nullopt;
}

std::string ObjectSpec::qualified_name(ConnectorRef ref) const {
  const auto& p = parts_.at(ref.part);
  return p.id + "." + p.connectors.at(ref.connector).id;
}

std::optional<double> ObjectSpec::override_for(ConnectorRef a, ConnectorRef b) const {
  auto key = std::minmax(a, b);
  auto it = overrides_.find({key.first, key.second});
  if (it == overrides_.end()) return std::nullopt;
  return it->second;
}

std::size_t ObjectSpec::connector_count() const {
  return std::accumulate(parts_.begin(), parts_.end(), std::size_t{0},
                         [](std::size_t n, const Part& p) { return n + p.connectors.size(); });
}

double compatibility(const Connector& a, const Connector& b, double sharpness) {
  if (!complementary(a.kind, b.kind)) return 0.0;
  if ((a.accepts & b.accepts).empty()) return 0.0;
  double mismatch = std::abs(a.size - b.size) / std::max(a.size, b.size);
  return std::exp(-sharpness * mismatch);
}

double compatibility(const ObjectSpec& object, ConnectorRef a, ConnectorRef b) {
  if (auto p = object.override_for(a, b)) return *p;
  return compatibility(object.connector(a), object.connector(b));
}

AssemblyState::AssemblyState(std::vector<std::size_t> placed, std::vector<Joint> joints)
    : placed_(std::move(placed)), joints_(std::move(joints)) {
  std::sort(placed_.begin(), placed_.end());
  placed_.erase(std::unique(placed_.begin(), placed_.end()), placed_.end());
  std::set<ConnectorRef> used;
  for (auto& j : joints_) {
    if (j.b < j.a) std::swap(j.a, j.b);
    if (j.a.part == j.b.part) throw ContractViolation("joint connects a part to itself");
    if (!is_placed(j.a.part) || !is_placed(j.b.part)) throw ContractViolation("joint references an unplaced part");
    if (!used.insert(j.a).second || !used.insert(j.b).second)
      throw ContractViolation("connector participates in more than one joint");
  }
  std::sort(joints_.begin(), joints_.end());
}

bool AssemblyState::is_placed(std::size_t part) const {
  return std::binary_search(placed_.begin(), placed_.end(), part);
}

bool AssemblyState::is_occupied(ConnectorRef c) const {
  return std::any_of(joints_.begin(), joints_.end(), [&](const Joint& j) { return j.a == c || j.b == c; });
}

bool AssemblyState::parts_joined(std::size_t p, std::size_t q) const {
  return std::any_of(joints_.begin(), joints_.end(), [&](const Joint& j) {
    return (j.a.part == p && j.b.part == q) || (j.a.part == q && j.b.part == p);
  });
}

std::string AssemblyState::key() const {
  std::string k;
  for (auto p : placed_) k += std::to_string(p) + ",";
  k += "|";
  for (const auto& j : joints_)
    k += std::to_string(j.a.part) + "." + std::to_string(j.a.connector) + "-" + std::to_string(j.b.part) + "." +
         std::to_string(j.b.connector) + ":" + to_string(j.primitive) + ";";
  return k;
}

void check_state(const ObjectSpec& object, const AssemblyState& state) {
  const auto n = object.parts().size();
  for (auto p : state.placed())
    if (p >= n) throw ContractViolation("state references part index " + std::to_string(p) + " out of range");
  for (const auto& j : state.joints())
    for (auto c : {j.a, j.b})
      if (c.connector >= object.parts()[c.part].connectors.size())
        throw ContractViolation("state references an unknown connector");
}

namespace {

// Applicability of a single action, shared by enumeration and apply_action.
bool applicable(const ObjectSpec& object, const AssemblyState& state, const AssemblyAction& a) {
  if (!(a.from < a.to) || a.from.part == a.to.part) return false;
  if (state.is_occupied(a.from) || state.is_occupied(a.to)) return false;
  if (!state.empty() && !state.is_placed(a.from.part) && !state.is_placed(a.to.part)) return false;
  if (state.parts_joined(a.from.part, a.to.part)) return false;
  const auto& cf = object.connector(a.from);
  const auto& ct = object.connector(a.to);
  if (!cf.accepts.contains(a.primitive) || !ct.accepts.contains(a.primitive)) return false;
  return compatibility(object, a.from, a.to) > 0.0;
}

}  // namespace

std::vector<AssemblyAction> applicable_actions(const ObjectSpec& object, const AssemblyState& state) {
  std::vector<ConnectorRef> free;
  for (std::size_t p = 0; p < object.parts().size(); ++p)
    for (std::size_t c = 0; c < object.parts()[p].connectors.size(); ++c)
      if (!state.is_occupied({p, c})) free.push_back({p, c});

  std::vector<AssemblyAction> out;
  for (auto prim : all_primitives)
    for (std::size_t i = 0; i < free.size(); ++i)
      for (std::size_t j = i + 1; j < free.size(); ++j) {
        AssemblyAction a{prim, free[i], free[j]};
        if (applicable(object, state, a)) out.push_back(a);
      }
  return out;
}

AssemblyState apply_action(const ObjectSpec& object, const AssemblyState& state, const AssemblyAction& action) {
  if (!applicable(object, state, action))
    throw ContractViolation("action not applicable: " + render_action(object, action));
  AssemblyState next = state;
  for (auto p : {action.from.part, action.to.part}) {
    auto it = std::lower_bound(next.placed_.begin(), next.placed_.end(), p);
    if (it == next.placed_.end() || *it != p) next.placed_.insert(it, p);
  }
  Joint j{action.from, action.to, action.primitive};
  next.joints_.insert(std::lower_bound(next.joints_.begin(), next.joints_.end(), j), j);
  return next;
}

std::vector<std::size_t> assembled_component(const ObjectSpec& object, const AssemblyState& state) {
  const auto& placed = state.placed();
  if (placed.empty()) return {};

  // Union-find over part indices.
  std::vector<std::size_t> parent(object.parts().size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& j : state.joints()) parent[find(j.a.part)] = find(j.b.part);

  std::map<std::size_t, std::vector<std::size_t>> comps;
  for (auto p : placed) comps[find(p)].push_back(p);

  const std::vector<std::size_t>* best = nullptr;
  std::string best_min;
  for (const auto& [root, members] : comps) {
    std::string min_id = object.parts()[members.front()].id;
    for (auto m : members) min_id = std::min(min_id, object.parts()[m].id);
    if (!best || members.size() > best->size() || (members.size() == best->size() && min_id < best_min)) {
      best = &members;
      best_min = min_id;
    }
  }
  return *best;
}

std::string render_action(const ObjectSpec& object, const AssemblyAction& action) {
  const auto& pa = object.parts().at(action.from.part);
  const auto& pb = object.parts().at(action.to.part);
  return std::string(to_string(action.primitive)) + " " + pa.display_name + " (" +
         pa.connectors.at(action.from.connector).id + ") to " + pb.display_name + " (" +
         pb.connectors.at(action.to.connector).id + ")";
}

}  // namespace causeplan
