#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace causeplan {

/// High-level join primitives. Declaration order is alphabetical and is the
/// action ordering used everywhere.
enum class Primitive : std::uint8_t { connect, insert, screw };

inline constexpr Primitive all_primitives[] = {Primitive::connect, Primitive::insert, Primitive::screw};

const char* to_string(Primitive p) noexcept;
std::optional<Primitive> parse_primitive(std::string_view s) noexcept;

class PrimitiveSet {
public:
  constexpr PrimitiveSet() = default;
  constexpr PrimitiveSet(std::initializer_list<Primitive> ps) {
    for (auto p : ps) insert(p);
  }

  constexpr void insert(Primitive p) { bits_ |= bit(p); }
  constexpr bool contains(Primitive p) const { return (bits_ & bit(p)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr PrimitiveSet operator&(PrimitiveSet o) const { return from_bits(bits_ & o.bits_); }

  friend constexpr bool operator==(PrimitiveSet, PrimitiveSet) = default;

private:
  static constexpr std::uint8_t bit(Primitive p) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(p)); }
  static constexpr PrimitiveSet from_bits(std::uint8_t b) {
    PrimitiveSet s;
    s.bits_ = b;
    return s;
  }
  std::uint8_t bits_ = 0;
};

enum class ConnectorKind : std::uint8_t { plug, socket, surface, thread };

const char* to_string(ConnectorKind k) noexcept;
std::optional<ConnectorKind> parse_connector_kind(std::string_view s) noexcept;

/// plug↔socket, thread↔thread, surface↔surface.
bool complementary(ConnectorKind a, ConnectorKind b) noexcept;

struct Connector {
  std::string id;
  ConnectorKind kind = ConnectorKind::plug;
  double size = 1.0;  // abstract units, > 0
  PrimitiveSet accepts;
};

struct Part {
  std::string id;
  std::string display_name;
  std::vector<Connector> connectors;
};

/// Index of a connector inside an ObjectSpec: parts()[part].connectors[connector].
struct ConnectorRef {
  std::size_t part = 0;
  std::size_t connector = 0;

  friend auto operator<=>(const ConnectorRef&, const ConnectorRef&) = default;
};

class CatalogError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An object kit: parts with connectors, plus optional pairwise compatibility
/// overrides. Parts and connectors keep catalog declaration order, which is the
/// order actions are enumerated and rendered in.
class ObjectSpec {
public:
  using OverrideKey = std::pair<ConnectorRef, ConnectorRef>;  // first < second

  ObjectSpec() = default;
  /// Throws CatalogError when an invariant is violated (duplicate ids, part
  /// without connectors, non-positive size, empty primitive set, bad override).
  ObjectSpec(std::string id, std::string display_name, std::vector<Part> parts,
             std::vector<std::tuple<std::string, std::string, double>> overrides = {},
             std::string category = {});

  const std::string& id() const noexcept { return id_; }
  const std::string& display_name() const noexcept { return display_name_; }
  /// Empty when the object is uncategorized.
  const std::string& category() const noexcept { return category_; }
  const std::vector<Part>& parts() const noexcept { return parts_; }
  const std::map<OverrideKey, double>& overrides() const noexcept { return overrides_; }

  const Connector& connector(ConnectorRef ref) const { return parts_.at(ref.part).connectors.at(ref.connector); }
  std::optional<std::size_t> find_part(std::string_view part_id) const;
  /// Resolves "part.connector".
  std::optional<ConnectorRef> resolve(std::string_view qualified) const;
  /// "part.connector"
  std::string qualified_name(ConnectorRef ref) const;
  std::optional<double> override_for(ConnectorRef a, ConnectorRef b) const;
  std::size_t connector_count() const;

private:
  std::string id_;
  std::string display_name_;
  std::string category_;
  std::vector<Part> parts_;
  std::map<OverrideKey, double> overrides_;
};

/// Geometric alignment score: 0 unless the kinds are complementary and the
/// primitive sets intersect, else exp(-k * |s1 - s2| / max(s1, s2)).
double compatibility(const Connector& a, const Connector& b, double sharpness = 4.0);

/// Override if present, otherwise the geometric score. Symmetric.
double compatibility(const ObjectSpec& object, ConnectorRef a, ConnectorRef b);

struct Joint {
  ConnectorRef a;  // a < b
  ConnectorRef b;
  Primitive primitive = Primitive::connect;

  friend auto operator<=>(const Joint&, const Joint&) = default;
};

struct AssemblyAction {
  Primitive primitive = Primitive::connect;
  ConnectorRef from;  // from < to
  ConnectorRef to;

  friend auto operator<=>(const AssemblyAction&, const AssemblyAction&) = default;
};

/// Thrown when an operation's precondition is violated by the caller.
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Topology of a partial assembly: placed parts and connector joints.
class AssemblyState {
public:
  AssemblyState() = default;
  /// Canonicalizes ordering. Throws ContractViolation if a joint references an
  /// unplaced part, joins a part to itself, or reuses a connector.
  AssemblyState(std::vector<std::size_t> placed, std::vector<Joint> joints);

  const std::vector<std::size_t>& placed() const noexcept { return placed_; }
  const std::vector<Joint>& joints() const noexcept { return joints_; }
  bool empty() const noexcept { return placed_.empty(); }
  bool is_placed(std::size_t part) const;
  bool is_occupied(ConnectorRef c) const;
  bool parts_joined(std::size_t p, std::size_t q) const;

  /// Canonical identity for hashing and deduplication.
  std::string key() const;

  friend bool operator==(const AssemblyState&, const AssemblyState&) = default;

private:
  friend AssemblyState apply_action(const ObjectSpec&, const AssemblyState&, const AssemblyAction&);

  std::vector<std::size_t> placed_;  // sorted
  std::vector<Joint> joints_;        // sorted
};

/// Throws ContractViolation if `state` references parts or connectors the
/// object does not have.
void check_state(const ObjectSpec& object, const AssemblyState& state);

/// Every join whose endpoints are free connectors on distinct, not yet joined
/// parts, sharing `primitive`, with compatibility > 0, and touching the
/// current assembly (any pair when nothing is placed). Sorted by
/// (primitive, from, to).
std::vector<AssemblyAction> applicable_actions(const ObjectSpec& object, const AssemblyState& state);

/// Success branch of an action. Throws ContractViolation if the action is not
/// applicable in `state`.
AssemblyState apply_action(const ObjectSpec& object, const AssemblyState& state, const AssemblyAction& action);

/// Largest connected component of the joint graph over placed parts, as sorted
/// part indices. Ties go to the component containing the lexicographically
/// smallest part id.
std::vector<std::size_t> assembled_component(const ObjectSpec& object, const AssemblyState& state);

/// "<primitive> <part A> (<connector>) to <part B> (<connector>)"
std::string render_action(const ObjectSpec& object, const AssemblyAction& action);

}  // namespace causeplan
