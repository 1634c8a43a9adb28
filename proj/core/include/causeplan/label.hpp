#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

namespace causeplan {

/// A node or function label as typed by a person.
///
/// Identity is whitespace-trimmed and ASCII-lowercased, so "Provide Electricity "
/// and "provide electricity" name the same node.
class Label {
public:
  Label() = default;

  /// Throws std::invalid_argument if `text` is empty after trimming.
  explicit Label(std::string_view text);

  const std::string& str() const noexcept { return text_; }

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;

private:
  std::string text_;
};

/// Trim + lowercase. Returns an empty string for blank input.
std::string normalize_label(std::string_view text);

inline std::ostream& operator<<(std::ostream& os, const Label& l) { return os << l.str(); }

}  // namespace causeplan

template <>
struct std::hash<causeplan::Label> {
  std::size_t operator()(const causeplan::Label& l) const noexcept {
    return std::hash<std::string>{}(l.str());
  }
};
