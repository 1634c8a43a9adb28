#include "causeplan/label.hpp"

#include <algorithm>
#include <stdexcept>

namespace causeplan {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::string normalize_label(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  std::string out(text);
  // ASCII only; UTF-8 continuation bytes pass through untouched.
  std::transform(out.begin(), out.end(), out.begin(), [](char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  });
  return out;
}

Label::Label(std::string_view text) : text_(normalize_label(text)) {
  if (text_.empty()) throw std::invalid_argument("label must not be blank");
}

}  // namespace causeplan
