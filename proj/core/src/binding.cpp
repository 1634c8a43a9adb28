#include "causeplan/binding.hpp"

namespace causeplan {

const char* to_string(LabelOrigin o) noexcept {
  return o == LabelOrigin::model_vocabulary ? "from_model_vocabulary" : "novel";
}

std::set<Label> FunctionBinding::novel_labels() const {
  std::set<Label> out;
  for (const auto& [label, origin] : provenance)
    if (origin == LabelOrigin::novel) out.insert(label);
  return out;
}

BindingEntries FunctionBinding::raw_entries() const {
  BindingEntries out;
  for (const auto& [part, labels] : entries) {
    auto& v = out[part];
    for (const auto& l : labels) v.push_back(l.str());
  }
  return out;
}

}  // namespace causeplan
