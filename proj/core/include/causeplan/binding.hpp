#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "causeplan/label.hpp"

namespace causeplan {

enum class LabelOrigin { model_vocabulary, novel };

const char* to_string(LabelOrigin o) noexcept;

/// Part id → raw function labels, as typed (step 1 or step 3 input).
using BindingEntries = std::map<std::string, std::vector<std::string>>;

/// Function labels attached to an object's parts, checked against a model's
/// vocabulary. Built by bind_functions(); every part of the object has an entry, possibly
/// empty.
struct FunctionBinding {
  std::string object_id;
  std::map<std::string, std::set<Label>> entries;
  std::map<Label, LabelOrigin> provenance;
  std::vector<std::string> warnings;

  std::set<Label> novel_labels() const;
  BindingEntries raw_entries() const;
};

}  // namespace causeplan
