#pragma once

// Text scanners over emitted entry files. They read only the bundle text and
// share nothing with the constraint engine.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uiforge/emit/render.hpp"

namespace uiforge::scan {

/// Prop assignments of one call site or items record, in source order;
/// nullopt stands for a literal null.
using Record = std::vector<std::pair<std::string, std::optional<std::string>>>;

struct Call {
  std::string template_id;
  Record props;
  /// Non-empty for loop constructs.
  std::string items_ref;
  /// Angular loop bodies forward each prop explicitly.
  std::vector<std::string> forwarded;
};

struct Entry {
  std::vector<Call> calls;  // document order
  std::map<std::string, std::vector<Record>> items;
  /// Loop constructs per items collection, counted over the whole text.
  std::map<std::string, int> loop_constructs;
};

/// React, Vue and Angular only.
Entry scan_entry(const CodeBundle& bundle, const std::vector<std::string>& template_ids);

std::size_t count(const Record& r, const std::string& key);
const std::optional<std::string>* find(const Record& r, const std::string& key);

}  // namespace uiforge::scan
