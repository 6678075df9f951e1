#pragma once

#include <string>
#include <vector>

#include "uiforge/emit/constraints.hpp"
#include "uiforge/emit/events.hpp"

namespace uiforge {

struct SourceFile {
  std::string path;
  std::string content;
  friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

struct CodeBundle {
  Framework framework = Framework::Html;
  /// Components in path order, entry files last.
  std::vector<SourceFile> files;

  /// nullptr when absent.
  const std::string* find(std::string_view path) const;
  friend bool operator==(const CodeBundle&, const CodeBundle&) = default;
};

/// Replays `events` through a fresh engine for `schema` and pretty-prints
/// the result. Throws Error{IncompleteStream} when prop coverage is unmet
/// (at an instance close or at the end of the stream) and
/// Error{InadmissibleEvent} for any other rejected event.
CodeBundle render(const std::vector<EmissionEvent>& events, const Schema& schema);
CodeBundle render(const std::vector<EmissionEvent>& events, const Blueprint& bp, Framework fw);

/// render(dispatch(bp, fw), bp, fw).
CodeBundle emit(const Blueprint& bp, Framework fw);

// Escaping shared with the bundle scanners.
std::string html_escape(std::string_view s);
std::string html_unescape(std::string_view s);
/// html_escape plus &#123;/&#125; for braces, which Vue and Angular would
/// otherwise read as interpolation.
std::string markup_escape(std::string_view s);
/// Double-quoted JSON/JS string literal; < and > are \\u-escaped.
std::string js_string(std::string_view s);
/// "Tile_ab12cd34" -> "Tile_ab12cd34Component".
std::string angular_class(const std::string& template_id);
std::string angular_selector(const std::string& template_id);

}  // namespace uiforge
