#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "uiforge/model.hpp"

namespace uiforge {

enum class Framework : std::uint8_t { Html, React, Vue, Angular };

inline constexpr Framework kAllFrameworks[] = {Framework::Html, Framework::React, Framework::Vue,
                                               Framework::Angular};

std::string_view to_string(Framework fw);
/// Accepts html|react|vue|angular; throws Error{UnsupportedFramework}.
Framework parse_framework(std::string_view name);

namespace ev {

struct OpenTag {
  std::string name;
  friend bool operator==(const OpenTag&, const OpenTag&) = default;
};
struct CloseTag {
  std::string name;
  friend bool operator==(const CloseTag&, const CloseTag&) = default;
};
struct Attr {
  std::string name;
  std::string value;
  friend bool operator==(const Attr&, const Attr&) = default;
};
struct TextContent {
  std::string value;
  friend bool operator==(const TextContent&, const TextContent&) = default;
};
struct BindProp {
  std::string template_id;
  std::string prop;
  Sink sink = Sink::TextContent;
  Payload value;
  friend bool operator==(const BindProp&, const BindProp&) = default;
};
struct LoopStart {
  std::string template_id;
  std::string items_ref;
  friend bool operator==(const LoopStart&, const LoopStart&) = default;
};
struct LoopEnd {
  friend bool operator==(const LoopEnd&, const LoopEnd&) = default;
};
struct FileStart {
  std::string path;
  friend bool operator==(const FileStart&, const FileStart&) = default;
};
struct FileEnd {
  friend bool operator==(const FileEnd&, const FileEnd&) = default;
};

}  // namespace ev

/// One token of the emission alphabet. Conventions layered on the plain
/// tags: "define:<Template>" opens a component definition, "if:<prop>" an
/// optional region inside one, and a bare template id opens an instance.
/// Inside definitions, Attr/TextContent values of the form "{{prop}}"
/// reference a prop.
using EmissionEvent = std::variant<ev::OpenTag, ev::CloseTag, ev::Attr, ev::TextContent, ev::BindProp,
                                   ev::LoopStart, ev::LoopEnd, ev::FileStart, ev::FileEnd>;

std::string describe(const EmissionEvent& e);

inline constexpr std::string_view kDefinePrefix = "define:";
inline constexpr std::string_view kIfPrefix = "if:";

std::string prop_ref(std::string_view prop);
/// The prop name if `value` is exactly "{{name}}".
std::optional<std::string> parse_prop_ref(std::string_view value);

// File layout of a bundle, shared by the dispatcher, the engine and render.
std::string component_source_path(const std::string& template_id, Framework fw);
std::string entry_source_path(Framework fw);
/// "Tile_ab12cd34" -> "tile-ab12cd34".
std::string kebab(std::string_view template_id);
/// "items_<k>" for the k-th loop group in document order.
std::string items_ref(std::size_t k);

}  // namespace uiforge
