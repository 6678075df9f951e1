#include "uiforge/emit/events.hpp"

#include <cctype>
#include <sstream>

#include "uiforge/error.hpp"

namespace uiforge {

std::string_view to_string(Framework fw) {
  switch (fw) {
    case Framework::Html: return "html";
    case Framework::React: return "react";
    case Framework::Vue: return "vue";
    case Framework::Angular: return "angular";
  }
  return "?";
}

Framework parse_framework(std::string_view name) {
  for (Framework fw : kAllFrameworks) {
    if (to_string(fw) == name) return fw;
  }
  throw Error(ErrorCode::UnsupportedFramework, "unknown framework '" + std::string(name) + "'");
}

namespace {

struct Describe {
  std::string operator()(const ev::OpenTag& e) const { return "OpenTag(" + e.name + ")"; }
  std::string operator()(const ev::CloseTag& e) const { return "CloseTag(" + e.name + ")"; }
  std::string operator()(const ev::Attr& e) const { return "Attr(" + e.name + "=" + e.value + ")"; }
  std::string operator()(const ev::TextContent& e) const { return "TextContent(" + e.value + ")"; }
  std::string operator()(const ev::BindProp& e) const {
    return "BindProp(" + e.template_id + "." + e.prop + " -> " + std::string(to_string(e.sink)) +
           ", " + (e.value.is_none() ? std::string("null") : e.value.value) + ")";
  }
  std::string operator()(const ev::LoopStart& e) const {
    return "LoopStart(" + e.template_id + ", " + e.items_ref + ")";
  }
  std::string operator()(const ev::LoopEnd&) const { return "LoopEnd"; }
  std::string operator()(const ev::FileStart& e) const { return "FileStart(" + e.path + ")"; }
  std::string operator()(const ev::FileEnd&) const { return "FileEnd"; }
};

}  // namespace

std::string describe(const EmissionEvent& e) { return std::visit(Describe{}, e); }

std::string prop_ref(std::string_view prop) { return "{{" + std::string(prop) + "}}"; }

std::optional<std::string> parse_prop_ref(std::string_view value) {
  if (value.size() < 5 || value.substr(0, 2) != "{{" || value.substr(value.size() - 2) != "}}") {
    return std::nullopt;
  }
  std::string name(value.substr(2, value.size() - 4));
  if (name.empty()) return std::nullopt;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return std::nullopt;
  }
  return name;
}

std::string kebab(std::string_view template_id) {
  std::string out;
  for (char c : template_id) {
    if (c == '_') out.push_back('-');
    else out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::string component_source_path(const std::string& template_id, Framework fw) {
  switch (fw) {
    case Framework::React: return "components/" + template_id + ".tsx";
    case Framework::Vue: return "components/" + template_id + ".vue";
    case Framework::Angular: return "components/" + kebab(template_id) + ".component.html";
    case Framework::Html: break;
  }
  return {};
}

std::string entry_source_path(Framework fw) {
  switch (fw) {
    case Framework::Html: return "index.html";
    case Framework::React: return "App.tsx";
    case Framework::Vue: return "App.vue";
    case Framework::Angular: return "app.component.html";
  }
  return {};
}

std::string items_ref(std::size_t k) { return "items_" + std::to_string(k); }

}  // namespace uiforge
