#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uiforge/blueprint_json.hpp"
#include "uiforge/emit/render.hpp"
#include "uiforge/model.hpp"
#include "uiforge/ted.hpp"

namespace uiforge {

struct EvalReport {
  /// TED between the expanded blueprint and the mined tree.
  int ted = 0;
  double crr = 0;
  double lpa = 1;
  double pc = 1;
  /// Files in the bundle.
  int afc = 0;
  /// TED between the parsed HTML bundle and the expanded blueprint.
  int roundtrip_ted = 0;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

Json report_to_json(const EvalReport& r);

/// Sum over templates of (support - 1) * |skeleton|, divided by |V|,
/// clamped to [0, 1]. Zero for an empty tree.
double component_reuse_rate(const Blueprint& bp);

/// One `<!-- component:T -->` region of a parsed HTML page.
struct HtmlInstanceMark {
  std::string template_id;
  std::optional<NodeId> parent;
  std::optional<NodeId> root;  // first node opened inside the region
  std::vector<std::string> nulls;
  /// (prop, value) for every element carrying data-prop inside the region.
  std::vector<std::pair<std::string, Payload>> props;
};

struct ParsedHtml {
  UiTree tree;
  std::vector<HtmlInstanceMark> instances;  // document order
};

/// Parses a page in the emitter's HTML dialect. Throws
/// Error{UnknownTagMapping} for tags outside the dialect and
/// Error{UnparsableBundle} for anything else it cannot read back.
ParsedHtml parse_html_document(std::string_view html);
/// The tree of the bundle's index.html.
UiTree parse_html_bundle(const CodeBundle& bundle);

/// Fraction of loop groups realized as exactly one loop construct (React,
/// Vue, Angular) or as consecutive sibling regions of the right count
/// (HTML). 1.0 when there are no groups.
double loop_preservation_accuracy(const Blueprint& bp, const CodeBundle& bundle);

/// Fraction of (instance, prop) pairs whose value appears exactly once at
/// that instance's site in the bundle text. 1.0 when there are none.
double prop_coverage(const Blueprint& bp, const CodeBundle& bundle);

/// Problems found by a tag-balance scan of every markup file.
std::vector<std::string> audit_tag_balance(const CodeBundle& bundle);
/// Problems found by a text-level scan for URL values outside src/href.
std::vector<std::string> audit_type_sinks(const Blueprint& bp, const CodeBundle& bundle);

EvalReport evaluate(const Blueprint& bp, const CodeBundle& bundle,
                    LabelMode mode = LabelMode::Structural);

}  // namespace uiforge
