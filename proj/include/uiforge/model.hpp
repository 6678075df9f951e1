#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uiforge {

/// The closed node vocabulary. The first four are containers, the last four
/// carry payloads.
enum class NodeKind : std::uint8_t { Frame, Stack, Row, Tile, Text, Media, Control, Link };

inline constexpr NodeKind kAllKinds[] = {NodeKind::Frame, NodeKind::Stack, NodeKind::Row,
                                         NodeKind::Tile,  NodeKind::Text,  NodeKind::Media,
                                         NodeKind::Control, NodeKind::Link};

std::string_view to_string(NodeKind kind);
/// Throws Error{UnknownKind} for anything outside the vocabulary.
NodeKind parse_kind(std::string_view name);

constexpr bool is_container(NodeKind k) { return k <= NodeKind::Tile; }

/// Normalized page coordinates. Constructed through `make`, which enforces
/// 0 <= x0 < x1 <= 1, 0 <= y0 < y1 <= 1 and quantizes to 6 decimals.
struct BBox {
  double x0 = 0, y0 = 0, x1 = 1, y1 = 1;

  static BBox make(double x0, double y0, double x1, double y1);
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  friend bool operator==(const BBox&, const BBox&) = default;
};

/// Rounds to 6 decimal digits through the same text path used on disk, so
/// quantize(quantize(v)) == quantize(v) bit for bit.
double quantize6(double v);

enum class PayloadType : std::uint8_t { None, Text, Url, ImageSrc, Placeholder };

std::string_view to_string(PayloadType type);
PayloadType parse_payload_type(std::string_view name);

struct Payload {
  PayloadType type = PayloadType::None;
  std::string value;

  static Payload none() { return {}; }
  static Payload text(std::string v) { return {PayloadType::Text, std::move(v)}; }
  static Payload url(std::string v) { return {PayloadType::Url, std::move(v)}; }
  static Payload image(std::string v) { return {PayloadType::ImageSrc, std::move(v)}; }
  static Payload placeholder(std::string v) { return {PayloadType::Placeholder, std::move(v)}; }

  bool is_none() const { return type == PayloadType::None; }
  friend bool operator==(const Payload&, const Payload&) = default;
  friend auto operator<=>(const Payload&, const Payload&) = default;
};

/// Whether a kind may carry a payload of the given type.
bool payload_allowed(NodeKind kind, PayloadType type);
/// Whether a kind may have children (containers, plus link and control).
bool children_allowed(NodeKind kind);

using NodeId = std::int64_t;

struct UiNode {
  NodeId id = 0;
  NodeKind kind = NodeKind::Frame;
  std::optional<BBox> bbox;
  Payload payload;
  std::vector<NodeId> children;

  friend bool operator==(const UiNode&, const UiNode&) = default;
};

/// Nested description used to build trees in code. Ids are assigned in
/// preorder starting from `first_id`.
struct NodeSpec {
  NodeKind kind = NodeKind::Frame;
  Payload payload;
  std::vector<NodeSpec> children;
  std::optional<BBox> bbox;
};

/// A validated rooted ordered tree.
class UiTree {
 public:
  UiTree() = default;
  /// Validates shape (single root, no cycles, single parent, every node
  /// reachable) and kind/payload compatibility.
  UiTree(std::vector<UiNode> nodes, NodeId root);

  static UiTree from_spec(const NodeSpec& spec, NodeId first_id = 0);

  NodeId root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  bool contains(NodeId id) const { return nodes_.count(id) != 0; }
  /// Throws Error{UnknownNode}.
  const UiNode& node(NodeId id) const;
  std::optional<NodeId> parent(NodeId id) const;
  const std::map<NodeId, UiNode>& nodes() const { return nodes_; }

  std::vector<NodeId> preorder() const { return preorder_from(root_); }
  std::vector<NodeId> preorder_from(NodeId id) const;
  std::vector<NodeId> postorder() const;
  std::size_t subtree_size(NodeId id) const;
  NodeSpec to_spec(NodeId id) const;

  friend bool operator==(const UiTree& a, const UiTree& b) {
    return a.root_ == b.root_ && a.nodes_ == b.nodes_;
  }

 private:
  std::map<NodeId, UiNode> nodes_;
  std::map<NodeId, NodeId> parent_;
  NodeId root_ = 0;
};

// ---------------------------------------------------------------------------
// Templates

/// Attribute positions a bound value may land in. Class and Id exist so
/// that illegal placements are expressible; no PropSpec ever allows them.
enum class Sink : std::uint8_t { Src, Href, TextContent, Placeholder, LoopBody, Class, Id };

std::string_view to_string(Sink sink);
std::optional<Sink> parse_sink(std::string_view name);

enum class PropType : std::uint8_t { TextVal, UrlVal, ImageVal, PlaceholderVal, Items };

std::string_view to_string(PropType type);
PropType parse_prop_type(std::string_view name);

PropType prop_type_for(PayloadType type);
PayloadType payload_type_for(PropType type);
/// The sink table: UrlVal -> {src, href}, ImageVal -> {src}, ...
std::vector<Sink> sinks_for(PropType type);
/// The single sink a prop of this type lands in on a node of this kind.
Sink emission_sink(NodeKind kind, PayloadType type);

struct PropSpec {
  std::string name;
  PropType type = PropType::TextVal;
  std::vector<Sink> sinks;
  /// Set on props inside optional regions; such props bind to None when
  /// the region is absent from an instance.
  bool optional = false;
  /// Template referenced by an Items prop.
  std::string items_template;

  friend bool operator==(const PropSpec&, const PropSpec&) = default;
};

struct SkeletonNode {
  NodeKind kind = NodeKind::Frame;
  PayloadType payload_type = PayloadType::None;
  /// Exactly one of `prop` / `constant` is set on payload-bearing nodes
  /// once props are extracted.
  std::string prop;
  std::optional<std::string> constant;
  bool optional = false;
  std::vector<SkeletonNode> children;

  std::size_t size() const;
  friend bool operator==(const SkeletonNode&, const SkeletonNode&) = default;
};

/// Preorder list of skeleton nodes.
std::vector<const SkeletonNode*> preorder(const SkeletonNode& root);

/// The presence key of an optional node: the first payload-bearing node in
/// its subtree (preorder) that is not itself inside a nested optional region.
const SkeletonNode* optional_key(const SkeletonNode& node);

struct Template {
  std::string id;
  SkeletonNode skeleton;
  std::vector<PropSpec> props;
  int support = 0;

  const PropSpec* find_prop(std::string_view name) const;
  friend bool operator==(const Template&, const Template&) = default;
};

using Binding = std::map<std::string, Payload>;

struct Instance {
  std::string template_id;
  Binding binding;
  friend bool operator==(const Instance&, const Instance&) = default;
};

struct LoopGroup {
  NodeId parent = 0;
  std::string template_id;
  std::vector<NodeId> instances;
  friend bool operator==(const LoopGroup&, const LoopGroup&) = default;
};

struct Blueprint {
  UiTree tree;
  std::vector<Template> templates;
  std::map<NodeId, Instance> instances;
  std::vector<LoopGroup> loop_groups;

  const Template* find_template(std::string_view id) const;
  friend bool operator==(const Blueprint&, const Blueprint&) = default;
};

/// Result of aligning a skeleton against a concrete subtree: for each
/// skeleton node in preorder, the concrete node it matched, or nullopt when
/// the node sits in an absent optional region.
using Alignment = std::vector<std::optional<NodeId>>;

/// Structural match on (kind, payload type), skipping optional regions as
/// needed. Deterministic: prefers matching an optional node over skipping.
std::optional<Alignment> align_skeleton(const SkeletonNode& skeleton, const UiTree& tree,
                                        NodeId root);

/// Binding extracted from a concrete subtree, or nullopt when the subtree
/// does not instantiate the template (structure or constants differ).
std::optional<Binding> match_template(const Template& tpl, const UiTree& tree, NodeId root);

/// Checks every Blueprint invariant; throws the matching Error.
void validate(const Blueprint& bp);

/// Rebuilds a tree by instantiating every template with its binding in
/// place of the instance subtrees. Ids are fresh (preorder from 0).
UiTree expand_blueprint(const Blueprint& bp);

/// Concrete subtree produced by substituting a binding into a skeleton.
NodeSpec instantiate(const Template& tpl, const Binding& binding);

}  // namespace uiforge
