#include "uiforge/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>

#include "uiforge/error.hpp"

namespace uiforge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::InvalidBox: return "InvalidBox";
    case ErrorCode::PayloadMismatch: return "PayloadMismatch";
    case ErrorCode::OverlappingInstances: return "OverlappingInstances";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::TemplateMismatch: return "TemplateMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::TooFewItems: return "TooFewItems";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::StructuralMismatch: return "StructuralMismatch";
    case ErrorCode::UnsupportedFramework: return "UnsupportedFramework";
    case ErrorCode::InternalConstraintViolation: return "InternalConstraintViolation";
    case ErrorCode::InadmissibleEvent: return "InadmissibleEvent";
    case ErrorCode::IncompleteStream: return "IncompleteStream";
    case ErrorCode::FuelExhausted: return "FuelExhausted";
    case ErrorCode::UnparsableBundle: return "UnparsableBundle";
    case ErrorCode::UnknownTagMapping: return "UnknownTagMapping";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Frame: return "frame";
    case NodeKind::Stack: return "stack";
    case NodeKind::Row: return "row";
    case NodeKind::Tile: return "tile";
    case NodeKind::Text: return "text";
    case NodeKind::Media: return "media";
    case NodeKind::Control: return "control";
    case NodeKind::Link: return "link";
  }
  return "?";
}

NodeKind parse_kind(std::string_view name) {
  for (NodeKind k : kAllKinds) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::UnknownKind, "unknown node kind '" + std::string(name) + "'");
}

double quantize6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return std::strtod(buf, nullptr);
}

BBox BBox::make(double x0, double y0, double x1, double y1) {
  BBox b{quantize6(x0), quantize6(y0), quantize6(x1), quantize6(y1)};
  const bool ok = std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) &&
                  std::isfinite(y1) && 0.0 <= b.x0 && b.x0 < b.x1 && b.x1 <= 1.0 &&
                  0.0 <= b.y0 && b.y0 < b.y1 && b.y1 <= 1.0;
  if (!ok) {
    std::ostringstream os;
    os << "bounding box [" << x0 << ", " << y0 << ", " << x1 << ", " << y1
       << "] violates 0 <= x0 < x1 <= 1, 0 <= y0 < y1 <= 1";
    throw Error(ErrorCode::InvalidBox, os.str());
  }
  return b;
}

std::string_view to_string(PayloadType type) {
  switch (type) {
    case PayloadType::None: return "none";
    case PayloadType::Text: return "text";
    case PayloadType::Url: return "url";
    case PayloadType::ImageSrc: return "image";
    case PayloadType::Placeholder: return "placeholder";
  }
  return "?";
}

PayloadType parse_payload_type(std::string_view name) {
  for (auto t : {PayloadType::None, PayloadType::Text, PayloadType::Url, PayloadType::ImageSrc,
                 PayloadType::Placeholder}) {
    if (to_string(t) == name) return t;
  }
  throw Error(ErrorCode::PayloadMismatch, "unknown payload type '" + std::string(name) + "'");
}

bool payload_allowed(NodeKind kind, PayloadType type) {
  switch (kind) {
    case NodeKind::Text: return type == PayloadType::Text;
    case NodeKind::Media: return type == PayloadType::ImageSrc;
    case NodeKind::Link: return type == PayloadType::Url;
    case NodeKind::Control: return type == PayloadType::Placeholder || type == PayloadType::None;
    default: return type == PayloadType::None;
  }
}

bool children_allowed(NodeKind kind) {
  return is_container(kind) || kind == NodeKind::Link || kind == NodeKind::Control;
}

// ---------------------------------------------------------------------------

UiTree::UiTree(std::vector<UiNode> nodes, NodeId root) : root_(root) {
  for (auto& n : nodes) {
    const NodeId id = n.id;
    if (!nodes_.emplace(id, std::move(n)).second) {
      throw Error(ErrorCode::DanglingReference, "duplicate node id " + std::to_string(id));
    }
  }
  if (!nodes_.count(root)) {
    throw Error(ErrorCode::DanglingReference, "root " + std::to_string(root) + " is not a node");
  }
  for (const auto& [id, n] : nodes_) {
    if (!payload_allowed(n.kind, n.payload.type)) {
      throw Error(ErrorCode::PayloadMismatch,
                  "node " + std::to_string(id) + " of kind " + std::string(to_string(n.kind)) +
                      " cannot carry a " + std::string(to_string(n.payload.type)) + " payload");
    }
    if (!n.children.empty() && !children_allowed(n.kind)) {
      throw Error(ErrorCode::PayloadMismatch, "node " + std::to_string(id) + " of kind " +
                                                  std::string(to_string(n.kind)) +
                                                  " cannot have children");
    }
    for (NodeId c : n.children) {
      if (!nodes_.count(c)) {
        throw Error(ErrorCode::DanglingReference,
                    "node " + std::to_string(id) + " references missing child " + std::to_string(c));
      }
      if (c == root || !parent_.emplace(c, id).second) {
        throw Error(ErrorCode::DanglingReference,
                    "node " + std::to_string(c) + " has more than one parent");
      }
    }
  }
  // Single parent plus a parent-less root: the structure is a tree iff
  // every node is reachable from the root.
  if (preorder().size() != nodes_.size()) {
    throw Error(ErrorCode::DanglingReference, "nodes unreachable from root (cycle or forest)");
  }
}

UiTree UiTree::from_spec(const NodeSpec& spec, NodeId first_id) {
  std::vector<UiNode> nodes;
  NodeId next = first_id;
  std::function<NodeId(const NodeSpec&)> build = [&](const NodeSpec& s) -> NodeId {
    const NodeId id = next++;
    const std::size_t slot = nodes.size();
    nodes.push_back(UiNode{id, s.kind, s.bbox, s.payload, {}});
    std::vector<NodeId> kids;
    for (const auto& c : s.children) kids.push_back(build(c));
    nodes[slot].children = std::move(kids);
    return id;
  };
  const NodeId root = build(spec);
  return UiTree(std::move(nodes), root);
}

const UiNode& UiTree::node(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownNode, "no node " + std::to_string(id));
  return it->second;
}

std::optional<NodeId> UiTree::parent(NodeId id) const {
  auto it = parent_.find(id);
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> UiTree::preorder_from(NodeId id) const {
  std::vector<NodeId> out;
  if (!nodes_.count(id)) return out;
  std::vector<NodeId> stack{id};
  std::set<NodeId> seen;
  while (!stack.empty()) {
    const NodeId cur = stack.back();
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    out.push_back(cur);
    const auto& kids = nodes_.at(cur).children;
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<NodeId> UiTree::postorder() const {
  std::vector<NodeId> out;
  out.reserve(nodes_.size());
  // (node, next child index)
  std::vector<std::pair<NodeId, std::size_t>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto& [id, idx] = stack.back();
    const auto& kids = nodes_.at(id).children;
    if (idx < kids.size()) {
      const NodeId c = kids[idx++];
      stack.emplace_back(c, 0);
    } else {
      out.push_back(id);
      stack.pop_back();
    }
  }
  return out;
}

std::size_t UiTree::subtree_size(NodeId id) const { return preorder_from(id).size(); }

NodeSpec UiTree::to_spec(NodeId id) const {
  const UiNode& n = node(id);
  NodeSpec s{n.kind, n.payload, {}, n.bbox};
  for (NodeId c : n.children) s.children.push_back(to_spec(c));
  return s;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Sink sink) {
  switch (sink) {
    case Sink::Src: return "src";
    case Sink::Href: return "href";
    case Sink::TextContent: return "text-content";
    case Sink::Placeholder: return "placeholder";
    case Sink::LoopBody: return "loop-body";
    case Sink::Class: return "class";
    case Sink::Id: return "id";
  }
  return "?";
}

std::optional<Sink> parse_sink(std::string_view name) {
  for (auto s : {Sink::Src, Sink::Href, Sink::TextContent, Sink::Placeholder, Sink::LoopBody,
                 Sink::Class, Sink::Id}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view to_string(PropType type) {
  switch (type) {
    case PropType::TextVal: return "TextVal";
    case PropType::UrlVal: return "UrlVal";
    case PropType::ImageVal: return "ImageVal";
    case PropType::PlaceholderVal: return "PlaceholderVal";
    case PropType::Items: return "Items";
  }
  return "?";
}

PropType parse_prop_type(std::string_view name) {
  for (auto t : {PropType::TextVal, PropType::UrlVal, PropType::ImageVal,
                 PropType::PlaceholderVal, PropType::Items}) {
    if (to_string(t) == name) return t;
  }
  throw Error(ErrorCode::PayloadMismatch, "unknown prop type '" + std::string(name) + "'");
}

PropType prop_type_for(PayloadType type) {
  switch (type) {
    case PayloadType::Text: return PropType::TextVal;
    case PayloadType::Url: return PropType::UrlVal;
    case PayloadType::ImageSrc: return PropType::ImageVal;
    case PayloadType::Placeholder: return PropType::PlaceholderVal;
    case PayloadType::None: break;
  }
  throw Error(ErrorCode::PayloadMismatch, "a None payload has no prop type");
}

PayloadType payload_type_for(PropType type) {
  switch (type) {
    case PropType::TextVal: return PayloadType::Text;
    case PropType::UrlVal: return PayloadType::Url;
    case PropType::ImageVal: return PayloadType::ImageSrc;
    case PropType::PlaceholderVal: return PayloadType::Placeholder;
    case PropType::Items: break;
  }
  return PayloadType::None;
}

std::vector<Sink> sinks_for(PropType type) {
  switch (type) {
    case PropType::TextVal: return {Sink::TextContent};
    case PropType::UrlVal: return {Sink::Src, Sink::Href};
    case PropType::ImageVal: return {Sink::Src};
    case PropType::PlaceholderVal: return {Sink::Placeholder};
    case PropType::Items: return {Sink::LoopBody};
  }
  return {};
}

Sink emission_sink(NodeKind kind, PayloadType type) {
  switch (type) {
    case PayloadType::Text: return Sink::TextContent;
    case PayloadType::Url: return kind == NodeKind::Media ? Sink::Src : Sink::Href;
    case PayloadType::ImageSrc: return Sink::Src;
    case PayloadType::Placeholder: return Sink::Placeholder;
    case PayloadType::None: break;
  }
  throw Error(ErrorCode::PayloadMismatch, "a None payload has no sink");
}

std::size_t SkeletonNode::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::vector<const SkeletonNode*> preorder(const SkeletonNode& root) {
  std::vector<const SkeletonNode*> out;
  std::vector<const SkeletonNode*> stack{&root};
  while (!stack.empty()) {
    const SkeletonNode* cur = stack.back();
    stack.pop_back();
    out.push_back(cur);
    for (auto it = cur->children.rbegin(); it != cur->children.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

const SkeletonNode* optional_key(const SkeletonNode& node) {
  if (node.payload_type != PayloadType::None) return &node;
  for (const auto& c : node.children) {
    if (c.optional) continue;
    if (const SkeletonNode* k = optional_key(c)) return k;
  }
  return nullptr;
}

const PropSpec* Template::find_prop(std::string_view name) const {
  for (const auto& p : props) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const Template* Blueprint::find_template(std::string_view id) const {
  for (const auto& t : templates) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Skeleton alignment

namespace {

struct Aligner {
  const UiTree& tree;
  // Preorder index of each skeleton node, so the alignment can be filled.
  std::map<const SkeletonNode*, std::size_t> index;

  bool label_ok(const SkeletonNode& s, const UiNode& v) const {
    return s.kind == v.kind && s.payload_type == v.payload.type;
  }

  // Tries to match `s` against concrete node `v`, writing into `out`.
  bool match(const SkeletonNode& s, NodeId v, Alignment& out) const {
    const UiNode& n = tree.node(v);
    if (!label_ok(s, n)) return false;
    out[index.at(&s)] = v;
    return match_children(s.children, 0, n.children, 0, out);
  }

  bool match_children(const std::vector<SkeletonNode>& sk, std::size_t i,
                      const std::vector<NodeId>& kids, std::size_t j, Alignment& out) const {
    if (i == sk.size()) return j == kids.size();
    const SkeletonNode& s = sk[i];
    if (j < kids.size()) {
      Alignment trial = out;
      if (match(s, kids[j], trial) && match_children(sk, i + 1, kids, j + 1, trial)) {
        out = std::move(trial);
        return true;
      }
    }
    if (s.optional) {
      clear(s, out);
      return match_children(sk, i + 1, kids, j, out);
    }
    return false;
  }

  void clear(const SkeletonNode& s, Alignment& out) const {
    for (const SkeletonNode* p : preorder(s)) out[index.at(p)] = std::nullopt;
  }
};

}  // namespace

std::optional<Alignment> align_skeleton(const SkeletonNode& skeleton, const UiTree& tree,
                                        NodeId root) {
  if (!tree.contains(root)) return std::nullopt;
  Aligner al{tree, {}};
  const auto order = preorder(skeleton);
  for (std::size_t i = 0; i < order.size(); ++i) al.index[order[i]] = i;
  Alignment out(order.size());
  if (!al.match(skeleton, root, out)) return std::nullopt;
  return out;
}

std::optional<Binding> match_template(const Template& tpl, const UiTree& tree, NodeId root) {
  auto al = align_skeleton(tpl.skeleton, tree, root);
  if (!al) return std::nullopt;
  const auto order = preorder(tpl.skeleton);
  Binding b;
  for (const auto& p : tpl.props) b[p.name] = Payload::none();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const SkeletonNode& s = *order[i];
    if (s.payload_type == PayloadType::None) continue;
    const auto& at = (*al)[i];
    if (!s.prop.empty()) {
      if (at) b[s.prop] = tree.node(*at).payload;
    } else if (s.constant) {
      if (at && tree.node(*at).payload.value != *s.constant) return std::nullopt;
    }
  }
  // Presence of an optional region must agree with its key binding.
  for (std::size_t i = 0; i < order.size(); ++i) {
    const SkeletonNode& s = *order[i];
    if (!s.optional) continue;
    const SkeletonNode* key = optional_key(s);
    if (!key || key->prop.empty()) return std::nullopt;
    if (b.at(key->prop).is_none() != !(*al)[i].has_value()) return std::nullopt;
  }
  return b;
}

NodeSpec instantiate(const Template& tpl, const Binding& binding) {
  std::function<std::optional<NodeSpec>(const SkeletonNode&)> build =
      [&](const SkeletonNode& s) -> std::optional<NodeSpec> {
    if (s.optional) {
      const SkeletonNode* key = optional_key(s);
      if (!key || key->prop.empty()) return std::nullopt;
      auto it = binding.find(key->prop);
      if (it == binding.end() || it->second.is_none()) return std::nullopt;
    }
    NodeSpec out{s.kind, Payload::none(), {}, std::nullopt};
    if (!s.prop.empty()) {
      auto it = binding.find(s.prop);
      if (it != binding.end()) out.payload = it->second;
    } else if (s.constant) {
      out.payload = Payload{s.payload_type, *s.constant};
    }
    for (const auto& c : s.children) {
      if (auto sub = build(c)) out.children.push_back(std::move(*sub));
    }
    return out;
  };
  auto root = build(tpl.skeleton);
  if (!root) throw Error(ErrorCode::TemplateMismatch, "template root cannot be optional");
  return *root;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void validate_template(const Template& t) {
  const auto fail = [&](const std::string& msg) {
    throw Error(ErrorCode::TemplateMismatch, "template " + t.id + ": " + msg);
  };
  if (t.id.empty()) fail("empty id");
  if (t.skeleton.optional) fail("root is optional");
  std::set<std::string> names;
  for (const auto& p : t.props) {
    if (!names.insert(p.name).second) fail("duplicate prop " + p.name);
    if (p.sinks != sinks_for(p.type)) fail("prop " + p.name + " has sinks outside its type table");
  }
  std::map<std::string, int> refs;
  std::function<void(const SkeletonNode&, bool)> walk = [&](const SkeletonNode& s, bool in_opt) {
    const bool opt = in_opt || s.optional;
    if (!payload_allowed(s.kind, s.payload_type)) fail("skeleton node kind/payload mismatch");
    if (!s.children.empty() && !children_allowed(s.kind)) fail("leaf kind with children");
    if (!s.prop.empty()) {
      const PropSpec* p = t.find_prop(s.prop);
      if (!p) fail("slot references unknown prop " + s.prop);
      if (payload_type_for(p->type) != s.payload_type) fail("prop " + s.prop + " type mismatch");
      if (p->optional != opt) fail("prop " + s.prop + " optional flag disagrees with skeleton");
      if (s.constant) fail("slot " + s.prop + " also carries a constant");
      ++refs[s.prop];
    } else if (s.payload_type != PayloadType::None && !s.constant) {
      fail("payload-bearing node is neither a slot nor a constant");
    }
    if (s.optional) {
      const SkeletonNode* k = optional_key(s);
      if (!k || k->prop.empty()) fail("optional region without a presence prop");
    }
    for (const auto& c : s.children) walk(c, opt);
  };
  walk(t.skeleton, false);
  for (const auto& p : t.props) {
    if (p.type == PropType::Items) continue;
    if (refs[p.name] != 1) fail("prop " + p.name + " is referenced " +
                                std::to_string(refs[p.name]) + " times");
  }
}

}  // namespace

void validate(const Blueprint& bp) {
  const UiTree& tree = bp.tree;
  if (tree.empty()) throw Error(ErrorCode::DanglingReference, "blueprint has no nodes");

  std::set<std::string> ids;
  for (const auto& t : bp.templates) {
    if (!ids.insert(t.id).second) {
      throw Error(ErrorCode::TemplateMismatch, "duplicate template id " + t.id);
    }
    validate_template(t);
  }
  for (const auto& t : bp.templates) {
    for (const auto& p : t.props) {
      if (p.type == PropType::Items && !ids.count(p.items_template)) {
        throw Error(ErrorCode::DanglingReference,
                    "prop " + p.name + " references unknown template " + p.items_template);
      }
    }
  }

  std::map<NodeId, NodeId> claimed;  // node -> instance root
  std::map<std::string, int> support;
  for (const auto& [root, inst] : bp.instances) {
    if (!tree.contains(root)) {
      throw Error(ErrorCode::DanglingReference, "instance at missing node " + std::to_string(root));
    }
    const Template* t = bp.find_template(inst.template_id);
    if (!t) {
      throw Error(ErrorCode::DanglingReference,
                  "instance " + std::to_string(root) + " uses unknown template " + inst.template_id);
    }
    ++support[t->id];
    for (NodeId n : tree.preorder_from(root)) {
      auto [it, fresh] = claimed.emplace(n, root);
      if (!fresh) {
        throw Error(ErrorCode::OverlappingInstances,
                    "node " + std::to_string(n) + " belongs to instances " +
                        std::to_string(it->second) + " and " + std::to_string(root));
      }
    }
  }
  for (const auto& [root, inst] : bp.instances) {
    const Template* t = bp.find_template(inst.template_id);
    // Binding must be total, without extras, and well-typed.
    for (const auto& p : t->props) {
      auto it = inst.binding.find(p.name);
      if (it == inst.binding.end()) {
        throw Error(ErrorCode::TemplateMismatch,
                    "instance " + std::to_string(root) + " does not bind prop " + p.name);
      }
      const bool none_ok = p.optional && it->second.is_none();
      if (!none_ok && it->second.type != payload_type_for(p.type)) {
        throw Error(ErrorCode::PayloadMismatch,
                    "instance " + std::to_string(root) + " binds " + p.name + " with a " +
                        std::string(to_string(it->second.type)) + " payload");
      }
    }
    if (inst.binding.size() != t->props.size()) {
      throw Error(ErrorCode::TemplateMismatch,
                  "instance " + std::to_string(root) + " binds props its template lacks");
    }
    auto extracted = match_template(*t, tree, root);
    if (!extracted || *extracted != inst.binding) {
      throw Error(ErrorCode::TemplateMismatch, "instance " + std::to_string(root) +
                                                   " does not instantiate template " + t->id);
    }
  }
  for (const auto& t : bp.templates) {
    if (t.support != support[t.id]) {
      throw Error(ErrorCode::TemplateMismatch, "template " + t.id + " declares support " +
                                                   std::to_string(t.support) + " but has " +
                                                   std::to_string(support[t.id]) + " instances");
    }
  }

  std::set<NodeId> looped;
  for (const auto& g : bp.loop_groups) {
    if (!tree.contains(g.parent)) {
      throw Error(ErrorCode::DanglingReference,
                  "loop group parent " + std::to_string(g.parent) + " is not a node");
    }
    if (g.instances.size() < 2) {
      throw Error(ErrorCode::TemplateMismatch, "loop group needs at least two instances");
    }
    const auto& kids = tree.node(g.parent).children;
    auto first = std::find(kids.begin(), kids.end(), g.instances.front());
    if (first == kids.end()) {
      throw Error(ErrorCode::DanglingReference, "loop group member is not a child of its parent");
    }
    for (std::size_t i = 0; i < g.instances.size(); ++i) {
      const NodeId id = g.instances[i];
      auto it = bp.instances.find(id);
      if (it == bp.instances.end()) {
        throw Error(ErrorCode::DanglingReference,
                    "loop group member " + std::to_string(id) + " is not an instance");
      }
      if (it->second.template_id != g.template_id) {
        throw Error(ErrorCode::TemplateMismatch, "loop group mixes templates");
      }
      if (first + static_cast<std::ptrdiff_t>(i) >= kids.end() ||
          *(first + static_cast<std::ptrdiff_t>(i)) != id) {
        throw Error(ErrorCode::TemplateMismatch, "loop group members are not consecutive siblings");
      }
      if (!looped.insert(id).second) {
        throw Error(ErrorCode::OverlappingInstances,
                    "instance " + std::to_string(id) + " is in two loop groups");
      }
    }
  }
}

UiTree expand_blueprint(const Blueprint& bp) {
  std::function<NodeSpec(NodeId)> build = [&](NodeId id) -> NodeSpec {
    if (auto it = bp.instances.find(id); it != bp.instances.end()) {
      const Template* t = bp.find_template(it->second.template_id);
      if (!t) throw Error(ErrorCode::DanglingReference, "unknown template " + it->second.template_id);
      return instantiate(*t, it->second.binding);
    }
    const UiNode& n = bp.tree.node(id);
    NodeSpec s{n.kind, n.payload, {}, std::nullopt};
    for (NodeId c : n.children) s.children.push_back(build(c));
    return s;
  };
  return UiTree::from_spec(build(bp.tree.root()));
}

}  // namespace uiforge
