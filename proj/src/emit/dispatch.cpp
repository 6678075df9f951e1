#include "uiforge/emit/dispatch.hpp"

#include <algorithm>
#include <map>

#include "uiforge/emit/constraints.hpp"
#include "uiforge/error.hpp"

namespace uiforge {

std::string_view tag_for(NodeKind kind, bool inline_parent, bool has_children) {
  switch (kind) {
    case NodeKind::Frame:
    case NodeKind::Stack:
    case NodeKind::Row:
    case NodeKind::Tile: return "div";
    case NodeKind::Text: return inline_parent ? "span" : "p";
    case NodeKind::Media: return "img";
    case NodeKind::Control: return has_children ? "button" : "input";
    case NodeKind::Link: return "a";
  }
  return "div";
}

namespace {

bool inline_kind(NodeKind k) { return k == NodeKind::Link || k == NodeKind::Control; }

class Dispatcher {
 public:
  Dispatcher(const Blueprint& bp, Framework fw) : bp_(bp), fw_(fw) {
    for (std::size_t k = 0; k < bp.loop_groups.size(); ++k) {
      const auto& g = bp.loop_groups[k];
      for (NodeId m : g.instances) group_of_[m] = k;
    }
  }

  std::vector<EmissionEvent> run() {
    if (fw_ != Framework::Html) {
      std::vector<const Template*> sorted;
      for (const auto& t : bp_.templates) sorted.push_back(&t);
      std::sort(sorted.begin(), sorted.end(),
                [](const Template* a, const Template* b) { return a->id < b->id; });
      for (const Template* t : sorted) definition(*t);
    }
    out_.push_back(ev::FileStart{entry_source_path(fw_)});
    if (!bp_.tree.empty()) node(bp_.tree.root(), false);
    out_.push_back(ev::FileEnd{});
    return std::move(out_);
  }

 private:
  void open(std::string_view tag) { out_.push_back(ev::OpenTag{std::string(tag)}); }
  void close(std::string_view tag) { out_.push_back(ev::CloseTag{std::string(tag)}); }
  void attr(std::string_view name, std::string value) {
    out_.push_back(ev::Attr{std::string(name), std::move(value)});
  }
  void text(std::string value) {
    if (!value.empty()) out_.push_back(ev::TextContent{std::move(value)});
  }

  // Literal payload of a concrete or constant node.
  void literal_payload(NodeKind kind, const Payload& p) {
    if (p.is_none()) return;
    const Sink sink = emission_sink(kind, p.type);
    if (sink == Sink::TextContent) text(p.value);
    else attr(to_string(sink), p.value);
  }

  void definition(const Template& t) {
    out_.push_back(ev::FileStart{component_source_path(t.id, fw_)});
    const std::string def = std::string(kDefinePrefix) + t.id;
    open(def);
    skeleton_def(t.skeleton, false);
    close(def);
    out_.push_back(ev::FileEnd{});
  }

  void skeleton_def(const SkeletonNode& s, bool inline_parent) {
    std::string cond;
    if (s.optional) {
      cond = std::string(kIfPrefix) + optional_key(s)->prop;
      open(cond);
    }
    const auto tag = tag_for(s.kind, inline_parent, !s.children.empty());
    open(tag);
    if (is_container(s.kind)) attr("class", std::string(to_string(s.kind)));
    if (s.payload_type != PayloadType::None) {
      const Sink sink = emission_sink(s.kind, s.payload_type);
      std::string value = s.constant ? *s.constant : prop_ref(s.prop);
      if (sink == Sink::TextContent) text(std::move(value));
      else attr(to_string(sink), std::move(value));
    }
    for (const auto& c : s.children) skeleton_def(c, inline_kind(s.kind));
    close(tag);
    if (s.optional) close(cond);
  }

  void node(NodeId id, bool inline_parent) {
    if (auto it = bp_.instances.find(id); it != bp_.instances.end()) {
      instance(it->second, inline_parent);
      return;
    }
    const UiNode& n = bp_.tree.node(id);
    const auto tag = tag_for(n.kind, inline_parent, !n.children.empty());
    open(tag);
    if (is_container(n.kind)) attr("class", std::string(to_string(n.kind)));
    literal_payload(n.kind, n.payload);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const NodeId c = n.children[i];
      auto g = group_of_.find(c);
      if (fw_ != Framework::Html && g != group_of_.end()) {
        const LoopGroup& group = bp_.loop_groups[g->second];
        out_.push_back(ev::LoopStart{group.template_id, items_ref(next_loop_++)});
        for (std::size_t j = 0; j < group.instances.size(); ++j) {
          instance(bp_.instances.at(n.children[i + j]), inline_kind(n.kind));
        }
        out_.push_back(ev::LoopEnd{});
        i += group.instances.size() - 1;
        continue;
      }
      node(c, inline_kind(n.kind));
    }
    close(tag);
  }

  void instance(const Instance& inst, bool inline_parent) {
    const Template& t = *bp_.find_template(inst.template_id);
    open(t.id);
    if (fw_ == Framework::Html) {
      for (const auto& p : t.props) {
        const Payload& v = inst.binding.at(p.name);
        if (v.is_none()) out_.push_back(ev::BindProp{t.id, p.name, p.sinks.front(), v});
      }
      skeleton_inline(t, inst.binding, t.skeleton, inline_parent);
    } else {
      for (const auto& p : t.props) {
        const Payload& v = inst.binding.at(p.name);
        const Sink sink = v.is_none() ? p.sinks.front() : call_site_sink(t, p.name);
        out_.push_back(ev::BindProp{t.id, p.name, sink, v});
      }
    }
    close(t.id);
  }

  static Sink call_site_sink(const Template& t, const std::string& prop) {
    for (const SkeletonNode* s : preorder(t.skeleton)) {
      if (s->prop == prop) return emission_sink(s->kind, s->payload_type);
    }
    return t.find_prop(prop)->sinks.front();
  }

  void skeleton_inline(const Template& t, const Binding& b, const SkeletonNode& s,
                       bool inline_parent) {
    if (s.optional && b.at(optional_key(s)->prop).is_none()) return;
    const auto tag = tag_for(s.kind, inline_parent, !s.children.empty());
    open(tag);
    if (is_container(s.kind)) attr("class", std::string(to_string(s.kind)));
    if (s.payload_type != PayloadType::None) {
      if (s.constant) {
        literal_payload(s.kind, Payload{s.payload_type, *s.constant});
      } else {
        out_.push_back(ev::BindProp{t.id, s.prop, emission_sink(s.kind, s.payload_type), b.at(s.prop)});
      }
    }
    for (const auto& c : s.children) skeleton_inline(t, b, c, inline_kind(s.kind));
    close(tag);
  }

  const Blueprint& bp_;
  Framework fw_;
  std::map<NodeId, std::size_t> group_of_;
  std::size_t next_loop_ = 0;
  std::vector<EmissionEvent> out_;
};

}  // namespace

std::vector<EmissionEvent> dispatch_unchecked(const Blueprint& bp, Framework fw) {
  return Dispatcher(bp, fw).run();
}

std::vector<EmissionEvent> dispatch(const Blueprint& bp, Framework fw) {
  auto events = Dispatcher(bp, fw).run();
  ConstraintState state(Schema::from_blueprint(bp, fw));
  for (const auto& e : events) {
    if (auto why = state.rejection(e); !why.empty()) {
      throw Error(ErrorCode::InternalConstraintViolation,
                  "dispatcher emitted " + describe(e) + ": " + why);
    }
    state.advance(e);
  }
  if (!state.complete()) {
    throw Error(ErrorCode::InternalConstraintViolation, "dispatcher stream is incomplete");
  }
  return events;
}

}  // namespace uiforge
