#include "uiforge/emit/constraints.hpp"

#include <algorithm>
#include <array>

#include "uiforge/emit/dispatch.hpp"
#include "uiforge/error.hpp"

namespace uiforge {

namespace {

constexpr std::array<std::string_view, 7> kTags = {"div", "p", "span", "img", "input", "button", "a"};
constexpr std::array<std::string_view, 5> kAttrs = {"class", "id", "src", "href", "placeholder"};

bool known_tag(std::string_view t) { return std::find(kTags.begin(), kTags.end(), t) != kTags.end(); }
bool void_tag(std::string_view t) { return t == "img" || t == "input"; }
bool known_attr(std::string_view a) {
  return std::find(kAttrs.begin(), kAttrs.end(), a) != kAttrs.end();
}

// Which elements accept a value in a given position.
bool sink_fits_tag(Sink sink, std::string_view tag) {
  switch (sink) {
    case Sink::Src: return tag == "img";
    case Sink::Href: return tag == "a";
    case Sink::Placeholder: return tag == "input" || tag == "button";
    case Sink::TextContent: return tag == "p" || tag == "span";
    case Sink::Class:
    case Sink::Id: return true;
    case Sink::LoopBody: return false;
  }
  return false;
}

bool sink_allowed(const PropSpec& p, Sink s) {
  return std::find(p.sinks.begin(), p.sinks.end(), s) != p.sinks.end();
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string rej_syn(const std::string& m) { return "syn: " + m; }
std::string rej_bind(const std::string& m) { return "bind: " + m; }
std::string rej_type(const std::string& m) { return "type: " + m; }

}  // namespace

namespace {

void collect_prop_tags(const SkeletonNode& s, bool inline_parent,
                       std::map<std::string, std::string>& out) {
  if (!s.prop.empty()) out[s.prop] = std::string(tag_for(s.kind, inline_parent, !s.children.empty()));
  const bool inl = s.kind == NodeKind::Link || s.kind == NodeKind::Control;
  for (const auto& c : s.children) collect_prop_tags(c, inl, out);
}

}  // namespace

std::shared_ptr<const Schema> Schema::from_blueprint(const Blueprint& bp, Framework fw) {
  auto s = std::make_shared<Schema>();
  s->framework = fw;
  for (const auto& t : bp.templates) {
    s->templates.emplace(t.id, t);
    collect_prop_tags(t.skeleton, false, s->prop_tags[t.id]);
  }

  std::map<NodeId, std::size_t> slot_of;
  for (NodeId id : bp.tree.preorder()) {
    const UiNode& n = bp.tree.node(id);
    if (n.payload.type == PayloadType::Url) s->url_values.insert(n.payload.value);
    if (auto it = bp.instances.find(id); it != bp.instances.end()) {
      slot_of[id] = s->instances.size();
      s->instances.push_back({id, it->second.template_id, it->second.binding, std::nullopt});
    }
  }
  std::vector<const LoopGroup*> groups;
  for (const auto& g : bp.loop_groups) groups.push_back(&g);
  std::sort(groups.begin(), groups.end(), [&](const LoopGroup* a, const LoopGroup* b) {
    return slot_of.at(a->instances.front()) < slot_of.at(b->instances.front());
  });
  for (const LoopGroup* g : groups) {
    const std::size_t k = s->loops.size();
    s->loops.push_back({g->template_id, items_ref(k), slot_of.at(g->instances.front()),
                        g->instances.size()});
    for (NodeId m : g->instances) s->instances[slot_of.at(m)].loop = k;
  }
  if (fw != Framework::Html) {
    for (const auto& [id, t] : s->templates) s->files.push_back(component_source_path(id, fw));
  }
  s->files.push_back(entry_source_path(fw));
  std::vector<std::pair<bool, std::string>>* shape = nullptr;
  for (const auto& e : dispatch_unchecked(bp, fw)) {
    if (const auto* f = std::get_if<ev::FileStart>(&e)) shape = &s->shapes[f->path];
    else if (const auto* o = std::get_if<ev::OpenTag>(&e)) shape->emplace_back(true, o->name);
    else if (const auto* c = std::get_if<ev::CloseTag>(&e)) shape->emplace_back(false, c->name);
  }
  return s;
}

const Template* Schema::find_template(std::string_view id) const {
  auto it = templates.find(std::string(id));
  return it == templates.end() ? nullptr : &it->second;
}

ConstraintState::ConstraintState() : schema_(std::make_shared<Schema>()) {}

ConstraintState::ConstraintState(std::shared_ptr<const Schema> schema)
    : schema_(std::move(schema)), bound_(schema_->instances.size()) {}

std::size_t ConstraintState::bound_count(std::size_t i) const {
  return i < bound_.size() ? bound_[i].size() : 0;
}

const ConstraintState::Frame* ConstraintState::innermost(FrameKind kind) const {
  for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
    if (it->kind == kind) return &*it;
  }
  return nullptr;
}

const Template* ConstraintState::defining() const {
  const Frame* d = innermost(FrameKind::Definition);
  return d ? schema_->find_template(d->name.substr(kDefinePrefix.size())) : nullptr;
}

bool ConstraintState::file_obligations_met() const {
  if (!file_) return false;
  const Schema& s = *schema_;
  if (*file_ == entry_source_path(s.framework) &&
      std::find(s.files.begin(), s.files.end(), *file_) != s.files.end()) {
    return next_instance_ == s.instances.size() && loops_done_.size() == (s.framework == Framework::Html ? 0 : s.loops.size());
  }
  for (const auto& [id, t] : s.templates) {
    if (s.framework != Framework::Html && *file_ == component_source_path(id, s.framework)) {
      return defined_.count(id) != 0;
    }
  }
  return true;
}

// Where a child element or text may be placed.
std::string ConstraintState::check_content_position(bool element) const {
  if (stack_.empty()) {
    if (top_level_done_) return rej_syn("file already has its top-level node");
    return {};
  }
  const Frame& top = stack_.back();
  switch (top.kind) {
    case FrameKind::Element:
      if (void_tag(top.name)) return rej_syn("<" + top.name + "> cannot have content");
      if (top.content == Content::BoundText) return rej_syn("<" + top.name + "> text is already bound");
      if (element && (top.name == "p" || top.name == "span")) {
        return rej_syn("<" + top.name + "> holds text only");
      }
      return {};
    case FrameKind::Instance:
      if (schema_->framework != Framework::Html) return rej_syn("instance call sites take props only");
      return {};
    case FrameKind::Definition:
      if (top.content != Content::Empty) return rej_syn("definition already has its root element");
      return {};
    case FrameKind::Conditional:
      return {};
  }
  return {};
}

std::string ConstraintState::check_shape(bool open, const std::string& name) const {
  auto it = schema_->shapes.find(*file_);
  if (it == schema_->shapes.end()) return {};
  const auto& shape = it->second;
  const std::string tag = (open ? "<" : "</") + name + ">";
  if (shape_pos_ >= shape.size()) return rej_syn(tag + " past the end of " + *file_);
  if (shape[shape_pos_] != std::pair{open, name}) {
    return rej_syn(tag + " where the blueprint has " + (shape[shape_pos_].first ? "<" : "</") +
                   shape[shape_pos_].second + ">");
  }
  return {};
}

std::string ConstraintState::check_open(const std::string& name) const {
  if (!file_) return rej_syn("tag outside a file block");
  if (name.empty()) return rej_syn("empty tag name");
  if (auto why = check_shape(true, name); !why.empty()) return why;
  const Schema& s = *schema_;
  const bool in_loop_body = open_loop_ && stack_.size() == loop_depth_;

  if (const Template* t = s.find_template(name)) {
    if (next_instance_ >= s.instances.size()) return rej_bind("no instance left to open");
    const auto& slot = s.instances[next_instance_];
    if (slot.template_id != t->id) {
      return rej_bind("next instance is of " + slot.template_id + ", not " + t->id);
    }
    if (*file_ != entry_source_path(s.framework)) return rej_syn("instances live in the entry file");
    if (innermost(FrameKind::Definition)) return rej_syn("instance inside a definition");
    if (innermost(FrameKind::Instance)) return rej_syn("instances do not nest");
    if (s.framework != Framework::Html) {
      if (slot.loop) {
        if (open_loop_ != slot.loop) return rej_syn("looped instance outside its loop");
        if (!in_loop_body) return rej_syn("loop body holds instances only");
      } else if (open_loop_) {
        return rej_syn("non-looped instance inside a loop");
      }
    }
    return check_content_position(true);
  }

  if (group_continuation_) return rej_syn("loop group members must be consecutive siblings");
  if (in_loop_body) return rej_syn("loop body holds instances only");

  if (starts_with(name, kDefinePrefix)) {
    const std::string id = name.substr(kDefinePrefix.size());
    if (s.framework == Framework::Html) return rej_syn("HTML has no component definitions");
    if (!s.find_template(id)) return rej_bind("definition of unknown template " + id);
    if (!stack_.empty()) return rej_syn("definitions are top-level");
    if (*file_ != component_source_path(id, s.framework)) return rej_syn("definition in the wrong file");
    if (defined_.count(id)) return rej_syn("template " + id + " already defined");
    return check_content_position(true);
  }
  if (starts_with(name, kIfPrefix)) {
    const Template* t = defining();
    if (!t) return rej_syn("optional region outside a definition");
    const std::string prop = name.substr(kIfPrefix.size());
    const PropSpec* p = t->find_prop(prop);
    if (!p || !p->optional) return rej_bind(prop + " is not an optional prop of " + t->id);
    if (def_conditions_.count(prop)) return rej_syn("optional region for " + prop + " already emitted");
    return check_content_position(true);
  }
  if (!known_tag(name)) return rej_syn("tag <" + name + "> is outside the dialect");
  return check_content_position(true);
}

std::string ConstraintState::check_close(const std::string& name) const {
  if (stack_.empty()) return rej_syn("CloseTag with empty stack");
  const Frame& top = stack_.back();
  if (top.name != name) return rej_syn("CloseTag(" + name + ") does not match <" + top.name + ">");
  if (auto why = check_shape(false, name); !why.empty()) return why;
  if (group_continuation_) return rej_syn("loop group members must be consecutive siblings");
  if (top.kind == FrameKind::Instance) {
    const Template* t = schema_->find_template(schema_->instances[top.instance].template_id);
    if (bound_[top.instance].size() != t->props.size()) {
      return rej_bind(std::string(kCoverageReason) + ": instance of " + t->id + " closed with unbound props");
    }
  }
  if (top.kind == FrameKind::Definition) {
    const Template* t = defining();
    std::size_t needed = 0;
    for (const auto& p : t->props) needed += p.type == PropType::Items ? 0 : 1;
    if (def_refs_.size() != needed) return rej_bind(std::string(kCoverageReason) + ": definition of " + t->id + " leaves props unused");
    if (top.content == Content::Empty) return rej_syn("empty definition");
  }
  return {};
}

std::string ConstraintState::check_attr(const ev::Attr& a) const {
  if (!attr_position()) return rej_syn("Attr not directly after OpenTag");
  const Frame& top = stack_.back();
  if (top.kind != FrameKind::Element) return rej_syn("Attr on a non-element");
  if (!known_attr(a.name)) return rej_syn("attribute '" + a.name + "' is outside the dialect");
  if (top.attrs.count(a.name)) return rej_syn("duplicate attribute '" + a.name + "'");
  const auto sink = parse_sink(a.name);
  if (sink && !sink_fits_tag(*sink, top.name)) {
    return rej_type("'" + a.name + "' does not belong on <" + top.name + ">");
  }
  if (auto ref = parse_prop_ref(a.value)) {
    const Template* t = defining();
    if (!t) return rej_bind("prop reference outside a definition");
    const PropSpec* p = t->find_prop(*ref);
    if (!p) return rej_bind(*ref + " is not a prop of " + t->id);
    if (!sink || !sink_allowed(*p, *sink)) {
      return rej_type(*ref + " (" + std::string(to_string(p->type)) + ") cannot land in '" + a.name + "'");
    }
    if (def_refs_.count(*ref)) return rej_bind(*ref + " already referenced");
    return {};
  }
  if (a.name != "src" && a.name != "href" && schema_->url_values.count(a.value)) {
    return rej_type("URL value placed in '" + a.name + "'");
  }
  return {};
}

std::string ConstraintState::check_text(const ev::TextContent& t) const {
  if (!file_) return rej_syn("text outside a file block");
  if (stack_.empty() || stack_.back().kind != FrameKind::Element) return rej_syn("text outside an element");
  if (auto pos = check_content_position(false); !pos.empty()) return pos;
  if (auto ref = parse_prop_ref(t.value)) {
    const Template* tpl = defining();
    if (!tpl) return rej_bind("prop reference outside a definition");
    const PropSpec* p = tpl->find_prop(*ref);
    if (!p) return rej_bind(*ref + " is not a prop of " + tpl->id);
    if (!sink_allowed(*p, Sink::TextContent)) {
      return rej_type(*ref + " (" + std::string(to_string(p->type)) + ") cannot be text content");
    }
    if (!sink_fits_tag(Sink::TextContent, stack_.back().name)) {
      return rej_type("text props render into <p>/<span> only");
    }
    if (stack_.back().content != Content::Empty) return rej_syn("bound text must be the only content");
    if (def_refs_.count(*ref)) return rej_bind(*ref + " already referenced");
    return {};
  }
  return {};
}

std::string ConstraintState::check_bind(const ev::BindProp& b) const {
  if (!file_) return rej_syn("binding outside a file block");
  const Frame* inst = innermost(FrameKind::Instance);
  if (!inst) return rej_bind("no open instance");
  const auto& slot = schema_->instances[inst->instance];
  if (slot.template_id != b.template_id) {
    return rej_bind("open instance is of " + slot.template_id + ", not " + b.template_id);
  }
  const Template* t = schema_->find_template(b.template_id);
  const PropSpec* p = t->find_prop(b.prop);
  if (!p) return rej_bind(b.prop + " is not a prop of " + t->id);
  if (bound_[inst->instance].count(b.prop)) return rej_bind(b.prop + " already bound");
  if (!sink_allowed(*p, b.sink)) {
    return rej_type(b.prop + " (" + std::string(to_string(p->type)) + ") cannot land in '" +
                std::string(to_string(b.sink)) + "'");
  }
  const auto field = slot.binding.find(b.prop);
  if (field == slot.binding.end() || field->second != b.value) {
    return rej_bind("value does not consume the field for " + b.prop);
  }

  const Frame& top = stack_.back();
  if (schema_->framework != Framework::Html || b.value.is_none()) {
    if (&top != inst || !attr_position()) return rej_syn("props bind at the instance call site");
    return {};
  }
  if (top.kind != FrameKind::Element) return rej_syn("inline binding outside an element");
  if (auto tags = schema_->prop_tags.find(b.template_id); tags != schema_->prop_tags.end()) {
    auto tag = tags->second.find(b.prop);
    if (tag != tags->second.end() && tag->second != top.name) {
      return rej_syn(b.prop + " binds on <" + tag->second + ">, not <" + top.name + ">");
    }
  }
  if (!sink_fits_tag(b.sink, top.name)) {
    return rej_type("'" + std::string(to_string(b.sink)) + "' does not belong on <" + top.name + ">");
  }
  if (b.sink == Sink::TextContent) {
    if (top.content != Content::Empty) return rej_syn("bound text must be the only content");
    return {};
  }
  if (!attr_position()) return rej_syn("attribute binding not directly after OpenTag");
  if (top.attrs.count(std::string(to_string(b.sink)))) return rej_syn("duplicate attribute");
  return {};
}

std::string ConstraintState::check_loop_start(const ev::LoopStart& l) const {
  const Schema& s = *schema_;
  if (!file_) return rej_syn("loop outside a file block");
  if (s.framework == Framework::Html) return rej_syn("HTML replicates loops");
  if (group_continuation_) return rej_syn("loop group pending");
  if (open_loop_) return rej_syn("loops do not nest");
  if (*file_ != entry_source_path(s.framework)) return rej_syn("loops live in the entry file");
  if (innermost(FrameKind::Instance) || innermost(FrameKind::Definition)) {
    return rej_syn("loop inside an instance or definition");
  }
  if (stack_.empty() || stack_.back().kind != FrameKind::Element) return rej_syn("loop outside an element");
  if (auto pos = check_content_position(true); !pos.empty()) return pos;
  for (std::size_t k = 0; k < s.loops.size(); ++k) {
    if (s.loops[k].items_ref != l.items_ref) continue;
    if (s.loops[k].template_id != l.template_id) return rej_bind("loop template mismatch");
    if (loops_done_.count(k)) return rej_syn("loop already emitted");
    if (next_instance_ != s.loops[k].first) return rej_bind("loop out of document order");
    return {};
  }
  return rej_bind("unknown items collection " + l.items_ref);
}

std::string ConstraintState::check_loop_end() const {
  if (!open_loop_) return rej_syn("LoopEnd without LoopStart");
  if (stack_.size() != loop_depth_) return rej_syn("LoopEnd inside an open tag");
  if (loop_seen_ != schema_->loops[*open_loop_].count) return rej_bind("loop closed early");
  return {};
}

std::string ConstraintState::check_file_start(const ev::FileStart& f) const {
  if (file_) return rej_syn("file blocks do not nest");
  if (f.path.empty()) return rej_syn("empty path");
  if (files_done_.count(f.path)) return rej_syn("duplicate path " + f.path);
  const auto& files = schema_->files;
  if (!files.empty() && std::find(files.begin(), files.end(), f.path) == files.end()) {
    return rej_syn("unexpected file " + f.path);
  }
  return {};
}

std::string ConstraintState::check_file_end() const {
  if (!file_) return rej_syn("FileEnd without FileStart");
  if (!stack_.empty()) return rej_syn("FileEnd with open tags");
  if (open_loop_ || group_continuation_) return rej_syn("FileEnd inside a loop");
  if (!file_obligations_met()) return rej_syn("file closed before its content is complete");
  if (auto it = schema_->shapes.find(*file_); it != schema_->shapes.end() && shape_pos_ != it->second.size()) {
    return rej_syn("file closed before its structure is complete");
  }
  return {};
}

std::string ConstraintState::rejection(const EmissionEvent& e) const {
  struct Visitor {
    const ConstraintState& s;
    std::string operator()(const ev::OpenTag& x) const { return s.check_open(x.name); }
    std::string operator()(const ev::CloseTag& x) const { return s.check_close(x.name); }
    std::string operator()(const ev::Attr& x) const { return s.check_attr(x); }
    std::string operator()(const ev::TextContent& x) const {
      if (s.group_continuation_) return rej_syn("loop group pending");
      return s.check_text(x);
    }
    std::string operator()(const ev::BindProp& x) const {
      if (s.group_continuation_) return rej_syn("loop group pending");
      return s.check_bind(x);
    }
    std::string operator()(const ev::LoopStart& x) const { return s.check_loop_start(x); }
    std::string operator()(const ev::LoopEnd&) const { return s.check_loop_end(); }
    std::string operator()(const ev::FileStart& x) const { return s.check_file_start(x); }
    std::string operator()(const ev::FileEnd&) const { return s.check_file_end(); }
  };
  return std::visit(Visitor{*this}, e);
}

void ConstraintState::advance(const EmissionEvent& e) {
  if (auto why = rejection(e); !why.empty()) {
    throw Error(ErrorCode::InadmissibleEvent, describe(e) + " rejected: " + why);
  }
  const Schema& s = *schema_;
  auto mark_parent_content = [this] {
    if (stack_.empty()) {
      top_level_done_ = true;
    } else if (stack_.back().content == Content::Empty) {
      stack_.back().content = Content::Children;
    }
  };

  if (std::holds_alternative<ev::OpenTag>(e) || std::holds_alternative<ev::CloseTag>(e)) ++shape_pos_;
  if (const auto* o = std::get_if<ev::OpenTag>(&e)) {
    mark_parent_content();
    Frame f;
    f.name = o->name;
    if (s.find_template(o->name)) {
      f.kind = FrameKind::Instance;
      f.instance = next_instance_++;
      group_continuation_ = false;
    } else if (starts_with(o->name, kDefinePrefix)) {
      f.kind = FrameKind::Definition;
      def_refs_.clear();
      def_conditions_.clear();
    } else if (starts_with(o->name, kIfPrefix)) {
      f.kind = FrameKind::Conditional;
      def_conditions_.insert(o->name.substr(kIfPrefix.size()));
    }
    stack_.push_back(std::move(f));
    attr_pos_ = true;
  } else if (std::holds_alternative<ev::CloseTag>(e)) {
    Frame f = std::move(stack_.back());
    stack_.pop_back();
    attr_pos_ = false;
    if (f.kind == FrameKind::Definition) {
      defined_.insert(f.name.substr(kDefinePrefix.size()));
    } else if (f.kind == FrameKind::Instance) {
      const auto& slot = s.instances[f.instance];
      if (slot.loop) {
        const auto& loop = s.loops[*slot.loop];
        if (s.framework == Framework::Html) {
          group_continuation_ = f.instance + 1 < loop.first + loop.count;
        } else {
          ++loop_seen_;
        }
      }
    }
  } else if (const auto* a = std::get_if<ev::Attr>(&e)) {
    stack_.back().attrs.insert(a->name);
    if (auto ref = parse_prop_ref(a->value)) def_refs_.insert(*ref);
  } else if (const auto* t = std::get_if<ev::TextContent>(&e)) {
    attr_pos_ = false;
    if (auto ref = parse_prop_ref(t->value)) {
      def_refs_.insert(*ref);
      stack_.back().content = Content::BoundText;
    } else {
      stack_.back().content = Content::Children;
    }
  } else if (const auto* b = std::get_if<ev::BindProp>(&e)) {
    const Frame* inst = innermost(FrameKind::Instance);
    bound_[inst->instance].insert(b->prop);
    Frame& top = stack_.back();
    if (top.kind == FrameKind::Element) {
      if (b->sink == Sink::TextContent) {
        top.content = Content::BoundText;
        attr_pos_ = false;
      } else {
        top.attrs.insert(std::string(to_string(b->sink)));
      }
    }
  } else if (const auto* l = std::get_if<ev::LoopStart>(&e)) {
    mark_parent_content();
    for (std::size_t k = 0; k < s.loops.size(); ++k) {
      if (s.loops[k].items_ref == l->items_ref) open_loop_ = k;
    }
    loop_depth_ = stack_.size();
    loop_seen_ = 0;
    attr_pos_ = false;
  } else if (std::holds_alternative<ev::LoopEnd>(e)) {
    loops_done_.insert(*open_loop_);
    open_loop_.reset();
    attr_pos_ = false;
  } else if (const auto* f = std::get_if<ev::FileStart>(&e)) {
    file_ = f->path;
    shape_pos_ = 0;
    top_level_done_ = false;
    attr_pos_ = false;
  } else if (std::holds_alternative<ev::FileEnd>(e)) {
    files_done_.insert(*file_);
    file_.reset();
    attr_pos_ = false;
  }
}

bool ConstraintState::complete() const {
  if (file_ || !stack_.empty() || open_loop_ || group_continuation_) return false;
  const Schema& s = *schema_;
  for (const auto& f : s.files) {
    if (!files_done_.count(f)) return false;
  }
  if (next_instance_ != s.instances.size()) return false;
  for (std::size_t i = 0; i < s.instances.size(); ++i) {
    if (bound_[i].size() != s.find_template(s.instances[i].template_id)->props.size()) return false;
  }
  if (s.framework != Framework::Html && loops_done_.size() != s.loops.size()) return false;
  return true;
}

bool admissible(const ConstraintState& state, const EmissionEvent& e) { return state.admits(e); }

ConstraintState step(ConstraintState state, const EmissionEvent& e) {
  state.advance(e);
  return state;
}

bool is_complete(const ConstraintState& state) { return state.complete(); }

}  // namespace uiforge
