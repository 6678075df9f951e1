#include "uiforge/emit/render.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "uiforge/emit/dispatch.hpp"
#include "uiforge/error.hpp"

namespace uiforge {

const std::string* CodeBundle::find(std::string_view path) const {
  for (const auto& f : files) {
    if (f.path == path) return &f.content;
  }
  return nullptr;
}

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string html_unescape(std::string_view s) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''}, {"&#123;", '{'}, {"&#125;", '}'}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    bool hit = false;
    if (s[i] == '&') {
      for (auto [ent, ch] : kEntities) {
        if (s.substr(i, ent.size()) == ent) {
          out.push_back(ch);
          i += ent.size();
          hit = true;
          break;
        }
      }
    }
    if (!hit) out.push_back(s[i++]);
  }
  return out;
}

std::string markup_escape(std::string_view s) {
  std::string out;
  for (char c : html_escape(s)) {
    if (c == '{') out += "&#123;";
    else if (c == '}') out += "&#125;";
    else out.push_back(c);
  }
  return out;
}

std::string js_string(std::string_view s) {
  std::string out;
  for (char c : nlohmann::json(std::string(s)).dump()) {
    if (c == '<') out += "\\u003c";
    else if (c == '>') out += "\\u003e";
    else out.push_back(c);
  }
  return out;
}

std::string angular_class(const std::string& template_id) { return template_id + "Component"; }
std::string angular_selector(const std::string& template_id) { return "app-" + kebab(template_id); }

namespace {

struct RNode {
  enum class K { Element, Instance, Definition, Conditional, Loop, Text };
  K k = K::Element;
  std::string name;  // tag, template id, condition prop, items ref, or text value
  std::string tpl;   // Loop: template id
  bool ref = false;  // Text: value is a prop reference
  std::map<std::string, std::string> attrs;
  std::string data_prop;
  std::vector<std::pair<std::string, Payload>> binds;
  std::vector<std::unique_ptr<RNode>> children;

  RNode* add(K kind, std::string n) {
    children.push_back(std::make_unique<RNode>());
    children.back()->k = kind;
    children.back()->name = std::move(n);
    return children.back().get();
  }
};

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

std::string pad(int depth) { return std::string(static_cast<std::size_t>(depth) * 2, ' '); }

bool is_void(std::string_view tag) { return tag == "img" || tag == "input"; }

std::string ts_type(const PropSpec& p) {
  if (p.type == PropType::Items) return p.items_template + "Props[]";
  return "string";
}

// Record literal used by every items collection: { a: "x", b: null }.
std::string record(const std::vector<std::pair<std::string, Payload>>& binds) {
  std::map<std::string, const Payload*> sorted;
  for (const auto& [k, v] : binds) sorted[k] = &v;
  std::string out = "{ ";
  bool first = true;
  for (const auto& [k, v] : sorted) {
    if (!first) out += ", ";
    first = false;
    out += k + ": " + (v->is_none() ? std::string("null") : js_string(v->value));
  }
  return out + " }";
}

std::map<std::string, const Payload*> sorted_binds(const RNode& n) {
  std::map<std::string, const Payload*> out;
  for (const auto& [k, v] : n.binds) out[k] = &v;
  return out;
}

struct FileTree {
  std::string path;
  RNode root;  // synthetic holder; children are the top-level nodes
};

// ---------------------------------------------------------------------------
// HTML

void print_html(const RNode& n, int depth, std::ostream& os) {
  switch (n.k) {
    case RNode::K::Text:
      os << pad(depth) << html_escape(n.name) << "\n";
      return;
    case RNode::K::Instance: {
      std::string nulls;
      for (const auto& [k, v] : sorted_binds(n)) {
        if (v->is_none()) nulls += (nulls.empty() ? "" : " ") + k;
      }
      os << pad(depth) << "<!-- component:" << n.name;
      if (!nulls.empty()) os << " null=\"" << nulls << "\"";
      os << " -->\n";
      for (const auto& c : n.children) print_html(*c, depth, os);
      os << pad(depth) << "<!-- /component:" << n.name << " -->\n";
      return;
    }
    case RNode::K::Element: {
      auto attrs = n.attrs;
      if (!n.data_prop.empty()) attrs["data-prop"] = n.data_prop;
      os << pad(depth) << "<" << n.name;
      for (const auto& [k, v] : attrs) os << " " << k << "=\"" << html_escape(v) << "\"";
      os << ">";
      if (is_void(n.name)) {
        os << "\n";
        return;
      }
      if (n.children.size() == 1 && n.children[0]->k == RNode::K::Text) {
        os << html_escape(n.children[0]->name) << "</" << n.name << ">\n";
        return;
      }
      if (n.children.empty()) {
        os << "</" << n.name << ">\n";
        return;
      }
      os << "\n";
      for (const auto& c : n.children) print_html(*c, depth + 1, os);
      os << pad(depth) << "</" << n.name << ">\n";
      return;
    }
    default:
      throw Error(ErrorCode::InternalConstraintViolation, "unexpected construct in HTML output");
  }
}

std::string html_page(const RNode& holder) {
  std::ostringstream os;
  os << "<!DOCTYPE html>\n<html>\n  <head>\n    <meta charset=\"utf-8\">\n"
     << "    <title>uiforge</title>\n  </head>\n  <body>\n";
  if (holder.children.empty()) {
    os << "    <div id=\"root\"></div>\n";
  } else {
    os << "    <div id=\"root\">\n";
    for (const auto& c : holder.children) print_html(*c, 3, os);
    os << "    </div>\n";
  }
  os << "  </body>\n</html>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Component frameworks share one tree walker; the dialect decides spelling.

struct Dialect {
  virtual ~Dialect() = default;
  virtual std::string attr(const std::string& name, const std::string& value, bool ref) const = 0;
  virtual std::string text(const std::string& value, bool ref) const = 0;
  virtual std::string cond_open(const std::string& prop) const = 0;
  virtual std::string cond_close() const = 0;
  virtual std::string void_end() const = 0;
  virtual std::string instance(const RNode& n) const = 0;
  virtual std::string loop(const RNode& n) const = 0;
};

struct ReactDialect : Dialect {
  std::string attr(const std::string& name, const std::string& value, bool ref) const override {
    if (name == "class") return "className=" + js_string(value);
    return name + "={" + (ref ? "props." + value : js_string(value)) + "}";
  }
  std::string text(const std::string& value, bool ref) const override {
    return "{" + (ref ? "props." + value : js_string(value)) + "}";
  }
  std::string cond_open(const std::string& prop) const override {
    return "{props." + prop + " != null && (";
  }
  std::string cond_close() const override { return ")}"; }
  std::string void_end() const override { return " />"; }
  std::string instance(const RNode& n) const override {
    std::string out = "<" + n.name;
    for (const auto& [k, v] : sorted_binds(n)) {
      out += " " + k + "={" + (v->is_none() ? std::string("null") : js_string(v->value)) + "}";
    }
    return out + " />";
  }
  std::string loop(const RNode& n) const override {
    return "{" + n.name + ".map((it, i) => <" + n.tpl + " key={i} {...it} />)}";
  }
};

struct VueDialect : Dialect {
  std::string attr(const std::string& name, const std::string& value, bool ref) const override {
    if (ref) return ":" + name + "=\"" + value + "\"";
    return name + "=\"" + markup_escape(value) + "\"";
  }
  std::string text(const std::string& value, bool ref) const override {
    if (ref) return "{{ " + value + " }}";
    return markup_escape(value);
  }
  std::string cond_open(const std::string& prop) const override {
    return "<template v-if=\"" + prop + " != null\">";
  }
  std::string cond_close() const override { return "</template>"; }
  std::string void_end() const override { return " />"; }
  std::string instance(const RNode& n) const override {
    std::string out = "<" + n.name;
    for (const auto& [k, v] : sorted_binds(n)) {
      if (v->is_none()) out += " :" + k + "=\"null\"";
      else out += " " + k + "=\"" + markup_escape(v->value) + "\"";
    }
    return out + " />";
  }
  std::string loop(const RNode& n) const override {
    return "<" + n.tpl + " v-for=\"(it, i) in " + n.name + "\" :key=\"i\" v-bind=\"it\" />";
  }
};

struct AngularDialect : Dialect {
  std::string attr(const std::string& name, const std::string& value, bool ref) const override {
    if (ref) return "[" + name + "]=\"" + value + "\"";
    return name + "=\"" + markup_escape(value) + "\"";
  }
  std::string text(const std::string& value, bool ref) const override {
    if (ref) return "{{ " + value + " }}";
    return markup_escape(value);
  }
  std::string cond_open(const std::string& prop) const override {
    return "<ng-container *ngIf=\"" + prop + " != null\">";
  }
  std::string cond_close() const override { return "</ng-container>"; }
  std::string void_end() const override { return ">"; }
  std::string instance(const RNode& n) const override {
    const std::string sel = angular_selector(n.name);
    std::string out = "<" + sel;
    for (const auto& [k, v] : sorted_binds(n)) {
      if (v->is_none()) out += " [" + k + "]=\"null\"";
      else out += " " + k + "=\"" + markup_escape(v->value) + "\"";
    }
    return out + "></" + sel + ">";
  }
  std::string loop(const RNode& n) const override {
    const std::string sel = angular_selector(n.tpl);
    std::string out = "<" + sel + " *ngFor=\"let it of " + n.name + "\"";
    const RNode& first = *n.children.front();
    for (const auto& [k, v] : sorted_binds(first)) out += " [" + k + "]=\"it." + k + "\"";
    return out + "></" + sel + ">";
  }
};

void print_markup(const RNode& n, int depth, const Dialect& d, std::ostream& os) {
  switch (n.k) {
    case RNode::K::Text:
      os << pad(depth) << d.text(n.name, n.ref) << "\n";
      return;
    case RNode::K::Instance:
      os << pad(depth) << d.instance(n) << "\n";
      return;
    case RNode::K::Loop:
      os << pad(depth) << d.loop(n) << "\n";
      return;
    case RNode::K::Conditional:
      os << pad(depth) << d.cond_open(n.name) << "\n";
      for (const auto& c : n.children) print_markup(*c, depth + 1, d, os);
      os << pad(depth) << d.cond_close() << "\n";
      return;
    case RNode::K::Definition:
      for (const auto& c : n.children) print_markup(*c, depth, d, os);
      return;
    case RNode::K::Element: {
      os << pad(depth) << "<" << n.name;
      for (const auto& [k, v] : n.attrs) {
        const auto ref = parse_prop_ref(v);
        os << " " << d.attr(k, ref ? *ref : v, ref.has_value());
      }
      if (is_void(n.name)) {
        os << d.void_end() << "\n";
        return;
      }
      os << ">";
      if (n.children.size() == 1 && n.children[0]->k == RNode::K::Text) {
        os << d.text(n.children[0]->name, n.children[0]->ref) << "</" << n.name << ">\n";
        return;
      }
      if (n.children.empty()) {
        os << "</" << n.name << ">\n";
        return;
      }
      os << "\n";
      for (const auto& c : n.children) print_markup(*c, depth + 1, d, os);
      os << pad(depth) << "</" << n.name << ">\n";
      return;
    }
  }
}

void collect_loops(const RNode& n, std::vector<const RNode*>& out) {
  if (n.k == RNode::K::Loop) out.push_back(&n);
  for (const auto& c : n.children) collect_loops(*c, out);
}

void collect_templates(const RNode& n, std::set<std::string>& out) {
  if (n.k == RNode::K::Instance) out.insert(n.name);
  if (n.k == RNode::K::Loop) out.insert(n.tpl);
  for (const auto& c : n.children) collect_templates(*c, out);
}

const Template& definition_template(const RNode& holder, const Schema& s) {
  for (const auto& c : holder.children) {
    if (c->k == RNode::K::Definition) return *s.find_template(c->name);
  }
  throw Error(ErrorCode::InternalConstraintViolation, "component file without a definition");
}

std::string items_lines(const RNode& loop, const std::string& indent) {
  std::string out;
  for (const auto& c : loop.children) out += indent + "  " + record(c->binds) + ",\n";
  return out;
}

// ---------------------------------------------------------------------------
// React

std::string react_component(const RNode& holder, const Schema& s) {
  const Template& t = definition_template(holder, s);
  std::ostringstream os;
  os << "export interface " << t.id << "Props {\n";
  for (const auto& p : t.props) {
    os << "  " << p.name << (p.optional ? "?: " : ": ") << ts_type(p)
       << (p.optional ? " | null" : "") << ";\n";
  }
  os << "}\n\nexport function " << t.id << "(props: " << t.id << "Props) {\n  return (\n";
  ReactDialect d;
  for (const auto& c : holder.children) print_markup(*c, 2, d, os);
  os << "  );\n}\n";
  return os.str();
}

std::string react_entry(const RNode& holder) {
  std::ostringstream os;
  std::set<std::string> used;
  collect_templates(holder, used);
  std::vector<const RNode*> loops;
  collect_loops(holder, loops);
  for (const auto& t : used) {
    os << "import { " << t << ", " << t << "Props } from \"./components/" << t << "\";\n";
  }
  if (!used.empty()) os << "\n";
  for (const RNode* l : loops) {
    os << "const " << l->name << ": " << l->tpl << "Props[] = [\n"
       << items_lines(*l, "") << "];\n\n";
  }
  os << "export default function App() {\n";
  if (holder.children.empty()) {
    os << "  return null;\n}\n";
    return os.str();
  }
  os << "  return (\n";
  ReactDialect d;
  for (const auto& c : holder.children) print_markup(*c, 2, d, os);
  os << "  );\n}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Vue

std::string vue_component(const RNode& holder, const Schema& s) {
  const Template& t = definition_template(holder, s);
  std::ostringstream os;
  os << "<script setup lang=\"ts\">\ndefineProps<{\n";
  for (const auto& p : t.props) {
    os << "  " << p.name << (p.optional ? "?: " : ": ") << ts_type(p)
       << (p.optional ? " | null" : "") << ";\n";
  }
  os << "}>();\n</script>\n\n<template>\n";
  VueDialect d;
  for (const auto& c : holder.children) print_markup(*c, 1, d, os);
  os << "</template>\n";
  return os.str();
}

std::string vue_entry(const RNode& holder) {
  std::ostringstream os;
  std::set<std::string> used;
  collect_templates(holder, used);
  std::vector<const RNode*> loops;
  collect_loops(holder, loops);
  os << "<script setup lang=\"ts\">\n";
  for (const auto& t : used) os << "import " << t << " from \"./components/" << t << ".vue\";\n";
  for (const RNode* l : loops) {
    os << "\nconst " << l->name << " = [\n" << items_lines(*l, "") << "];\n";
  }
  os << "</script>\n\n<template>\n";
  VueDialect d;
  for (const auto& c : holder.children) print_markup(*c, 1, d, os);
  os << "</template>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Angular

std::string angular_template(const RNode& holder) {
  std::ostringstream os;
  AngularDialect d;
  for (const auto& c : holder.children) print_markup(*c, 0, d, os);
  if (holder.children.empty()) os << "<ng-container></ng-container>\n";
  return os.str();
}

std::string angular_component_class(const Template& t) {
  const std::string k = kebab(t.id);
  std::ostringstream os;
  os << "import { Component, Input } from \"@angular/core\";\n"
     << "import { NgIf } from \"@angular/common\";\n\n"
     << "@Component({\n  selector: \"" << angular_selector(t.id) << "\",\n  standalone: true,\n"
     << "  imports: [NgIf],\n  templateUrl: \"./" << k << ".component.html\",\n})\n"
     << "export class " << angular_class(t.id) << " {\n";
  for (const auto& p : t.props) {
    if (p.optional) {
      os << "  @Input() " << p.name << ": " << ts_type(p) << " | null = null;\n";
    } else {
      os << "  @Input() " << p.name << "!: " << ts_type(p) << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string angular_entry_class(const RNode& holder) {
  std::set<std::string> used;
  collect_templates(holder, used);
  std::vector<const RNode*> loops;
  collect_loops(holder, loops);
  std::ostringstream os;
  os << "import { Component } from \"@angular/core\";\n"
     << "import { NgFor } from \"@angular/common\";\n";
  for (const auto& t : used) {
    os << "import { " << angular_class(t) << " } from \"./components/" << kebab(t)
       << ".component\";\n";
  }
  os << "\n@Component({\n  selector: \"app-root\",\n  standalone: true,\n  imports: [NgFor";
  for (const auto& t : used) os << ", " << angular_class(t);
  os << "],\n  templateUrl: \"./app.component.html\",\n})\nexport class AppComponent {\n";
  for (const RNode* l : loops) {
    os << "  " << l->name << " = [\n" << items_lines(*l, "  ") << "  ];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Replay

std::vector<FileTree> build(const std::vector<EmissionEvent>& events, const Schema& schema) {
  ConstraintState state{std::shared_ptr<const Schema>(std::shared_ptr<const Schema>{}, &schema)};
  std::vector<FileTree> files;
  std::vector<RNode*> stack;
  for (const auto& e : events) {
    if (auto why = state.rejection(e); !why.empty()) {
      const bool coverage = starts_with(why, "bind: " + std::string(kCoverageReason));
      throw Error(coverage ? ErrorCode::IncompleteStream : ErrorCode::InadmissibleEvent,
                  describe(e) + " rejected: " + why);
    }
    state.advance(e);
    RNode* top = stack.empty() ? nullptr : stack.back();
    if (const auto* f = std::get_if<ev::FileStart>(&e)) {
      files.push_back({f->path, {}});
      stack = {&files.back().root};
    } else if (std::holds_alternative<ev::FileEnd>(e)) {
      stack.clear();
    } else if (const auto* o = std::get_if<ev::OpenTag>(&e)) {
      RNode* n;
      if (schema.find_template(o->name)) {
        n = top->add(RNode::K::Instance, o->name);
      } else if (starts_with(o->name, kDefinePrefix)) {
        n = top->add(RNode::K::Definition, o->name.substr(kDefinePrefix.size()));
      } else if (starts_with(o->name, kIfPrefix)) {
        n = top->add(RNode::K::Conditional, o->name.substr(kIfPrefix.size()));
      } else {
        n = top->add(RNode::K::Element, o->name);
      }
      stack.push_back(n);
    } else if (std::holds_alternative<ev::CloseTag>(e) || std::holds_alternative<ev::LoopEnd>(e)) {
      stack.pop_back();
    } else if (const auto* a = std::get_if<ev::Attr>(&e)) {
      top->attrs[a->name] = a->value;
    } else if (const auto* t = std::get_if<ev::TextContent>(&e)) {
      const auto ref = parse_prop_ref(t->value);
      RNode* tn = top->add(RNode::K::Text, ref ? *ref : t->value);
      tn->ref = ref.has_value();
    } else if (const auto* b = std::get_if<ev::BindProp>(&e)) {
      if (top->k == RNode::K::Instance) {
        top->binds.emplace_back(b->prop, b->value);
      } else {
        // HTML inline binding: the value lands on the element itself.
        top->data_prop = b->prop;
        if (b->sink == Sink::TextContent) {
          if (!b->value.value.empty()) top->add(RNode::K::Text, b->value.value);
        } else {
          top->attrs[std::string(to_string(b->sink))] = b->value.value;
        }
        // The ledger lives on the instance; record it there too.
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
          if ((*it)->k == RNode::K::Instance) {
            (*it)->binds.emplace_back(b->prop, b->value);
            break;
          }
        }
      }
    } else if (const auto* l = std::get_if<ev::LoopStart>(&e)) {
      RNode* n = top->add(RNode::K::Loop, l->items_ref);
      n->tpl = l->template_id;
      stack.push_back(n);
    }
  }
  if (!state.complete()) {
    throw Error(ErrorCode::IncompleteStream, "event stream ends before every obligation is met");
  }
  return files;
}

}  // namespace

CodeBundle render(const std::vector<EmissionEvent>& events, const Schema& schema) {
  const auto trees = build(events, schema);
  CodeBundle bundle;
  bundle.framework = schema.framework;
  std::vector<SourceFile> components;
  std::vector<SourceFile> entries;
  const std::string entry = entry_source_path(schema.framework);
  for (const auto& ft : trees) {
    const bool is_entry = ft.path == entry;
    auto& dst = is_entry ? entries : components;
    switch (schema.framework) {
      case Framework::Html:
        dst.push_back({ft.path, html_page(ft.root)});
        break;
      case Framework::React:
        dst.push_back({ft.path, is_entry ? react_entry(ft.root) : react_component(ft.root, schema)});
        break;
      case Framework::Vue:
        dst.push_back({ft.path, is_entry ? vue_entry(ft.root) : vue_component(ft.root, schema)});
        break;
      case Framework::Angular:
        if (is_entry) {
          dst.push_back({ft.path, angular_template(ft.root)});
          dst.push_back({"app.component.ts", angular_entry_class(ft.root)});
        } else {
          const Template& t = definition_template(ft.root, schema);
          dst.push_back({ft.path, angular_template(ft.root)});
          std::string ts = ft.path;
          ts.replace(ts.size() - 5, 5, ".ts");
          dst.push_back({ts, angular_component_class(t)});
        }
        break;
    }
  }
  auto by_path = [](const SourceFile& a, const SourceFile& b) { return a.path < b.path; };
  std::sort(components.begin(), components.end(), by_path);
  std::sort(entries.begin(), entries.end(), by_path);
  bundle.files = std::move(components);
  bundle.files.insert(bundle.files.end(), entries.begin(), entries.end());
  return bundle;
}

CodeBundle render(const std::vector<EmissionEvent>& events, const Blueprint& bp, Framework fw) {
  return render(events, *Schema::from_blueprint(bp, fw));
}

CodeBundle emit(const Blueprint& bp, Framework fw) {
  const auto schema = Schema::from_blueprint(bp, fw);
  return render(dispatch(bp, fw), *schema);
}

}  // namespace uiforge
