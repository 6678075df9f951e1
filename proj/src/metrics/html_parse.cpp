#include <cctype>
#include <map>

#include "uiforge/error.hpp"
#include "uiforge/metrics.hpp"

namespace uiforge {

namespace {

struct Tag {
  bool closing = false;
  std::string name;
  std::map<std::string, std::string> attrs;
};

bool is_blank(std::string_view s) {
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void unparsable(std::size_t at, const std::string& what) {
  throw Error(ErrorCode::UnparsableBundle, what + " at byte " + std::to_string(at));
}

Tag parse_tag(std::string_view body, std::size_t at) {
  Tag t;
  std::size_t i = 0;
  if (i < body.size() && body[i] == '/') {
    t.closing = true;
    ++i;
  }
  while (i < body.size() && (std::isalnum(static_cast<unsigned char>(body[i])) || body[i] == '-')) {
    t.name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(body[i]))));
    ++i;
  }
  if (t.name.empty()) unparsable(at, "tag without a name");
  while (i < body.size()) {
    while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
    if (i >= body.size() || body[i] == '/') break;
    std::string name;
    while (i < body.size() && body[i] != '=' && !std::isspace(static_cast<unsigned char>(body[i])) &&
           body[i] != '/') {
      name.push_back(body[i++]);
    }
    std::string value;
    if (i < body.size() && body[i] == '=') {
      ++i;
      if (i >= body.size() || body[i] != '"') unparsable(at, "unquoted attribute " + name);
      const auto end = body.find('"', i + 1);
      if (end == std::string_view::npos) unparsable(at, "unterminated attribute " + name);
      value = html_unescape(body.substr(i + 1, end - i - 1));
      i = end + 1;
    }
    t.attrs[name] = value;
  }
  return t;
}

std::optional<NodeKind> container_kind(const std::string& cls) {
  for (NodeKind k : {NodeKind::Frame, NodeKind::Stack, NodeKind::Row, NodeKind::Tile}) {
    if (to_string(k) == cls) return k;
  }
  return std::nullopt;
}

bool wrapper_tag(std::string_view name) {
  return name == "html" || name == "head" || name == "meta" || name == "title" || name == "body";
}

bool dialect_tag(std::string_view name) {
  return name == "div" || name == "p" || name == "span" || name == "img" || name == "input" ||
         name == "button" || name == "a";
}

class Builder {
 public:
  explicit Builder(std::string_view html) : src_(html) {}

  ParsedHtml run() {
    std::size_t i = 0;
    while (i < src_.size()) {
      if (src_.compare(i, 4, "<!--") == 0) {
        const auto end = src_.find("-->", i + 4);
        if (end == std::string_view::npos) unparsable(i, "unterminated comment");
        comment(trim(src_.substr(i + 4, end - i - 4)), i);
        i = end + 3;
      } else if (src_.compare(i, 2, "<!") == 0) {
        const auto end = src_.find('>', i);
        if (end == std::string_view::npos) unparsable(i, "unterminated declaration");
        i = end + 1;
      } else if (src_[i] == '<') {
        const auto end = src_.find('>', i);
        if (end == std::string_view::npos) unparsable(i, "unterminated tag");
        tag(parse_tag(src_.substr(i + 1, end - i - 1), i), i);
        i = end + 1;
      } else {
        const auto end = std::min(src_.find('<', i), src_.size());
        text(src_.substr(i, end - i), i);
        i = end;
      }
    }
    if (!root_seen_) unparsable(src_.size(), "no <div id=\"root\">");
    if (in_root_) unparsable(src_.size(), "unclosed root");
    ParsedHtml out;
    if (!nodes_.empty()) out.tree = UiTree(std::move(nodes_), 0);
    out.instances = std::move(marks_);
    return out;
  }

 private:
  struct Open {
    NodeId id;
    std::string tag;
    std::string data_prop;
    std::string text;
  };

  void comment(std::string_view body, std::size_t at) {
    if (!in_root_) return;
    if (body.substr(0, 10) == "component:") {
      if (open_mark_) unparsable(at, "nested component region");
      HtmlInstanceMark m;
      std::string_view rest = body.substr(10);
      const auto sp = rest.find(' ');
      m.template_id = std::string(rest.substr(0, sp));
      if (sp != std::string_view::npos) {
        rest = trim(rest.substr(sp));
        if (rest.substr(0, 6) != "null=\"" || rest.back() != '"') unparsable(at, "bad component marker");
        std::string_view list = rest.substr(6, rest.size() - 7);
        while (!list.empty()) {
          const auto next = list.find(' ');
          m.nulls.emplace_back(list.substr(0, next));
          if (next == std::string_view::npos) break;
          list.remove_prefix(next + 1);
        }
      }
      if (!stack_.empty()) m.parent = stack_.back().id;
      marks_.push_back(std::move(m));
      open_mark_ = true;
      mark_depth_ = stack_.size();
    } else if (body.substr(0, 11) == "/component:") {
      if (!open_mark_ || stack_.size() != mark_depth_) unparsable(at, "unbalanced component marker");
      if (marks_.back().template_id != body.substr(11)) unparsable(at, "mismatched component marker");
      open_mark_ = false;
    }
  }

  void text(std::string_view raw, std::size_t at) {
    if (!in_root_ || stack_.empty()) {
      if (in_root_ && !is_blank(raw)) unparsable(at, "stray text");
      return;
    }
    Open& top = stack_.back();
    if (top.tag == "p" || top.tag == "span") {
      top.text += html_unescape(raw);
    } else if (!is_blank(raw)) {
      unparsable(at, "text inside <" + top.tag + ">");
    }
  }

  void tag(const Tag& t, std::size_t at) {
    if (!in_root_) {
      if (wrapper_tag(t.name)) return;
      if (!t.closing && t.name == "div" && t.attrs.count("id") && t.attrs.at("id") == "root") {
        if (root_seen_) unparsable(at, "second root");
        root_seen_ = in_root_ = true;
        return;
      }
      if (dialect_tag(t.name)) unparsable(at, "content outside the root element");
      throw Error(ErrorCode::UnknownTagMapping, "tag <" + t.name + "> at byte " + std::to_string(at));
    }
    if (!dialect_tag(t.name)) {
      throw Error(ErrorCode::UnknownTagMapping, "tag <" + t.name + "> at byte " + std::to_string(at));
    }
    if (t.closing) {
      if (stack_.empty()) {
        if (t.name != "div") unparsable(at, "unbalanced </" + t.name + ">");
        if (open_mark_) unparsable(at, "component region left open");
        in_root_ = false;
        return;
      }
      if (stack_.back().tag != t.name) unparsable(at, "unbalanced </" + t.name + ">");
      close_top();
      return;
    }
    open(t, at);
  }

  void open(const Tag& t, std::size_t at) {
    UiNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    auto attr = [&](const char* name) -> const std::string* {
      auto it = t.attrs.find(name);
      return it == t.attrs.end() ? nullptr : &it->second;
    };
    if (t.name == "div") {
      const std::string* cls = attr("class");
      const auto kind = cls ? container_kind(*cls) : std::nullopt;
      if (!kind) unparsable(at, "<div> without a container class");
      n.kind = *kind;
    } else if (t.name == "p" || t.name == "span") {
      n.kind = NodeKind::Text;
      n.payload = Payload::text("");
    } else if (t.name == "img") {
      n.kind = NodeKind::Media;
      const std::string* src = attr("src");
      if (!src) unparsable(at, "<img> without src");
      n.payload = Payload::image(*src);
    } else if (t.name == "a") {
      n.kind = NodeKind::Link;
      const std::string* href = attr("href");
      if (!href) unparsable(at, "<a> without href");
      n.payload = Payload::url(*href);
    } else {
      n.kind = NodeKind::Control;
      if (const std::string* ph = attr("placeholder")) n.payload = Payload::placeholder(*ph);
    }
    if (stack_.empty()) {
      if (!nodes_.empty()) unparsable(at, "more than one top-level element");
    } else {
      nodes_[static_cast<std::size_t>(stack_.back().id)].children.push_back(n.id);
    }
    if (open_mark_ && !marks_.back().root) {
      if (stack_.size() != mark_depth_) unparsable(at, "component region opens inside an element");
      marks_.back().root = n.id;
    }
    nodes_.push_back(n);
    const std::string* dp = attr("data-prop");
    Open o{n.id, t.name, dp ? *dp : std::string(), {}};
    if (t.name == "img" || t.name == "input") {
      record_prop(o);
    } else {
      stack_.push_back(std::move(o));
    }
  }

  void close_top() {
    Open o = std::move(stack_.back());
    stack_.pop_back();
    UiNode& n = nodes_[static_cast<std::size_t>(o.id)];
    if (n.kind == NodeKind::Text) n.payload.value = o.text;
    record_prop(o);
  }

  void record_prop(const Open& o) {
    if (o.data_prop.empty()) return;
    if (!open_mark_) return;
    marks_.back().props.emplace_back(o.data_prop, nodes_[static_cast<std::size_t>(o.id)].payload);
  }

  std::string_view src_;
  std::vector<UiNode> nodes_;
  std::vector<Open> stack_;
  std::vector<HtmlInstanceMark> marks_;
  bool in_root_ = false;
  bool root_seen_ = false;
  bool open_mark_ = false;
  std::size_t mark_depth_ = 0;
};

}  // namespace

ParsedHtml parse_html_document(std::string_view html) { return Builder(html).run(); }

UiTree parse_html_bundle(const CodeBundle& bundle) {
  if (bundle.framework != Framework::Html) {
    throw Error(ErrorCode::UnparsableBundle, "not an HTML bundle");
  }
  const std::string* page = bundle.find("index.html");
  if (!page) throw Error(ErrorCode::UnparsableBundle, "bundle has no index.html");
  return parse_html_document(*page).tree;
}

}  // namespace uiforge
