#include "scan.hpp"

#include <cctype>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "uiforge/error.hpp"

namespace uiforge::scan {

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto b = line.find_first_not_of(' ');
    out.push_back(b == std::string::npos ? std::string() : line.substr(b));
  }
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void skip_space() {
    while (i_ < s_.size() && s_[i_] == ' ') ++i_;
  }
  bool done() const { return i_ >= s_.size(); }
  bool eat(std::string_view lit) {
    if (s_.substr(i_, lit.size()) != lit) return false;
    i_ += lit.size();
    return true;
  }
  std::string ident() {
    std::string out;
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      out.push_back(s_[i_++]);
    }
    return out;
  }
  /// `null` or a JSON string literal.
  std::optional<std::optional<std::string>> js_value() {
    if (eat("null")) return std::optional<std::string>{};
    if (i_ >= s_.size() || s_[i_] != '"') return std::nullopt;
    std::size_t j = i_ + 1;
    while (j < s_.size() && s_[j] != '"') j += s_[j] == '\\' ? 2 : 1;
    if (j >= s_.size()) return std::nullopt;
    const auto lit = s_.substr(i_, j - i_ + 1);
    i_ = j + 1;
    try {
      return std::optional<std::string>{nlohmann::json::parse(lit).get<std::string>()};
    } catch (const nlohmann::json::exception&) {
      return std::nullopt;
    }
  }
  /// Text up to the next double quote (consumed).
  std::optional<std::string> quoted() {
    const auto end = s_.find('"', i_);
    if (end == std::string_view::npos) return std::nullopt;
    std::string out(s_.substr(i_, end - i_));
    i_ = end + 1;
    return out;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

// "{ a: "x", b: null }," -> record
std::optional<Record> parse_record(std::string_view line) {
  Cursor c(line);
  if (!c.eat("{")) return std::nullopt;
  Record r;
  for (;;) {
    c.skip_space();
    if (c.eat("}")) break;
    const std::string key = c.ident();
    if (key.empty() || !c.eat(":")) return std::nullopt;
    c.skip_space();
    auto v = c.js_value();
    if (!v) return std::nullopt;
    r.emplace_back(key, *v);
    c.skip_space();
    c.eat(",");
  }
  return r;
}

// React call-site attributes: ` a={"x"} b={null}`.
std::optional<Record> react_attrs(std::string_view s) {
  Cursor c(s);
  Record r;
  for (;;) {
    c.skip_space();
    if (c.done()) break;
    const std::string key = c.ident();
    if (key.empty() || !c.eat("={")) return std::nullopt;
    auto v = c.js_value();
    if (!v || !c.eat("}")) return std::nullopt;
    r.emplace_back(key, *v);
  }
  return r;
}

// Vue/Angular call-site attributes: ` a="x"`, ` :a="null"`, ` [a]="null"`.
std::optional<Record> markup_attrs(std::string_view s) {
  Cursor c(s);
  Record r;
  for (;;) {
    c.skip_space();
    if (c.done()) break;
    bool bound = false;
    bool bracket = false;
    if (c.eat(":")) bound = true;
    else if (c.eat("[")) bound = bracket = true;
    const std::string key = c.ident();
    if (key.empty() || (bracket && !c.eat("]")) || !c.eat("=\"")) return std::nullopt;
    auto v = c.quoted();
    if (!v) return std::nullopt;
    if (bound) {
      if (*v != "null") return std::nullopt;
      r.emplace_back(key, std::nullopt);
    } else {
      r.emplace_back(key, html_unescape(*v));
    }
  }
  return r;
}

void count_loops(const std::string& text, const std::regex& re, Entry& out) {
  for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it) {
    ++out.loop_constructs[(*it)[1].str()];
  }
}

// Items collections: a header line, one record per line, a closing "];".
void scan_items(const std::string& text, const std::regex& header, Entry& out) {
  std::vector<Record>* current = nullptr;
  for (const auto& line : lines_of(text)) {
    std::smatch m;
    if (!current && std::regex_match(line, m, header)) {
      current = &out.items[m[1].str()];
    } else if (current) {
      if (line == "];") {
        current = nullptr;
      } else if (auto r = parse_record(line)) {
        current->push_back(std::move(*r));
      }
    }
  }
}

bool known(const std::vector<std::string>& ids, const std::string& id) {
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

Entry scan_react(const CodeBundle& b, const std::vector<std::string>& ids) {
  Entry out;
  const std::string* app = b.find("App.tsx");
  if (!app) return out;
  scan_items(*app, std::regex(R"re(const (items_\d+)(?::[^=]*)? = \[)re"), out);
  count_loops(*app, std::regex(R"re((items_\d+)\.map\()re"), out);
  static const std::regex loop(R"re(\{(items_\d+)\.map\(\(it, i\) => <(\w+) key=\{i\} \{\.\.\.it\} />\)\})re");
  static const std::regex call(R"re(<(\w+)(.*) />)re");
  for (const auto& line : lines_of(*app)) {
    std::smatch m;
    if (std::regex_match(line, m, loop)) {
      out.calls.push_back({m[2].str(), {}, m[1].str(), {}});
    } else if (std::regex_match(line, m, call) && known(ids, m[1].str())) {
      if (auto r = react_attrs(m[2].str())) out.calls.push_back({m[1].str(), std::move(*r), {}, {}});
    }
  }
  return out;
}

Entry scan_vue(const CodeBundle& b, const std::vector<std::string>& ids) {
  Entry out;
  const std::string* app = b.find("App.vue");
  if (!app) return out;
  scan_items(*app, std::regex(R"re(const (items_\d+) = \[)re"), out);
  count_loops(*app, std::regex(R"re(v-for="[^"]*\b(items_\d+)")re"), out);
  static const std::regex loop(R"re(<(\w+) v-for="\(it, i\) in (items_\d+)" :key="i" v-bind="it" />)re");
  static const std::regex call(R"re(<(\w+)(.*) />)re");
  for (const auto& line : lines_of(*app)) {
    std::smatch m;
    if (std::regex_match(line, m, loop)) {
      out.calls.push_back({m[1].str(), {}, m[2].str(), {}});
    } else if (std::regex_match(line, m, call) && known(ids, m[1].str())) {
      if (auto r = markup_attrs(m[2].str())) out.calls.push_back({m[1].str(), std::move(*r), {}, {}});
    }
  }
  return out;
}

Entry scan_angular(const CodeBundle& b, const std::vector<std::string>& ids) {
  Entry out;
  const std::string* html = b.find("app.component.html");
  const std::string* ts = b.find("app.component.ts");
  if (!html || !ts) return out;
  scan_items(*ts, std::regex(R"re((items_\d+) = \[)re"), out);
  count_loops(*html, std::regex(R"re(\*ngFor="let it of (items_\d+)")re"), out);
  std::map<std::string, std::string> by_selector;
  for (const auto& id : ids) by_selector[angular_selector(id)] = id;
  static const std::regex loop(R"re(<(app-[\w-]+) \*ngFor="let it of (items_\d+)"(.*)></(app-[\w-]+)>)re");
  static const std::regex call(R"re(<(app-[\w-]+)(.*)></(app-[\w-]+)>)re");
  static const std::regex fwd(R"re( \[(\w+)\]="it\.(\w+)")re");
  for (const auto& line : lines_of(*html)) {
    std::smatch m;
    if (std::regex_match(line, m, loop) && m[1] == m[4] && by_selector.count(m[1].str())) {
      Call c{by_selector.at(m[1].str()), {}, m[2].str(), {}};
      const std::string rest = m[3].str();
      for (auto it = std::sregex_iterator(rest.begin(), rest.end(), fwd); it != std::sregex_iterator();
           ++it) {
        if ((*it)[1] == (*it)[2]) c.forwarded.push_back((*it)[1].str());
      }
      out.calls.push_back(std::move(c));
    } else if (std::regex_match(line, m, call) && m[1] == m[3] && by_selector.count(m[1].str())) {
      if (auto r = markup_attrs(m[2].str())) {
        out.calls.push_back({by_selector.at(m[1].str()), std::move(*r), {}, {}});
      }
    }
  }
  return out;
}

}  // namespace

Entry scan_entry(const CodeBundle& bundle, const std::vector<std::string>& template_ids) {
  switch (bundle.framework) {
    case Framework::React: return scan_react(bundle, template_ids);
    case Framework::Vue: return scan_vue(bundle, template_ids);
    case Framework::Angular: return scan_angular(bundle, template_ids);
    case Framework::Html: break;
  }
  throw Error(ErrorCode::UnparsableBundle, "HTML bundles are read with the HTML parser");
}

std::size_t count(const Record& r, const std::string& key) {
  std::size_t n = 0;
  for (const auto& [k, v] : r) n += k == key ? 1 : 0;
  return n;
}

const std::optional<std::string>* find(const Record& r, const std::string& key) {
  for (const auto& [k, v] : r) {
    if (k == key) return &v;
  }
  return nullptr;
}

}  // namespace uiforge::scan
