#include "uiforge/metrics.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <set>

#include "scan.hpp"
#include "uiforge/error.hpp"

namespace uiforge {

Json report_to_json(const EvalReport& r) {
  return Json{{"ted", r.ted}, {"crr", r.crr}, {"lpa", r.lpa}, {"pc", r.pc},
              {"afc", r.afc}, {"roundtrip_ted", r.roundtrip_ted}};
}

double component_reuse_rate(const Blueprint& bp) {
  if (bp.tree.empty()) return 0.0;
  double saved = 0;
  for (const auto& t : bp.templates) {
    saved += static_cast<double>(std::max(t.support - 1, 0)) * static_cast<double>(t.skeleton.size());
  }
  return std::clamp(saved / static_cast<double>(bp.tree.size()), 0.0, 1.0);
}

namespace {

// Instances in document order, read straight from the blueprint.
std::vector<std::pair<NodeId, const Instance*>> ordered_instances(const Blueprint& bp) {
  std::vector<std::pair<NodeId, const Instance*>> out;
  if (bp.tree.empty()) return out;
  for (NodeId id : bp.tree.preorder()) {
    if (auto it = bp.instances.find(id); it != bp.instances.end()) out.emplace_back(id, &it->second);
  }
  return out;
}

// Loop groups in document order of their first member, as index ranges
// into ordered_instances.
struct GroupSpan {
  const LoopGroup* group;
  std::size_t first;
};

std::vector<GroupSpan> ordered_groups(const Blueprint& bp,
                                      const std::vector<std::pair<NodeId, const Instance*>>& order) {
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i].first] = i;
  std::vector<GroupSpan> out;
  for (const auto& g : bp.loop_groups) out.push_back({&g, index.at(g.instances.front())});
  std::sort(out.begin(), out.end(), [](const GroupSpan& a, const GroupSpan& b) { return a.first < b.first; });
  return out;
}

std::vector<std::string> template_ids(const Blueprint& bp) {
  std::vector<std::string> out;
  for (const auto& t : bp.templates) out.push_back(t.id);
  return out;
}

struct SiteRecord {
  std::string template_id;
  const scan::Record* record = nullptr;
  const std::vector<std::string>* forwarded = nullptr;  // Angular loops
};

std::vector<SiteRecord> expand_calls(const scan::Entry& e) {
  std::vector<SiteRecord> out;
  for (const auto& c : e.calls) {
    if (c.items_ref.empty()) {
      out.push_back({c.template_id, &c.props, nullptr});
      continue;
    }
    auto it = e.items.find(c.items_ref);
    if (it == e.items.end()) continue;
    for (const auto& r : it->second) {
      out.push_back({c.template_id, &r, c.forwarded.empty() ? nullptr : &c.forwarded});
    }
  }
  return out;
}

bool value_matches(const std::optional<std::string>& scanned, const Payload& expected) {
  if (expected.is_none()) return !scanned.has_value();
  return scanned.has_value() && *scanned == expected.value;
}

}  // namespace

double loop_preservation_accuracy(const Blueprint& bp, const CodeBundle& bundle) {
  if (bp.loop_groups.empty()) return 1.0;
  const auto order = ordered_instances(bp);
  const auto groups = ordered_groups(bp, order);
  std::size_t preserved = 0;

  if (bundle.framework == Framework::Html) {
    const std::string* page = bundle.find("index.html");
    if (!page) return 0.0;
    ParsedHtml doc;
    try {
      doc = parse_html_document(*page);
    } catch (const Error&) {
      return 0.0;
    }
    // Maximal runs of adjacent sibling regions of one template, in order.
    std::vector<std::pair<std::string, std::size_t>> runs;
    const HtmlInstanceMark* prev = nullptr;
    for (const auto& m : doc.instances) {
      bool extends = false;
      if (prev && prev->root && m.root && m.parent && prev->parent == m.parent &&
          prev->template_id == m.template_id) {
        const auto& kids = doc.tree.node(*m.parent).children;
        auto at = std::find(kids.begin(), kids.end(), *prev->root);
        extends = at != kids.end() && at + 1 != kids.end() && *(at + 1) == *m.root;
      }
      if (extends) {
        ++runs.back().second;
      } else {
        runs.emplace_back(m.template_id, 1);
      }
      prev = &m;
    }
    // The same runs on the blueprint side: each group is one run, every
    // other instance a run of its own.
    std::vector<std::pair<const LoopGroup*, std::size_t>> expected;
    std::size_t next_group = 0;
    for (std::size_t i = 0; i < order.size();) {
      if (next_group < groups.size() && groups[next_group].first == i) {
        expected.emplace_back(groups[next_group].group, 1);
        i += groups[next_group].group->instances.size();
        ++next_group;
      } else {
        expected.emplace_back(nullptr, 1);
        ++i;
      }
    }
    for (std::size_t r = 0; r < expected.size() && r < runs.size(); ++r) {
      const LoopGroup* g = expected[r].first;
      if (g && runs[r].first == g->template_id && runs[r].second == g->instances.size()) ++preserved;
    }
    return static_cast<double>(preserved) / static_cast<double>(groups.size());
  }

  const auto entry = scan::scan_entry(bundle, template_ids(bp));
  for (std::size_t k = 0; k < groups.size(); ++k) {
    const auto& g = *groups[k].group;
    const std::string ref = items_ref(k);
    auto constructs = entry.loop_constructs.find(ref);
    if (constructs == entry.loop_constructs.end() || constructs->second != 1) continue;
    const scan::Call* call = nullptr;
    for (const auto& c : entry.calls) {
      if (c.items_ref == ref) call = &c;
    }
    auto items = entry.items.find(ref);
    if (!call || call->template_id != g.template_id || items == entry.items.end()) continue;
    if (items->second.size() != g.instances.size()) continue;
    ++preserved;
  }
  return static_cast<double>(preserved) / static_cast<double>(groups.size());
}

double prop_coverage(const Blueprint& bp, const CodeBundle& bundle) {
  const auto order = ordered_instances(bp);
  std::size_t total = 0;
  std::size_t covered = 0;

  if (bundle.framework == Framework::Html) {
    std::vector<HtmlInstanceMark> marks;
    if (const std::string* page = bundle.find("index.html")) {
      try {
        marks = parse_html_document(*page).instances;
      } catch (const Error&) {
      }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Instance& inst = *order[i].second;
      total += inst.binding.size();
      if (i >= marks.size() || marks[i].template_id != inst.template_id) continue;
      const auto& m = marks[i];
      for (const auto& [prop, value] : inst.binding) {
        const auto nulls = std::count(m.nulls.begin(), m.nulls.end(), prop);
        std::size_t hits = 0;
        const Payload* seen = nullptr;
        for (const auto& [p, v] : m.props) {
          if (p == prop) {
            ++hits;
            seen = &v;
          }
        }
        if (value.is_none()) covered += (nulls == 1 && hits == 0) ? 1 : 0;
        else covered += (nulls == 0 && hits == 1 && *seen == value) ? 1 : 0;
      }
    }
  } else {
    const auto entry = scan::scan_entry(bundle, template_ids(bp));
    const auto sites = expand_calls(entry);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const Instance& inst = *order[i].second;
      total += inst.binding.size();
      if (i >= sites.size() || sites[i].template_id != inst.template_id) continue;
      const auto& site = sites[i];
      for (const auto& [prop, value] : inst.binding) {
        if (scan::count(*site.record, prop) != 1) continue;
        if (site.forwarded &&
            std::count(site.forwarded->begin(), site.forwarded->end(), prop) != 1) {
          continue;
        }
        covered += value_matches(*scan::find(*site.record, prop), value) ? 1 : 0;
      }
    }
  }
  if (total == 0) return 1.0;
  return static_cast<double>(covered) / static_cast<double>(total);
}

namespace {

bool markup_file(const std::string& path) {
  auto ends = [&](std::string_view suf) {
    return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
  };
  return ends(".html") || ends(".vue") || ends(".tsx");
}

bool void_element(const std::string& tag) { return tag == "img" || tag == "input" || tag == "meta"; }

}  // namespace

std::vector<std::string> audit_tag_balance(const CodeBundle& bundle) {
  std::vector<std::string> problems;
  static const std::regex tag_re(R"(<!--[\s\S]*?-->|<!DOCTYPE[^>]*>|<(/?)([A-Za-z][\w\-.:]*)((?:[^<>"]|"[^"]*")*?)(/?)>)");
  for (const auto& f : bundle.files) {
    if (!markup_file(f.path)) continue;
    std::vector<std::string> stack;
    for (auto it = std::sregex_iterator(f.content.begin(), f.content.end(), tag_re);
         it != std::sregex_iterator(); ++it) {
      const auto& m = *it;
      if (!m[2].matched) continue;
      const std::string name = m[2].str();
      if (m[1].length() > 0) {
        if (stack.empty() || stack.back() != name) {
          problems.push_back(f.path + ": unexpected </" + name + ">");
          break;
        }
        stack.pop_back();
      } else if (m[4].length() == 0 && !(bundle.framework == Framework::Html || f.path.ends_with(".component.html")
                                             ? void_element(name)
                                             : false)) {
        stack.push_back(name);
      }
    }
    if (!stack.empty()) problems.push_back(f.path + ": <" + stack.back() + "> never closed");
  }
  return problems;
}

std::vector<std::string> audit_type_sinks(const Blueprint& bp, const CodeBundle& bundle) {
  std::set<std::string> urls;
  if (!bp.tree.empty()) {
    for (const auto& [id, n] : bp.tree.nodes()) {
      if (n.payload.type == PayloadType::Url) urls.insert(n.payload.value);
    }
  }
  std::map<std::string, PropType> prop_types;  // props are named <kind>_<index>, so types agree
  for (const auto& t : bp.templates) {
    for (const auto& p : t.props) prop_types[p.name] = p.type;
  }
  auto url_sink = [](const std::string& name) { return name == "src" || name == "href"; };

  std::vector<std::string> problems;
  static const std::regex literal_re(R"re(([A-Za-z_:\[\]\-]+)=(?:"([^"]*)"|\{("(?:[^"\\]|\\.)*")\}))re");
  static const std::regex react_ref(R"((\w+)=\{props\.(\w+)\})");
  static const std::regex markup_ref(R"re((?::|\[)(\w+)\]?="(\w+)")re");
  static const std::regex text_ref(R"(\{\{ (\w+) \}\}|[^=]\{props\.(\w+)\})");
  for (const auto& f : bundle.files) {
    for (auto it = std::sregex_iterator(f.content.begin(), f.content.end(), literal_re);
         it != std::sregex_iterator(); ++it) {
      std::string name = (*it)[1].str();
      std::erase_if(name, [](char c) { return c == ':' || c == '[' || c == ']'; });
      std::string value;
      if ((*it)[2].matched) {
        value = html_unescape((*it)[2].str());
      } else {
        try {
          value = Json::parse((*it)[3].str()).get<std::string>();
        } catch (const Json::exception&) {
          continue;
        }
      }
      if (!urls.count(value) || url_sink(name)) continue;
      // Passing a URL prop to a component is fine; its definition is checked below.
      if (auto pt = prop_types.find(name); pt != prop_types.end() && pt->second == PropType::UrlVal) continue;
      problems.push_back(f.path + ": URL value in '" + name + "'");
    }
    if (f.path.rfind("components/", 0) != 0) continue;
    auto check_ref = [&](const std::string& attr, const std::string& prop) {
      auto pt = prop_types.find(prop);
      if (pt == prop_types.end()) return;
      if (pt->second == PropType::UrlVal && !url_sink(attr)) {
        problems.push_back(f.path + ": URL prop " + prop + " in '" + attr + "'");
      }
      if (pt->second == PropType::ImageVal && attr != "src") {
        problems.push_back(f.path + ": image prop " + prop + " in '" + attr + "'");
      }
    };
    const std::regex& ref_re = bundle.framework == Framework::React ? react_ref : markup_ref;
    for (auto it = std::sregex_iterator(f.content.begin(), f.content.end(), ref_re);
         it != std::sregex_iterator(); ++it) {
      check_ref((*it)[1].str(), (*it)[2].str());
    }
    for (auto it = std::sregex_iterator(f.content.begin(), f.content.end(), text_ref);
         it != std::sregex_iterator(); ++it) {
      const std::string prop = (*it)[1].matched ? (*it)[1].str() : (*it)[2].str();
      auto pt = prop_types.find(prop);
      if (pt != prop_types.end() && pt->second != PropType::TextVal) {
        problems.push_back(f.path + ": " + std::string(to_string(pt->second)) + " prop " + prop +
                           " rendered as text");
      }
    }
  }
  return problems;
}

EvalReport evaluate(const Blueprint& bp, const CodeBundle& bundle, LabelMode mode) {
  EvalReport r;
  const UiTree expanded = expand_blueprint(bp);
  r.ted = tree_edit_distance(expanded, bp.tree, mode);
  r.crr = component_reuse_rate(bp);
  r.lpa = loop_preservation_accuracy(bp, bundle);
  r.pc = prop_coverage(bp, bundle);
  r.afc = static_cast<int>(bundle.files.size());
  const CodeBundle html = bundle.framework == Framework::Html ? bundle : emit(bp, Framework::Html);
  r.roundtrip_ted = tree_edit_distance(parse_html_bundle(html), expanded, mode);
  return r;
}

}  // namespace uiforge
