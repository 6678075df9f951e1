#include "fixtures.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace fx {

NodeSpec text(const std::string& v) { return {NodeKind::Text, Payload::text(v), {}, {}}; }
NodeSpec media(const std::string& src) { return {NodeKind::Media, Payload::image(src), {}, {}}; }
NodeSpec link(const std::string& href) { return {NodeKind::Link, Payload::url(href), {}, {}}; }
NodeSpec control(const std::string& placeholder) {
  return {NodeKind::Control, Payload::placeholder(placeholder), {}, {}};
}
NodeSpec box(NodeKind kind, std::vector<NodeSpec> children) { return {kind, {}, std::move(children), {}}; }

NodeSpec card(const std::string& tag) {
  NodeSpec l = link("https://example.com/" + tag);
  l.children.push_back(text("More about " + tag));
  return box(NodeKind::Tile, {media(tag + ".png"), text("Title " + tag), l});
}

UiTree two_card_variants() {
  auto small = [](const std::string& t) {
    return box(NodeKind::Tile, {media(t + ".png"), text("Title " + t), text("Body " + t), link("https://a/" + t)});
  };
  auto large = [&](const std::string& t) {
    NodeSpec c = small(t);
    c.children.push_back(link("https://b/" + t));
    return c;
  };
  return UiTree::from_spec(box(NodeKind::Stack, {small("a"), small("b"), large("c"), large("d")}));
}

UiTree starvation_fixture() {
  int n = 0;
  auto t = [&] {
    ++n;
    return box(NodeKind::Tile, {text("x" + std::to_string(n)), text("y" + std::to_string(n))});
  };
  NodeSpec r1 = box(NodeKind::Row, {t(), t()});
  NodeSpec r2 = box(NodeKind::Row, {t(), t()});
  return UiTree::from_spec(box(NodeKind::Stack, {r1, r2, t()}));
}

std::vector<UiTree> packing_fixtures() {
  std::vector<UiTree> out;
  out.push_back(UiTree::from_spec(box(NodeKind::Stack, {card("a"), card("b"), card("c")})));
  out.push_back(starvation_fixture());
  auto tm = [](const std::string& v) { return box(NodeKind::Tile, {text(v), media(v + ".png")}); };
  out.push_back(UiTree::from_spec(box(NodeKind::Stack, {box(NodeKind::Row, {tm("a"), tm("b")}),
                                                        box(NodeKind::Row, {tm("c"), tm("d")}), tm("e")})));
  out.push_back(UiTree::from_spec(box(NodeKind::Stack, {box(NodeKind::Row, {text("a"), text("b")}),
                                                        box(NodeKind::Row, {text("c"), text("d")}),
                                                        box(NodeKind::Row, {text("e"), text("f"), text("g")}),
                                                        box(NodeKind::Row, {text("h"), text("i"), text("j")})})));
  auto lt = [](const std::string& v) { return box(NodeKind::Tile, {link("https://x/" + v), text(v)}); };
  out.push_back(UiTree::from_spec(box(NodeKind::Frame, {lt("a"), box(NodeKind::Stack, {lt("b"), lt("c")}),
                                                        box(NodeKind::Row, {lt("d"), media("m.png")})})));
  auto ct = [](const std::string& v, bool wide) {
    NodeSpec r = box(NodeKind::Row, {control("field " + v), text(v)});
    if (wide) r.children.push_back(media(v + ".png"));
    return r;
  };
  out.push_back(UiTree::from_spec(
      box(NodeKind::Stack, {ct("a", false), ct("b", false), ct("c", true), ct("d", true), text("end")})));
  // Two variants one edit apart that stay separate at the default threshold.
  auto small = [](const std::string& v) { return box(NodeKind::Tile, {media(v + ".png"), text(v)}); };
  auto wide = [](const std::string& v) {
    return box(NodeKind::Tile, {media(v + ".png"), text(v), link("https://x/" + v)});
  };
  out.push_back(UiTree::from_spec(box(NodeKind::Stack, {small("a"), small("b"), wide("c"), wide("d")})));
  return out;
}

LabeledTree random_labeled(std::mt19937_64& rng, int n) {
  static const char* kLabels[] = {"a", "b", "c"};
  std::uniform_int_distribution<int> label(0, 2);
  LabeledTree t;
  t.add(kLabels[label(rng)]);
  for (int i = 1; i < n; ++i) {
    const int parent = std::uniform_int_distribution<int>(0, i - 1)(rng);
    t.add(kLabels[label(rng)], parent);
  }
  return t;
}

namespace {

struct Order {
  std::vector<int> pre, post, nodes;  // nodes in preorder
};

Order order_of(const LabeledTree& t) {
  Order o;
  o.pre.assign(static_cast<std::size_t>(t.size()), 0);
  o.post.assign(static_cast<std::size_t>(t.size()), 0);
  int pre = 0, post = 0;
  std::function<void(int)> walk = [&](int v) {
    o.pre[static_cast<std::size_t>(v)] = pre++;
    o.nodes.push_back(v);
    for (int c : t.children[static_cast<std::size_t>(v)]) walk(c);
    o.post[static_cast<std::size_t>(v)] = post++;
  };
  if (t.size() > 0) walk(t.root);
  return o;
}

bool ancestor(const Order& o, int u, int v) {
  return o.pre[static_cast<std::size_t>(u)] < o.pre[static_cast<std::size_t>(v)] &&
         o.post[static_cast<std::size_t>(u)] > o.post[static_cast<std::size_t>(v)];
}

bool left_of(const Order& o, int u, int v) {
  return o.pre[static_cast<std::size_t>(u)] < o.pre[static_cast<std::size_t>(v)] &&
         o.post[static_cast<std::size_t>(u)] < o.post[static_cast<std::size_t>(v)];
}

}  // namespace

int brute_force_ted(const LabeledTree& a, const LabeledTree& b) {
  const Order oa = order_of(a), ob = order_of(b);
  std::vector<std::pair<int, int>> mapping;
  std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
  int best = a.size() + b.size();
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == oa.nodes.size()) {
      int relabel = 0;
      for (auto [u, v] : mapping) {
        relabel += a.labels[static_cast<std::size_t>(u)] != b.labels[static_cast<std::size_t>(v)] ? 1 : 0;
      }
      const int m = static_cast<int>(mapping.size());
      best = std::min(best, relabel + (a.size() - m) + (b.size() - m));
      return;
    }
    const int u = oa.nodes[i];
    go(i + 1);
    for (int v = 0; v < b.size(); ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      bool ok = true;
      for (auto [u2, v2] : mapping) {
        if (ancestor(oa, u2, u) != ancestor(ob, v2, v) || ancestor(oa, u, u2) != ancestor(ob, v, v2) ||
            left_of(oa, u2, u) != left_of(ob, v2, v) || left_of(oa, u, u2) != left_of(ob, v, v2)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[static_cast<std::size_t>(v)] = true;
      mapping.emplace_back(u, v);
      go(i + 1);
      mapping.pop_back();
      used[static_cast<std::size_t>(v)] = false;
    }
  };
  go(0);
  return best;
}

std::size_t packing_optimum(const std::vector<MotifCandidate>& cands, const UiTree& tree,
                            const MinerConfig& cfg) {
  struct Item {
    std::size_t cand;
    std::set<NodeId> nodes;
  };
  std::vector<Item> items;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    for (NodeId root : cands[c].occurrences) {
      const auto sub = tree.preorder_from(root);
      items.push_back({c, std::set<NodeId>(sub.begin(), sub.end())});
    }
  }
  std::vector<std::size_t> suffix(items.size() + 1, 0);
  for (std::size_t i = items.size(); i-- > 0;) suffix[i] = suffix[i + 1] + items[i].nodes.size();

  std::set<NodeId> claimed;
  std::vector<int> taken(cands.size(), 0);
  std::size_t best = 0;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t covered) {
    if (covered + suffix[i] <= best) return;
    if (i == items.size()) {
      for (int t : taken) {
        if (t != 0 && t < cfg.min_support) return;
      }
      best = covered;
      return;
    }
    const Item& it = items[i];
    if (std::none_of(it.nodes.begin(), it.nodes.end(), [&](NodeId n) { return claimed.count(n) != 0; })) {
      claimed.insert(it.nodes.begin(), it.nodes.end());
      ++taken[it.cand];
      go(i + 1, covered + it.nodes.size());
      --taken[it.cand];
      for (NodeId n : it.nodes) claimed.erase(n);
    }
    go(i + 1, covered);
  };
  go(0, 0);
  return best;
}

}  // namespace fx
