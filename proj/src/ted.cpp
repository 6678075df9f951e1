#include "uiforge/ted.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace uiforge {

int LabeledTree::add(std::string label, int parent) {
  labels.push_back(std::move(label));
  children.emplace_back();
  const int id = size() - 1;
  if (parent >= 0) children[static_cast<std::size_t>(parent)].push_back(id);
  return id;
}

namespace {

// Trees renumbered in postorder, 1-based.
struct Postorder {
  std::vector<int> label;     // interned label per postorder index
  std::vector<int> lml;       // leftmost leaf descendant
  std::vector<int> original;  // original node index
  std::vector<int> keyroots;
  int n = 0;

  Postorder(const LabeledTree& t, std::map<std::string, int>& intern) {
    n = t.size();
    label.assign(static_cast<std::size_t>(n) + 1, 0);
    lml.assign(static_cast<std::size_t>(n) + 1, 0);
    original.assign(static_cast<std::size_t>(n) + 1, -1);
    if (n == 0) return;
    int next = 0;
    std::function<int(int)> walk = [&](int v) -> int {
      int leftmost = -1;
      for (int c : t.children[static_cast<std::size_t>(v)]) {
        const int l = walk(c);
        if (leftmost < 0) leftmost = l;
      }
      const int me = ++next;
      auto [it, fresh] = intern.emplace(t.labels[static_cast<std::size_t>(v)],
                                        static_cast<int>(intern.size()));
      label[static_cast<std::size_t>(me)] = it->second;
      lml[static_cast<std::size_t>(me)] = leftmost < 0 ? me : leftmost;
      original[static_cast<std::size_t>(me)] = v;
      return lml[static_cast<std::size_t>(me)];
    };
    walk(t.root);
    // Keyroots: the highest node for each distinct leftmost leaf.
    std::map<int, int> highest;
    for (int i = 1; i <= n; ++i) highest[lml[static_cast<std::size_t>(i)]] = i;
    for (const auto& [l, k] : highest) keyroots.push_back(k);
    std::sort(keyroots.begin(), keyroots.end());
  }
};

class ZhangShasha {
 public:
  ZhangShasha(const LabeledTree& a, const LabeledTree& b) : a_(a, intern_), b_(b, intern_) {
    td_.assign(static_cast<std::size_t>(a_.n) + 1,
               std::vector<int>(static_cast<std::size_t>(b_.n) + 1, 0));
    for (int i : a_.keyroots) {
      for (int j : b_.keyroots) forest(i, j);
    }
  }

  int distance() const {
    if (a_.n == 0) return b_.n;
    if (b_.n == 0) return a_.n;
    return td_[static_cast<std::size_t>(a_.n)][static_cast<std::size_t>(b_.n)];
  }

  std::vector<std::pair<int, int>> mapping() {
    std::vector<std::pair<int, int>> out;
    if (a_.n == 0 || b_.n == 0) return out;
    std::vector<std::pair<int, int>> pending{{a_.n, b_.n}};
    while (!pending.empty()) {
      const auto [i, j] = pending.back();
      pending.pop_back();
      forest(i, j);
      const int li = lml_a(i), lj = lml_b(j);
      int x = i, y = j;
      while (x >= li || y >= lj) {
        const int dx = x - li + 1, dy = y - lj + 1;
        if (x >= li && at(dx, dy) == at(dx - 1, dy) + 1) {
          --x;
        } else if (y >= lj && at(dx, dy) == at(dx, dy - 1) + 1) {
          --y;
        } else if (lml_a(x) == li && lml_b(y) == lj) {
          out.emplace_back(a_.original[static_cast<std::size_t>(x)],
                           b_.original[static_cast<std::size_t>(y)]);
          --x;
          --y;
        } else {
          pending.emplace_back(x, y);
          x = lml_a(x) - 1;
          y = lml_b(y) - 1;
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int lml_a(int i) const { return a_.lml[static_cast<std::size_t>(i)]; }
  int lml_b(int j) const { return b_.lml[static_cast<std::size_t>(j)]; }
  int& at(int dx, int dy) { return fd_[static_cast<std::size_t>(dx)][static_cast<std::size_t>(dy)]; }
  int relabel(int x, int y) const {
    return a_.label[static_cast<std::size_t>(x)] == b_.label[static_cast<std::size_t>(y)] ? 0 : 1;
  }

  // Fills fd_ for the forests under keyroot pair (i, j); offsets are
  // x - lml(i) + 1 so that row/column 0 is the empty forest.
  void forest(int i, int j) {
    const int li = lml_a(i), lj = lml_b(j);
    const int m = i - li + 2, n = j - lj + 2;
    fd_.assign(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int dx = 1; dx < m; ++dx) at(dx, 0) = at(dx - 1, 0) + 1;
    for (int dy = 1; dy < n; ++dy) at(0, dy) = at(0, dy - 1) + 1;
    for (int x = li; x <= i; ++x) {
      for (int y = lj; y <= j; ++y) {
        const int dx = x - li + 1, dy = y - lj + 1;
        const int del = at(dx - 1, dy) + 1;
        const int ins = at(dx, dy - 1) + 1;
        if (lml_a(x) == li && lml_b(y) == lj) {
          at(dx, dy) = std::min({del, ins, at(dx - 1, dy - 1) + relabel(x, y)});
          td_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = at(dx, dy);
        } else {
          const int sub = at(lml_a(x) - li, lml_b(y) - lj) +
                          td_[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
          at(dx, dy) = std::min({del, ins, sub});
        }
      }
    }
  }

  std::map<std::string, int> intern_;
  Postorder a_;
  Postorder b_;
  std::vector<std::vector<int>> td_;
  std::vector<std::vector<int>> fd_;
};

std::string structural_label(NodeKind kind, PayloadType type) {
  std::string s(to_string(kind));
  if (type != PayloadType::None) {
    s += ':';
    s += to_string(type);
  }
  return s;
}

}  // namespace

int tree_edit_distance(const LabeledTree& a, const LabeledTree& b) {
  return ZhangShasha(a, b).distance();
}

EditMapping edit_mapping(const LabeledTree& a, const LabeledTree& b) {
  ZhangShasha zs(a, b);
  return EditMapping{zs.distance(), zs.mapping()};
}

LabeledTree to_labeled(const UiTree& tree, LabelMode mode) {
  LabeledTree out;
  std::function<void(NodeId, int)> walk = [&](NodeId id, int parent) {
    const UiNode& n = tree.node(id);
    std::string label = structural_label(n.kind, n.payload.type);
    if (mode == LabelMode::Strict && !n.payload.is_none()) {
      label += '=';
      label += n.payload.value;
    }
    const int me = out.add(std::move(label), parent);
    for (NodeId c : n.children) walk(c, me);
  };
  if (!tree.empty()) walk(tree.root(), -1);
  return out;
}

LabeledTree to_labeled(const SkeletonNode& skeleton) {
  LabeledTree out;
  std::function<void(const SkeletonNode&, int)> walk = [&](const SkeletonNode& s, int parent) {
    const int me = out.add(structural_label(s.kind, s.payload_type), parent);
    for (const auto& c : s.children) walk(c, me);
  };
  walk(skeleton, -1);
  return out;
}

int tree_edit_distance(const UiTree& a, const UiTree& b, LabelMode mode) {
  return tree_edit_distance(to_labeled(a, mode), to_labeled(b, mode));
}

}  // namespace uiforge
