#include "uiforge/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <random>
#include <set>

namespace uiforge {

namespace {

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  SyntheticDocument page(std::size_t min_nodes, std::size_t max_nodes) {
    SyntheticDocument doc;
    std::vector<NodeSpec> motifs;
    const int n_motifs = pick(2, 4);
    for (int i = 0; i < n_motifs; ++i) motifs.push_back(motif());

    NodeSpec root{NodeKind::Frame, {}, {}, {}};
    std::size_t nodes = 1;
    std::set<std::pair<std::size_t, int>> used;
    while (nodes < min_nodes) {
      NodeSpec section;
      const int roll = pick(0, 9);
      // A (motif, copies) run is used once per page; a repeated run would
      // make the whole row the motif and hide the loop inside it.
      const std::size_t motif = static_cast<std::size_t>(pick(0, n_motifs - 1));
      int copies = pick(2, 4);
      for (int tries = 0; tries < 3 && used.count({motif, copies}); ++tries) copies = copies % 3 + 2;
      if (roll < 5 && !used.count({motif, copies})) {
        used.insert({motif, copies});
        section = NodeSpec{NodeKind::Row, {}, {}, {}};
        for (int c = 0; c < copies; ++c) section.children.push_back(fill(motifs[motif]));
        if (nodes + count(section) <= max_nodes) {
          doc.injected_loops.push_back({static_cast<NodeId>(nodes), static_cast<std::size_t>(copies)});
        }
      } else if (roll < 8) {
        section = NodeSpec{NodeKind::Stack, {}, {leaf(NodeKind::Text)}, {}};
        section.children.push_back(fill(motifs[motif]));
      } else {
        section = filler(pick(1, 3));
      }
      if (nodes + count(section) > max_nodes) section = leaf(NodeKind::Text);
      nodes += count(section);
      root.children.push_back(std::move(section));
    }
    doc.tree = UiTree::from_spec(root);
    return doc;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  static std::size_t count(const NodeSpec& s) {
    std::size_t n = 1;
    for (const auto& c : s.children) n += count(c);
    return n;
  }

  NodeSpec leaf(NodeKind kind) {
    const std::string n = std::to_string(++serial_);
    switch (kind) {
      case NodeKind::Media: return {kind, Payload::image("img/" + n + ".png"), {}, {}};
      case NodeKind::Link: return {kind, Payload::url("https://example.com/p/" + n), {}, {}};
      case NodeKind::Control: return {kind, Payload::placeholder("field " + n), {}, {}};
      default: return {NodeKind::Text, Payload::text("text " + n), {}, {}};
    }
  }

  // Shape only; payload values are replaced by `fill`. Motifs are flat so
  // no smaller repeat inside them outscores the whole card when packing.
  NodeSpec motif() {
    NodeSpec tile{NodeKind::Tile, {}, {}, {}};
    const int parts = pick(2, 5);
    for (int i = 0; i < parts; ++i) {
      switch (pick(0, 4)) {
        case 0: tile.children.push_back(leaf(NodeKind::Media)); break;
        case 1: tile.children.push_back(leaf(NodeKind::Link)); break;
        case 2: tile.children.push_back(leaf(NodeKind::Control)); break;
        default: tile.children.push_back(leaf(NodeKind::Text)); break;
      }
    }
    return tile;
  }

  NodeSpec fill(const NodeSpec& shape) {
    NodeSpec out = shape.payload.is_none() ? NodeSpec{shape.kind, {}, {}, {}} : leaf(shape.kind);
    for (const auto& c : shape.children) out.children.push_back(fill(c));
    return out;
  }

  NodeSpec filler(int depth) {
    NodeSpec box{depth % 2 ? NodeKind::Stack : NodeKind::Row, {}, {}, {}};
    const int parts = pick(1, 3);
    for (int i = 0; i < parts; ++i) {
      if (depth > 1 && pick(0, 1) == 0) {
        box.children.push_back(filler(depth - 1));
      } else {
        const NodeKind kinds[] = {NodeKind::Text, NodeKind::Media, NodeKind::Link, NodeKind::Control};
        box.children.push_back(leaf(kinds[pick(0, 3)]));
      }
    }
    return box;
  }

  std::mt19937_64 rng_;
  std::uint64_t serial_ = 0;
};

}  // namespace

UiTree synthetic_tree(std::uint64_t seed, std::size_t min_nodes) {
  return Generator(seed).page(min_nodes, std::numeric_limits<std::size_t>::max()).tree;
}

std::vector<SyntheticDocument> synthetic_corpus(std::uint64_t seed, std::size_t count) {
  std::vector<SyntheticDocument> docs;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t target = count > 1 ? 20 + (180 * i) / (count - 1) : 20;
    char name[32];
    std::snprintf(name, sizeof name, "doc_%02zu.json", i);
    docs.push_back(Generator(seed * 1000003 + i).page(target, std::max<std::size_t>(target, 200)));
    docs.back().name = name;
  }
  return docs;
}

}  // namespace uiforge
