#pragma once

#include <string>
#include <utility>
#include <vector>

#include "uiforge/model.hpp"

namespace uiforge {

/// Minimal ordered labeled tree for edit distance. Node 0..n-1, `root`
/// indexes the root, `children` keeps sibling order.
struct LabeledTree {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> children;
  int root = 0;

  int size() const { return static_cast<int>(labels.size()); }
  int add(std::string label, int parent = -1);
};

/// A minimum-cost edit mapping: pairs of (node in a, node in b) that are
/// kept or relabeled; every other node is deleted (a) or inserted (b).
struct EditMapping {
  int cost = 0;
  std::vector<std::pair<int, int>> pairs;
};

/// Unit-cost ordered tree edit distance (Zhang & Shasha).
int tree_edit_distance(const LabeledTree& a, const LabeledTree& b);
EditMapping edit_mapping(const LabeledTree& a, const LabeledTree& b);

enum class LabelMode {
  Structural,  // (kind, payload type)
  Strict,      // (kind, payload type, payload value)
};

LabeledTree to_labeled(const UiTree& tree, LabelMode mode = LabelMode::Structural);
/// Skeleton labels are (kind, payload type); optional flags are ignored.
LabeledTree to_labeled(const SkeletonNode& skeleton);

int tree_edit_distance(const UiTree& a, const UiTree& b, LabelMode mode = LabelMode::Structural);

}  // namespace uiforge
