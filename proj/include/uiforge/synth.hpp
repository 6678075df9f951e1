#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uiforge/model.hpp"

namespace uiforge {

struct InjectedLoop {
  NodeId row;  // parent of the run
  std::size_t count;
};

struct SyntheticDocument {
  std::string name;  // doc_NN.json
  UiTree tree;
  std::vector<InjectedLoop> injected_loops;
};

/// Random page tree of at least `min_nodes` nodes built from a few motifs.
/// Some motifs repeat as runs of siblings inside a row (loop material),
/// others recur in separate sections, and the rest is one-off filler.
UiTree synthetic_tree(std::uint64_t seed, std::size_t min_nodes);

/// `count` documents of 20 to 200 nodes; the lower bound steps evenly
/// across the corpus.
std::vector<SyntheticDocument> synthetic_corpus(std::uint64_t seed, std::size_t count = 25);

}  // namespace uiforge
