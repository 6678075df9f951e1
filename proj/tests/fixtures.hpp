#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "uiforge/error.hpp"
#include "uiforge/miner.hpp"
#include "uiforge/model.hpp"
#include "uiforge/ted.hpp"

namespace fx {

using namespace uiforge;

NodeSpec text(const std::string& v);
NodeSpec media(const std::string& src);
NodeSpec link(const std::string& href);
NodeSpec control(const std::string& placeholder);
NodeSpec box(NodeKind kind, std::vector<NodeSpec> children);

/// tile[media, text, link[text]], all values derived from `tag`.
NodeSpec card(const std::string& tag);

/// Four cards in one stack: two of size 5 and two with an extra link (size
/// 6). The two shapes are one edit apart.
UiTree two_card_variants();

/// stack[row[T,T], row[T,T], T] with T = tile[text, text].
UiTree starvation_fixture();

/// Small trees for the packing oracle, all at most 20 nodes.
std::vector<UiTree> packing_fixtures();

/// Random ordered tree of exactly `n` nodes over labels a, b, c.
LabeledTree random_labeled(std::mt19937_64& rng, int n);

/// Edit distance by enumerating every Tai mapping (one-to-one, ancestor
/// and sibling order preserving). Exponential; meant for tiny trees.
int brute_force_ted(const LabeledTree& a, const LabeledTree& b);

/// Largest number of nodes covered by a node-disjoint choice of
/// occurrences in which every used candidate keeps at least min_support
/// occurrences. Exhaustive.
std::size_t packing_optimum(const std::vector<MotifCandidate>& cands, const UiTree& tree,
                            const MinerConfig& cfg);

}  // namespace fx
