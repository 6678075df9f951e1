#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "uiforge/hash.hpp"
#include "uiforge/model.hpp"

namespace uiforge {

/// Payload-value-abstracted, order-preserving form of a subtree.
struct CanonicalForm {
  std::string canonical_string;
  Hash128 hash;

  friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
};

struct MotifCandidate {
  CanonicalForm canonical;
  /// Occurrence roots in document (preorder) order.
  std::vector<NodeId> occurrences;
  std::size_t size = 0;
  /// Structure only (kind, payload type, optional flags); props and
  /// constants are assigned by extract_props.
  SkeletonNode skeleton;

  std::size_t support() const { return occurrences.size(); }
  std::size_t score() const { return size * support(); }
};

struct MinerConfig {
  /// Merge two candidates when normalized TED <= eta.
  double eta = 0.15;
  int min_size = 2;
  int min_support = 2;
  /// Candidates are compared only when |s_a - s_b| <= size_gate * max(s_a, s_b).
  double size_gate = 0.30;

  /// Throws Error{InvalidThreshold} on out-of-range values.
  void validate() const;
};

/// Instrumentation for the complexity contract.
struct MinerStats {
  std::size_t node_visits = 0;
  std::size_t buckets = 0;
  std::size_t hash_collisions = 0;
  std::size_t merges = 0;
};

/// Throws Error{UnknownNode} when `node` is not in `tree`.
CanonicalForm canonicalize(const UiTree& tree, NodeId node);
/// Canonical form of a (possibly merged) skeleton; optional nodes carry a
/// '?' marker so merged and unmerged shapes never collide.
CanonicalForm canonicalize(const SkeletonNode& skeleton);

/// Structure-only skeleton of a concrete subtree.
SkeletonNode skeleton_of(const UiTree& tree, NodeId node);

/// One bottom-up hashing pass plus bucketing. Sorted by size x support
/// descending, then canonical string ascending.
std::vector<MotifCandidate> collect_candidates(const UiTree& tree, const MinerConfig& cfg,
                                               MinerStats* stats = nullptr);

/// TED(a, b) / max(|a|, |b|) over (kind, payload type) labels.
double normalized_ted(const SkeletonNode& a, const SkeletonNode& b);

/// Most specific common generalization of two skeletons. Subtrees present
/// on one side only become optional regions. Returns nullopt when the
/// skeletons disagree on a label (kind or payload type) at a mapped site,
/// when the best edit mapping does not keep parents paired, or when an
/// optional region would carry no payload to key its presence on.
std::optional<SkeletonNode> anti_unify(const SkeletonNode& a, const SkeletonNode& b);

std::vector<MotifCandidate> merge_near_duplicates(std::vector<MotifCandidate> cands,
                                                  const UiTree& tree, const MinerConfig& cfg,
                                                  MinerStats* stats = nullptr);

struct ExtractedTemplate {
  Template tpl;
  std::vector<Binding> bindings;  // parallel to the occurrences passed in
};

/// Lifts varying payloads into typed props (named <kind>_<index>, index =
/// preorder position among payload-bearing skeleton nodes) and keeps
/// payloads equal across all occurrences as constants. Throws
/// Error{StructuralMismatch} if an occurrence does not fit the skeleton.
ExtractedTemplate extract_props(const SkeletonNode& skeleton, const UiTree& tree,
                                const std::vector<NodeId>& occurrences);

/// Greedy non-overlap packing in candidate order; returns a validated
/// Blueprint with templates, instances and loop groups.
Blueprint pack_instances(const std::vector<MotifCandidate>& cands, const UiTree& tree,
                         const MinerConfig& cfg);

/// collect -> merge -> pack.
Blueprint mine(const UiTree& tree, const MinerConfig& cfg = {}, MinerStats* stats = nullptr);

/// Total nodes inside instance subtrees.
std::size_t covered_nodes(const Blueprint& bp);

}  // namespace uiforge
