#include "uiforge/miner.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "uiforge/error.hpp"
#include "uiforge/ted.hpp"

namespace uiforge {

namespace {

std::string node_label(NodeKind kind, PayloadType type, bool optional) {
  std::string s(to_string(kind));
  if (type != PayloadType::None) {
    s += ':';
    s += to_string(type);
  }
  if (optional) s += '?';
  return s;
}

// Fixed serialization fed to the keyed hash: kind, payload type, optional
// flag, child count (LE u32), then each child digest in order.
Hash128 combine(NodeKind kind, PayloadType type, bool optional,
                const std::vector<const Hash128*>& children) {
  std::vector<std::uint8_t> buf;
  buf.reserve(7 + 16 * children.size());
  buf.push_back(static_cast<std::uint8_t>(kind));
  buf.push_back(static_cast<std::uint8_t>(type));
  buf.push_back(optional ? 1 : 0);
  const auto n = static_cast<std::uint32_t>(children.size());
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  for (const Hash128* h : children) buf.insert(buf.end(), h->bytes.begin(), h->bytes.end());
  return keyed_hash128(buf);
}

std::string join_canonical(std::string label, const std::vector<const std::string*>& kids) {
  if (kids.empty()) return label;
  label += '(';
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) label += ',';
    label += *kids[i];
  }
  label += ')';
  return label;
}

bool candidate_less(const MotifCandidate& a, const MotifCandidate& b) {
  if (a.score() != b.score()) return a.score() > b.score();
  return a.canonical.canonical_string < b.canonical.canonical_string;
}

std::map<NodeId, std::size_t> preorder_rank(const UiTree& tree) {
  std::map<NodeId, std::size_t> rank;
  std::size_t i = 0;
  for (NodeId id : tree.preorder()) rank[id] = i++;
  return rank;
}

std::string capitalized(NodeKind kind) {
  std::string s(to_string(kind));
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

}  // namespace

void MinerConfig::validate() const {
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw Error(ErrorCode::InvalidThreshold, "eta must lie in [0, 1)");
  }
  if (min_size < 2) throw Error(ErrorCode::InvalidThreshold, "min_size must be >= 2");
  if (min_support < 2) throw Error(ErrorCode::InvalidThreshold, "min_support must be >= 2");
  if (!(size_gate >= 0.0 && size_gate <= 1.0)) {
    throw Error(ErrorCode::InvalidThreshold, "size_gate must lie in [0, 1]");
  }
}

CanonicalForm canonicalize(const UiTree& tree, NodeId node) {
  std::function<CanonicalForm(NodeId)> walk = [&](NodeId id) -> CanonicalForm {
    const UiNode& n = tree.node(id);
    std::vector<CanonicalForm> kids;
    kids.reserve(n.children.size());
    for (NodeId c : n.children) kids.push_back(walk(c));
    std::vector<const Hash128*> hs;
    std::vector<const std::string*> ss;
    for (const auto& k : kids) {
      hs.push_back(&k.hash);
      ss.push_back(&k.canonical_string);
    }
    return {join_canonical(node_label(n.kind, n.payload.type, false), ss),
            combine(n.kind, n.payload.type, false, hs)};
  };
  return walk(node);
}

CanonicalForm canonicalize(const SkeletonNode& skeleton) {
  std::function<CanonicalForm(const SkeletonNode&)> walk = [&](const SkeletonNode& s) {
    std::vector<CanonicalForm> kids;
    for (const auto& c : s.children) kids.push_back(walk(c));
    std::vector<const Hash128*> hs;
    std::vector<const std::string*> ss;
    for (const auto& k : kids) {
      hs.push_back(&k.hash);
      ss.push_back(&k.canonical_string);
    }
    return CanonicalForm{join_canonical(node_label(s.kind, s.payload_type, s.optional), ss),
                         combine(s.kind, s.payload_type, s.optional, hs)};
  };
  return walk(skeleton);
}

SkeletonNode skeleton_of(const UiTree& tree, NodeId node) {
  const UiNode& n = tree.node(node);
  SkeletonNode s;
  s.kind = n.kind;
  s.payload_type = n.payload.type;
  for (NodeId c : n.children) s.children.push_back(skeleton_of(tree, c));
  return s;
}

std::vector<MotifCandidate> collect_candidates(const UiTree& tree, const MinerConfig& cfg,
                                               MinerStats* stats) {
  cfg.validate();
  MinerStats local;
  MinerStats& st = stats ? *stats : local;

  // Pass 1: bottom-up hash and subtree size.
  std::unordered_map<NodeId, Hash128> hash;
  std::unordered_map<NodeId, std::size_t> size;
  hash.reserve(tree.size());
  size.reserve(tree.size());
  for (NodeId id : tree.postorder()) {
    ++st.node_visits;
    const UiNode& n = tree.node(id);
    std::vector<const Hash128*> hs;
    std::size_t sz = 1;
    for (NodeId c : n.children) {
      hs.push_back(&hash.at(c));
      sz += size.at(c);
    }
    hash.emplace(id, combine(n.kind, n.payload.type, false, hs));
    size.emplace(id, sz);
  }

  // Pass 2: bucket roots by digest, in document order.
  std::unordered_map<Hash128, std::vector<NodeId>, Hash128Hasher> buckets;
  std::vector<Hash128> bucket_order;
  for (NodeId id : tree.preorder()) {
    ++st.node_visits;
    if (size.at(id) < static_cast<std::size_t>(cfg.min_size)) continue;
    auto [it, fresh] = buckets.try_emplace(hash.at(id));
    if (fresh) bucket_order.push_back(it->first);
    it->second.push_back(id);
  }
  st.buckets = buckets.size();

  // Confirmation: digests are never trusted alone. Canonical strings are
  // materialized once per node (memoized), only for buckets that qualify.
  std::unordered_map<NodeId, std::string> memo;
  std::function<const std::string&(NodeId)> canon = [&](NodeId id) -> const std::string& {
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    ++st.node_visits;
    const UiNode& n = tree.node(id);
    std::vector<const std::string*> ss;
    for (NodeId c : n.children) ss.push_back(&canon(c));
    return memo.emplace(id, join_canonical(node_label(n.kind, n.payload.type, false), ss))
        .first->second;
  };

  std::vector<MotifCandidate> out;
  for (const Hash128& h : bucket_order) {
    const auto& members = buckets.at(h);
    if (members.size() < static_cast<std::size_t>(cfg.min_support)) continue;
    std::map<std::string, std::vector<NodeId>> classes;
    for (NodeId id : members) classes[canon(id)].push_back(id);
    if (classes.size() > 1) st.hash_collisions += classes.size() - 1;
    for (auto& [cs, occ] : classes) {
      if (occ.size() < static_cast<std::size_t>(cfg.min_support)) continue;
      MotifCandidate c;
      c.canonical = CanonicalForm{cs, h};
      c.occurrences = std::move(occ);
      c.size = size.at(c.occurrences.front());
      c.skeleton = skeleton_of(tree, c.occurrences.front());
      out.push_back(std::move(c));
    }
  }
  std::sort(out.begin(), out.end(), candidate_less);
  return out;
}

double normalized_ted(const SkeletonNode& a, const SkeletonNode& b) {
  const double d = tree_edit_distance(to_labeled(a), to_labeled(b));
  return d / static_cast<double>(std::max(a.size(), b.size()));
}

std::optional<SkeletonNode> anti_unify(const SkeletonNode& a, const SkeletonNode& b) {
  const auto pa = preorder(a);
  const auto pb = preorder(b);
  std::map<const SkeletonNode*, int> ia, ib;
  for (std::size_t i = 0; i < pa.size(); ++i) ia[pa[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < pb.size(); ++i) ib[pb[i]] = static_cast<int>(i);
  std::vector<int> parent_a(pa.size(), -1), parent_b(pb.size(), -1);
  for (const SkeletonNode* s : pa) {
    for (const auto& c : s->children) parent_a[static_cast<std::size_t>(ia[&c])] = ia[s];
  }
  for (const SkeletonNode* s : pb) {
    for (const auto& c : s->children) parent_b[static_cast<std::size_t>(ib[&c])] = ib[s];
  }

  const EditMapping m = edit_mapping(to_labeled(a), to_labeled(b));
  std::vector<int> a_to_b(pa.size(), -1), b_to_a(pb.size(), -1);
  for (auto [x, y] : m.pairs) {
    a_to_b[static_cast<std::size_t>(x)] = y;
    b_to_a[static_cast<std::size_t>(y)] = x;
  }
  if (a_to_b[0] != 0) return std::nullopt;
  for (auto [x, y] : m.pairs) {
    const SkeletonNode& sa = *pa[static_cast<std::size_t>(x)];
    const SkeletonNode& sb = *pb[static_cast<std::size_t>(y)];
    // A relabel would need a kind- or type-valued prop; neither exists.
    if (sa.kind != sb.kind || sa.payload_type != sb.payload_type) return std::nullopt;
    if (x != 0 && a_to_b[static_cast<std::size_t>(parent_a[static_cast<std::size_t>(x)])] !=
                      parent_b[static_cast<std::size_t>(y)]) {
      return std::nullopt;
    }
  }

  bool ok = true;
  std::function<SkeletonNode(const SkeletonNode&, const SkeletonNode&)> merge =
      [&](const SkeletonNode& x, const SkeletonNode& y) {
        SkeletonNode out;
        out.kind = x.kind;
        out.payload_type = x.payload_type;
        out.optional = x.optional || y.optional;
        std::size_t i = 0, j = 0;
        while (i < x.children.size() || j < y.children.size()) {
          const SkeletonNode* cx = i < x.children.size() ? &x.children[i] : nullptr;
          const SkeletonNode* cy = j < y.children.size() ? &y.children[j] : nullptr;
          if (cx && a_to_b[static_cast<std::size_t>(ia[cx])] < 0) {
            out.children.push_back(*cx);
            out.children.back().optional = true;
            ++i;
          } else if (cy && b_to_a[static_cast<std::size_t>(ib[cy])] < 0) {
            out.children.push_back(*cy);
            out.children.back().optional = true;
            ++j;
          } else if (cx && cy && a_to_b[static_cast<std::size_t>(ia[cx])] == ib[cy]) {
            out.children.push_back(merge(*cx, *cy));
            ++i;
            ++j;
          } else {
            ok = false;
            break;
          }
        }
        return out;
      };
  SkeletonNode merged = merge(a, b);
  if (!ok) return std::nullopt;
  for (const SkeletonNode* s : preorder(merged)) {
    if (s->optional && !optional_key(*s)) return std::nullopt;
  }
  return merged;
}

std::vector<MotifCandidate> merge_near_duplicates(std::vector<MotifCandidate> cands,
                                                  const UiTree& tree, const MinerConfig& cfg,
                                                  MinerStats* stats) {
  cfg.validate();
  const auto rank = preorder_rank(tree);
  std::sort(cands.begin(), cands.end(), candidate_less);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      for (std::size_t j = i + 1; j < cands.size();) {
        const double sa = static_cast<double>(cands[i].size);
        const double sb = static_cast<double>(cands[j].size);
        bool merged = false;
        if (std::abs(sa - sb) <= cfg.size_gate * std::max(sa, sb) + 1e-12 &&
            normalized_ted(cands[i].skeleton, cands[j].skeleton) <= cfg.eta + 1e-12) {
          if (auto u = anti_unify(cands[i].skeleton, cands[j].skeleton)) {
            MotifCandidate& keep = cands[i];
            keep.skeleton = std::move(*u);
            keep.size = keep.skeleton.size();
            keep.canonical = canonicalize(keep.skeleton);
            std::set<NodeId> occ(keep.occurrences.begin(), keep.occurrences.end());
            occ.insert(cands[j].occurrences.begin(), cands[j].occurrences.end());
            keep.occurrences.assign(occ.begin(), occ.end());
            std::sort(keep.occurrences.begin(), keep.occurrences.end(),
                      [&](NodeId x, NodeId y) { return rank.at(x) < rank.at(y); });
            cands.erase(cands.begin() + static_cast<std::ptrdiff_t>(j));
            merged = true;
            changed = true;
            if (stats) ++stats->merges;
          }
        }
        if (!merged) ++j;
      }
    }
    std::sort(cands.begin(), cands.end(), candidate_less);
  }
  return cands;
}

ExtractedTemplate extract_props(const SkeletonNode& skeleton, const UiTree& tree,
                                const std::vector<NodeId>& occurrences) {
  if (occurrences.empty()) {
    throw Error(ErrorCode::StructuralMismatch, "no occurrences to extract props from");
  }
  std::vector<Alignment> aligns;
  for (NodeId occ : occurrences) {
    auto al = align_skeleton(skeleton, tree, occ);
    if (!al) {
      throw Error(ErrorCode::StructuralMismatch,
                  "subtree at " + std::to_string(occ) + " does not fit the skeleton");
    }
    aligns.push_back(std::move(*al));
  }

  Template tpl;
  tpl.skeleton = skeleton;
  std::vector<SkeletonNode*> order;
  {
    std::function<void(SkeletonNode&)> walk = [&](SkeletonNode& s) {
      order.push_back(&s);
      for (auto& c : s.children) walk(c);
    };
    walk(tpl.skeleton);
  }
  auto present_everywhere = [&](std::size_t i) {
    return std::all_of(aligns.begin(), aligns.end(), [i](const Alignment& a) { return a[i].has_value(); });
  };
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i]->optional && present_everywhere(i)) order[i]->optional = false;
  }
  std::vector<bool> in_optional(order.size(), false);
  {
    std::map<const SkeletonNode*, std::size_t> idx;
    for (std::size_t i = 0; i < order.size(); ++i) idx[order[i]] = i;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const bool here = in_optional[i] || order[i]->optional;
      for (const auto& c : order[i]->children) in_optional[idx.at(&c)] = here;
      in_optional[i] = here;
    }
  }

  int index = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    SkeletonNode& s = *order[i];
    s.prop.clear();
    s.constant.reset();
    if (s.payload_type == PayloadType::None) continue;
    const int my_index = index++;
    bool constant = !in_optional[i] && present_everywhere(i);
    const std::string* first = nullptr;
    for (const auto& a : aligns) {
      if (!constant) break;
      const std::string& v = tree.node(*a[i]).payload.value;
      if (!first) first = &v;
      else if (v != *first) constant = false;
    }
    if (constant) {
      s.constant = *first;
      continue;
    }
    s.prop = std::string(to_string(s.kind)) + "_" + std::to_string(my_index);
    PropSpec p;
    p.name = s.prop;
    p.type = prop_type_for(s.payload_type);
    p.sinks = sinks_for(p.type);
    p.optional = in_optional[i];
    tpl.props.push_back(std::move(p));
  }

  const CanonicalForm cf = canonicalize(tpl.skeleton);
  tpl.id = capitalized(tpl.skeleton.kind) + "_" + cf.hash.hex().substr(0, 8);
  tpl.support = static_cast<int>(occurrences.size());

  ExtractedTemplate out{std::move(tpl), {}};
  for (NodeId occ : occurrences) {
    auto b = match_template(out.tpl, tree, occ);
    if (!b) {
      throw Error(ErrorCode::StructuralMismatch,
                  "subtree at " + std::to_string(occ) + " does not instantiate the template");
    }
    out.bindings.push_back(std::move(*b));
  }
  return out;
}

Blueprint pack_instances(const std::vector<MotifCandidate>& cands, const UiTree& tree,
                         const MinerConfig& cfg) {
  cfg.validate();
  std::vector<const MotifCandidate*> order;
  for (const auto& c : cands) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(),
                   [](const MotifCandidate* a, const MotifCandidate* b) { return candidate_less(*a, *b); });

  Blueprint bp;
  bp.tree = tree;
  std::set<NodeId> claimed;
  std::set<std::string> used_ids;
  for (const MotifCandidate* c : order) {
    std::vector<NodeId> accepted;
    std::vector<NodeId> newly;
    for (NodeId occ : c->occurrences) {
      const auto nodes = tree.preorder_from(occ);
      const bool free = std::none_of(nodes.begin(), nodes.end(),
                                     [&](NodeId n) { return claimed.count(n) != 0; });
      if (!free) continue;
      claimed.insert(nodes.begin(), nodes.end());
      newly.insert(newly.end(), nodes.begin(), nodes.end());
      accepted.push_back(occ);
    }
    if (accepted.size() < static_cast<std::size_t>(cfg.min_support)) {
      // Starved: give the nodes back so later candidates may use them.
      for (NodeId n : newly) claimed.erase(n);
      continue;
    }
    ExtractedTemplate ex = extract_props(c->skeleton, tree, accepted);
    std::string id = ex.tpl.id;
    for (int k = 2; used_ids.count(id); ++k) id = ex.tpl.id + "_" + std::to_string(k);
    ex.tpl.id = id;
    used_ids.insert(id);
    for (std::size_t i = 0; i < accepted.size(); ++i) {
      bp.instances.emplace(accepted[i], Instance{id, std::move(ex.bindings[i])});
    }
    bp.templates.push_back(std::move(ex.tpl));
  }
  std::sort(bp.templates.begin(), bp.templates.end(),
            [](const Template& a, const Template& b) { return a.id < b.id; });

  for (NodeId id : tree.preorder()) {
    const auto& kids = tree.node(id).children;
    for (std::size_t i = 0; i < kids.size();) {
      auto it = bp.instances.find(kids[i]);
      if (it == bp.instances.end()) {
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < kids.size()) {
        auto jt = bp.instances.find(kids[j]);
        if (jt == bp.instances.end() || jt->second.template_id != it->second.template_id) break;
        ++j;
      }
      if (j - i >= 2) {
        bp.loop_groups.push_back(LoopGroup{
            id, it->second.template_id,
            std::vector<NodeId>(kids.begin() + static_cast<std::ptrdiff_t>(i),
                                kids.begin() + static_cast<std::ptrdiff_t>(j))});
      }
      i = j;
    }
  }
  validate(bp);
  return bp;
}

Blueprint mine(const UiTree& tree, const MinerConfig& cfg, MinerStats* stats) {
  auto cands = collect_candidates(tree, cfg, stats);
  cands = merge_near_duplicates(std::move(cands), tree, cfg, stats);
  return pack_instances(cands, tree, cfg);
}

std::size_t covered_nodes(const Blueprint& bp) {
  std::size_t n = 0;
  for (const auto& [root, inst] : bp.instances) n += bp.tree.subtree_size(root);
  return n;
}

}  // namespace uiforge
