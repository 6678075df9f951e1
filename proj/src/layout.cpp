#include "uiforge/layout.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "uiforge/blueprint_json.hpp"
#include "uiforge/error.hpp"

namespace uiforge {

namespace {

enum class Axis { Y, X };

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

// Total order used for reading order and for tie-breaks between boxes with
// identical geometry, which keeps the result independent of input order.
auto reading_key(const BoxItem& b) {
  return std::make_tuple(round3(b.bbox.y0), b.bbox.x0, b.bbox.y1, b.bbox.x1,
                         static_cast<int>(b.kind), b.payload);
}

bool reading_less(const BoxItem& a, const BoxItem& b) { return reading_key(a) < reading_key(b); }

double lo(const BoxItem& b, Axis a) { return a == Axis::Y ? b.bbox.y0 : b.bbox.x0; }
double hi(const BoxItem& b, Axis a) { return a == Axis::Y ? b.bbox.y1 : b.bbox.x1; }

/// Splits a group at every projection gap wider than `gap` along `axis`.
std::vector<std::vector<BoxItem>> cut(std::vector<BoxItem> group, Axis axis, double gap) {
  std::sort(group.begin(), group.end(), [axis](const BoxItem& a, const BoxItem& b) {
    return std::make_tuple(lo(a, axis), hi(a, axis)) < std::make_tuple(lo(b, axis), hi(b, axis)) ||
           (std::make_tuple(lo(a, axis), hi(a, axis)) == std::make_tuple(lo(b, axis), hi(b, axis)) &&
            reading_less(a, b));
  });
  std::vector<std::vector<BoxItem>> out;
  double reach = -1.0;
  for (auto& b : group) {
    if (out.empty() || lo(b, axis) - reach > gap) out.emplace_back();
    reach = std::max(reach, hi(b, axis));
    out.back().push_back(std::move(b));
  }
  return out;
}

BBox union_box(const std::vector<NodeSpec>& kids) {
  BBox u = *kids.front().bbox;
  for (const auto& k : kids) {
    u.x0 = std::min(u.x0, k.bbox->x0);
    u.y0 = std::min(u.y0, k.bbox->y0);
    u.x1 = std::max(u.x1, k.bbox->x1);
    u.y1 = std::max(u.y1, k.bbox->y1);
  }
  return u;
}

NodeSpec leaf(const BoxItem& b) { return NodeSpec{b.kind, b.payload, {}, b.bbox}; }

NodeSpec split(std::vector<BoxItem> group, Axis preferred, double gap) {
  if (group.size() == 1) return leaf(group.front());
  const Axis other = preferred == Axis::Y ? Axis::X : Axis::Y;
  for (Axis axis : {preferred, other}) {
    auto parts = cut(group, axis, gap);
    if (parts.size() < 2) continue;
    NodeSpec c{axis == Axis::Y ? NodeKind::Stack : NodeKind::Row, Payload::none(), {}, {}};
    const Axis next = axis == Axis::Y ? Axis::X : Axis::Y;
    for (auto& p : parts) c.children.push_back(split(std::move(p), next, gap));
    c.bbox = union_box(c.children);
    return c;
  }
  std::sort(group.begin(), group.end(), reading_less);
  NodeSpec tile{NodeKind::Tile, Payload::none(), {}, {}};
  for (const auto& b : group) tile.children.push_back(leaf(b));
  tile.bbox = union_box(tile.children);
  return tile;
}

std::vector<double> projection_gaps(const std::vector<BoxItem>& items, Axis axis) {
  std::vector<std::pair<double, double>> spans;
  for (const auto& b : items) spans.emplace_back(lo(b, axis), hi(b, axis));
  std::sort(spans.begin(), spans.end());
  std::vector<double> gaps;
  double reach = spans.front().second;
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first > reach) gaps.push_back(spans[i].first - reach);
    reach = std::max(reach, spans[i].second);
  }
  return gaps;
}

void check_item(const BoxItem& b) {
  if (b.kind == NodeKind::Frame || b.kind == NodeKind::Stack || b.kind == NodeKind::Row) {
    throw Error(ErrorCode::UnknownKind, "container kind '" + std::string(to_string(b.kind)) +
                                            "' is inferred, not accepted as input");
  }
  if (!payload_allowed(b.kind, b.payload.type)) {
    throw Error(ErrorCode::PayloadMismatch, "box of kind " + std::string(to_string(b.kind)) +
                                                " cannot carry a " +
                                                std::string(to_string(b.payload.type)) + " payload");
  }
}

}  // namespace

std::vector<BoxItem> parse_boxes(std::string_view bytes) {
  const Json doc = parse_json(bytes);
  if (!doc.is_array()) throw Error(ErrorCode::MalformedJson, "box file must be a JSON array");
  std::vector<BoxItem> out;
  try {
    for (const auto& j : doc) {
      BoxItem b;
      b.kind = parse_kind(j.at("kind").get<std::string>());
      if (!j.contains("bbox")) throw Error(ErrorCode::InvalidBox, "box without bbox");
      b.bbox = bbox_from_json(j.at("bbox"));
      if (j.contains("payload")) b.payload = payload_from_json(j.at("payload"));
      check_item(b);
      out.push_back(std::move(b));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedJson, std::string("schema violation: ") + e.what());
  }
  return out;
}

UiTree group_boxes(const std::vector<BoxItem>& items, double gap_threshold) {
  if (items.empty()) throw Error(ErrorCode::EmptyInput, "no boxes to group");
  if (!(gap_threshold > 0.0 && gap_threshold <= 0.5)) {
    throw Error(ErrorCode::InvalidThreshold,
                "gap threshold " + std::to_string(gap_threshold) + " outside (0, 0.5]");
  }
  for (const auto& b : items) check_item(b);
  NodeSpec frame{NodeKind::Frame, Payload::none(), {}, {}};
  // Horizontal cuts first: pages scroll vertically.
  frame.children.push_back(split(items, Axis::Y, gap_threshold));
  frame.bbox = union_box(frame.children);
  return UiTree::from_spec(frame);
}

double infer_gap_threshold(const std::vector<BoxItem>& items) {
  if (items.size() < 2) throw Error(ErrorCode::TooFewItems, "need at least two boxes");
  std::vector<double> gaps = projection_gaps(items, Axis::Y);
  auto xs = projection_gaps(items, Axis::X);
  gaps.insert(gaps.end(), xs.begin(), xs.end());
  if (gaps.empty()) return 0.01;
  std::sort(gaps.begin(), gaps.end());
  const std::size_t n = gaps.size();
  const double median = n % 2 ? gaps[n / 2] : 0.5 * (gaps[n / 2 - 1] + gaps[n / 2]);
  return std::clamp(median, 0.01, 0.2);
}

}  // namespace uiforge
