#pragma once

#include <string_view>
#include <vector>

#include "uiforge/model.hpp"

namespace uiforge {

/// A typed, payload-annotated box on the page. Only leaf kinds (text,
/// media, control, link) and tile are accepted; containers are inferred.
struct BoxItem {
  NodeKind kind = NodeKind::Text;
  BBox bbox;
  Payload payload;
};

/// Parses the flat box-list file format (a JSON array of
/// {kind, bbox:[x0,y0,x1,y1], payload?}).
std::vector<BoxItem> parse_boxes(std::string_view bytes);

/// Recursive XY-cut. Returns a tree rooted at a frame; stacks come from
/// horizontal cuts (gaps along y), rows from vertical cuts (gaps along x),
/// and unsplittable multi-box groups become tiles in reading order.
UiTree group_boxes(const std::vector<BoxItem>& items, double gap_threshold);

/// Median of all positive whitespace gaps in the global y and x
/// projections, clamped to [0.01, 0.2].
double infer_gap_threshold(const std::vector<BoxItem>& items);

}  // namespace uiforge
