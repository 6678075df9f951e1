#include <doctest.h>

#include "fixtures.hpp"
#include "uiforge/blueprint_json.hpp"
#include "uiforge/error.hpp"

using namespace uiforge;

namespace {

ErrorCode parse_error(const std::string& doc) {
  try {
    parse_blueprint(doc);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("document parsed");
  return ErrorCode::Io;
}

Blueprint mined_cards() {
  return mine(UiTree::from_spec(fx::box(NodeKind::Stack, {fx::card("a"), fx::card("b"), fx::card("c")})));
}

}  // namespace

TEST_CASE("one-node document") {
  const Blueprint bp = parse_blueprint(R"({"version":1,"root":0,"nodes":[{"id":0,"kind":"frame","children":[]}],
                                          "templates":[],"instances":{},"loop_groups":[]})");
  CHECK(bp.tree.size() == 1);
  CHECK(bp.templates.empty());
}

TEST_CASE("parse errors") {
  CHECK(parse_error(R"({"version":1,"root":0,"nodes":[{"id":0,"kind":"button","children":[]}]})") ==
        ErrorCode::UnknownKind);
  CHECK(parse_error(R"({"version":1,"root":0,"nodes":[{"id":0,"kind":"frame","children":[])") ==
        ErrorCode::MalformedJson);
  CHECK(parse_error(R"({"version":1,"root":0,"nodes":[{"id":0,"kind":"frame","bbox":[0.5,0,0.4,1],"children":[]}]})") ==
        ErrorCode::InvalidBox);
  CHECK(parse_error(R"({"version":1,"root":0,"nodes":[{"id":0,"kind":"frame","children":[1]},
        {"id":1,"kind":"media","payload":{"type":"url","value":"x"},"children":[]}]})") == ErrorCode::PayloadMismatch);
  CHECK(parse_error(R"({"version":1,"root":0,"nodes":[{"id":0,"kind":"frame","children":[3]}]})") ==
        ErrorCode::DanglingReference);
}

TEST_CASE("overlapping instances are rejected") {
  Blueprint bp = mined_cards();
  REQUIRE(bp.instances.size() == 3);
  Json j = blueprint_to_json(bp);
  j["instances"]["0"] = j["instances"].begin().value();
  try {
    parse_blueprint(j.dump());
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OverlappingInstances);
  }
}

TEST_CASE("serialization round trip and determinism") {
  const Blueprint bp = mined_cards();
  const std::string once = serialize_blueprint(bp);
  CHECK(serialize_blueprint(bp) == once);
  const Blueprint back = parse_blueprint(once);
  CHECK(back == bp);
  CHECK(serialize_blueprint(back) == once);
  REQUIRE(bp.loop_groups.size() == 1);
  CHECK(bp.loop_groups[0].instances == std::vector<NodeId>{1, 6, 11});
}

TEST_CASE("bbox keeps six decimals") {
  Blueprint bp;
  NodeSpec s = fx::text("x");
  s.bbox = BBox::make(0.1, 0.2, 0.3333333333, 0.4);
  bp.tree = UiTree::from_spec(s);
  CHECK(serialize_blueprint(bp).find("0.333333") != std::string::npos);
  CHECK(parse_blueprint(serialize_blueprint(bp)).tree.node(0).bbox->x1 == doctest::Approx(0.333333));
}

TEST_CASE("kind and payload compatibility") {
  CHECK(payload_allowed(NodeKind::Text, PayloadType::Text));
  CHECK(payload_allowed(NodeKind::Control, PayloadType::None));
  CHECK(payload_allowed(NodeKind::Control, PayloadType::Placeholder));
  CHECK_FALSE(payload_allowed(NodeKind::Media, PayloadType::Url));
  CHECK_FALSE(payload_allowed(NodeKind::Frame, PayloadType::Text));
  CHECK(children_allowed(NodeKind::Link));
  CHECK_FALSE(children_allowed(NodeKind::Media));
}

TEST_CASE("sink table") {
  CHECK(sinks_for(PropType::UrlVal) == std::vector<Sink>{Sink::Src, Sink::Href});
  CHECK(sinks_for(PropType::ImageVal) == std::vector<Sink>{Sink::Src});
  CHECK(sinks_for(PropType::TextVal) == std::vector<Sink>{Sink::TextContent});
  CHECK(sinks_for(PropType::PlaceholderVal) == std::vector<Sink>{Sink::Placeholder});
  CHECK(sinks_for(PropType::Items) == std::vector<Sink>{Sink::LoopBody});
}

TEST_CASE("expanding a mined blueprint gives the tree back") {
  const Blueprint bp = mined_cards();
  CHECK(tree_edit_distance(expand_blueprint(bp), bp.tree, LabelMode::Strict) == 0);
}
