#include "uiforge/blueprint_json.hpp"

#include <cstdio>
#include <functional>

#include "uiforge/error.hpp"

namespace uiforge {

namespace {

void dump_into(const Json& v, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner;
        out += Json(it.key()).dump();
        out += ": ";
        dump_into(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line; they are ids and coordinates.
      bool flat = true;
      for (const auto& e : v) flat = flat && !e.is_structured();
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
          if (i) out += ", ";
          dump_into(v[i], out, indent + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump_into(v[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", v.get<double>());
      out += buf;
      return;
    }
    default:
      out += v.dump();
  }
}

Json skeleton_to_json(const SkeletonNode& s) {
  Json j;
  j["kind"] = std::string(to_string(s.kind));
  if (s.payload_type != PayloadType::None) j["payload_type"] = std::string(to_string(s.payload_type));
  if (!s.prop.empty()) j["prop"] = s.prop;
  if (s.constant) j["constant"] = *s.constant;
  if (s.optional) j["optional"] = true;
  j["children"] = Json::array();
  for (const auto& c : s.children) j["children"].push_back(skeleton_to_json(c));
  return j;
}

SkeletonNode skeleton_from_json(const Json& j) {
  SkeletonNode s;
  s.kind = parse_kind(j.at("kind").get<std::string>());
  if (j.contains("payload_type")) {
    s.payload_type = parse_payload_type(j.at("payload_type").get<std::string>());
  }
  if (j.contains("prop")) s.prop = j.at("prop").get<std::string>();
  if (j.contains("constant")) s.constant = j.at("constant").get<std::string>();
  s.optional = j.value("optional", false);
  for (const auto& c : j.at("children")) s.children.push_back(skeleton_from_json(c));
  return s;
}

}  // namespace

std::string canonical_dump(const Json& value) {
  std::string out;
  dump_into(value, out, 0);
  out += "\n";
  return out;
}

Json parse_json(std::string_view bytes) {
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::MalformedJson,
                "parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Json payload_to_json(const Payload& p) {
  Json j;
  j["type"] = std::string(to_string(p.type));
  if (!p.is_none()) j["value"] = p.value;
  return j;
}

Payload payload_from_json(const Json& j) {
  Payload p;
  p.type = parse_payload_type(j.at("type").get<std::string>());
  if (!p.is_none()) p.value = j.at("value").get<std::string>();
  return p;
}

BBox bbox_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw Error(ErrorCode::InvalidBox, "bbox must be an array of four numbers");
  }
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(ErrorCode::InvalidBox, "bbox must be an array of four numbers");
  }
  return BBox::make(j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>());
}

Json bbox_to_json(const BBox& b) {
  // Stored as floats so canonical_dump prints fixed 6 decimals even for 0 and 1.
  return Json::array({Json(static_cast<double>(b.x0)), Json(static_cast<double>(b.y0)),
                      Json(static_cast<double>(b.x1)), Json(static_cast<double>(b.y1))});
}

Json blueprint_to_json(const Blueprint& bp) {
  Json j;
  j["version"] = 1;
  j["root"] = bp.tree.root();
  j["nodes"] = Json::array();
  for (const auto& [id, n] : bp.tree.nodes()) {
    Json jn;
    jn["id"] = id;
    jn["kind"] = std::string(to_string(n.kind));
    if (n.bbox) jn["bbox"] = bbox_to_json(*n.bbox);
    if (!n.payload.is_none()) jn["payload"] = payload_to_json(n.payload);
    jn["children"] = n.children;
    j["nodes"].push_back(std::move(jn));
  }
  j["templates"] = Json::array();
  for (const auto& t : bp.templates) {
    Json jt;
    jt["id"] = t.id;
    jt["support"] = t.support;
    jt["skeleton"] = skeleton_to_json(t.skeleton);
    jt["props"] = Json::array();
    for (const auto& p : t.props) {
      Json jp;
      jp["name"] = p.name;
      jp["type"] = std::string(to_string(p.type));
      jp["sinks"] = Json::array();
      for (Sink s : p.sinks) jp["sinks"].push_back(std::string(to_string(s)));
      if (p.optional) jp["optional"] = true;
      if (!p.items_template.empty()) jp["items_template"] = p.items_template;
      jt["props"].push_back(std::move(jp));
    }
    j["templates"].push_back(std::move(jt));
  }
  j["instances"] = Json::object();
  for (const auto& [id, inst] : bp.instances) {
    Json ji;
    ji["template"] = inst.template_id;
    ji["binding"] = Json::object();
    for (const auto& [name, value] : inst.binding) ji["binding"][name] = payload_to_json(value);
    j["instances"][std::to_string(id)] = std::move(ji);
  }
  j["loop_groups"] = Json::array();
  for (const auto& g : bp.loop_groups) {
    j["loop_groups"].push_back(
        Json{{"parent", g.parent}, {"template", g.template_id}, {"instances", g.instances}});
  }
  return j;
}

Blueprint blueprint_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorCode::MalformedJson, "blueprint must be a JSON object");
    if (j.value("version", 0) != 1) {
      throw Error(ErrorCode::MalformedJson, "unsupported blueprint version");
    }
    std::vector<UiNode> nodes;
    for (const auto& jn : j.at("nodes")) {
      UiNode n;
      n.id = jn.at("id").get<NodeId>();
      n.kind = parse_kind(jn.at("kind").get<std::string>());
      if (jn.contains("bbox")) n.bbox = bbox_from_json(jn.at("bbox"));
      if (jn.contains("payload")) n.payload = payload_from_json(jn.at("payload"));
      n.children = jn.at("children").get<std::vector<NodeId>>();
      nodes.push_back(std::move(n));
    }
    Blueprint bp;
    bp.tree = UiTree(std::move(nodes), j.at("root").get<NodeId>());
    for (const auto& jt : j.value("templates", Json::array())) {
      Template t;
      t.id = jt.at("id").get<std::string>();
      t.support = jt.at("support").get<int>();
      t.skeleton = skeleton_from_json(jt.at("skeleton"));
      for (const auto& jp : jt.at("props")) {
        PropSpec p;
        p.name = jp.at("name").get<std::string>();
        p.type = parse_prop_type(jp.at("type").get<std::string>());
        for (const auto& s : jp.at("sinks")) {
          auto sink = parse_sink(s.get<std::string>());
          if (!sink) throw Error(ErrorCode::PayloadMismatch, "unknown sink " + s.dump());
          p.sinks.push_back(*sink);
        }
        p.optional = jp.value("optional", false);
        p.items_template = jp.value("items_template", std::string());
        t.props.push_back(std::move(p));
      }
      bp.templates.push_back(std::move(t));
    }
    const Json instances = j.value("instances", Json::object());
    for (const auto& [key, ji] : instances.items()) {
      NodeId id = 0;
      try {
        std::size_t used = 0;
        id = std::stoll(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw Error(ErrorCode::DanglingReference, "instance key '" + key + "' is not a node id");
      }
      Instance inst;
      inst.template_id = ji.at("template").get<std::string>();
      for (const auto& [name, jp] : ji.at("binding").items()) {
        inst.binding[name] = payload_from_json(jp);
      }
      bp.instances.emplace(id, std::move(inst));
    }
    for (const auto& jg : j.value("loop_groups", Json::array())) {
      LoopGroup g;
      g.parent = jg.at("parent").get<NodeId>();
      g.template_id = jg.at("template").get<std::string>();
      g.instances = jg.at("instances").get<std::vector<NodeId>>();
      bp.loop_groups.push_back(std::move(g));
    }
    return bp;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::MalformedJson, std::string("schema violation: ") + e.what());
  }
}

Blueprint parse_blueprint(std::string_view bytes) {
  Blueprint bp = blueprint_from_json(parse_json(bytes));
  validate(bp);
  return bp;
}

std::string serialize_blueprint(const Blueprint& bp) { return canonical_dump(blueprint_to_json(bp)); }

}  // namespace uiforge
