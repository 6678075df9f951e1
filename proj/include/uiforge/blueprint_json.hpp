#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "uiforge/model.hpp"

namespace uiforge {

using Json = nlohmann::json;

/// Deterministic text form: sorted keys, 2-space indent, every floating
/// point number printed with exactly 6 decimals, trailing newline.
std::string canonical_dump(const Json& value);

/// Parses JSON text, mapping syntax errors to Error{MalformedJson} with the
/// byte offset in the message.
Json parse_json(std::string_view bytes);

Json payload_to_json(const Payload& p);
Payload payload_from_json(const Json& j);

BBox bbox_from_json(const Json& j);
Json bbox_to_json(const BBox& b);

Json blueprint_to_json(const Blueprint& bp);
Blueprint blueprint_from_json(const Json& j);

/// Parses and validates a blueprint document.
Blueprint parse_blueprint(std::string_view bytes);
std::string serialize_blueprint(const Blueprint& bp);

}  // namespace uiforge
