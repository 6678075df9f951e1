#pragma once

#include <vector>

#include "uiforge/emit/events.hpp"
#include "uiforge/model.hpp"

namespace uiforge {

/// HTML tag a node of this kind is emitted as. `inline_parent` is true under
/// link/control, where text becomes <span> instead of <p>; `has_children`
/// turns a control into <button>.
std::string_view tag_for(NodeKind kind, bool inline_parent, bool has_children);

/// The reference event stream for `bp` under framework `fw`. Component
/// files come first (templates in id order), then the entry file. Throws
/// Error{InternalConstraintViolation} if the engine rejects any event.
std::vector<EmissionEvent> dispatch(const Blueprint& bp, Framework fw);

/// The same stream without the engine check.
std::vector<EmissionEvent> dispatch_unchecked(const Blueprint& bp, Framework fw);

}  // namespace uiforge
