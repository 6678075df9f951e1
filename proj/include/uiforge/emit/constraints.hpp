#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "uiforge/emit/events.hpp"
#include "uiforge/model.hpp"

namespace uiforge {

/// Everything the masks need to know about one emission: the template bank
/// (type table), the instance sequence with its payload fields (the table
/// each binding consumes), and the loop groups.
struct Schema {
  struct InstanceSlot {
    NodeId root = 0;
    std::string template_id;
    Binding binding;
    std::optional<std::size_t> loop;  // index into loops
  };
  struct Loop {
    std::string template_id;
    std::string items_ref;
    std::size_t first = 0;  // index into instances
    std::size_t count = 0;
  };

  Framework framework = Framework::Html;
  std::map<std::string, Template> templates;
  std::vector<InstanceSlot> instances;  // document order
  std::vector<Loop> loops;              // document order
  std::set<std::string> url_values;
  std::vector<std::string> files;  // every source file the stream must contain
  /// Per template, the tag each prop's skeleton node is emitted as.
  std::map<std::string, std::map<std::string, std::string>> prop_tags;
  /// Per file, the element structure the stream must follow: each entry is
  /// an open (true) or close (false) of the named tag.
  std::map<std::string, std::vector<std::pair<bool, std::string>>> shapes;

  static std::shared_ptr<const Schema> from_blueprint(const Blueprint& bp, Framework fw);
  const Template* find_template(std::string_view id) const;
};

/// Rejections caused by unmet prop coverage carry this tag after "bind: ".
inline constexpr std::string_view kCoverageReason = "coverage";

/// Syntactic state, binding ledger and type table for one emission.
/// Admissibility is the conjunction of three mask families; rejections are
/// reported with a "syn:", "bind:" or "type:" prefix.
class ConstraintState {
 public:
  /// No schema: no templates, no instances, no required files.
  ConstraintState();
  explicit ConstraintState(std::shared_ptr<const Schema> schema);

  /// Empty when admissible, otherwise the reason.
  std::string rejection(const EmissionEvent& e) const;
  bool admits(const EmissionEvent& e) const { return rejection(e).empty(); }
  /// Applies an event; throws Error{InadmissibleEvent} if it is rejected.
  void advance(const EmissionEvent& e);
  bool complete() const;

  std::size_t depth() const { return stack_.size(); }
  bool file_open() const { return file_.has_value(); }
  /// Ledger bits set so far for schema instance `i` (delta_t summed).
  std::size_t bound_count(std::size_t i) const;
  std::size_t instances_opened() const { return next_instance_; }
  const Schema& schema() const { return *schema_; }

 private:
  enum class FrameKind { Element, Instance, Definition, Conditional };
  enum class Content { Empty, Children, BoundText };
  struct Frame {
    FrameKind kind = FrameKind::Element;
    std::string name;
    std::size_t instance = 0;  // Instance frames: schema index
    std::set<std::string> attrs;
    Content content = Content::Empty;
  };

  std::string check_open(const std::string& name) const;
  std::string check_close(const std::string& name) const;
  std::string check_attr(const ev::Attr& a) const;
  std::string check_text(const ev::TextContent& t) const;
  std::string check_bind(const ev::BindProp& b) const;
  std::string check_loop_start(const ev::LoopStart& l) const;
  std::string check_loop_end() const;
  std::string check_file_start(const ev::FileStart& f) const;
  std::string check_file_end() const;
  std::string check_content_position(bool element) const;
  std::string check_shape(bool open, const std::string& name) const;

  const Frame* innermost(FrameKind kind) const;
  const Template* defining() const;
  bool file_obligations_met() const;
  bool attr_position() const { return attr_pos_ && !stack_.empty(); }

  std::shared_ptr<const Schema> schema_;
  std::optional<std::string> file_;
  std::size_t shape_pos_ = 0;
  std::set<std::string> files_done_;
  bool top_level_done_ = false;
  std::vector<Frame> stack_;
  bool attr_pos_ = false;

  // V_bind ledger: per schema instance, the props bound so far.
  std::vector<std::set<std::string>> bound_;
  std::size_t next_instance_ = 0;
  bool group_continuation_ = false;  // HTML: next event must open the next group member

  // Definitions: prop references made in the open definition.
  std::set<std::string> def_refs_;
  std::set<std::string> def_conditions_;
  std::set<std::string> defined_;

  std::optional<std::size_t> open_loop_;
  std::size_t loop_depth_ = 0;
  std::size_t loop_seen_ = 0;
  std::set<std::size_t> loops_done_;
};

/// Pure predicate over (state, event).
bool admissible(const ConstraintState& state, const EmissionEvent& e);
/// Returns the successor state; throws Error{InadmissibleEvent}.
ConstraintState step(ConstraintState state, const EmissionEvent& e);
/// Tags balanced, no open file block, every required file written and every
/// instance opened with a full ledger.
bool is_complete(const ConstraintState& state);

}  // namespace uiforge
