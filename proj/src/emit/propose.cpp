#include "uiforge/emit/propose.hpp"

#include <algorithm>

#include "uiforge/error.hpp"

namespace uiforge {

EmissionEvent ReferenceProposer::propose(const ConstraintState&) {
  if (pos_ >= stream_.size()) return ev::FileEnd{};
  return stream_[pos_];
}

void ReferenceProposer::feedback(bool accepted) {
  if (accepted) ++pos_;
}

FuzzProposer::FuzzProposer(std::vector<EmissionEvent> stream, std::uint64_t seed, double invalid_rate)
    : stream_(std::move(stream)), rng_(seed), invalid_rate_(invalid_rate) {}

EmissionEvent FuzzProposer::propose(const ConstraintState& state) {
  ++proposed_;
  last_ = Last::Reference;
  if (!repairs_.empty()) {
    last_ = Last::Repair;
    return repairs_.back();
  }
  // A stray event may already have done what the reference wanted next.
  while (pos_ < stream_.size()) {
    auto it = std::find(absorbed_.begin(), absorbed_.end(), stream_[pos_]);
    if (it == absorbed_.end()) break;
    absorbed_.erase(it);
    ++pos_;
  }
  const EmissionEvent next = pos_ < stream_.size() ? stream_[pos_] : EmissionEvent{ev::FileEnd{}};
  std::bernoulli_distribution flip(invalid_rate_);
  if (!flip(rng_)) return next;
  ++corrupted_;
  last_ = Last::Corrupt;
  last_event_ = corrupt(next, state);
  return last_event_;
}

void FuzzProposer::feedback(bool accepted) {
  if (!accepted) return;
  switch (last_) {
    case Last::Reference: ++pos_; break;
    case Last::Repair: repairs_.pop_back(); break;
    case Last::Corrupt:
      // A misplaced but legal element: close it again before resuming.
      if (const auto* o = std::get_if<ev::OpenTag>(&last_event_)) {
        repairs_.push_back(ev::CloseTag{o->name});
      } else {
        absorbed_.push_back(last_event_);
      }
      break;
  }
}

EmissionEvent FuzzProposer::corrupt(const EmissionEvent& next, const ConstraintState& state) {
  const Schema& s = state.schema();
  // Replays are limited to events whose premature acceptance is repairable.
  auto replay = [&]() -> EmissionEvent {
    std::vector<const EmissionEvent*> pool;
    const bool attr_pending = std::holds_alternative<ev::Attr>(next);
    // An extra element is only harmless right before its parent closes.
    const auto* close = std::get_if<ev::CloseTag>(&next);
    const bool sibling_slot = close && !s.find_template(close->name) &&
                              close->name.find(':') == std::string::npos;
    for (const auto& e : stream_) {
      if (attr_pending) {
        if (std::holds_alternative<ev::BindProp>(e)) pool.push_back(&e);
      } else if (const auto* o = std::get_if<ev::OpenTag>(&e)) {
        if (sibling_slot && !s.find_template(o->name) && o->name.find(':') == std::string::npos) {
          pool.push_back(&e);
        }
      } else if (std::holds_alternative<ev::BindProp>(e) ||
                 std::holds_alternative<ev::LoopEnd>(e) || std::holds_alternative<ev::FileEnd>(e)) {
        pool.push_back(&e);
      }
    }
    if (pool.empty()) return ev::CloseTag{"section"};
    std::uniform_int_distribution<std::size_t> at(0, pool.size() - 1);
    return *pool[at(rng_)];
  };
  std::uniform_int_distribution<int> pick(0, 10);
  switch (pick(rng_)) {
    case 0: return ev::CloseTag{"section"};
    case 1: return ev::Attr{"onclick", "x()"};
    case 2:
      if (!s.url_values.empty()) return ev::Attr{"class", *s.url_values.begin()};
      return ev::Attr{"style", "color: red"};
    case 3: return ev::OpenTag{"table"};
    case 4: return ev::FileStart{"styles.css"};
    case 5: return ev::TextContent{"{{missing_prop}}"};
    case 6:
      if (const auto* b = std::get_if<ev::BindProp>(&next)) {
        ev::BindProp bad = *b;
        bad.sink = Sink::Class;
        return bad;
      }
      return replay();
    case 7:
      if (const auto* b = std::get_if<ev::BindProp>(&next)) {
        ev::BindProp bad = *b;
        bad.value = Payload{bad.value.type == PayloadType::None ? PayloadType::Text : bad.value.type,
                            bad.value.value + "~"};
        return bad;
      }
      return replay();
    case 8:
      // Props of one call site may arrive in any order.
      if (pos_ + 1 < stream_.size() && std::holds_alternative<ev::BindProp>(next) &&
          std::holds_alternative<ev::BindProp>(stream_[pos_ + 1])) {
        return stream_[pos_ + 1];
      }
      return replay();
    default:
      return replay();
  }
}

FilterResult propose_and_filter(const Blueprint& bp, Framework fw, EventProposer& proposer,
                                std::size_t fuel) {
  const auto schema = Schema::from_blueprint(bp, fw);
  ConstraintState state(schema);
  FilterResult out;
  // The entry file is always required, so a fresh state is never complete.
  while (!state.complete()) {
    if (out.stats.proposals >= fuel) {
      throw Error(ErrorCode::FuelExhausted,
                  "fuel of " + std::to_string(fuel) + " proposals spent after " +
                      std::to_string(out.stats.accepted) + " accepted events");
    }
    EmissionEvent e = proposer.propose(state);
    ++out.stats.proposals;
    if (state.admits(e)) {
      state.advance(e);
      out.events.push_back(std::move(e));
      ++out.stats.accepted;
      proposer.feedback(true);
    } else {
      ++out.stats.rejections;
      proposer.feedback(false);
    }
  }
  out.bundle = render(out.events, *schema);
  return out;
}

std::size_t default_fuel(std::size_t stream_length) { return 20 * stream_length + 100; }

}  // namespace uiforge
