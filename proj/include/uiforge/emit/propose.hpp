#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "uiforge/emit/constraints.hpp"
#include "uiforge/emit/render.hpp"

namespace uiforge {

/// Source of candidate events. The filter calls `propose` with the current
/// state and reports through `feedback` whether the candidate was taken.
class EventProposer {
 public:
  virtual ~EventProposer() = default;
  virtual EmissionEvent propose(const ConstraintState& state) = 0;
  virtual void feedback(bool accepted) = 0;
};

/// Replays the dispatcher's stream.
class ReferenceProposer : public EventProposer {
 public:
  explicit ReferenceProposer(std::vector<EmissionEvent> stream) : stream_(std::move(stream)) {}
  EmissionEvent propose(const ConstraintState& state) override;
  void feedback(bool accepted) override;

 private:
  std::vector<EmissionEvent> stream_;
  std::size_t pos_ = 0;
};

/// Wraps the reference stream and, with probability `invalid_rate`, offers a
/// corrupted or out-of-place event instead of the next correct one.
class FuzzProposer : public EventProposer {
 public:
  FuzzProposer(std::vector<EmissionEvent> stream, std::uint64_t seed, double invalid_rate = 0.4);
  EmissionEvent propose(const ConstraintState& state) override;
  void feedback(bool accepted) override;

  std::size_t corrupted() const { return corrupted_; }
  std::size_t proposed() const { return proposed_; }

 private:
  EmissionEvent corrupt(const EmissionEvent& next, const ConstraintState& state);

  std::vector<EmissionEvent> stream_;
  std::size_t pos_ = 0;
  std::mt19937_64 rng_;
  double invalid_rate_;
  enum class Last { Reference, Repair, Corrupt };
  Last last_ = Last::Reference;
  EmissionEvent last_event_;
  std::vector<EmissionEvent> repairs_;
  std::vector<EmissionEvent> absorbed_;
  std::size_t corrupted_ = 0;
  std::size_t proposed_ = 0;
};

struct FilterStats {
  std::size_t proposals = 0;
  std::size_t rejections = 0;
  std::size_t accepted = 0;
};

struct FilterResult {
  CodeBundle bundle;
  FilterStats stats;
  std::vector<EmissionEvent> events;  // the accepted stream
};

/// Greedy generation under the masks. Throws Error{FuelExhausted} when
/// `fuel` proposals are spent before the state is complete.
FilterResult propose_and_filter(const Blueprint& bp, Framework fw, EventProposer& proposer,
                                std::size_t fuel);

/// Fuel that comfortably covers a fuzz run at the default rate.
std::size_t default_fuel(std::size_t stream_length);

}  // namespace uiforge
