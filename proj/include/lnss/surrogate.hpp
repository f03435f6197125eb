#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "lnss/transition.hpp"

namespace lnss {

// Sum_{t=0}^{L-1} gamma^t * rewards[t]. Throws "empty window" / "invalid
// discount".
double discounted_return(std::span<const double> rewards, double gamma);

// Surrogate stage reward over a full window of N rewards:
//   r' = discounted_return * (gamma - 1) / (gamma^N - 1).
// The weights form a convex combination, so r' stays inside the range of
// the raw rewards, and replaying r' for N discounted steps reconstructs
// the original discounted return exactly. N = 1 returns rewards[0] bitwise.
double surrogate_reward_full(std::span<const double> rewards, double gamma);

// Same normalization over the M < N rewards that remain near episode end.
double surrogate_reward_tail(std::span<const double> rewards, double gamma);

// max(0, r + shift). Applied to rewards before they enter the window;
// evaluation metrics always use the original reward.
double elevate_reward(double r, double shift);

// The temporary FIFO window the surrogate reward is computed from. Push
// raw transitions as they happen; once the window holds `capacity` entries
// each push emits the oldest transition with its surrogate reward. At
// episode end, drain() flushes the remainder through the tail formula, so
// every raw transition is emitted exactly once per episode.
//
// `n` is the bootstrap distance of the Q update: the emitted transition
// pairs the window head with the next_state found n steps later (clamped
// to the last available entry when fewer remain).
class SurrogateWindow {
 public:
  // capacity >= 1, gamma strictly inside (0, 1).
  SurrogateWindow(int capacity, double gamma);

  std::optional<TransformedTransition> push(Transition t, int n);
  std::vector<TransformedTransition> drain(int n);

  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }
  double gamma() const { return gamma_; }

 private:
  TransformedTransition emit_front(int n);

  int capacity_;
  double gamma_;
  std::deque<Transition> entries_;
};

}  // namespace lnss
