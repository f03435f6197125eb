#pragma once

#include <vector>

namespace lnss {

// One raw environment step. `terminal` means a true MDP terminal; episodes
// that end by time limit keep terminal = false (the TD target still
// bootstraps through a time limit).
struct Transition {
  std::vector<double> state;
  std::vector<double> action;  // components in [-1, 1]
  double reward = 0.0;
  std::vector<double> next_state;
  bool terminal = false;
};

// A buffer-ready transition: the head (state, action) of a window paired
// with its surrogate reward and the state the TD target bootstraps from.
// bootstrap_gap is the realized step distance between state and
// bootstrap_state; near episode end it shrinks below the configured n and
// the agent discounts by gamma^bootstrap_gap.
struct TransformedTransition {
  std::vector<double> state;
  std::vector<double> action;
  double surrogate_reward = 0.0;
  std::vector<double> bootstrap_state;
  bool bootstrap_terminal = false;
  int bootstrap_gap = 1;
};

}  // namespace lnss
