#pragma once

#include <deque>
#include <span>
#include <string>
#include <vector>

#include "lnss/surrogate.hpp"
#include "lnss/transition.hpp"

namespace lnss {

enum class EstimatorTag { SingleStep, NStep, MeanReward, Lnss };

// Which return estimator feeds the replay buffer. reward_steps is the
// window the reward is computed over (N for LNSS, n for NStep/MeanReward);
// bootstrap_steps is the n of the Q update.
struct EstimatorKind {
  EstimatorTag tag = EstimatorTag::SingleStep;
  int reward_steps = 1;
  int bootstrap_steps = 1;

  static EstimatorKind single_step();
  static EstimatorKind n_step(int n);
  static EstimatorKind mean_reward(int n);
  static EstimatorKind lnss(int big_n, int n);

  // "single", "nstep", "mean", "lnss" as used in configs and run labels.
  static EstimatorKind parse(const std::string& name, int big_n, int n);
  std::string label() const;  // e.g. "lnss-N50n1"
};

// Reward portion of the n-step return: Sum_{t=0}^{n-1} gamma^t r_t.
// The gamma^n bootstrap is added by the agent.
double nstep_return(std::span<const double> rewards, double gamma);

// Arithmetic mean of the window; used in a single-step Bellman update.
double mean_reward(std::span<const double> rewards);

// Streaming facade so the agent and harness are estimator-agnostic: raw
// transitions in, buffer-ready transitions out, one per raw step over a
// whole episode. Windowed kinds emit with a warm-up lag and flush the
// remainder on drain(), mirroring the surrogate window.
class EstimatorStream {
 public:
  EstimatorStream(EstimatorKind kind, double gamma);

  std::vector<TransformedTransition> push(Transition t);
  std::vector<TransformedTransition> drain();

  const EstimatorKind& kind() const { return kind_; }

 private:
  TransformedTransition emit_front();

  EstimatorKind kind_;
  double gamma_;
  SurrogateWindow window_;              // Lnss only
  std::deque<Transition> plain_window_; // NStep / MeanReward
};

// Batch form over a completed episode.
std::vector<TransformedTransition> stream_estimator(EstimatorKind kind,
                                                    std::span<const Transition> episode,
                                                    double gamma);

}  // namespace lnss
