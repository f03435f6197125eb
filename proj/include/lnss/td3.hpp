#pragma once

#include <span>
#include <vector>

#include "lnss/neural.hpp"
#include "lnss/replay.hpp"
#include "lnss/rng.hpp"

namespace lnss {

struct Td3Options {
  double gamma = 0.99;
  double tau = 0.005;
  double policy_noise = 0.2;  // target smoothing sigma, times action bound
  double noise_clip = 0.5;
  int policy_delay = 2;
  double exploration_noise = 0.1;
  double learning_rate = 1e-3;
  double action_bound = 1.0;
};

// TD3 learner: clipped double-Q targets, target policy smoothing, delayed
// policy updates. Estimator-agnostic: the batch carries the surrogate
// reward and its realized bootstrap gap, and the target discounts by
// gamma^gap.
class Td3Agent {
 public:
  Td3Agent(std::size_t state_dim, std::size_t action_dim, std::size_t hidden,
           const Td3Options& opts, Rng& init_rng);

  // Deterministic policy action.
  std::vector<double> select_action(std::span<const double> state) const;
  // Policy action plus clipped exploration noise N(0, sigma^2 bound^2).
  std::vector<double> select_action(std::span<const double> state, Rng& rng) const;

  // y_i = r_i + (1 - terminal_i) * gamma^{gap_i} * min_j Qt_j(s', a~),
  // a~ = clip(pi_t(s') + clip(eps, +-noise_clip), +-bound).
  std::vector<double> compute_target(const TrainBatch& batch, Rng& noise_rng) const;

  // One Adam step on each critic against the shared targets. Returns the
  // mean squared TD error.
  double critic_update(const TrainBatch& batch, const std::vector<double>& targets);

  // One Adam ascent step on mean Q1(s, pi(s)), then soft-updates all three
  // targets. Returns the objective value.
  double actor_update(const TrainBatch& batch);

  struct StepDiag {
    double critic_loss = 0.0;
    double actor_objective = 0.0;
    bool actor_updated = false;
  };
  // Critics every call; actor and targets every policy_delay-th call.
  StepDiag train_step(const TrainBatch& batch, Rng& noise_rng);

  double q1(std::span<const double> state, std::span<const double> action) const;

  long update_count() const { return update_count_; }
  const Td3Options& options() const { return opts_; }
  std::size_t state_dim() const { return state_dim_; }
  std::size_t action_dim() const { return action_dim_; }

  MlpParams& actor() { return actor_; }
  const MlpParams& actor() const { return actor_; }
  MlpParams& actor_target() { return actor_target_; }
  const MlpParams& actor_target() const { return actor_target_; }
  MlpParams& critic(int j) { return j == 1 ? critic1_ : critic2_; }
  const MlpParams& critic(int j) const { return j == 1 ? critic1_ : critic2_; }
  MlpParams& critic_target(int j) { return j == 1 ? critic1_target_ : critic2_target_; }
  const MlpParams& critic_target(int j) const { return j == 1 ? critic1_target_ : critic2_target_; }

 private:
  Matrix batch_state_matrix(const TrainBatch& batch) const;
  Matrix joined_inputs(const Matrix& states, const Matrix& actions) const;

  std::size_t state_dim_;
  std::size_t action_dim_;
  Td3Options opts_;

  MlpParams actor_, actor_target_;
  MlpParams critic1_, critic1_target_;
  MlpParams critic2_, critic2_target_;
  AdamState actor_adam_, critic1_adam_, critic2_adam_;

  long update_count_ = 0;
};

}  // namespace lnss
