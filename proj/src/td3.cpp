#include "lnss/td3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lnss/numeric.hpp"

namespace lnss {

Td3Agent::Td3Agent(std::size_t state_dim, std::size_t action_dim, std::size_t hidden,
                   const Td3Options& opts, Rng& init_rng)
    : state_dim_(state_dim), action_dim_(action_dim), opts_(opts) {
  actor_ = make_mlp(state_dim, hidden, action_dim, OutputKind::TanhScaled, opts.action_bound,
                    init_rng);
  critic1_ = make_mlp(state_dim + action_dim, hidden, 1, OutputKind::Linear, 1.0, init_rng);
  critic2_ = make_mlp(state_dim + action_dim, hidden, 1, OutputKind::Linear, 1.0, init_rng);
  actor_target_ = actor_;
  critic1_target_ = critic1_;
  critic2_target_ = critic2_;
  actor_adam_ = make_adam(actor_, opts.learning_rate);
  critic1_adam_ = make_adam(critic1_, opts.learning_rate);
  critic2_adam_ = make_adam(critic2_, opts.learning_rate);
}

std::vector<double> Td3Agent::select_action(std::span<const double> state) const {
  return actor_forward(actor_, state);
}

std::vector<double> Td3Agent::select_action(std::span<const double> state, Rng& rng) const {
  std::vector<double> a = actor_forward(actor_, state);
  if (opts_.exploration_noise > 0.0) {
    std::normal_distribution<double> gauss(0.0, opts_.exploration_noise * opts_.action_bound);
    for (double& x : a) x = clip(x + gauss(rng), -opts_.action_bound, opts_.action_bound);
  }
  return a;
}

Matrix Td3Agent::batch_state_matrix(const TrainBatch& batch) const {
  Matrix s(batch.size, batch.state_dim);
  s.data = batch.states;
  return s;
}

Matrix Td3Agent::joined_inputs(const Matrix& states, const Matrix& actions) const {
  Matrix x(states.rows, states.cols + actions.cols);
  for (std::size_t i = 0; i < states.rows; ++i) {
    std::copy(states.row(i).begin(), states.row(i).end(), x.row(i).begin());
    std::copy(actions.row(i).begin(), actions.row(i).end(),
              x.row(i).begin() + states.cols);
  }
  return x;
}

std::vector<double> Td3Agent::compute_target(const TrainBatch& batch, Rng& noise_rng) const {
  const double bound = opts_.action_bound;

  Matrix next_states(batch.size, batch.state_dim);
  next_states.data = batch.bootstrap_states;

  Matrix next_actions = mlp_forward(actor_target_, next_states);
  if (opts_.policy_noise > 0.0) {
    std::normal_distribution<double> noise(0.0, opts_.policy_noise * bound);
    for (double& a : next_actions.data) {
      const double eps =
          clip(noise(noise_rng), -opts_.noise_clip * bound, opts_.noise_clip * bound);
      a = clip(a + eps, -bound, bound);
    }
  }

  const Matrix x = joined_inputs(next_states, next_actions);
  const Matrix q1 = mlp_forward(critic1_target_, x);
  const Matrix q2 = mlp_forward(critic2_target_, x);

  std::vector<double> y(batch.size);
  for (std::size_t i = 0; i < batch.size; ++i) {
    const double q_min = std::min(q1.data[i], q2.data[i]);
    const double discount =
        batch.bootstrap_terminal[i] ? 0.0 : pow_int(opts_.gamma, batch.bootstrap_gap[i]);
    y[i] = batch.rewards[i] + discount * q_min;
  }
  return y;
}

double Td3Agent::critic_update(const TrainBatch& batch, const std::vector<double>& targets) {
  if (targets.size() != batch.size) throw std::invalid_argument("target size mismatch");

  Matrix states = batch_state_matrix(batch);
  Matrix actions(batch.size, batch.action_dim);
  actions.data = batch.actions;
  const Matrix x = joined_inputs(states, actions);
  const double inv_b = 1.0 / static_cast<double>(batch.size);

  double loss = 0.0;
  MlpParams* critics[2] = {&critic1_, &critic2_};
  AdamState* adams[2] = {&critic1_adam_, &critic2_adam_};
  for (int j = 0; j < 2; ++j) {
    MlpCache cache;
    const Matrix q = mlp_forward(*critics[j], x, &cache);
    Matrix dy(batch.size, 1);
    double mse = 0.0;
    for (std::size_t i = 0; i < batch.size; ++i) {
      const double err = q.data[i] - targets[i];
      mse += err * err;
      dy.data[i] = 2.0 * inv_b * err;
    }
    mse *= inv_b;
    loss += 0.5 * mse;

    TensorSet grads = TensorSet::zeros_like(*critics[j]);
    mlp_backward(*critics[j], cache, dy, grads);
    adam_step(*critics[j], grads, *adams[j]);
  }

  if (!std::isfinite(loss)) throw std::runtime_error("divergence detected");
  return loss;
}

double Td3Agent::actor_update(const TrainBatch& batch) {
  Matrix states = batch_state_matrix(batch);

  MlpCache actor_cache;
  const Matrix pi = mlp_forward(actor_, states, &actor_cache);
  const Matrix x = joined_inputs(states, pi);

  MlpCache critic_cache;
  const Matrix q = mlp_forward(critic1_, x, &critic_cache);

  const double inv_b = 1.0 / static_cast<double>(batch.size);
  double objective = 0.0;
  for (double v : q.data) objective += v;
  objective *= inv_b;

  // Ascent on mean Q1: minimize -mean(q). The critic is only a conduit;
  // its own gradients are discarded.
  Matrix dq(batch.size, 1);
  for (double& v : dq.data) v = -inv_b;

  TensorSet critic_scratch = TensorSet::zeros_like(critic1_);
  Matrix dx;
  mlp_backward(critic1_, critic_cache, dq, critic_scratch, &dx);

  Matrix d_action(batch.size, action_dim_);
  for (std::size_t i = 0; i < batch.size; ++i) {
    std::copy(dx.row(i).begin() + state_dim_, dx.row(i).end(), d_action.row(i).begin());
  }

  TensorSet actor_grads = TensorSet::zeros_like(actor_);
  mlp_backward(actor_, actor_cache, d_action, actor_grads);
  adam_step(actor_, actor_grads, actor_adam_);

  soft_update(actor_target_, actor_, opts_.tau);
  soft_update(critic1_target_, critic1_, opts_.tau);
  soft_update(critic2_target_, critic2_, opts_.tau);
  return objective;
}

Td3Agent::StepDiag Td3Agent::train_step(const TrainBatch& batch, Rng& noise_rng) {
  ++update_count_;
  StepDiag diag;
  const std::vector<double> y = compute_target(batch, noise_rng);
  diag.critic_loss = critic_update(batch, y);
  if (update_count_ % opts_.policy_delay == 0) {
    diag.actor_objective = actor_update(batch);
    diag.actor_updated = true;
  }
  return diag;
}

double Td3Agent::q1(std::span<const double> state, std::span<const double> action) const {
  return critic_forward(critic1_, state, action);
}

}  // namespace lnss
