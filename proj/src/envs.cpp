#include "lnss/envs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lnss/numeric.hpp"

namespace lnss {

namespace {

constexpr double kDt = 0.05;

void check_action_dim(std::span<const double> action, int dim) {
  if (static_cast<int>(action.size()) != dim)
    throw std::invalid_argument("action dimension mismatch");
}

}  // namespace

int chain_next(int index, int length) { return (index + 1) % length; }

PointMassState pointmass_dynamics(const PointMassState& s, std::span<const double> accel) {
  PointMassState next;
  for (int i = 0; i < 2; ++i) {
    const double a = clip(accel[i], -1.0, 1.0);
    next.vel[i] = clip(s.vel[i] + a * kDt, -1.0, 1.0);
    next.pos[i] = clip(s.pos[i] + next.vel[i] * kDt, -1.0, 1.0);
  }
  return next;
}

double pointmass_reward(const PointMassState& s) {
  constexpr double kGoalX = 0.7, kGoalY = 0.7;
  const double dx = s.pos[0] - kGoalX;
  const double dy = s.pos[1] - kGoalY;
  const double dist = std::sqrt(dx * dx + dy * dy);
  return std::max(0.0, 1.0 - dist / (2.0 * std::numbers::sqrt2));
}

PendulumState pendulum_dynamics(const PendulumState& s, double torque) {
  constexpr double kGravity = 10.0;  // g/l with m = l = 1
  const double u = clip(torque, -2.0, 2.0);
  const double theta_ddot = kGravity * std::sin(s.theta) + u;
  PendulumState next;
  next.theta_dot = clip(s.theta_dot + theta_ddot * kDt, -8.0, 8.0);
  next.theta = s.theta + next.theta_dot * kDt;
  return next;
}

double pendulum_reward(double theta) {
  return (std::cos(theta - std::numbers::pi) + 1.0) / 2.0;
}

std::vector<double> pendulum_observation(const PendulumState& s) {
  return {std::cos(s.theta), std::sin(s.theta), s.theta_dot};
}

StepResult pendulum_step(std::span<const double> obs, double torque) {
  if (obs.size() != 3) throw std::invalid_argument("pendulum observation must be 3-dimensional");
  const PendulumState s{std::atan2(obs[1], obs[0]), obs[2]};
  const PendulumState next = pendulum_dynamics(s, torque);
  StepResult r;
  r.next_state = pendulum_observation(next);
  r.reward = pendulum_reward(next.theta);
  return r;
}

namespace {

class ChainEnv final : public Env {
 public:
  ChainEnv(const ChainOptions& opts, std::uint64_t seed) : opts_(opts) {
    if (opts.length < 1) throw std::invalid_argument("chain length must be >= 1");
    spec_.name = "chain";
    spec_.state_dim = 1;
    spec_.action_dim = 1;
    spec_.max_steps = opts.max_steps;
    spec_.reward_min = 0.0;
    spec_.reward_max = opts.dist.max_reward();
    reseed(seed);
  }

  const EnvSpec& spec() const override { return spec_; }

  void reseed(std::uint64_t seed) override { rng_ = make_rng(seed, rng_stream::kEnv); }

  std::vector<double> reset() override {
    index_ = 0;
    steps_ = 0;
    return observation();
  }

  StepResult step(std::span<const double> action) override {
    check_action_dim(action, 1);
    index_ = chain_next(index_, opts_.length);
    ++steps_;
    StepResult r;
    r.next_state = observation();
    r.reward = opts_.dist.sample(rng_);
    r.truncated = steps_ >= opts_.max_steps;
    return r;
  }

 private:
  std::vector<double> observation() const { return {static_cast<double>(index_)}; }

  ChainOptions opts_;
  EnvSpec spec_;
  Rng rng_;
  int index_ = 0;
  int steps_ = 0;
};

class PointMassEnv final : public Env {
 public:
  PointMassEnv(const PointMassOptions& opts, std::uint64_t seed) : opts_(opts) {
    spec_.name = "pointmass";
    spec_.state_dim = 4;
    spec_.action_dim = 2;
    spec_.max_steps = opts.max_steps;
    reseed(seed);
  }

  const EnvSpec& spec() const override { return spec_; }

  void reseed(std::uint64_t seed) override { rng_ = make_rng(seed, rng_stream::kEnv); }

  std::vector<double> reset() override {
    std::uniform_real_distribution<double> arena(-1.0, 1.0);
    state_.pos = {arena(rng_), arena(rng_)};
    state_.vel = {0.0, 0.0};
    steps_ = 0;
    return observation();
  }

  StepResult step(std::span<const double> action) override {
    check_action_dim(action, 2);
    state_ = pointmass_dynamics(state_, action);
    ++steps_;
    StepResult r;
    r.next_state = observation();
    r.reward = pointmass_reward(state_);
    if (opts_.terminate_at_goal) {
      const double dx = state_.pos[0] - 0.7, dy = state_.pos[1] - 0.7;
      r.terminal = std::sqrt(dx * dx + dy * dy) < 0.05;
    }
    r.truncated = !r.terminal && steps_ >= opts_.max_steps;
    return r;
  }

 private:
  std::vector<double> observation() const {
    return {state_.pos[0], state_.pos[1], state_.vel[0], state_.vel[1]};
  }

  PointMassOptions opts_;
  EnvSpec spec_;
  Rng rng_;
  PointMassState state_;
  int steps_ = 0;
};

class PendulumEnv final : public Env {
 public:
  PendulumEnv(const PendulumOptions& opts, std::uint64_t seed) : opts_(opts) {
    spec_.name = "pendulum";
    spec_.state_dim = 3;
    spec_.action_dim = 1;
    spec_.max_steps = opts.max_steps;
    reseed(seed);
  }

  const EnvSpec& spec() const override { return spec_; }

  void reseed(std::uint64_t seed) override { rng_ = make_rng(seed, rng_stream::kEnv); }

  std::vector<double> reset() override {
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    state_.theta = angle(rng_);
    state_.theta_dot = 0.0;
    steps_ = 0;
    return pendulum_observation(state_);
  }

  StepResult step(std::span<const double> action) override {
    check_action_dim(action, 1);
    const double torque = 2.0 * clip(action[0], -1.0, 1.0);
    state_ = pendulum_dynamics(state_, torque);
    ++steps_;
    StepResult r;
    r.next_state = pendulum_observation(state_);
    r.reward = pendulum_reward(state_.theta);
    r.truncated = steps_ >= opts_.max_steps;
    return r;
  }

 private:
  PendulumOptions opts_;
  EnvSpec spec_;
  Rng rng_;
  PendulumState state_;
  int steps_ = 0;
};

}  // namespace

std::unique_ptr<Env> make_chain(const ChainOptions& opts, std::uint64_t seed) {
  return std::make_unique<ChainEnv>(opts, seed);
}

std::unique_ptr<Env> make_pointmass(const PointMassOptions& opts, std::uint64_t seed) {
  return std::make_unique<PointMassEnv>(opts, seed);
}

std::unique_ptr<Env> make_pendulum(const PendulumOptions& opts, std::uint64_t seed) {
  return std::make_unique<PendulumEnv>(opts, seed);
}

std::unique_ptr<Env> make_env(const std::string& name, const RewardDist& chain_dist,
                              std::uint64_t seed) {
  if (name == "chain") {
    ChainOptions opts;
    opts.dist = chain_dist;
    return make_chain(opts, seed);
  }
  if (name == "pointmass") return make_pointmass({}, seed);
  if (name == "pendulum") return make_pendulum({}, seed);
  throw std::invalid_argument("unknown environment: " + name);
}

}  // namespace lnss
