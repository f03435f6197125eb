#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lnss/rng.hpp"
#include "lnss/variance.hpp"

namespace lnss {

struct EnvSpec {
  std::string name;
  int state_dim = 0;
  int action_dim = 0;
  int max_steps = 200;     // horizon T; episodes truncate here
  double reward_min = 0.0; // rewards stay within [reward_min, reward_max]
  double reward_max = 1.0;
};

struct StepResult {
  std::vector<double> next_state;
  double reward = 0.0;
  bool terminal = false;   // reached a terminal state
  bool truncated = false;  // hit the time limit; never both
};

// Seeded toy environment. Actions arrive in [-1,1]^A and are scaled to the
// native range internally. reseed() + reset() is the determinism contract:
// identical (seed, action sequence) gives bit-identical trajectories.
class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual void reseed(std::uint64_t seed) = 0;
  virtual std::vector<double> reset() = 0;
  virtual StepResult step(std::span<const double> action) = 0;
};

// --- dynamics kernels, exposed for direct tests ---

// Cyclic chain: next index is (i+1) mod length, reward drawn IID from dist.
// The actual IID-reward process behind the variance study's assumptions.
int chain_next(int index, int length);

// Point mass on [-1,1]^2 with velocity box [-1,1]^2, dt = 0.05.
// reward = max(0, 1 - ||p - goal|| / (2*sqrt(2))), goal = (0.7, 0.7).
struct PointMassState {
  std::array<double, 2> pos{0.0, 0.0};
  std::array<double, 2> vel{0.0, 0.0};
};
PointMassState pointmass_dynamics(const PointMassState& s, std::span<const double> accel);
double pointmass_reward(const PointMassState& s);

// Pendulum with th = 0 pointing down, th_ddot = (g/l) sin(th) + u,
// m = l = 1, g = 10, dt = 0.05, semi-implicit Euler, angular velocity
// clipped to [-8, 8], torque to [-2, 2]. The undamped dynamics oscillate
// around the upright position th = pi forever; the controller has to pump
// energy out to settle there. reward = (cos(th - pi) + 1)/2, 1 when
// upright and held.
struct PendulumState {
  double theta = 0.0;
  double theta_dot = 0.0;
};
PendulumState pendulum_dynamics(const PendulumState& s, double torque);
double pendulum_reward(double theta);
std::vector<double> pendulum_observation(const PendulumState& s);  // (cos, sin, theta_dot)

// One step from an observation triple (cos th, sin th, th_dot).
StepResult pendulum_step(std::span<const double> obs, double torque);

// --- constructors ---

struct ChainOptions {
  int length = 10;
  RewardDist dist{};
  int max_steps = 200;
};

struct PointMassOptions {
  int max_steps = 200;
  bool terminate_at_goal = false;  // terminal when within 0.05 of the goal
};

struct PendulumOptions {
  int max_steps = 200;
};

std::unique_ptr<Env> make_chain(const ChainOptions& opts, std::uint64_t seed);
std::unique_ptr<Env> make_pointmass(const PointMassOptions& opts, std::uint64_t seed);
std::unique_ptr<Env> make_pendulum(const PendulumOptions& opts, std::uint64_t seed);

// By config name: "chain", "pointmass", "pendulum". `chain_dist` only
// applies to the chain.
std::unique_ptr<Env> make_env(const std::string& name, const RewardDist& chain_dist,
                              std::uint64_t seed);

}  // namespace lnss
