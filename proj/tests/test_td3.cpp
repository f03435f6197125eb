#include <doctest.h>

#include <cmath>
#include <vector>

#include "lnss/numeric.hpp"
#include "lnss/td3.hpp"

using namespace lnss;

namespace {

TrainBatch single_row_batch(std::vector<double> state, std::vector<double> action, double reward,
                            std::vector<double> bootstrap, bool terminal, int gap) {
  TrainBatch b;
  b.size = 1;
  b.state_dim = state.size();
  b.action_dim = action.size();
  b.states = std::move(state);
  b.actions = std::move(action);
  b.rewards = {reward};
  b.bootstrap_states = std::move(bootstrap);
  b.bootstrap_terminal = {static_cast<unsigned char>(terminal ? 1 : 0)};
  b.bootstrap_gap = {gap};
  return b;
}

TrainBatch random_batch(std::size_t size, std::size_t state_dim, std::size_t action_dim,
                        Rng& rng) {
  TrainBatch b;
  b.size = size;
  b.state_dim = state_dim;
  b.action_dim = action_dim;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  b.states.resize(size * state_dim);
  b.actions.resize(size * action_dim);
  b.bootstrap_states.resize(size * state_dim);
  b.rewards.resize(size);
  b.bootstrap_terminal.assign(size, 0);
  b.bootstrap_gap.assign(size, 1);
  for (double& v : b.states) v = u(rng);
  for (double& v : b.actions) v = u(rng);
  for (double& v : b.bootstrap_states) v = u(rng);
  for (double& v : b.rewards) v = 0.5 * u(rng) + 0.5;
  return b;
}

// critic wired to Q(s, a) = a0 regardless of state (see the neural probe).
void wire_first_action_critic(MlpParams& critic, std::size_t state_dim) {
  critic.zero();
  critic.w[0](0, state_dim) = 1.0;
  critic.w[0](1, state_dim) = -1.0;
  critic.w[1](0, 0) = 1.0;
  critic.w[1](1, 1) = 1.0;
  critic.w[2](0, 0) = 1.0;
  critic.w[2](0, 1) = -1.0;
}

}  // namespace

TEST_CASE("terminal transitions drop the bootstrap") {
  Rng rng(0);
  Td3Agent agent(2, 1, 8, Td3Options{}, rng);
  const TrainBatch b = single_row_batch({0.1, 0.2}, {0.3}, 1.7, {0.4, 0.5}, true, 1);
  Rng noise(1);
  const std::vector<double> y = agent.compute_target(b, noise);
  CHECK(y[0] == 1.7);
}

TEST_CASE("zero critics make the target the reward") {
  Rng rng(0);
  Td3Agent agent(2, 1, 8, Td3Options{}, rng);
  agent.critic_target(1).zero();
  agent.critic_target(2).zero();
  const TrainBatch b = single_row_batch({0.1, 0.2}, {0.3}, 0.9, {0.4, 0.5}, false, 1);
  Rng noise(1);
  CHECK(agent.compute_target(b, noise)[0] == doctest::Approx(0.9).epsilon(1e-15));
}

TEST_CASE("bootstrap gap sets the discount exponent") {
  Rng rng(0);
  Td3Options opts;
  opts.policy_noise = 0.0;  // deterministic target action
  Td3Agent agent(2, 1, 8, opts, rng);
  // constant critic targets: Q = c via bias on the last layer
  agent.critic_target(1).zero();
  agent.critic_target(2).zero();
  agent.critic_target(1).b[2][0] = 2.0;
  agent.critic_target(2).b[2][0] = 3.0;  // min picks 2.0
  Rng noise(1);
  for (int gap : {1, 3, 5}) {
    const TrainBatch b = single_row_batch({0.1, 0.2}, {0.3}, 1.0, {0.4, 0.5}, false, gap);
    const double expected = 1.0 + std::pow(0.99, gap) * 2.0;
    CHECK(agent.compute_target(b, noise)[0] == doctest::Approx(expected).epsilon(1e-12));
  }
  // gap = 5 exponent spot value
  CHECK(pow_int(0.99, 5) == doctest::Approx(0.95099).epsilon(1e-5));
}

TEST_CASE("target uses the row-wise minimum of the two critics") {
  Rng rng(3);
  Td3Options opts;
  opts.policy_noise = 0.0;
  Td3Agent agent(2, 1, 8, opts, rng);
  wire_first_action_critic(agent.critic_target(1), 2);
  wire_first_action_critic(agent.critic_target(2), 2);
  // critic2 = a0 + 1 via output bias: min is critic1 when a0 < a0 + 1 always
  agent.critic_target(2).b[2][0] = 1.0;
  agent.actor_target().zero();  // pi_t = 0, so Q1t = 0, Q2t = 1

  const TrainBatch b = single_row_batch({0.1, 0.2}, {0.3}, 0.0, {0.4, 0.5}, false, 1);
  Rng noise(4);
  CHECK(agent.compute_target(b, noise)[0] == doctest::Approx(0.99 * 0.0).epsilon(1e-12));

  // flip: critic1 biased above critic2
  agent.critic_target(2).b[2][0] = 0.0;
  agent.critic_target(1).b[2][0] = 2.0;
  Rng noise2(4);
  CHECK(agent.compute_target(b, noise2)[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("target policy smoothing stays within bounds and clip") {
  Rng rng(5);
  Td3Agent agent(3, 2, 8, Td3Options{}, rng);
  wire_first_action_critic(agent.critic_target(1), 3);
  // big batch: actions after smoothing must stay in [-1, 1]; with the
  // critic reading a0 the target value stays within gamma * 1
  Rng batch_rng(6);
  TrainBatch b = random_batch(512, 3, 2, batch_rng);
  b.rewards.assign(512, 0.0);
  Rng noise(7);
  const std::vector<double> y = agent.compute_target(b, noise);
  for (double v : y) CHECK(std::abs(v) <= 0.99 + 1e-12);
}

TEST_CASE("critic update drives the TD error down on a frozen batch") {
  Rng rng(8);
  Td3Agent agent(3, 1, 16, Td3Options{}, rng);
  Rng batch_rng(9);
  const TrainBatch b = random_batch(32, 3, 1, batch_rng);
  Rng noise(10);
  const std::vector<double> y = agent.compute_target(b, noise);
  const double first = agent.critic_update(b, y);
  double after_100 = first;
  for (int i = 0; i < 100; ++i) after_100 = agent.critic_update(b, y);
  CHECK(after_100 < first);
  double last = after_100;
  for (int i = 0; i < 900; ++i) last = agent.critic_update(b, y);
  CHECK(last < 0.1 * first);
}

TEST_CASE("critic update is a no-op at a perfect fit") {
  Rng rng(11);
  Td3Agent agent(2, 1, 8, Td3Options{}, rng);
  agent.critic(1).zero();
  agent.critic(2).zero();
  const TrainBatch b = single_row_batch({0.1, 0.2}, {0.3}, 0.0, {0.4, 0.5}, true, 1);
  const std::vector<double> y{0.0};  // Q == y == 0 everywhere
  const MlpParams before1 = agent.critic(1);
  const double loss = agent.critic_update(b, y);
  CHECK(loss == 0.0);
  CHECK(agent.critic(1).w[0].data == before1.w[0].data);
  CHECK(agent.critic(1).b[2] == before1.b[2]);
}

TEST_CASE("actor update climbs a frozen critic") {
  Rng rng(12);
  Td3Options opts;
  opts.tau = 0.0;  // keep targets frozen for the probe
  Td3Agent agent(2, 1, 8, opts, rng);
  wire_first_action_critic(agent.critic(1), 2);

  Rng batch_rng(13);
  const TrainBatch b = random_batch(16, 2, 1, batch_rng);
  const auto mean_first_action = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < b.size; ++i)
      s += agent.select_action(std::span<const double>(b.states).subspan(i * 2, 2))[0];
    return s / static_cast<double>(b.size);
  };

  double prev = mean_first_action();
  double prev_objective = -1e9;
  for (int step = 0; step < 25; ++step) {
    const double objective = agent.actor_update(b);
    const double cur = mean_first_action();
    CHECK(cur > prev);  // strictly increasing toward the bound
    CHECK(cur <= 1.0);
    if (step > 0) CHECK(objective >= prev_objective);
    prev = cur;
    prev_objective = objective;
  }
}

TEST_CASE("tau zero keeps targets frozen through actor updates") {
  Rng rng(14);
  Td3Options opts;
  opts.tau = 0.0;
  Td3Agent agent(2, 1, 8, opts, rng);
  const MlpParams target_before = agent.actor_target();
  Rng batch_rng(15);
  const TrainBatch b = random_batch(8, 2, 1, batch_rng);
  agent.actor_update(b);
  agent.actor_update(b);
  CHECK(agent.actor_target().w[0].data == target_before.w[0].data);
}

TEST_CASE("delayed policy updates follow the counter") {
  Rng rng(16);
  Td3Agent agent(2, 1, 8, Td3Options{}, rng);
  Rng batch_rng(17);
  const TrainBatch b = random_batch(8, 2, 1, batch_rng);
  Rng noise(18);
  int actor_updates = 0;
  for (int i = 0; i < 10; ++i) {
    if (agent.train_step(b, noise).actor_updated) ++actor_updates;
  }
  CHECK(actor_updates == 5);
  CHECK(agent.update_count() == 10);
}

TEST_CASE("select_action determinism and bounds") {
  Rng rng(19);
  Td3Agent agent(3, 2, 8, Td3Options{}, rng);
  const std::vector<double> state{0.2, -0.4, 0.9};
  CHECK(agent.select_action(state) == agent.select_action(state));

  Rng e1(20), e2(20);
  CHECK(agent.select_action(state, e1) == agent.select_action(state, e2));

  Rng noisy(21);
  for (int i = 0; i < 500; ++i) {
    for (double a : agent.select_action(state, noisy)) {
      CHECK(a <= 1.0);
      CHECK(a >= -1.0);
    }
  }
}

TEST_CASE("divergent batches raise the divergence error") {
  Rng rng(22);
  Td3Agent agent(2, 1, 8, Td3Options{}, rng);
  TrainBatch b = single_row_batch({0.1, 0.2}, {0.3}, 1.0, {0.4, 0.5}, false, 1);
  b.rewards[0] = std::numeric_limits<double>::infinity();
  Rng noise(23);
  CHECK_THROWS_WITH(agent.train_step(b, noise), "divergence detected");
}
