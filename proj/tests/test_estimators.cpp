#include <doctest.h>

#include <cmath>
#include <vector>

#include "lnss/estimators.hpp"
#include "lnss/rng.hpp"

using namespace lnss;

namespace {

std::vector<Transition> scripted_episode(const std::vector<double>& rewards,
                                         bool ends_terminal = false) {
  std::vector<Transition> episode;
  for (std::size_t k = 0; k < rewards.size(); ++k) {
    Transition t;
    t.state = {static_cast<double>(k)};
    t.action = {0.5};
    t.reward = rewards[k];
    t.next_state = {static_cast<double>(k + 1)};
    t.terminal = ends_terminal && k + 1 == rewards.size();
    episode.push_back(std::move(t));
  }
  return episode;
}

}  // namespace

TEST_CASE("estimator kind validation and labels") {
  CHECK_THROWS(EstimatorKind::n_step(0));
  CHECK_THROWS(EstimatorKind::lnss(0, 1));
  CHECK_THROWS(EstimatorKind::lnss(5, 0));
  CHECK_THROWS_WITH(EstimatorKind::parse("bogus", 1, 1), "unknown estimator: bogus");
  CHECK(EstimatorKind::parse("lnss", 50, 1).label() == "lnss-N50n1");
  CHECK(EstimatorKind::parse("single", 1, 1).label() == "single");
}

TEST_CASE("nstep_return and mean_reward hand values") {
  CHECK(nstep_return(std::vector<double>{1, 2, 3}, 0.5) == doctest::Approx(2.75).epsilon(1e-15));
  CHECK(nstep_return(std::vector<double>{4.2}, 0.9) == 4.2);
  CHECK(nstep_return(std::vector<double>{0, 0, 0, 0, 0}, 0.7) == 0.0);
  CHECK(mean_reward(std::vector<double>{1, 2, 3}) == 2.0);
  CHECK(mean_reward(std::vector<double>{0, 1}) == 0.5);
  CHECK_THROWS(mean_reward(std::vector<double>{}));
}

TEST_CASE("single step stream is the identity") {
  const auto episode = scripted_episode({0.5, -1.0, 2.0}, true);
  const auto out = stream_estimator(EstimatorKind::single_step(), episode, 0.99);
  REQUIRE(out.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(out[k].state == episode[k].state);
    CHECK(out[k].action == episode[k].action);
    CHECK(out[k].surrogate_reward == episode[k].reward);
    CHECK(out[k].bootstrap_state == episode[k].next_state);
    CHECK(out[k].bootstrap_gap == 1);
    CHECK(out[k].bootstrap_terminal == episode[k].terminal);
  }
}

TEST_CASE("nstep stream with tail truncation") {
  const auto episode = scripted_episode({1, 1, 1});
  const auto out = stream_estimator(EstimatorKind::n_step(2), episode, 0.5);
  REQUIRE(out.size() == 3);
  CHECK(out[0].surrogate_reward == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(out[1].surrogate_reward == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(out[2].surrogate_reward == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(out[0].bootstrap_gap == 2);
  CHECK(out[1].bootstrap_gap == 2);
  CHECK(out[2].bootstrap_gap == 1);
  CHECK(out[0].bootstrap_state == std::vector<double>{2.0});
  CHECK(out[2].bootstrap_state == std::vector<double>{3.0});
}

TEST_CASE("mean reward stream averages the forward window") {
  const auto episode = scripted_episode({3, 0, 0, 6});
  const auto out = stream_estimator(EstimatorKind::mean_reward(3), episode, 0.99);
  REQUIRE(out.size() == 4);
  CHECK(out[0].surrogate_reward == doctest::Approx(1.0).epsilon(1e-15));  // (3+0+0)/3
  CHECK(out[1].surrogate_reward == doctest::Approx(2.0).epsilon(1e-15));  // (0+0+6)/3
  CHECK(out[2].surrogate_reward == doctest::Approx(3.0).epsilon(1e-15));  // (0+6)/2 tail
  CHECK(out[3].surrogate_reward == doctest::Approx(6.0).epsilon(1e-15));  // last alone
  for (const auto& t : out) CHECK(t.bootstrap_gap == 1);  // single-step Bellman update
  CHECK(out[0].bootstrap_state == std::vector<double>{1.0});
}

TEST_CASE("lnss stream delegates to the surrogate window") {
  const auto episode = scripted_episode({1, 2, 3});
  const auto out = stream_estimator(EstimatorKind::lnss(3, 1), episode, 0.5);
  REQUIRE(out.size() == 3);
  CHECK(out[0].surrogate_reward == doctest::Approx(2.75 * 4.0 / 7.0).epsilon(1e-15));
}

TEST_CASE("constant-reward emissions per estimator") {
  const double c = 1.7, gamma = 0.9;
  const auto episode = scripted_episode(std::vector<double>(20, c));
  const int n = 4;

  const auto single = stream_estimator(EstimatorKind::single_step(), episode, gamma);
  const auto meanr = stream_estimator(EstimatorKind::mean_reward(n), episode, gamma);
  const auto lnss_full = stream_estimator(EstimatorKind::lnss(n, 1), episode, gamma);
  const auto nstep = stream_estimator(EstimatorKind::n_step(n), episode, gamma);

  const double nstep_expected = c * (1.0 - std::pow(gamma, n)) / (1.0 - gamma);
  for (std::size_t k = 0; k + n <= episode.size(); ++k) {  // full windows only
    CHECK(single[k].surrogate_reward == c);
    CHECK(meanr[k].surrogate_reward == doctest::Approx(c).epsilon(1e-15));
    CHECK(lnss_full[k].surrogate_reward == doctest::Approx(c).epsilon(1e-13));
    CHECK(nstep[k].surrogate_reward == doctest::Approx(nstep_expected).epsilon(1e-13));
  }
}

TEST_CASE("every estimator emits one transition per raw step") {
  Rng rng(5);
  std::uniform_real_distribution<double> reward(-1.0, 1.0);
  for (int episode_len : {1, 2, 7, 50, 211}) {
    std::vector<double> rewards(episode_len);
    for (double& r : rewards) r = reward(rng);
    const auto episode = scripted_episode(rewards);
    for (const EstimatorKind kind :
         {EstimatorKind::single_step(), EstimatorKind::n_step(5), EstimatorKind::mean_reward(8),
          EstimatorKind::lnss(20, 1), EstimatorKind::lnss(5, 5)}) {
      const auto out = stream_estimator(kind, episode, 0.99);
      REQUIRE(out.size() == episode.size());
      for (std::size_t k = 0; k < out.size(); ++k) {
        CHECK(out[k].state == episode[k].state);
        CHECK(out[k].action == episode[k].action);
        CHECK(out[k].bootstrap_gap >= 1);
        CHECK(out[k].bootstrap_gap <= kind.bootstrap_steps);
      }
    }
  }
}
