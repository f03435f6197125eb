#include <doctest.h>

#include <cmath>
#include <vector>

#include "lnss/numeric.hpp"
#include "lnss/variance.hpp"

using namespace lnss;

TEST_CASE("psi is exactly one at N = 1") {
  for (double gamma : {0.5, 0.9, 0.99, 0.999}) CHECK(psi(gamma, 1) == 1.0);
}

TEST_CASE("the two algebraic psi forms agree") {
  for (double gamma : {0.5, 0.9, 0.99, 0.999}) {
    for (int n = 1; n <= 1000; ++n) {
      const double a = psi(gamma, n);
      const double b = psi_factored(gamma, n);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)));
    }
  }
}

TEST_CASE("psi decreases strictly and approaches its limit") {
  const double gamma = 0.99;
  double prev = psi(gamma, 1);
  for (int n = 2; n <= 1000; ++n) {
    const double cur = psi(gamma, n);
    CHECK(cur < prev);
    CHECK(cur > psi_limit(gamma));
    prev = cur;
  }
  CHECK(psi_limit(0.99) == doctest::Approx(0.00502512).epsilon(1e-6));
  CHECK(std::abs(psi(0.99, 10000) - psi_limit(0.99)) <= 1e-9);
  CHECK(psi(0.99, 100) == doctest::Approx(0.010828).epsilon(1e-4));
}

TEST_CASE("psi rejects bad arguments") {
  CHECK_THROWS_WITH(psi(1.0, 5), "invalid discount");
  CHECK_THROWS(psi(0.9, 0));
}

TEST_CASE("psi_curve spans 1..n_max") {
  const PsiCurve curve = psi_curve(0.9, 50);
  REQUIRE(curve.points.size() == 50);
  CHECK(curve.points.front().n == 1);
  CHECK(curve.points.front().value == 1.0);
  CHECK(curve.points.back().n == 50);
}

TEST_CASE("variance_bound hand values") {
  CHECK(variance_bound(0.99, 1.0 / 12.0, 1, 1.0)[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  const auto bounds = variance_bound(0.5, 1.0, 3, 1.0);
  CHECK(bounds[2] == doctest::Approx(1.3125).epsilon(1e-15));
  for (double b : variance_bound(0.9, 0.0, 10, 1.0)) CHECK(b == 0.0);
  CHECK_THROWS(variance_bound(0.9, -1.0, 3, 1.0));

  // bounds are non-decreasing in the iteration index
  const auto long_bounds = variance_bound(0.99, 1.0 / 12.0, 200, 0.5);
  for (std::size_t i = 1; i < long_bounds.size(); ++i) CHECK(long_bounds[i] >= long_bounds[i - 1]);
}

TEST_CASE("reward distribution parsing and moments") {
  CHECK(RewardDist::parse("uniform").variance() == doctest::Approx(1.0 / 12.0));
  CHECK(RewardDist::parse("const:2.5").variance() == 0.0);
  CHECK(RewardDist::parse("const:2.5").param == 2.5);
  CHECK(RewardDist::parse("bern:0.25").variance() == doctest::Approx(0.1875));
  CHECK_THROWS(RewardDist::parse("bern:1.5"));
  CHECK_THROWS(RewardDist::parse("gauss"));
  CHECK(RewardDist::parse("uniform").to_string() == "uniform");

  Rng rng(1);
  const RewardDist constant{RewardDist::Kind::Constant, 2.0};
  for (int i = 0; i < 100; ++i) CHECK(constant.sample(rng) == 2.0);
}

TEST_CASE("simulate_q_iteration rejects too few replicates") {
  CHECK_THROWS_WITH(simulate_q_iteration(0.99, 5, 99, 10, RewardDist{}, 0),
                    "insufficient replicates");
}

TEST_CASE("constant rewards give zero empirical variance") {
  const RewardDist constant{RewardDist::Kind::Constant, 1.0};
  const auto study = simulate_q_iteration(0.9, 10, 200, 50, constant, 7);
  for (double v : study.single_step.empirical_var) CHECK(v == 0.0);
  for (double v : study.lnss.empirical_var) CHECK(v == 0.0);
  for (double b : study.lnss.bound) CHECK(b == 0.0);
}

TEST_CASE("N = 1 surrogate recursion is statistically the single-step one") {
  const auto study = simulate_q_iteration(0.99, 1, 10000, 100, RewardDist{}, 3);
  const double v_single = study.single_step.empirical_var.back();
  const double v_lnss = study.lnss.empirical_var.back();
  CHECK(v_lnss / v_single == doctest::Approx(1.0).epsilon(0.15));
  // identical analytic bounds since psi(gamma, 1) = 1
  for (std::size_t i = 0; i < study.lnss.bound.size(); ++i)
    CHECK(study.lnss.bound[i] == study.single_step.bound[i]);
}

TEST_CASE("empirical variances stay under the analytic bounds") {
  const auto study = simulate_q_iteration(0.99, 50, 2000, 100, RewardDist{}, 11);
  for (std::size_t i = 0; i < study.single_step.empirical_var.size(); ++i) {
    CHECK(study.single_step.empirical_var[i] <=
          study.single_step.bound[i] + 3.0 * study.single_step.std_error[i]);
    CHECK(study.lnss.empirical_var[i] <= study.lnss.bound[i] + 3.0 * study.lnss.std_error[i]);
  }
}

TEST_CASE("first-iteration surrogate variance approaches psi * var[r]") {
  // var[r'] = psi * var[r] exactly for IID rewards; check the Monte-Carlo
  // estimate at i = 1 within sampling error.
  const int big_n = 20;
  const auto study = simulate_q_iteration(0.99, big_n, 20000, 1, RewardDist{}, 13);
  const double expected = psi(0.99, big_n) / 12.0;
  CHECK(study.lnss.empirical_var[0] == doctest::Approx(expected).epsilon(0.1));
}

TEST_CASE("same seed reproduces the study bit for bit") {
  const auto a = simulate_q_iteration(0.95, 10, 300, 20, RewardDist{}, 5);
  const auto b = simulate_q_iteration(0.95, 10, 300, 20, RewardDist{}, 5);
  CHECK(a.lnss.empirical_var == b.lnss.empirical_var);
  CHECK(a.single_step.empirical_var == b.single_step.empirical_var);
}

TEST_CASE("coefficient_of_variation") {
  CHECK(coefficient_of_variation(std::vector<double>{4.0, 4.0, 4.0}) == 0.0);
  CHECK(coefficient_of_variation(std::vector<double>{1.0, 3.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(coefficient_of_variation(std::vector<double>{2.0}) == 0.0);
  CHECK_THROWS_WITH(coefficient_of_variation(std::vector<double>{1.0, -1.0}), "CV undefined");
}

TEST_CASE("q_std_percentage") {
  CHECK(q_std_percentage(std::vector<double>{5, 5, 5, 5}) == 0.0);
  CHECK(q_std_percentage(std::vector<double>{1.0, 3.0}) == doctest::Approx(50.0).epsilon(1e-15));
  CHECK(q_std_percentage(std::vector<double>{-2.0, -2.0}) == 0.0);
}
