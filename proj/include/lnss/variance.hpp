#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lnss/rng.hpp"

namespace lnss {

// Variance discount factor of the surrogate reward:
//   psi(gamma, N) = ((gamma-1)/(gamma^N-1))^2 * ((gamma^2N - 1)/(gamma^2 - 1)).
// psi(gamma, 1) = 1 exactly; strictly decreasing in N; tends to
// (1-gamma)/(1+gamma) as N grows.
double psi(double gamma, int big_n);

// Algebraically identical factored form ((gamma-1)/(gamma+1)) *
// (1 + 2/(gamma^N - 1)); kept as an independent route for cross-checks.
double psi_factored(double gamma, int big_n);

// Large-N limit (1-gamma)/(1+gamma).
double psi_limit(double gamma);

struct PsiPoint {
  int n = 1;
  double value = 1.0;
};

struct PsiCurve {
  double gamma = 0.99;
  std::vector<PsiPoint> points;
};

PsiCurve psi_curve(double gamma, int n_max);

// Upper bound on var[Q_i] for i = 1..iterations:
//   bound[i-1] = psi_factor * Sum_{t=1}^{i} gamma^{2(t-1)} * b.
// psi_factor = 1 for the single-step recursion, psi(gamma, N) for LNSS.
std::vector<double> variance_bound(double gamma, double b, int iterations, double psi_factor);

// IID stage-reward distributions for the chain environment and the
// Q-iteration study. variance() is exact and serves as the bound constant B.
struct RewardDist {
  enum class Kind { Uniform01, Constant, Bernoulli };
  Kind kind = Kind::Uniform01;
  double param = 0.0;  // c for Constant, p for Bernoulli

  double sample(Rng& rng) const;
  double variance() const;
  double max_reward() const;

  // "uniform", "const:<c>", "bern:<p>"
  static RewardDist parse(const std::string& text);
  std::string to_string() const;
};

// Cross-replicate variance of a Q recursion per iteration, next to its
// analytic bound. std_error is the (normal-approximation) standard error
// of the variance estimate, used for bound checks with finite replicates.
struct VarianceTrace {
  std::vector<double> empirical_var;
  std::vector<double> bound;
  std::vector<double> std_error;
};

struct QIterationStudy {
  VarianceTrace single_step;
  VarianceTrace lnss;
};

// Runs `trials` independent replicates of the two scalar recursions
//   Q_{i+1} = r + gamma Q_i           (one fresh reward per step)
//   S_{i+1} = r' + gamma S_i          (r' from N fresh IID rewards)
// and records the per-iteration variance across replicates. Fresh rewards
// per step keep the summands IID, matching the covariance cancellations
// the bounds are built on. Deterministic given the seed.
QIterationStudy simulate_q_iteration(double gamma, int big_n, int trials, int iterations,
                                     const RewardDist& dist, std::uint64_t seed);

// std/|mean| with population std; the stability metric over final scores.
double coefficient_of_variation(std::span<const double> values);

// 100 * std/|mean| over Q values visited during an evaluation phase.
double q_std_percentage(std::span<const double> q_values);

}  // namespace lnss
