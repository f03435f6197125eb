#include "lnss/variance.hpp"

#include <cmath>
#include <stdexcept>

#include "lnss/numeric.hpp"

namespace lnss {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("invalid discount");
}

void check_big_n(int big_n) {
  if (big_n < 1) throw std::invalid_argument("N must be >= 1");
}

}  // namespace

double psi(double gamma, int big_n) {
  check_gamma(gamma);
  check_big_n(big_n);
  const double gn = pow_int(gamma, big_n);
  const double g2n = gn * gn;
  const double norm = (gamma - 1.0) / (gn - 1.0);
  return norm * norm * ((g2n - 1.0) / (gamma * gamma - 1.0));
}

double psi_factored(double gamma, int big_n) {
  check_gamma(gamma);
  check_big_n(big_n);
  const double gn = pow_int(gamma, big_n);
  return ((gamma - 1.0) / (gamma + 1.0)) * (1.0 + 2.0 / (gn - 1.0));
}

double psi_limit(double gamma) {
  check_gamma(gamma);
  return (1.0 - gamma) / (1.0 + gamma);
}

PsiCurve psi_curve(double gamma, int n_max) {
  check_big_n(n_max);
  PsiCurve curve;
  curve.gamma = gamma;
  curve.points.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) curve.points.push_back({n, psi(gamma, n)});
  return curve;
}

std::vector<double> variance_bound(double gamma, double b, int iterations, double psi_factor) {
  check_gamma(gamma);
  if (b < 0.0) throw std::invalid_argument("negative variance bound");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  std::vector<double> bounds(iterations);
  double geom_sum = 0.0;
  double term = 1.0;  // gamma^{2(t-1)} at t = i
  for (int i = 0; i < iterations; ++i) {
    geom_sum += term;
    term *= gamma * gamma;
    bounds[i] = psi_factor * geom_sum * b;
  }
  return bounds;
}

double RewardDist::sample(Rng& rng) const {
  switch (kind) {
    case Kind::Uniform01:
      return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    case Kind::Constant:
      return param;
    case Kind::Bernoulli:
      return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < param ? 1.0 : 0.0;
  }
  return 0.0;
}

double RewardDist::variance() const {
  switch (kind) {
    case Kind::Uniform01: return 1.0 / 12.0;
    case Kind::Constant: return 0.0;
    case Kind::Bernoulli: return param * (1.0 - param);
  }
  return 0.0;
}

double RewardDist::max_reward() const {
  switch (kind) {
    case Kind::Uniform01: return 1.0;
    case Kind::Constant: return param;
    case Kind::Bernoulli: return 1.0;
  }
  return 0.0;
}

RewardDist RewardDist::parse(const std::string& text) {
  if (text == "uniform") return {Kind::Uniform01, 0.0};
  if (text.rfind("const:", 0) == 0) return {Kind::Constant, std::stod(text.substr(6))};
  if (text.rfind("bern:", 0) == 0) {
    const double p = std::stod(text.substr(5));
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("bernoulli p outside [0,1]");
    return {Kind::Bernoulli, p};
  }
  throw std::invalid_argument("unknown reward distribution: " + text);
}

std::string RewardDist::to_string() const {
  switch (kind) {
    case Kind::Uniform01: return "uniform";
    case Kind::Constant: return "const:" + format_double(param);
    case Kind::Bernoulli: return "bern:" + format_double(param);
  }
  return "uniform";
}

namespace {

// Per-iteration Welford accumulators across replicates.
struct MomentColumn {
  std::vector<double> mean;
  std::vector<double> m2;
  long count = 0;

  explicit MomentColumn(int iterations) : mean(iterations, 0.0), m2(iterations, 0.0) {}

  void update(int i, double x) {
    const double delta = x - mean[i];
    mean[i] += delta / static_cast<double>(count);
    m2[i] += delta * (x - mean[i]);
  }
};

}  // namespace

QIterationStudy simulate_q_iteration(double gamma, int big_n, int trials, int iterations,
                                     const RewardDist& dist, std::uint64_t seed) {
  check_gamma(gamma);
  check_big_n(big_n);
  if (trials < 100) throw std::invalid_argument("insufficient replicates");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");

  const double factor_num = gamma - 1.0;

  MomentColumn single(iterations);
  MomentColumn surrogate(iterations);

  for (int rep = 0; rep < trials; ++rep) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(rep));
    double q = 0.0;  // var[Q_0] = 0
    double s = 0.0;
    ++single.count;
    ++surrogate.count;
    for (int i = 0; i < iterations; ++i) {
      q = dist.sample(rng) + gamma * q;

      double g = 0.0;
      double gamma_pow = 1.0;
      for (int t = 0; t < big_n; ++t) {
        g += gamma_pow * dist.sample(rng);
        gamma_pow *= gamma;
      }
      const double r_surrogate = g * (factor_num / (gamma_pow - 1.0));
      s = r_surrogate + gamma * s;

      single.update(i, q);
      surrogate.update(i, s);
    }
  }

  const double b = dist.variance();
  QIterationStudy study;
  study.single_step.bound = variance_bound(gamma, b, iterations, 1.0);
  study.lnss.bound = variance_bound(gamma, b, iterations, psi(gamma, big_n));

  // SE(s^2) ~= s^2 * sqrt(2 / (K - 1)) under a normal approximation.
  const double se_scale = std::sqrt(2.0 / static_cast<double>(trials - 1));
  for (int i = 0; i < iterations; ++i) {
    const double var_q = single.m2[i] / static_cast<double>(trials);
    const double var_s = surrogate.m2[i] / static_cast<double>(trials);
    study.single_step.empirical_var.push_back(var_q);
    study.lnss.empirical_var.push_back(var_s);
    study.single_step.std_error.push_back(var_q * se_scale);
    study.lnss.std_error.push_back(var_s * se_scale);
  }
  return study;
}

double coefficient_of_variation(std::span<const double> values) {
  const double m = mean(values);
  if (m == 0.0) throw std::invalid_argument("CV undefined");
  return population_std(values) / std::abs(m);
}

double q_std_percentage(std::span<const double> q_values) {
  return 100.0 * coefficient_of_variation(q_values);
}

}  // namespace lnss
