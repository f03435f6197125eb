#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "lnss/estimators.hpp"
#include "lnss/td3.hpp"

namespace lnss {

// Every knob of a run; a config plus its mother seed fully determines a
// single-worker run. Round-trips losslessly through the flat key=value
// file format (save/load, to_kv/from_kv).
struct ExperimentConfig {
  std::string env = "pendulum";
  std::string dist = "uniform";    // chain reward distribution
  std::string estimator = "single";  // single | nstep | mean | lnss
  int N = 1;                       // reward window (lnss)
  int n = 1;                       // bootstrap distance (lnss, nstep, mean)
  std::uint64_t seed = 0;          // mother seed
  long max_timesteps = 50'000;
  long eval_frequency = 1'000;
  long start_timesteps = 1'000;
  int batch_size = 64;
  long buffer_size = 100'000;
  double gamma = 0.99;
  double tau = 0.005;
  double policy_noise = 0.2;
  double noise_clip = 0.5;
  int policy_delay = 2;
  double exploration_noise = 0.1;
  double learning_rate = 1e-3;
  int workers = 1;
  double reward_shift = 0.0;
  int width = 64;

  // Desk preset: finishes in minutes on one core. Paper preset: the
  // full-scale hyperparameters.
  static ExperimentConfig desk();
  static ExperimentConfig paper();

  void validate() const;  // throws std::invalid_argument
  EstimatorKind estimator_kind() const;
  Td3Options td3_options() const;

  std::string to_kv() const;
  static ExperimentConfig from_kv(const std::string& text);
  void set_field(const std::string& key, const std::string& value);
  void save(const std::filesystem::path& path) const;
  static ExperimentConfig load(const std::filesystem::path& path);

  bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace lnss
