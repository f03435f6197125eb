#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "lnss/config.hpp"
#include "lnss/envs.hpp"
#include "lnss/td3.hpp"

namespace lnss {

// One evaluation phase: 5 episodes with exploration off, original rewards.
struct EvalRecord {
  long step = 0;
  double mean_return = 0.0;
  double std_return = 0.0;
  double q_mean = 0.0;
  double q_std_pct = 0.0;
  double critic_loss = 0.0;  // mean since the previous evaluation
};

// Mother-seed scheme: worker i trains with seed mother + i, evaluation
// uses mother + 100.
struct SeedPlan {
  std::vector<std::uint64_t> worker_seeds;
  std::uint64_t eval_seed = 0;
};
SeedPlan derive_seeds(std::uint64_t mother, int workers);

struct TrainResult {
  std::vector<EvalRecord> records;
  bool diverged = false;
  std::unique_ptr<Td3Agent> agent;  // final learner state; null after divergence
};

// Full training loop. Writes metrics.csv, config.cfg and checkpoint.txt
// into out_dir unless it is empty. Single-worker runs are bit-reproducible
// given the config; multi-worker runs keep the 1-update-per-env-step ratio
// but interleave nondeterministically.
TrainResult run_training(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir = {});

// Evaluation phase against `env` as currently seeded: `episodes` episodes
// with exploration off. Never touches a replay buffer or a training RNG.
// step and critic_loss are left for the caller. During training the eval
// environment is seeded once per trial and successive phases consume fresh
// episodes from its stream.
EvalRecord evaluate_phase(const Td3Agent& agent, Env& env, int episodes = 5);

// Standalone evaluation: reseeds the environment first, so repeated calls
// with the same policy and seed are identical.
EvalRecord run_evaluation(const Td3Agent& agent, Env& env, std::uint64_t eval_seed,
                          int episodes = 5);

std::string metrics_csv(const std::vector<EvalRecord>& records);

// Named config set, trained over mother seeds 0..trials-1 each; the
// summary pools the last 5 evaluations of every trial.
struct SuiteEntry {
  std::string name;
  ExperimentConfig config;
};
struct SuiteRow {
  std::string name;
  std::string env;
  std::string estimator;
  double reward = 0.0;  // mean of pooled final evaluations
  double cv = 0.0;      // coefficient of variation of the same pool
};

std::vector<SuiteEntry> load_suite(const std::filesystem::path& path);
std::vector<SuiteRow> run_suite(const std::vector<SuiteEntry>& entries, int trials,
                                const std::filesystem::path& out_dir = {});
std::string suite_csv(const std::vector<SuiteRow>& rows);

}  // namespace lnss
