#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "lnss/checkpoint.hpp"
#include "lnss/config.hpp"
#include "lnss/harness.hpp"
#include "lnss/numeric.hpp"
#include "lnss/variance.hpp"

namespace {

namespace fs = std::filesystem;

void write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

// Preset and config file must apply before explicit flags, so they are
// peeled off argv ahead of the real parse.
std::string peek_option(int argc, char** argv, const std::string& name) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == name && i + 1 < argc) return argv[i + 1];
    if (arg.rfind(name + "=", 0) == 0) return arg.substr(name.size() + 1);
  }
  return {};
}

void add_train_flags(CLI::App* cmd, lnss::ExperimentConfig& cfg) {
  cmd->add_option("--env", cfg.env, "chain | pointmass | pendulum")->capture_default_str();
  cmd->add_option("--dist", cfg.dist, "chain reward dist: uniform | const:<c> | bern:<p>")
      ->capture_default_str();
  cmd->add_option("--estimator", cfg.estimator, "single | nstep | mean | lnss")
      ->capture_default_str();
  cmd->add_option("--N", cfg.N, "reward window length (lnss)")->capture_default_str();
  cmd->add_option("--n", cfg.n, "bootstrap distance")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "mother seed")->capture_default_str();
  cmd->add_option("--max-timesteps", cfg.max_timesteps)->capture_default_str();
  cmd->add_option("--eval-freq", cfg.eval_frequency)->capture_default_str();
  cmd->add_option("--start-timesteps", cfg.start_timesteps)->capture_default_str();
  cmd->add_option("--batch", cfg.batch_size)->capture_default_str();
  cmd->add_option("--buffer", cfg.buffer_size)->capture_default_str();
  cmd->add_option("--gamma", cfg.gamma)->capture_default_str();
  cmd->add_option("--tau", cfg.tau)->capture_default_str();
  cmd->add_option("--workers", cfg.workers)->capture_default_str();
  cmd->add_option("--reward-shift", cfg.reward_shift)->capture_default_str();
  cmd->add_option("--width", cfg.width, "hidden units per layer")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LNSS reward-transform laboratory: TD3 training on toy control tasks plus "
               "variance analytics"};
  app.require_subcommand(1);

  // --- train ---
  lnss::ExperimentConfig cfg = lnss::ExperimentConfig::desk();
  {
    const std::string preset = peek_option(argc, argv, "--preset");
    if (preset == "paper") cfg = lnss::ExperimentConfig::paper();
    else if (!preset.empty() && preset != "desk") {
      std::cerr << "unknown preset: " << preset << "\n";
      return 1;
    }
    const std::string config_path = peek_option(argc, argv, "--config");
    if (!config_path.empty()) {
      try {
        cfg = lnss::ExperimentConfig::load(config_path);
      } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 1;
      }
    }
  }
  std::string train_out = "run";
  std::string preset_dummy, config_dummy;
  CLI::App* train = app.add_subcommand("train", "Train one agent and emit metrics CSV");
  train->add_option("--preset", preset_dummy, "desk | paper (applied first)");
  train->add_option("--config", config_dummy, "key=value config file (applied before flags)");
  add_train_flags(train, cfg);
  train->add_option("--out", train_out, "output directory")->capture_default_str();

  // --- eval ---
  std::string eval_checkpoint, eval_env_name = "pendulum", eval_dist = "uniform";
  std::uint64_t eval_seed = 100;
  int eval_episodes = 5;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--checkpoint", eval_checkpoint)->required();
  eval->add_option("--env", eval_env_name)->capture_default_str();
  eval->add_option("--dist", eval_dist)->capture_default_str();
  eval->add_option("--seed", eval_seed)->capture_default_str();
  eval->add_option("--episodes", eval_episodes)->capture_default_str();

  // --- suite ---
  std::string suite_file, suite_out_dir;
  int suite_trials = 5;
  CLI::App* suite = app.add_subcommand("suite", "Run a set of configs over mother seeds");
  suite->add_option("--configs", suite_file, "one entry per line: <name> [key=value ...]")
      ->required();
  suite->add_option("--trials", suite_trials)->capture_default_str();
  suite->add_option("--out", suite_out_dir, "directory for per-run outputs and summary.csv");

  // --- psi-table ---
  std::vector<double> psi_gammas{0.99};
  int psi_n_max = 100;
  std::string psi_out;
  CLI::App* psi_table = app.add_subcommand("psi-table", "Variance discount factor per gamma, N");
  psi_table->add_option("--gamma", psi_gammas, "one or more discount factors")
      ->capture_default_str();
  psi_table->add_option("--N-max", psi_n_max)->capture_default_str();
  psi_table->add_option("--out", psi_out, "output file (default stdout)");

  // --- variance-study ---
  double vs_gamma = 0.99;
  int vs_n = 100, vs_trials = 10000, vs_iterations = 200;
  std::string vs_dist = "uniform", vs_out;
  std::uint64_t vs_seed = 0;
  CLI::App* vstudy = app.add_subcommand(
      "variance-study", "Monte-Carlo Q-iteration variance vs analytic bounds");
  vstudy->add_option("--gamma", vs_gamma)->capture_default_str();
  vstudy->add_option("--N", vs_n)->capture_default_str();
  vstudy->add_option("--trials", vs_trials)->capture_default_str();
  vstudy->add_option("--iterations", vs_iterations)->capture_default_str();
  vstudy->add_option("--dist", vs_dist, "uniform | const:<c> | bern:<p>")->capture_default_str();
  vstudy->add_option("--seed", vs_seed)->capture_default_str();
  vstudy->add_option("--out", vs_out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      const lnss::TrainResult result = lnss::run_training(cfg, train_out);
      if (result.diverged) {
        std::cerr << "divergence detected; partial metrics kept in " << train_out << "\n";
        return 2;
      }
      std::cout << "wrote " << (fs::path(train_out) / "metrics.csv").string() << " ("
                << result.records.size() << " evaluations)\n";
    } else if (eval->parsed()) {
      const lnss::Td3Agent agent = lnss::load_agent(eval_checkpoint, lnss::Td3Options{});
      auto env = lnss::make_env(eval_env_name, lnss::RewardDist::parse(eval_dist), eval_seed);
      const lnss::EvalRecord rec = lnss::run_evaluation(agent, *env, eval_seed, eval_episodes);
      std::cout << "mean_return,std_return,q_mean,q_std_pct\n"
                << lnss::format_double(rec.mean_return) << ',' << lnss::format_double(rec.std_return)
                << ',' << lnss::format_double(rec.q_mean) << ','
                << lnss::format_double(rec.q_std_pct) << "\n";
    } else if (suite->parsed()) {
      const auto entries = lnss::load_suite(suite_file);
      const auto rows = lnss::run_suite(entries, suite_trials, suite_out_dir);
      const std::string csv = lnss::suite_csv(rows);
      std::cout << csv;
      if (!suite_out_dir.empty()) {
        std::ofstream out(fs::path(suite_out_dir) / "summary.csv");
        out << csv;
      }
    } else if (psi_table->parsed()) {
      std::string csv = "gamma,N,psi\n";
      for (double gamma : psi_gammas) {
        const lnss::PsiCurve curve = lnss::psi_curve(gamma, psi_n_max);
        for (const auto& point : curve.points) {
          csv += lnss::format_double(gamma) + "," + std::to_string(point.n) + "," +
                 lnss::format_double(point.value) + "\n";
        }
      }
      write_or_print(csv, psi_out);
    } else if (vstudy->parsed()) {
      const auto study = lnss::simulate_q_iteration(vs_gamma, vs_n, vs_trials, vs_iterations,
                                                    lnss::RewardDist::parse(vs_dist), vs_seed);
      std::string csv = "iteration,var_single,bound_single,var_lnss,bound_lnss\n";
      for (int i = 0; i < vs_iterations; ++i) {
        csv += std::to_string(i + 1) + "," + lnss::format_double(study.single_step.empirical_var[i]) +
               "," + lnss::format_double(study.single_step.bound[i]) + "," +
               lnss::format_double(study.lnss.empirical_var[i]) + "," +
               lnss::format_double(study.lnss.bound[i]) + "\n";
      }
      write_or_print(csv, vs_out);
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
