#include "lnss/harness.hpp"

#include <condition_variable>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "lnss/checkpoint.hpp"
#include "lnss/numeric.hpp"
#include "lnss/replay.hpp"
#include "lnss/rng.hpp"
#include "lnss/surrogate.hpp"
#include "lnss/variance.hpp"

namespace lnss {

SeedPlan derive_seeds(std::uint64_t mother, int workers) {
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  SeedPlan plan;
  plan.worker_seeds.reserve(workers);
  for (int i = 0; i < workers; ++i) plan.worker_seeds.push_back(mother + static_cast<std::uint64_t>(i));
  plan.eval_seed = mother + 100;
  return plan;
}

EvalRecord evaluate_phase(const Td3Agent& agent, Env& env, int episodes) {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (static_cast<std::size_t>(env.spec().state_dim) != agent.state_dim() ||
      static_cast<std::size_t>(env.spec().action_dim) != agent.action_dim())
    throw std::invalid_argument("environment/agent dimension mismatch");

  std::vector<double> returns;
  std::vector<double> q_values;
  returns.reserve(episodes);

  for (int e = 0; e < episodes; ++e) {
    std::vector<double> state = env.reset();
    double episode_return = 0.0;
    while (true) {
      const std::vector<double> action = agent.select_action(state);
      q_values.push_back(agent.q1(state, action));
      const StepResult sr = env.step(action);
      episode_return += sr.reward;  // original reward, never shifted
      state = sr.next_state;
      if (sr.terminal || sr.truncated) break;
    }
    returns.push_back(episode_return);
  }

  EvalRecord rec;
  rec.mean_return = mean(returns);
  rec.std_return = population_std(returns);
  rec.q_mean = mean(q_values);
  const double q_std = population_std(q_values);
  rec.q_std_pct = (q_std == 0.0 || rec.q_mean == 0.0) ? 0.0 : q_std_percentage(q_values);
  return rec;
}

EvalRecord run_evaluation(const Td3Agent& agent, Env& env, std::uint64_t eval_seed,
                          int episodes) {
  env.reseed(eval_seed);
  return evaluate_phase(agent, env, episodes);
}

std::string metrics_csv(const std::vector<EvalRecord>& records) {
  std::ostringstream out;
  out << "step,mean_return,std_return,q_mean,q_std_pct,critic_loss\n";
  for (const EvalRecord& r : records) {
    out << r.step << ',' << format_double(r.mean_return) << ',' << format_double(r.std_return)
        << ',' << format_double(r.q_mean) << ',' << format_double(r.q_std_pct) << ','
        << format_double(r.critic_loss) << '\n';
  }
  return out.str();
}

namespace {

std::vector<double> uniform_action(int dim, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(dim);
  for (double& x : a) x = u(rng);
  return a;
}

struct LossMeter {
  double sum = 0.0;
  long count = 0;
  void add(double loss) {
    sum += loss;
    ++count;
  }
  double take() {
    const double m = count ? sum / static_cast<double>(count) : 0.0;
    sum = 0.0;
    count = 0;
    return m;
  }
};

struct RunContext {
  const ExperimentConfig& cfg;
  SeedPlan seeds;
  std::unique_ptr<Env> eval_env;
  std::unique_ptr<Td3Agent> agent;
  ReplayBuffer buffer;
  Rng learner_rng;
  std::vector<EvalRecord> records;
  LossMeter loss;
  bool diverged = false;

  explicit RunContext(const ExperimentConfig& cfg_)
      : cfg(cfg_),
        seeds(derive_seeds(cfg_.seed, cfg_.workers)),
        eval_env(make_env(cfg_.env, RewardDist::parse(cfg_.dist), seeds.eval_seed)),
        buffer(static_cast<std::size_t>(cfg_.buffer_size)),
        learner_rng(make_rng(cfg_.seed, rng_stream::kLearner)) {
    Rng init_rng = make_rng(cfg_.seed, rng_stream::kNetInit);
    agent = std::make_unique<Td3Agent>(eval_env->spec().state_dim, eval_env->spec().action_dim,
                                       cfg_.width, cfg_.td3_options(), init_rng);
  }

  // One learner tick for global step t: train if possible, evaluate on the
  // cadence boundary.
  void learner_tick(long t) {
    if (buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
      const TrainBatch batch = buffer.sample(cfg.batch_size, learner_rng);
      const Td3Agent::StepDiag diag = agent->train_step(batch, learner_rng);
      loss.add(diag.critic_loss);
    }
    if (t % cfg.eval_frequency == 0) {
      // the eval env was seeded once with the evaluation seed; successive
      // phases advance its episode stream, as fresh evaluation episodes
      EvalRecord rec = evaluate_phase(*agent, *eval_env, 5);
      rec.step = t;
      rec.critic_loss = loss.take();
      records.push_back(rec);
    }
  }
};

void run_single_worker(RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  std::unique_ptr<Env> env =
      make_env(cfg.env, RewardDist::parse(cfg.dist), ctx.seeds.worker_seeds[0]);
  Rng explore_rng = make_rng(ctx.seeds.worker_seeds[0], rng_stream::kExplore);
  EstimatorStream stream(cfg.estimator_kind(), cfg.gamma);

  std::vector<double> state = env->reset();
  for (long t = 1; t <= cfg.max_timesteps; ++t) {
    const std::vector<double> action = t <= cfg.start_timesteps
                                           ? uniform_action(env->spec().action_dim, explore_rng)
                                           : ctx.agent->select_action(state, explore_rng);
    const StepResult sr = env->step(action);

    Transition tr;
    tr.state = std::move(state);
    tr.action = action;
    tr.reward = elevate_reward(sr.reward, cfg.reward_shift);
    tr.next_state = sr.next_state;
    tr.terminal = sr.terminal;
    for (auto& tt : stream.push(std::move(tr))) ctx.buffer.append(std::move(tt));

    if (sr.terminal || sr.truncated) {
      for (auto& tt : stream.drain()) ctx.buffer.append(std::move(tt));
      state = env->reset();
    } else {
      state = sr.next_state;
    }

    ctx.learner_tick(t);
  }
}

// Multiple actor threads feed the shared buffer while the learner consumes
// step tickets in order, keeping one update per environment step (within a
// small pacing window). Workers refresh their policy snapshot between
// episodes.
class MultiWorkerRun {
 public:
  explicit MultiWorkerRun(RunContext& ctx) : ctx_(ctx), shared_actor_(ctx.agent->actor()) {}

  void run() {
    const int workers = ctx_.cfg.workers;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int i = 0; i < workers; ++i) {
      threads.emplace_back([this, i] { worker_loop(i); });
    }
    learner_loop();
    for (auto& th : threads) th.join();
  }

 private:
  static constexpr long kPacingSlack = 64;

  bool take_ticket(long& ticket) {
    std::unique_lock<std::mutex> lock(pace_mu_);
    pace_cv_.wait(lock, [this] {
      return stop_ || steps_taken_ >= ctx_.cfg.max_timesteps ||
             steps_taken_ - processed_ < kPacingSlack;
    });
    if (stop_ || steps_taken_ >= ctx_.cfg.max_timesteps) return false;
    ticket = ++steps_taken_;
    return true;
  }

  void worker_loop(int index) {
    const ExperimentConfig& cfg = ctx_.cfg;
    std::unique_ptr<Env> env =
        make_env(cfg.env, RewardDist::parse(cfg.dist), ctx_.seeds.worker_seeds[index]);
    Rng explore_rng = make_rng(ctx_.seeds.worker_seeds[index], rng_stream::kExplore);
    EstimatorStream stream(cfg.estimator_kind(), cfg.gamma);
    MlpParams actor = snapshot_actor();

    std::vector<double> state = env->reset();
    long ticket = 0;
    while (take_ticket(ticket)) {
      std::vector<double> action;
      if (ticket <= cfg.start_timesteps) {
        action = uniform_action(env->spec().action_dim, explore_rng);
      } else {
        action = actor_forward(actor, state);
        std::normal_distribution<double> noise(0.0, cfg.exploration_noise);
        for (double& x : action) x = clip(x + noise(explore_rng), -1.0, 1.0);
      }
      const StepResult sr = env->step(action);

      Transition tr;
      tr.state = std::move(state);
      tr.action = std::move(action);
      tr.reward = elevate_reward(sr.reward, cfg.reward_shift);
      tr.next_state = sr.next_state;
      tr.terminal = sr.terminal;
      for (auto& tt : stream.push(std::move(tr))) ctx_.buffer.append(std::move(tt));

      if (sr.terminal || sr.truncated) {
        for (auto& tt : stream.drain()) ctx_.buffer.append(std::move(tt));
        state = env->reset();
        actor = snapshot_actor();
      } else {
        state = sr.next_state;
      }
      pace_cv_.notify_all();
    }
  }

  void learner_loop() {
    const long max_steps = ctx_.cfg.max_timesteps;
    while (true) {
      {
        std::unique_lock<std::mutex> lock(pace_mu_);
        pace_cv_.wait(lock, [this] { return stop_ || steps_taken_ > processed_; });
        if (stop_ || processed_ >= max_steps) break;
        ++processed_;
      }
      const long t = processed_;
      try {
        ctx_.learner_tick(t);
      } catch (const std::runtime_error&) {
        ctx_.diverged = true;
        std::lock_guard<std::mutex> lock(pace_mu_);
        stop_ = true;
        pace_cv_.notify_all();
        return;
      }
      publish_actor();
      if (t >= max_steps) break;
      pace_cv_.notify_all();
    }
    std::lock_guard<std::mutex> lock(pace_mu_);
    stop_ = true;
    pace_cv_.notify_all();
  }

  MlpParams snapshot_actor() {
    std::lock_guard<std::mutex> lock(snapshot_mu_);
    return shared_actor_;
  }

  void publish_actor() {
    std::lock_guard<std::mutex> lock(snapshot_mu_);
    shared_actor_ = ctx_.agent->actor();
  }

  RunContext& ctx_;
  std::mutex pace_mu_;
  std::condition_variable pace_cv_;
  long steps_taken_ = 0;
  long processed_ = 0;
  bool stop_ = false;

  std::mutex snapshot_mu_;
  MlpParams shared_actor_;
};

}  // namespace

TrainResult run_training(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  cfg.validate();
  RunContext ctx(cfg);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    cfg.save(out_dir / "config.cfg");
  }

  if (cfg.workers == 1) {
    try {
      run_single_worker(ctx);
    } catch (const std::runtime_error&) {
      ctx.diverged = true;  // partial metrics retained
    }
  } else {
    MultiWorkerRun(ctx).run();
  }

  TrainResult result;
  result.records = std::move(ctx.records);
  result.diverged = ctx.diverged;
  if (!ctx.diverged) result.agent = std::move(ctx.agent);

  if (!out_dir.empty()) {
    std::ofstream csv(out_dir / "metrics.csv");
    csv << metrics_csv(result.records);
    if (result.agent) save_agent(out_dir / "checkpoint.txt", *result.agent);
  }
  return result;
}

std::vector<SuiteEntry> load_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read suite file: " + path.string());
  std::vector<SuiteEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream tokens(line);
    SuiteEntry entry;
    if (!(tokens >> entry.name)) continue;  // blank line
    entry.config = ExperimentConfig::desk();
    std::string kv;
    while (tokens >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("suite entry " + entry.name + ": expected key=value, got " + kv);
      entry.config.set_field(kv.substr(0, eq), kv.substr(eq + 1));
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<SuiteRow> run_suite(const std::vector<SuiteEntry>& entries, int trials,
                                const std::filesystem::path& out_dir) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<SuiteRow> rows;
  rows.reserve(entries.size());
  for (const SuiteEntry& entry : entries) {
    std::vector<double> pooled;  // last 5 evaluations of each trial
    for (int trial = 0; trial < trials; ++trial) {
      ExperimentConfig cfg = entry.config;
      cfg.seed = static_cast<std::uint64_t>(trial);
      const std::filesystem::path run_dir =
          out_dir.empty() ? out_dir : out_dir / (entry.name + "-seed" + std::to_string(trial));
      TrainResult result = run_training(cfg, run_dir);
      if (result.diverged) throw std::runtime_error("divergence detected in " + entry.name);
      const std::size_t count = result.records.size();
      const std::size_t tail = count < 5 ? count : 5;
      for (std::size_t i = count - tail; i < count; ++i)
        pooled.push_back(result.records[i].mean_return);
    }
    SuiteRow row;
    row.name = entry.name;
    row.env = entry.config.env;
    row.estimator = entry.config.estimator_kind().label();
    row.reward = mean(pooled);
    row.cv = population_std(pooled) == 0.0 ? 0.0 : coefficient_of_variation(pooled);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string suite_csv(const std::vector<SuiteRow>& rows) {
  std::ostringstream out;
  out << "name,env,estimator,reward,cv\n";
  for (const SuiteRow& r : rows) {
    out << r.name << ',' << r.env << ',' << r.estimator << ',' << format_double(r.reward) << ','
        << format_double(r.cv) << '\n';
  }
  return out.str();
}

}  // namespace lnss
