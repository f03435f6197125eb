#include "lnss/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lnss/numeric.hpp"
#include "lnss/variance.hpp"

namespace lnss {

namespace {

// Single place that knows every field; serialization, parsing and the CLI
// key set all derive from it.
template <class Config, class Visitor>
void visit_fields(Config& c, Visitor&& f) {
  f("env", c.env);
  f("dist", c.dist);
  f("estimator", c.estimator);
  f("N", c.N);
  f("n", c.n);
  f("seed", c.seed);
  f("max_timesteps", c.max_timesteps);
  f("eval_frequency", c.eval_frequency);
  f("start_timesteps", c.start_timesteps);
  f("batch_size", c.batch_size);
  f("buffer_size", c.buffer_size);
  f("gamma", c.gamma);
  f("tau", c.tau);
  f("policy_noise", c.policy_noise);
  f("noise_clip", c.noise_clip);
  f("policy_delay", c.policy_delay);
  f("exploration_noise", c.exploration_noise);
  f("learning_rate", c.learning_rate);
  f("workers", c.workers);
  f("reward_shift", c.reward_shift);
  f("width", c.width);
}

std::string field_to_string(const std::string& v) { return v; }
std::string field_to_string(double v) { return format_double(v); }
template <class T>
std::string field_to_string(T v) { return std::to_string(v); }

void field_from_string(const std::string& text, std::string& out) { out = text; }
void field_from_string(const std::string& text, double& out) { out = std::stod(text); }
void field_from_string(const std::string& text, int& out) { out = std::stoi(text); }
void field_from_string(const std::string& text, long& out) { out = std::stol(text); }
void field_from_string(const std::string& text, std::uint64_t& out) { out = std::stoull(text); }

}  // namespace

ExperimentConfig ExperimentConfig::desk() { return {}; }

ExperimentConfig ExperimentConfig::paper() {
  ExperimentConfig c;
  c.max_timesteps = 800'000;
  c.eval_frequency = 10'000;
  c.start_timesteps = 8'000;
  c.batch_size = 256;
  c.buffer_size = 1'000'000;
  c.workers = 8;
  c.width = 256;
  return c;
}

void ExperimentConfig::validate() const {
  const auto bad = [](const std::string& what) {
    throw std::invalid_argument("invalid config: " + what);
  };
  if (env != "chain" && env != "pointmass" && env != "pendulum") bad("env " + env);
  RewardDist::parse(dist);          // throws on malformed dist
  estimator_kind();                 // throws on malformed estimator / N / n
  if (!(gamma > 0.0 && gamma < 1.0)) bad("gamma must be inside (0,1)");
  if (!(tau > 0.0 && tau <= 1.0)) bad("tau must be inside (0,1]");
  if (max_timesteps < 1) bad("max_timesteps");
  if (eval_frequency < 1) bad("eval_frequency");
  if (start_timesteps < 0) bad("start_timesteps");
  if (batch_size < 1) bad("batch_size");
  if (buffer_size < batch_size) bad("buffer_size must be >= batch_size");
  if (policy_delay < 1) bad("policy_delay");
  if (policy_noise < 0.0 || noise_clip < 0.0) bad("policy noise");
  if (exploration_noise < 0.0) bad("exploration_noise");
  if (learning_rate <= 0.0) bad("learning_rate");
  if (workers < 1) bad("workers");
  if (reward_shift < 0.0) bad("reward_shift must be >= 0");
  if (width < 1) bad("width");
}

EstimatorKind ExperimentConfig::estimator_kind() const {
  return EstimatorKind::parse(estimator, N, n);
}

Td3Options ExperimentConfig::td3_options() const {
  Td3Options o;
  o.gamma = gamma;
  o.tau = tau;
  o.policy_noise = policy_noise;
  o.noise_clip = noise_clip;
  o.policy_delay = policy_delay;
  o.exploration_noise = exploration_noise;
  o.learning_rate = learning_rate;
  o.action_bound = 1.0;
  return o;
}

std::string ExperimentConfig::to_kv() const {
  std::ostringstream out;
  visit_fields(*this, [&out](const char* key, const auto& value) {
    out << key << '=' << field_to_string(value) << '\n';
  });
  return out.str();
}

void ExperimentConfig::set_field(const std::string& key, const std::string& value) {
  bool found = false;
  visit_fields(*this, [&](const char* name, auto& field) {
    if (!found && key == name) {
      field_from_string(value, field);
      found = true;
    }
  });
  if (!found) throw std::invalid_argument("unknown config key: " + key);
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_kv(const std::string& text) {
  ExperimentConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    c.set_field(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

void ExperimentConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path.string());
  out << to_kv();
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config: " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return from_kv(text.str());
}

}  // namespace lnss
