#include "lnss/estimators.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace lnss {

namespace {

void require_positive(int v, const char* what) {
  if (v < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

}  // namespace

EstimatorKind EstimatorKind::single_step() { return {EstimatorTag::SingleStep, 1, 1}; }

EstimatorKind EstimatorKind::n_step(int n) {
  require_positive(n, "n");
  return {EstimatorTag::NStep, n, n};
}

EstimatorKind EstimatorKind::mean_reward(int n) {
  require_positive(n, "n");
  return {EstimatorTag::MeanReward, n, 1};
}

EstimatorKind EstimatorKind::lnss(int big_n, int n) {
  require_positive(big_n, "N");
  require_positive(n, "n");
  return {EstimatorTag::Lnss, big_n, n};
}

EstimatorKind EstimatorKind::parse(const std::string& name, int big_n, int n) {
  if (name == "single") return single_step();
  if (name == "nstep") return n_step(n);
  if (name == "mean") return mean_reward(n);
  if (name == "lnss") return lnss(big_n, n);
  throw std::invalid_argument("unknown estimator: " + name);
}

std::string EstimatorKind::label() const {
  switch (tag) {
    case EstimatorTag::SingleStep: return "single";
    case EstimatorTag::NStep: return "nstep-n" + std::to_string(reward_steps);
    case EstimatorTag::MeanReward: return "mean-n" + std::to_string(reward_steps);
    case EstimatorTag::Lnss:
      return "lnss-N" + std::to_string(reward_steps) + "n" + std::to_string(bootstrap_steps);
  }
  return "unknown";
}

double nstep_return(std::span<const double> rewards, double gamma) {
  return discounted_return(rewards, gamma);
}

double mean_reward(std::span<const double> rewards) {
  if (rewards.empty()) throw std::invalid_argument("empty window");
  double s = 0.0;
  for (double r : rewards) s += r;
  return s / static_cast<double>(rewards.size());
}

EstimatorStream::EstimatorStream(EstimatorKind kind, double gamma)
    : kind_(kind),
      gamma_(gamma),
      window_(kind.tag == EstimatorTag::Lnss ? kind.reward_steps : 1, gamma) {}

TransformedTransition EstimatorStream::emit_front() {
  const int count = static_cast<int>(plain_window_.size());

  std::vector<double> rewards;
  rewards.reserve(count);
  for (const Transition& e : plain_window_) rewards.push_back(e.reward);

  TransformedTransition out;
  if (kind_.tag == EstimatorTag::NStep) {
    // Truncated discounted sum; bootstrap at the realized step distance.
    const int idx = std::min(kind_.bootstrap_steps - 1, count - 1);
    out.surrogate_reward = nstep_return(rewards, gamma_);
    out.bootstrap_state = plain_window_[idx].next_state;
    out.bootstrap_terminal = plain_window_[idx].terminal;
    out.bootstrap_gap = idx + 1;
  } else {  // MeanReward: averaged reward in a single-step Bellman update
    out.surrogate_reward = mean_reward(rewards);
    out.bootstrap_state = plain_window_.front().next_state;
    out.bootstrap_terminal = plain_window_.front().terminal;
    out.bootstrap_gap = 1;
  }

  Transition head = std::move(plain_window_.front());
  plain_window_.pop_front();
  out.state = std::move(head.state);
  out.action = std::move(head.action);
  return out;
}

std::vector<TransformedTransition> EstimatorStream::push(Transition t) {
  std::vector<TransformedTransition> out;
  switch (kind_.tag) {
    case EstimatorTag::SingleStep: {
      TransformedTransition tt;
      tt.surrogate_reward = t.reward;
      tt.bootstrap_state = std::move(t.next_state);
      tt.bootstrap_terminal = t.terminal;
      tt.bootstrap_gap = 1;
      tt.state = std::move(t.state);
      tt.action = std::move(t.action);
      out.push_back(std::move(tt));
      break;
    }
    case EstimatorTag::Lnss: {
      if (auto tt = window_.push(std::move(t), kind_.bootstrap_steps)) {
        out.push_back(std::move(*tt));
      }
      break;
    }
    case EstimatorTag::NStep:
    case EstimatorTag::MeanReward: {
      plain_window_.push_back(std::move(t));
      if (static_cast<int>(plain_window_.size()) == kind_.reward_steps) {
        out.push_back(emit_front());
      }
      break;
    }
  }
  return out;
}

std::vector<TransformedTransition> EstimatorStream::drain() {
  if (kind_.tag == EstimatorTag::Lnss) return window_.drain(kind_.bootstrap_steps);
  std::vector<TransformedTransition> out;
  out.reserve(plain_window_.size());
  while (!plain_window_.empty()) out.push_back(emit_front());
  return out;
}

std::vector<TransformedTransition> stream_estimator(EstimatorKind kind,
                                                    std::span<const Transition> episode,
                                                    double gamma) {
  EstimatorStream stream(kind, gamma);
  std::vector<TransformedTransition> out;
  out.reserve(episode.size());
  for (const Transition& t : episode) {
    for (auto& tt : stream.push(t)) out.push_back(std::move(tt));
  }
  for (auto& tt : stream.drain()) out.push_back(std::move(tt));
  return out;
}

}  // namespace lnss
