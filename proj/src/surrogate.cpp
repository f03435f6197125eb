#include "lnss/surrogate.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace lnss {

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("invalid discount");
}

// One pass producing both the discounted sum and gamma^L as a running
// product. The running product keeps the L = 1 case exact: the
// normalization (gamma - 1) / (gamma^1 - 1) is then 1.0 with no rounding,
// so a window of one reward passes through bitwise unchanged.
struct DiscountedSum {
  double value = 0.0;
  double gamma_pow = 1.0;  // gamma^L after accumulating L rewards
};

DiscountedSum accumulate(std::span<const double> rewards, double gamma) {
  DiscountedSum acc;
  for (double r : rewards) {
    acc.value += acc.gamma_pow * r;
    acc.gamma_pow *= gamma;
  }
  return acc;
}

}  // namespace

double discounted_return(std::span<const double> rewards, double gamma) {
  check_gamma(gamma);
  if (rewards.empty()) throw std::invalid_argument("empty window");
  return accumulate(rewards, gamma).value;
}

double surrogate_reward_full(std::span<const double> rewards, double gamma) {
  check_gamma(gamma);
  if (rewards.empty()) throw std::invalid_argument("empty window");
  const auto acc = accumulate(rewards, gamma);
  return acc.value * ((gamma - 1.0) / (acc.gamma_pow - 1.0));
}

double surrogate_reward_tail(std::span<const double> rewards, double gamma) {
  check_gamma(gamma);
  if (rewards.empty()) throw std::invalid_argument("empty tail");
  const auto acc = accumulate(rewards, gamma);
  return acc.value * ((gamma - 1.0) / (acc.gamma_pow - 1.0));
}

double elevate_reward(double r, double shift) { return std::max(0.0, r + shift); }

SurrogateWindow::SurrogateWindow(int capacity, double gamma)
    : capacity_(capacity), gamma_(gamma) {
  if (capacity < 1) throw std::invalid_argument("window capacity must be positive");
  check_gamma(gamma);
}

TransformedTransition SurrogateWindow::emit_front(int n) {
  const int count = static_cast<int>(entries_.size());
  const int bootstrap_index = std::min(n - 1, count - 1);

  std::vector<double> rewards;
  rewards.reserve(entries_.size());
  for (const Transition& e : entries_) rewards.push_back(e.reward);

  TransformedTransition out;
  out.surrogate_reward = surrogate_reward_full(rewards, gamma_);
  out.bootstrap_state = entries_[bootstrap_index].next_state;
  out.bootstrap_terminal = entries_[bootstrap_index].terminal;
  out.bootstrap_gap = bootstrap_index + 1;

  Transition head = std::move(entries_.front());
  entries_.pop_front();
  out.state = std::move(head.state);
  out.action = std::move(head.action);
  return out;
}

std::optional<TransformedTransition> SurrogateWindow::push(Transition t, int n) {
  if (n < 1) throw std::invalid_argument("bootstrap distance must be positive");
  entries_.push_back(std::move(t));
  if (static_cast<int>(entries_.size()) < capacity_) return std::nullopt;
  return emit_front(n);
}

std::vector<TransformedTransition> SurrogateWindow::drain(int n) {
  if (n < 1) throw std::invalid_argument("bootstrap distance must be positive");
  std::vector<TransformedTransition> out;
  out.reserve(entries_.size());
  while (!entries_.empty()) out.push_back(emit_front(n));
  return out;
}

}  // namespace lnss
