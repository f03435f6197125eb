#include "lnss/replay.hpp"

#include <stdexcept>
#include <utility>

namespace lnss {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("buffer capacity must be positive");
  storage_.resize(capacity);
}

void ReplayBuffer::append(TransformedTransition t) {
  std::lock_guard<std::mutex> lock(mu_);
  storage_[cursor_] = std::move(t);
  cursor_ = (cursor_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

TrainBatch ReplayBuffer::sample(std::size_t k, Rng& rng) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (size_ < k) throw std::runtime_error("buffer underfilled");
  if (k == 0) throw std::invalid_argument("batch size must be positive");

  const TransformedTransition& first = storage_[0];
  TrainBatch batch;
  batch.size = k;
  batch.state_dim = first.state.size();
  batch.action_dim = first.action.size();
  batch.states.resize(k * batch.state_dim);
  batch.actions.resize(k * batch.action_dim);
  batch.rewards.resize(k);
  batch.bootstrap_states.resize(k * batch.state_dim);
  batch.bootstrap_terminal.resize(k);
  batch.bootstrap_gap.resize(k);

  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  for (std::size_t i = 0; i < k; ++i) {
    const TransformedTransition& t = storage_[pick(rng)];
    std::copy(t.state.begin(), t.state.end(), batch.states.begin() + i * batch.state_dim);
    std::copy(t.action.begin(), t.action.end(), batch.actions.begin() + i * batch.action_dim);
    batch.rewards[i] = t.surrogate_reward;
    std::copy(t.bootstrap_state.begin(), t.bootstrap_state.end(),
              batch.bootstrap_states.begin() + i * batch.state_dim);
    batch.bootstrap_terminal[i] = t.bootstrap_terminal ? 1 : 0;
    batch.bootstrap_gap[i] = t.bootstrap_gap;
  }
  return batch;
}

std::size_t ReplayBuffer::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return size_;
}

TransformedTransition ReplayBuffer::at(std::size_t index) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (index >= size_) throw std::out_of_range("index past buffer size");
  return storage_[index];
}

}  // namespace lnss
