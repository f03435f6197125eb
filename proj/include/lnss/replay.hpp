#pragma once

#include <cstddef>
#include <mutex>
#include <vector>

#include "lnss/rng.hpp"
#include "lnss/transition.hpp"

namespace lnss {

// A uniformly sampled minibatch in flat row-major arrays, ready for the
// batched network passes.
struct TrainBatch {
  std::size_t size = 0;
  std::size_t state_dim = 0;
  std::size_t action_dim = 0;
  std::vector<double> states;            // size x state_dim
  std::vector<double> actions;           // size x action_dim
  std::vector<double> rewards;           // surrogate rewards
  std::vector<double> bootstrap_states;  // size x state_dim
  std::vector<unsigned char> bootstrap_terminal;
  std::vector<int> bootstrap_gap;
};

// Ring buffer of transformed transitions. Multiple producers may append
// concurrently with one consumer sampling; a lock makes each append and
// each sample atomic, so no torn tuples and no lost entries. Once full the
// oldest entries are overwritten in FIFO order.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void append(TransformedTransition t);
  TrainBatch sample(std::size_t k, Rng& rng) const;  // uniform with replacement

  std::size_t size() const;
  std::size_t capacity() const { return capacity_; }

  // Test access; takes the lock, index must be < size().
  TransformedTransition at(std::size_t index) const;

 private:
  mutable std::mutex mu_;
  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;
  std::vector<TransformedTransition> storage_;
};

}  // namespace lnss
