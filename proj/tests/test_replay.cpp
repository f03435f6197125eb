#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "lnss/replay.hpp"

using namespace lnss;

namespace {

TransformedTransition tagged(int producer, int sequence) {
  TransformedTransition t;
  t.state = {static_cast<double>(producer), static_cast<double>(sequence)};
  t.action = {static_cast<double>(producer)};
  // redundant encoding so a torn tuple is detectable
  t.surrogate_reward = producer * 1e6 + sequence;
  t.bootstrap_state = {static_cast<double>(sequence), static_cast<double>(producer)};
  t.bootstrap_gap = 1;
  return t;
}

bool consistent(const TransformedTransition& t) {
  const int producer = static_cast<int>(t.state[0]);
  const int sequence = static_cast<int>(t.state[1]);
  return t.action[0] == producer && t.surrogate_reward == producer * 1e6 + sequence &&
         t.bootstrap_state[0] == sequence && t.bootstrap_state[1] == producer;
}

}  // namespace

TEST_CASE("append and ring semantics") {
  ReplayBuffer buf(3);
  CHECK(buf.size() == 0);
  buf.append(tagged(0, 0));
  CHECK(buf.size() == 1);
  buf.append(tagged(0, 1));
  buf.append(tagged(0, 2));
  buf.append(tagged(0, 3));  // overwrites the oldest
  CHECK(buf.size() == 3);
  std::vector<int> sequences;
  for (std::size_t i = 0; i < 3; ++i) sequences.push_back(static_cast<int>(buf.at(i).state[1]));
  CHECK(std::count(sequences.begin(), sequences.end(), 0) == 0);
  CHECK(std::count(sequences.begin(), sequences.end(), 3) == 1);
}

TEST_CASE("sampling requires enough entries") {
  ReplayBuffer buf(10);
  Rng rng(0);
  CHECK_THROWS_WITH(buf.sample(1, rng), "buffer underfilled");
  buf.append(tagged(0, 0));
  const TrainBatch b = buf.sample(1, rng);
  CHECK(b.size == 1);
  CHECK(b.rewards[0] == 0.0);
  CHECK(b.state_dim == 2);
  CHECK(b.action_dim == 1);
  CHECK_THROWS(buf.sample(2, rng));
}

TEST_CASE("sampling is deterministic given the rng state") {
  ReplayBuffer buf(100);
  for (int i = 0; i < 50; ++i) buf.append(tagged(0, i));
  Rng a(42), b(42);
  const TrainBatch ba = buf.sample(16, a);
  const TrainBatch bb = buf.sample(16, b);
  CHECK(ba.rewards == bb.rewards);
  CHECK(ba.states == bb.states);
}

TEST_CASE("sampling frequencies are uniform") {
  ReplayBuffer buf(10);
  for (int i = 0; i < 10; ++i) buf.append(tagged(0, i));
  Rng rng(7);
  std::vector<long> counts(10, 0);
  const long draws = 100000;
  long total = 0;
  for (long round = 0; round < draws / 10; ++round) {
    const TrainBatch batch = buf.sample(10, rng);
    for (std::size_t i = 0; i < batch.size; ++i) {
      ++counts[static_cast<int>(batch.states[i * 2 + 1])];
      ++total;
    }
  }
  CHECK(total == draws);
  const double expected = draws / 10.0;
  const double sigma = std::sqrt(draws * 0.1 * 0.9);
  for (long c : counts) CHECK(std::abs(c - expected) <= 3.0 * sigma);
}

TEST_CASE("concurrent producers lose nothing, consumer sees no torn tuples") {
  const int producers = 8;
  const int per_producer = 1000;
  ReplayBuffer buf(producers * per_producer);

  std::atomic<bool> start{false};
  std::atomic<bool> done{false};
  std::thread consumer([&] {
    Rng rng(99);
    while (!done.load()) {
      if (buf.size() >= 4) {
        const TrainBatch batch = buf.sample(4, rng);
        for (std::size_t i = 0; i < batch.size; ++i) {
          TransformedTransition t;
          t.state = {batch.states[i * 2], batch.states[i * 2 + 1]};
          t.action = {batch.actions[i]};
          t.surrogate_reward = batch.rewards[i];
          t.bootstrap_state = {batch.bootstrap_states[i * 2], batch.bootstrap_states[i * 2 + 1]};
          CHECK(consistent(t));
        }
      }
    }
  });

  std::vector<std::thread> threads;
  for (int p = 0; p < producers; ++p) {
    threads.emplace_back([&, p] {
      while (!start.load()) {}
      for (int s = 0; s < per_producer; ++s) buf.append(tagged(p, s));
    });
  }
  start.store(true);
  for (auto& t : threads) t.join();
  done.store(true);
  consumer.join();

  REQUIRE(buf.size() == static_cast<std::size_t>(producers * per_producer));
  // every (producer, sequence) pair exactly once and in per-producer order
  std::vector<std::vector<int>> seen(producers);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const TransformedTransition t = buf.at(i);
    CHECK(consistent(t));
    seen[static_cast<int>(t.state[0])].push_back(static_cast<int>(t.state[1]));
  }
  for (int p = 0; p < producers; ++p) {
    REQUIRE(seen[p].size() == static_cast<std::size_t>(per_producer));
    for (int s = 0; s < per_producer; ++s) CHECK(seen[p][s] == s);
  }
}
