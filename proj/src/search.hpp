#pragma once

// Generic frontier-split depth-first search used by all three enumerators.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "designcount/numeric.hpp"

namespace designcount::detail {

template <typename State>
struct SearchOutcome {
  BigInt leaves = 0;
  std::uint64_t nodes = 0;
  bool complete = true;
  std::vector<State> collected;  // leaves in tree order, when collecting
};

/// Engine requirements:
///   State root() const;
///   bool is_leaf(const State&) const;
///   template <class F> void for_each_child(const State&, F&&) const;
template <typename Engine>
class Searcher {
 public:
  using State = typename Engine::State;

  Searcher(const Engine& engine, int jobs, std::optional<std::uint64_t> budget, bool collect)
      : engine_(engine),
        jobs_(jobs < 1 ? 1 : jobs),
        budget_(budget),
        collect_(collect),
        flush_every_(budget ? std::clamp<std::uint64_t>(*budget / 64, 1, kFlushEvery) : kFlushEvery) {}

  SearchOutcome<State> run(int split_depth) {
    SearchOutcome<State> out;
    std::vector<State> frontier;
    std::vector<State> level{engine_.root()};
    std::uint64_t frontier_nodes = 1;
    for (int depth = 0; depth < split_depth && !level.empty(); ++depth) {
      if (budget_ && frontier_nodes > *budget_) break;
      std::vector<State> next;
      for (const State& s : level) {
        if (engine_.is_leaf(s)) {
          frontier.push_back(s);
          continue;
        }
        engine_.for_each_child(s, [&](const State& c) {
          ++frontier_nodes;
          next.push_back(c);
        });
      }
      level = std::move(next);
    }
    // Leaves found above the split depth go first, then the cut level.
    frontier.insert(frontier.end(), level.begin(), level.end());
    nodes_.store(frontier_nodes);
    if (budget_ && frontier_nodes > *budget_) aborted_.store(true);

    std::vector<std::uint64_t> counts(frontier.size(), 0);
    std::vector<std::vector<State>> found(collect_ ? frontier.size() : 0);
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
      Worker w;
      for (;;) {
        const std::size_t idx = cursor.fetch_add(1);
        if (idx >= frontier.size() || aborted_.load(std::memory_order_relaxed)) break;
        w.sink = collect_ ? &found[idx] : nullptr;
        counts[idx] = descend(frontier[idx], w);
      }
      flush(w);
    };
    const int threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs_), frontier.size()));
    if (threads <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }

    for (std::uint64_t c : counts) out.leaves += c;
    out.nodes = nodes_.load();
    out.complete = !aborted_.load();
    if (collect_)
      for (auto& chunk : found)
        for (auto& s : chunk) out.collected.push_back(std::move(s));
    return out;
  }

 private:
  static constexpr std::uint64_t kFlushEvery = 1 << 12;

  struct Worker {
    std::uint64_t pending = 0;
    std::vector<State>* sink = nullptr;
  };

  void flush(Worker& w) {
    if (w.pending == 0) return;
    const std::uint64_t total = nodes_.fetch_add(w.pending) + w.pending;
    w.pending = 0;
    if (budget_ && total > *budget_) aborted_.store(true);
  }

  std::uint64_t descend(const State& s, Worker& w) {
    if (engine_.is_leaf(s)) {
      if (w.sink) w.sink->push_back(s);
      return 1;
    }
    std::uint64_t total = 0;
    engine_.for_each_child(s, [&](const State& c) {
      if (aborted_.load(std::memory_order_relaxed)) return;
      if (++w.pending >= flush_every_) flush(w);
      total += descend(c, w);
    });
    return total;
  }

  const Engine& engine_;
  int jobs_;
  std::optional<std::uint64_t> budget_;
  bool collect_;
  std::uint64_t flush_every_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> aborted_{false};
};

}  // namespace designcount::detail
