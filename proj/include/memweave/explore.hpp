#ifndef MEMWEAVE_EXPLORE_HPP_
#define MEMWEAVE_EXPLORE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "memweave/program.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

// Exhaustive exploration of an abstract machine's transition graph. The
// parallel explorer processes each BFS frontier with OpenMP and must produce
// the exact OutcomeSet of the serial reference explorers.

namespace memweave {

// Contract every model implements. apply() is pure; states hash and compare
// on canonical form via canonical_key().
template <typename M>
concept AbstractMachine = requires(const M m, const typename M::State s,
                                   const typename M::Transition t) {
  { m.initial_state() } -> std::same_as<typename M::State>;
  { m.enabled(s) } -> std::same_as<std::vector<typename M::Transition>>;
  { m.apply(s, t) } -> std::same_as<typename M::State>;
  { m.is_final(s) } -> std::same_as<bool>;
  { m.observe(s) } -> std::same_as<Outcome>;
  { m.canonical_key(s) } -> std::same_as<std::string>;
  { m.describe(t) } -> std::same_as<std::string>;
};

struct Limits {
  std::size_t max_states = 5'000'000;
  std::size_t max_depth = 0; // 0 = unlimited
};

struct Stats {
  std::uint64_t states_visited = 0;
  std::uint64_t transitions_fired = 0;
  std::uint64_t max_frontier = 0;
};

struct OutcomeSet {
  std::set<Outcome> outcomes;
  Stats stats;

  bool contains(const Outcome& o) const { return outcomes.count(o) != 0; }
};

inline bool subset_of(const OutcomeSet& a, const OutcomeSet& b) {
  for (const auto& o : a.outcomes)
    if (!b.contains(o)) return false;
  return true;
}

enum class Traversal { Dfs, Bfs, ParallelBfs };

struct StateLimitExceeded : std::runtime_error {
  explicit StateLimitExceeded(std::size_t limit)
      : std::runtime_error("state limit exceeded (" + std::to_string(limit) +
                           " states)") {}
};

// A non-final state with no enabled transition indicates a model bug.
struct StuckState : std::runtime_error {
  explicit StuckState(const std::string& detail)
      : std::runtime_error("stuck non-final state: " + detail) {}
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Visited set sharded by key hash; the only structure the parallel explorer
// shares besides the merged outcome set.
class ShardedVisited {
 public:
  explicit ShardedVisited(std::size_t shards = 64) : shards_(shards) {}

  bool insert(std::string key) {
    auto& sh = shards_[fnv1a(key) % shards_.size()];
    std::lock_guard<std::mutex> lock(sh.mu);
    return sh.set.insert(std::move(key)).second;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& sh : shards_)
      n += sh.set.size();
    return n;
  }

 private:
  struct Shard {
    std::mutex mu;
    std::unordered_set<std::string> set;
  };
  std::vector<Shard> shards_;
};

} // namespace detail

template <AbstractMachine M>
OutcomeSet explore_serial(const M& m, const Limits& lim, Traversal order) {
  OutcomeSet result;
  std::unordered_set<std::string> visited;
  // (state, depth); deque serves as stack or queue depending on the order.
  std::deque<std::pair<typename M::State, std::size_t>> work;

  auto initial = m.initial_state();
  visited.insert(m.canonical_key(initial));
  work.emplace_back(std::move(initial), 0);

  while (!work.empty()) {
    result.stats.max_frontier =
        std::max<std::uint64_t>(result.stats.max_frontier, work.size());
    auto [state, depth] = order == Traversal::Dfs
                              ? std::move(work.back())
                              : std::move(work.front());
    if (order == Traversal::Dfs)
      work.pop_back();
    else
      work.pop_front();
    ++result.stats.states_visited;

    auto transitions = m.enabled(state);
    if (transitions.empty()) {
      if (!m.is_final(state))
        throw StuckState(m.canonical_key(state));
      result.outcomes.insert(m.observe(state));
      continue;
    }
    if (lim.max_depth && depth >= lim.max_depth) continue;
    for (const auto& t : transitions) {
      ++result.stats.transitions_fired;
      auto next = m.apply(state, t);
      if (visited.insert(m.canonical_key(next)).second) {
        if (visited.size() > lim.max_states)
          throw StateLimitExceeded(lim.max_states);
        work.emplace_back(std::move(next), depth + 1);
      }
    }
  }
  return result;
}

// Frontier-parallel BFS. Each OpenMP thread expands a slice of the current
// frontier into thread-local buffers; the sharded visited set deduplicates
// across threads. Outcomes merge into one set, so the result is identical to
// a serial run regardless of the schedule.
template <AbstractMachine M>
OutcomeSet explore_parallel(const M& m, const Limits& lim, int jobs) {
  OutcomeSet result;
  detail::ShardedVisited visited;
  std::vector<typename M::State> frontier;

  auto initial = m.initial_state();
  visited.insert(m.canonical_key(initial));
  frontier.push_back(std::move(initial));

  std::size_t depth = 0;
  while (!frontier.empty()) {
    result.stats.max_frontier =
        std::max<std::uint64_t>(result.stats.max_frontier, frontier.size());
    result.stats.states_visited += frontier.size();
    if (lim.max_depth && depth >= lim.max_depth) {
      for (const auto& s : frontier)
        if (m.enabled(s).empty()) result.outcomes.insert(m.observe(s));
      break;
    }

    std::vector<typename M::State> next;
    std::uint64_t fired = 0;
    std::string stuck_detail;
    bool stuck = false;
    // Exceptions must not cross the parallel region; a stuck state is
    // recorded and rethrown afterwards.
#ifdef _OPENMP
#pragma omp parallel num_threads(jobs) reduction(+ : fired)
#endif
    {
      std::vector<typename M::State> local_next;
      std::set<Outcome> local_outcomes;
      bool local_stuck = false;
      std::string local_detail;
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 16) nowait
#endif
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(frontier.size()); ++i) {
        const auto& state = frontier[i];
        auto transitions = m.enabled(state);
        if (transitions.empty()) {
          if (!m.is_final(state)) {
            local_stuck = true;
            local_detail = m.canonical_key(state);
          } else {
            local_outcomes.insert(m.observe(state));
          }
          continue;
        }
        for (const auto& t : transitions) {
          ++fired;
          auto succ = m.apply(state, t);
          if (visited.insert(m.canonical_key(succ)))
            local_next.push_back(std::move(succ));
        }
      }
#ifdef _OPENMP
#pragma omp critical(memweave_explore_merge)
#endif
      {
        if (local_stuck) {
          stuck = true;
          stuck_detail = local_detail;
        }
        next.insert(next.end(), std::make_move_iterator(local_next.begin()),
                    std::make_move_iterator(local_next.end()));
        result.outcomes.insert(local_outcomes.begin(), local_outcomes.end());
      }
    }
    if (stuck) throw StuckState(stuck_detail);
    result.stats.transitions_fired += fired;
    if (visited.size() > lim.max_states)
      throw StateLimitExceeded(lim.max_states);
    frontier = std::move(next);
    ++depth;
  }
  return result;
}

template <AbstractMachine M>
OutcomeSet enumerate_outcomes(const M& m, const Limits& lim,
                              Traversal order = Traversal::Bfs, int jobs = 1) {
  if (order == Traversal::ParallelBfs && jobs != 1)
    return explore_parallel(m, lim, jobs);
  if (order == Traversal::ParallelBfs)
    return explore_serial(m, lim, Traversal::Bfs);
  return explore_serial(m, lim, order);
}

inline Verdict verdict(const OutcomeSet& outcomes, const CompiledCondition& cond) {
  for (const auto& o : outcomes.outcomes)
    if (cond.eval(o)) return Verdict::Allow;
  return Verdict::Forbid;
}

template <typename M>
struct Trace {
  std::vector<typename M::Transition> transitions;
  std::vector<std::uint64_t> state_hashes; // one per step, after the firing
  Outcome final_outcome;
};

// Shortest witness for the condition, or nullopt when the verdict is Forbid.
// BFS expansion order is fixed, so the result is deterministic.
template <AbstractMachine M>
std::optional<Trace<M>> witness_trace(const M& m, const CompiledCondition& cond,
                                      const Limits& lim) {
  struct Edge {
    std::string parent;
    typename M::Transition via;
  };
  std::unordered_map<std::string, Edge> parent;
  std::deque<typename M::State> queue;

  auto initial = m.initial_state();
  std::string initial_key = m.canonical_key(initial);
  parent.emplace(initial_key, Edge{});
  queue.push_back(std::move(initial));

  while (!queue.empty()) {
    auto state = std::move(queue.front());
    queue.pop_front();
    std::string key = m.canonical_key(state);

    auto transitions = m.enabled(state);
    if (transitions.empty()) {
      if (!m.is_final(state)) throw StuckState(key);
      Outcome o = m.observe(state);
      if (!cond.eval(o)) continue;
      // Walk the parent chain back, then replay forward.
      std::vector<typename M::Transition> path;
      std::string cur = key;
      while (cur != initial_key) {
        const Edge& e = parent.at(cur);
        path.push_back(e.via);
        cur = e.parent;
      }
      std::reverse(path.begin(), path.end());
      Trace<M> trace;
      auto s = m.initial_state();
      for (const auto& t : path) {
        s = m.apply(s, t);
        trace.state_hashes.push_back(detail::fnv1a(m.canonical_key(s)));
      }
      trace.transitions = std::move(path);
      trace.final_outcome = std::move(o);
      return trace;
    }
    for (const auto& t : transitions) {
      auto next = m.apply(state, t);
      std::string nkey = m.canonical_key(next);
      if (parent.emplace(nkey, Edge{key, t}).second) {
        if (parent.size() > lim.max_states)
          throw StateLimitExceeded(lim.max_states);
        queue.push_back(std::move(next));
      }
    }
  }
  return std::nullopt;
}

template <AbstractMachine M>
std::vector<std::string> trace_lines(const M& m, const Trace<M>& trace) {
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < trace.transitions.size(); ++i)
    lines.push_back(std::to_string(i + 1) + ": " + m.describe(trace.transitions[i]));
  return lines;
}

// Canonical-key serialization helpers shared by the model states.
namespace keyio {

inline void put_i64(std::string& out, std::int64_t v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

inline void put_u32(std::string& out, std::uint32_t v) {
  out.append(reinterpret_cast<const char*>(&v), sizeof v);
}

inline void put_i64s(std::string& out, std::span<const Value> vs) {
  out.append(reinterpret_cast<const char*>(vs.data()), vs.size_bytes());
}

} // namespace keyio

} // namespace memweave

#endif // MEMWEAVE_EXPLORE_HPP_
