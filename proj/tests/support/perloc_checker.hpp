#ifndef MEMWEAVE_TESTS_PERLOC_CHECKER_HPP_
#define MEMWEAVE_TESTS_PERLOC_CHECKER_HPP_

#include <map>
#include <vector>

#include "memweave/models/wmm.hpp"

// Per-location SC oracle over WMM executions, independent of the machine's
// buffer bookkeeping. Every memory update of an address gets a version
// number; a ghost invalidation buffer mirrors which version each stale value
// belongs to. A processor's observations of one address must never go
// backwards in version order once it has read memory, read a stale value, or
// published its own store.

namespace memweave::test {

struct PerLocGhost {
  std::map<Value, int> version;                       // per address
  std::vector<std::map<Value, std::vector<int>>> gib; // stale versions
  std::vector<std::map<Value, int>> floor_;           // observation floors

  explicit PerLocGhost(int nprocs) : gib(nprocs), floor_(nprocs) {}

  int ver(Value a) const {
    auto it = version.find(a);
    return it == version.end() ? 0 : it->second;
  }
  int flr(int pid, Value a) const {
    auto it = floor_[pid].find(a);
    return it == floor_[pid].end() ? 0 : it->second;
  }

  // Applies one transition, given the machine state it fired from.
  // Returns false on a per-location SC violation.
  bool step(const WmmMachine::State& pre, const WmmMachine::Transition& t) {
    using Rule = WmmMachine::Rule;
    using Src = WmmMachine::LdSource;
    switch (t.rule) {
      case Rule::St:
        gib[t.pid].erase(t.addr);
        break;
      case Rule::Rec:
        gib[t.pid].clear();
        break;
      case Rule::Ld:
        switch (t.src) {
          case Src::Sb:
            break; // local forwarding; ordering settled at dequeue
          case Src::Mem: {
            if (ver(t.addr) < flr(t.pid, t.addr)) return false;
            floor_[t.pid][t.addr] = ver(t.addr);
            gib[t.pid].erase(t.addr);
            break;
          }
          case Src::Ib: {
            auto& list = gib[t.pid][t.addr];
            int k = list.at(t.ib_index);
            if (k < flr(t.pid, t.addr)) return false;
            floor_[t.pid][t.addr] = k;
            list.erase(list.begin(), list.begin() + t.ib_index);
            break;
          }
        }
        break;
      case Rule::DeqSb: {
        int old = ver(t.addr);
        for (std::size_t q = 0; q < pre.sb.size(); ++q) {
          if (static_cast<int>(q) == t.pid) continue;
          if (sb_contains(pre.sb[q], t.addr)) continue;
          gib[q][t.addr].push_back(old);
        }
        version[t.addr] = old + 1;
        // Publishing one's own store raises the floor to its version.
        floor_[t.pid][t.addr] = old + 1;
        break;
      }
      case Rule::Nm:
      case Rule::Com:
        break;
    }
    return true;
  }

  // The ghost buffer must mirror the machine's ib shape exactly.
  bool mirrors(const WmmMachine::State& s) const {
    for (std::size_t pid = 0; pid < s.ib.size(); ++pid) {
      std::map<Value, std::size_t> real;
      for (const auto& e : s.ib[pid].raw()) ++real[e.addr];
      for (const auto& [addr, versions] : gib[pid])
        if (real[addr] != versions.size()) return false;
      for (const auto& [addr, n] : real) {
        auto it = gib[pid].find(addr);
        if ((it == gib[pid].end() ? 0 : it->second.size()) != n) return false;
      }
    }
    return true;
  }
};

// Walks every execution path (bounded) checking the ghost invariants.
// Returns the number of complete paths checked; fails the test on violation.
struct PerLocExplorer {
  const WmmMachine& m;
  long max_paths;
  long paths = 0;
  bool ok = true;

  void run() {
    PerLocGhost ghost(static_cast<int>(m.initial_state().sb.size()));
    walk(m.initial_state(), ghost);
  }

  void walk(const WmmMachine::State& s, const PerLocGhost& ghost) {
    if (!ok || paths >= max_paths) return;
    auto ts = m.enabled(s);
    if (ts.empty()) {
      ++paths;
      return;
    }
    for (const auto& t : ts) {
      PerLocGhost g = ghost;
      if (!g.step(s, t)) {
        ok = false;
        return;
      }
      auto next = m.apply(s, t);
      if (!g.mirrors(next)) {
        ok = false;
        return;
      }
      walk(next, g);
      if (!ok || paths >= max_paths) return;
    }
  }
};

} // namespace memweave::test

#endif // MEMWEAVE_TESTS_PERLOC_CHECKER_HPP_
