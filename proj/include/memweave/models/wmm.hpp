#ifndef MEMWEAVE_MODELS_WMM_HPP_
#define MEMWEAVE_MODELS_WMM_HPP_

#include <string>
#include <vector>

#include "memweave/models/baseline.hpp"

// The WMM machine: TSO-style store buffers plus a per-processor invalidation
// buffer of stale values a load may still observe. Commit drains the local
// sb; Reconcile discards the local ib.

namespace memweave {

// Stale values a processor may still observe, grouped by address in one
// flat array. Within an address group the order is staleness order, oldest
// first; the newest stale value sits last, so "older than the load result"
// is a group prefix. Groups are kept sorted by address, which doubles as the
// canonical form (order across addresses carries no meaning).
class InvalBuffer {
 public:
  struct Entry {
    Value addr;
    Value value;
    bool operator==(const Entry&) const = default;
  };

  bool has(Value addr) const { return count(addr) > 0; }
  int count(Value addr) const;
  Value at(Value addr, int index) const;

  // Appends v as the newest stale value for addr.
  void push_stale(Value addr, Value v);
  void erase_addr(Value addr);
  // Removes the values older than `index` for addr; the indexed value stays.
  void erase_prefix(Value addr, int index);
  void clear() { entries_.clear(); }
  bool empty() const { return entries_.empty(); }

  const std::vector<Entry>& raw() const { return entries_; }

  bool operator==(const InvalBuffer&) const = default;

 private:
  std::pair<int, int> range(Value addr) const; // [first, last)
  std::vector<Entry> entries_;
};

void key_ib(std::string& out, const InvalBuffer& ib);

struct ModelInvariantViolation : std::runtime_error {
  explicit ModelInvariantViolation(const std::string& what)
      : std::runtime_error("model invariant violated: " + what) {}
};

class WmmMachine {
 public:
  struct State {
    CoreState core;
    Memory mem;
    std::vector<StoreBuffer> sb;
    std::vector<InvalBuffer> ib;
  };

  enum class Rule { Nm, Ld, St, Com, Rec, DeqSb };
  enum class LdSource { Sb, Mem, Ib };

  struct Transition {
    Rule rule = Rule::Nm;
    int pid = 0;
    LdSource src = LdSource::Mem;
    int ib_index = -1;   // Ld from ib: which stale value
    int sb_index = -1;   // DeqSb: which entry
    Value addr = 0;      // Ld/St/DeqSb: resolved location
    Value value = 0;     // Ld: result; St/DeqSb: store data
  };

  WmmMachine(const CompiledProgram& p, const ObsSpec& obs, bool validate = false)
      : p_(p), obs_(obs), validate_(validate) {}

  State initial_state() const;
  std::vector<Transition> enabled(const State& s) const;
  State apply(const State& s, const Transition& t) const;
  bool is_final(const State& s) const;
  Outcome observe(const State& s) const;
  std::string canonical_key(const State& s) const;
  std::string describe(const Transition& t) const;

  // For every processor, an address never sits in the sb and the ib at the
  // same time. Store execution purges the ib and the dequeue guard skips
  // buffered addresses, so this holds after every rule.
  static void check_sb_ib_exclusion(const State& s);

 private:
  const CompiledProgram& p_;
  ObsSpec obs_;
  bool validate_;
};

} // namespace memweave

#endif // MEMWEAVE_MODELS_WMM_HPP_
