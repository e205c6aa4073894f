#ifndef MEMWEAVE_MODELS_BASELINE_HPP_
#define MEMWEAVE_MODELS_BASELINE_HPP_

#include <span>
#include <string>
#include <vector>

#include "memweave/program.hpp"

// I2E machines for SC and TSO/PSO: n atomic processors over an n-ported
// atomic memory, with a per-processor store buffer for TSO/PSO.

namespace memweave {

// Register files and program counters shared by every machine. pc equal to
// the code length means the thread has terminated (ExitIf jumps there).
// Registers of all threads sit in one flat array, indexed through the
// program's reg_base, so copying a state costs few allocations.
struct CoreState {
  std::vector<Value> regs;
  std::vector<int> pc;

  bool operator==(const CoreState&) const = default;
};

CoreState initial_core(const CompiledProgram& p);
bool all_done(const CompiledProgram& p, const CoreState& c);
void key_core(std::string& out, const CoreState& c);

inline std::span<Value> thread_regs(const CompiledProgram& p, CoreState& c,
                                    int tid) {
  return {c.regs.data() + p.reg_base(tid),
          static_cast<std::size_t>(p.reg_count(tid))};
}

inline std::span<const Value> thread_regs(const CompiledProgram& p,
                                          const CoreState& c, int tid) {
  return {c.regs.data() + p.reg_base(tid),
          static_cast<std::size_t>(p.reg_count(tid))};
}

struct SbEntry {
  Value addr = 0;
  Value value = 0;

  bool operator==(const SbEntry&) const = default;
};

using StoreBuffer = std::vector<SbEntry>; // insertion order, oldest first

// Index of the youngest entry for addr, or -1.
int sb_youngest(const StoreBuffer& sb, Value addr);
bool sb_contains(const StoreBuffer& sb, Value addr);
// Indices of the oldest entry per distinct address, in buffer order.
std::vector<int> sb_oldest_per_address(const StoreBuffer& sb);

class ScMachine {
 public:
  struct State {
    CoreState core;
    Memory mem;
  };

  struct Transition {
    int pid = 0;
    int instr = 0;
  };

  ScMachine(const CompiledProgram& p, const ObsSpec& obs) : p_(p), obs_(obs) {}

  State initial_state() const;
  std::vector<Transition> enabled(const State& s) const;
  State apply(const State& s, const Transition& t) const;
  bool is_final(const State& s) const;
  Outcome observe(const State& s) const;
  std::string canonical_key(const State& s) const;
  std::string describe(const Transition& t) const;

 private:
  const CompiledProgram& p_;
  ObsSpec obs_;
};

// TSO and PSO share state shape and all instruction rules; they differ only
// in which store-buffer entries the background dequeue may take.
class TsoMachine {
 public:
  struct State {
    CoreState core;
    Memory mem;
    std::vector<StoreBuffer> sb;
  };

  enum class Rule { Nm, Ld, St, Com, DeqSb };

  struct Transition {
    Rule rule = Rule::Nm;
    int pid = 0;
    int sb_index = -1;   // DeqSb: which entry leaves the buffer
    bool from_sb = false; // Ld: forwarded from the local sb
  };

  TsoMachine(const CompiledProgram& p, const ObsSpec& obs, bool pso)
      : p_(p), obs_(obs), pso_(pso) {}

  State initial_state() const;
  std::vector<Transition> enabled(const State& s) const;
  State apply(const State& s, const Transition& t) const;
  bool is_final(const State& s) const;
  Outcome observe(const State& s) const;
  std::string canonical_key(const State& s) const;
  std::string describe(const Transition& t) const;

 private:
  const CompiledProgram& p_;
  ObsSpec obs_;
  bool pso_;
};

} // namespace memweave

#endif // MEMWEAVE_MODELS_BASELINE_HPP_
