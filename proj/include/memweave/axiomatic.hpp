#ifndef MEMWEAVE_AXIOMATIC_HPP_
#define MEMWEAVE_AXIOMATIC_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "memweave/explore.hpp"
#include "memweave/program.hpp"

// Axiomatic WMM: a candidate execution is a total memory order over all
// loads, stores, and fences. It is consistent when the order-preserving
// table is respected (Inst-Order) and every load reads the youngest store
// that precedes it in memory order or program order (Ld-Val). Branch-free
// programs only; outcomes are enumerated over all memory orders.

namespace memweave {

enum class AxKind { Load, Store, Reconcile, Commit };

// The order-preserving table over resolved instruction classes: whether
// program order between X and Y must be kept in memory order.
bool ax_order(AxKind x, Value addr_x, AxKind y, Value addr_y);

// Deferred variant: nullopt when the verdict hinges on an unresolved address.
std::optional<bool> ax_order_partial(AxKind x, std::optional<Value> addr_x,
                                     AxKind y, std::optional<Value> addr_y);

struct BranchyProgram : std::runtime_error {
  BranchyProgram()
      : std::runtime_error(
            "axiomatic enumeration handles straight-line programs only") {}
};

struct TooLarge : std::runtime_error {
  explicit TooLarge(std::size_t n, std::size_t bound)
      : std::runtime_error("program has " + std::to_string(n) +
                           " memory/fence instructions, enumeration bound is " +
                           std::to_string(bound)) {}
};

struct AxOptions {
  std::size_t max_instructions = 10;
  bool prune = true; // skip memory-order prefixes that already break Inst-Order
};

struct AxStats {
  std::uint64_t orders_checked = 0;
  std::uint64_t consistent_executions = 0;
  std::uint64_t fixpoint_stalls = 0;
};

// One memory/fence instruction instance of a branch-free program.
struct AxInstr {
  AxKind kind = AxKind::Load;
  int tid = 0;
  int code_index = 0; // position in the thread's full instruction list
  std::optional<Value> static_addr; // literal address, when known
};

struct AxProgram {
  std::vector<AxInstr> instrs;             // all memory/fence instructions
  std::vector<std::vector<int>> by_thread; // po order, indices into instrs

  static AxProgram build(const CompiledProgram& p);
};

// A resolved consistent execution for one memory order.
struct AxExecution {
  std::vector<int> mo;             // instr indices, oldest first
  std::vector<Value> addr;         // per instr (loads/stores)
  std::vector<Value> value;        // per instr: load result / store data
  std::vector<int> rf;             // per load instr: store index or -1 (init)
  Outcome outcome;
};

// Resolves one candidate memory order by fixpoint, verifying both axioms.
// Returns nullopt when an axiom fails; counts a stall when value resolution
// cannot make progress (diagnostic, never expected on well-formed tests).
std::optional<AxExecution> resolve_execution(const CompiledProgram& p,
                                             const ObsSpec& obs,
                                             const AxProgram& ax,
                                             const std::vector<int>& mo,
                                             AxStats* stats = nullptr);

OutcomeSet axiomatic_outcomes(const CompiledProgram& p, const ObsSpec& obs,
                              const AxOptions& opt = {},
                              AxStats* stats = nullptr);

} // namespace memweave

#endif // MEMWEAVE_AXIOMATIC_HPP_
