#ifndef MEMWEAVE_PROGRAM_HPP_
#define MEMWEAVE_PROGRAM_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "memweave/litmus.hpp"

// Compiled form of a litmus test: addresses and registers become dense
// indices so machine states stay small and cheap to hash.

namespace memweave {

using ExprId = int;

struct ExprNode {
  Expr::Kind kind = Expr::Kind::Const;
  Value value = 0; // Const: literal; AddrLit: encoded address
  int reg = -1;    // RegRead: per-thread register index
  ExprId lhs = -1, rhs = -1;
};

struct CInstr {
  Instruction::Op op = Instruction::Op::Commit;
  int reg = -1;          // Load/Assign target register index
  ExprId e1 = -1, e2 = -1;
  Rel rel = Rel::Eq;
};

struct CThread {
  std::string name;
  std::vector<std::string> reg_names;
  std::vector<CInstr> code;
};

class CompiledProgram {
 public:
  static CompiledProgram compile(const Program& p);

  const std::vector<CThread>& threads() const { return threads_; }
  const std::vector<std::string>& addresses() const { return addr_names_; }
  const std::vector<Value>& init_values() const { return init_; }
  int thread_count() const { return static_cast<int>(threads_.size()); }
  int address_count() const { return static_cast<int>(addr_names_.size()); }

  // Register files of all threads live in one flat array per state.
  int reg_base(int tid) const { return reg_base_[tid]; }
  int reg_count(int tid) const {
    return static_cast<int>(threads_[tid].reg_names.size());
  }
  int total_regs() const { return total_regs_; }

  Value encode(int addr_idx) const { return kAddressBase + addr_idx; }
  // Declared index for an encoded location, or -1 for a dynamic location.
  int decode(Value enc) const {
    Value idx = enc - kAddressBase;
    return idx >= 0 && idx < address_count() ? static_cast<int>(idx) : -1;
  }

  Value eval(ExprId id, std::span<const Value> regs) const;
  const ExprNode& expr_node(ExprId id) const { return nodes_[id]; }

  std::string location_name(Value enc) const;

 private:
  std::vector<CThread> threads_;
  std::vector<std::string> addr_names_;
  std::vector<Value> init_;
  std::vector<ExprNode> nodes_;
  std::vector<int> reg_base_;
  int total_regs_ = 0;
};

// Atomic memory: total over all integer locations. Declared addresses are
// always materialized; dynamic locations (reachable via address arithmetic)
// are kept only while they differ from their implicit 0 initialization, so
// equal memories have equal representations.
struct Memory {
  std::vector<Value> declared;
  std::map<Value, Value> extra;

  static Memory initial(const CompiledProgram& p);
  Value read(const CompiledProgram& p, Value loc) const;
  void write(const CompiledProgram& p, Value loc, Value v);

  bool operator==(const Memory&) const = default;
};

// Which registers a final observation reports: all load targets plus any
// register the condition mentions.
struct ObsSpec {
  std::vector<std::pair<int, int>> regs; // (thread, register), sorted

  static ObsSpec for_test(const CompiledProgram& p, const LitmusTest& t);
  static ObsSpec load_targets(const CompiledProgram& p);
  int index_of(int tid, int reg) const;
};

struct Outcome {
  std::vector<Value> regs;   // aligned with ObsSpec::regs
  std::vector<Value> memory; // declared addresses, in order

  auto operator<=>(const Outcome&) const = default;
};

std::string render_outcome(const Outcome& o, const CompiledProgram& p,
                           const ObsSpec& spec);

// Condition over compiled ids; evaluates against an Outcome observed under
// the matching ObsSpec.
class CompiledCondition {
 public:
  static CompiledCondition compile(const Condition& c, const CompiledProgram& p,
                                   const ObsSpec& spec);
  bool eval(const Outcome& o) const;

 private:
  struct Node {
    Condition::Kind kind;
    int obs_index = -1;  // RegEq: index into Outcome::regs
    int addr_idx = -1;   // MemEq
    Value value = 0;
    std::vector<int> kids;
  };
  std::vector<Node> nodes_;
  int root_ = -1;
  int build(const Condition& c, const CompiledProgram& p, const ObsSpec& spec);
};

bool check_condition(const CompiledCondition& c, const Outcome& o);

} // namespace memweave

#endif // MEMWEAVE_PROGRAM_HPP_
