#ifndef MEMWEAVE_LITMUS_HPP_
#define MEMWEAVE_LITMUS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Program representation, litmus file format, and the shared outcome/verdict
// vocabulary. Everything here is an immutable value after construction.

namespace memweave {

using Value = std::int64_t;

// Symbolic memory locations are encoded as distinct integers so that address
// arithmetic (e.g. "b + r1 - 1") is exact and collision-free for the value
// ranges litmus tests use.
constexpr Value kAddressBase = 1024;

enum class ModelId { SC, TSO, PSO, WMM, WMMS, FM, WMM_AX };

const char* model_name(ModelId id);
std::optional<ModelId> model_from_name(const std::string& name);
std::vector<ModelId> all_operational_models();

enum class Verdict { Allow, Forbid };

inline const char* verdict_name(Verdict v) {
  return v == Verdict::Allow ? "allow" : "forbid";
}

struct Expr {
  enum class Kind { Const, AddrLit, RegRead, Add, Sub };

  Kind kind = Kind::Const;
  Value value = 0;        // Const
  std::string name;       // AddrLit / RegRead
  std::vector<Expr> kids; // Add / Sub: exactly two

  static Expr constant(Value v);
  static Expr addr(std::string name);
  static Expr reg(std::string name);
  static Expr add(Expr l, Expr r);
  static Expr sub(Expr l, Expr r);

  bool operator==(const Expr&) const = default;
};

// Evaluation is total: registers missing from `regs` read as 0, address
// literals evaluate through `addr_encoding`.
Value eval_expr(const Expr& e, const std::map<std::string, Value>& regs,
                const std::map<std::string, Value>& addr_encoding);

enum class Rel { Eq, Ne, Lt, Gt };

const char* rel_name(Rel r);
bool rel_holds(Rel r, Value l, Value v);

struct Instruction {
  enum class Op { Load, Store, Commit, Reconcile, Assign, ExitIf };

  Op op = Op::Commit;
  std::string reg; // Load/Assign target
  Expr e1, e2;     // Load: e1 = addr; Store: e1 = addr, e2 = data;
                   // Assign: e1; ExitIf: e1 rel e2
  Rel rel = Rel::Eq;

  static Instruction load(std::string reg, Expr addr);
  static Instruction store(Expr addr, Expr data);
  static Instruction commit();
  static Instruction reconcile();
  static Instruction assign(std::string reg, Expr e);
  static Instruction exit_if(Expr lhs, Rel rel, Expr rhs);

  bool operator==(const Instruction&) const = default;
};

struct Thread {
  std::string name;
  std::vector<Instruction> code;

  bool operator==(const Thread&) const = default;
};

struct Program {
  // Declaration order of `init` fixes the address encoding.
  std::vector<std::pair<std::string, Value>> init;
  std::vector<Thread> threads;

  std::map<std::string, Value> address_encoding() const;
  bool has_address(const std::string& name) const;
  bool branch_free() const;  // no ExitIf anywhere
  bool fence_free() const;   // no Commit/Reconcile anywhere
  std::size_t instruction_count() const;

  bool operator==(const Program&) const = default;
};

// Conjunction/disjunction tree over register and final-memory equalities.
struct Condition {
  enum class Kind { And, Or, RegEq, MemEq };

  Kind kind = Kind::And;
  std::string thread, reg, addr;
  Value value = 0;
  std::vector<Condition> kids;

  static Condition reg_eq(std::string thread, std::string reg, Value v);
  static Condition mem_eq(std::string addr, Value v);
  static Condition conj(std::vector<Condition> kids);
  static Condition disj(std::vector<Condition> kids);

  bool operator==(const Condition&) const = default;
};

struct TopologySpec {
  std::vector<std::pair<std::string, std::string>> segments; // name -> parent ("mem" = root)
  std::vector<std::pair<std::string, std::string>> procs;    // thread -> segment

  bool operator==(const TopologySpec&) const = default;
};

struct LitmusTest {
  std::string name;
  Program program;
  Condition condition;
  std::vector<std::pair<ModelId, Verdict>> expectations;
  std::optional<TopologySpec> topology;

  std::optional<Verdict> expectation(ModelId id) const;

  bool operator==(const LitmusTest&) const = default;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, int line, int col);
  int line, col;
};

// Parses a complete litmus document. Deterministic; trailing input is an
// error. See README for the grammar.
LitmusTest parse_litmus(const std::string& text);

// Parses a standalone topology description: either a bare statement list or
// a full "topology { ... }" block. Thread bindings are validated later,
// against the program the topology is applied to.
TopologySpec parse_topology_text(const std::string& text);

// Emits a document that parses back to an equal LitmusTest.
std::string serialize_litmus(const LitmusTest& test);

} // namespace memweave

#endif // MEMWEAVE_LITMUS_HPP_
