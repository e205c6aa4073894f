#include "memweave/corpus.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace memweave {

namespace {

struct RawEntry {
  const char* family;
  const char* note;
  const char* source;
};

// The corpus/ directory ships byte-identical copies of these documents.
const RawEntry kRaw[] = {
    {"SB",
     "Store buffering: with private store buffers both loads can execute "
     "while both stores are still buffered, so both may read 0.",
     R"(test SB
init { a=0, b=0 }
thread P1 { St a 1; r1 = Ld b; }
thread P2 { St b 1; r2 = Ld a; }
exists (P1.r1 = 0 /\ P2.r2 = 0)
expect { SC: forbid, TSO: allow, PSO: allow, WMM: allow, WMM-S: allow, FM: allow }
)"},

    {"SB",
     "Store buffering closed off by a full fence after each store: the "
     "buffers drain and stale values are discarded before the loads.",
     R"(test SB+Fence
init { a=0, b=0 }
thread P1 { St a 1; Fence; r1 = Ld b; }
thread P2 { St b 1; Fence; r2 = Ld a; }
exists (P1.r1 = 0 /\ P2.r2 = 0)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: forbid, WMM-S: forbid }
)"},

    {"MP",
     "Message passing: seeing the flag (b) but missing the data (a) needs "
     "St-St or Ld-Ld reordering, which per-address buffers permit.",
     R"(test MP
init { a=0, b=0 }
thread P1 { St a 1; St b 1; }
thread P2 { r1 = Ld b; r2 = Ld a; }
exists (P2.r1 = 1 /\ P2.r2 = 0)
expect { SC: forbid, TSO: forbid, PSO: allow, WMM: allow, WMM-S: allow }
)"},

    {"MP",
     "Message passing with ordered stores: the consumer can still read the "
     "stale data value from its invalidation buffer.",
     R"(test MP+Commit
init { a=0, b=0 }
thread P1 { St a 1; Commit; St b 1; }
thread P2 { r1 = Ld b; r2 = Ld a; }
exists (P2.r1 = 1 /\ P2.r2 = 0)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: allow, WMM-S: allow }
)"},

    {"MP",
     "Fully fenced message passing: Commit orders the stores and Reconcile "
     "clears stale values between the loads, restoring the expected result.",
     R"(test MP+Commit+Reconcile
init { a=0, b=0 }
thread P1 { St a 1; Commit; St b 1; }
thread P2 { r1 = Ld b; Reconcile; r2 = Ld a; }
exists (P2.r1 = 1 /\ P2.r2 = 0)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: forbid, WMM-S: forbid }
)"},

    {"LB",
     "Load buffering: each load would have to read the other thread's later "
     "store. Instantaneous in-order execution rules out Ld-St reordering.",
     R"(test LB
init { a=0, b=0 }
thread P1 { r1 = Ld b; St a 1; }
thread P2 { r2 = Ld a; St b 1; }
exists (P1.r1 = 1 /\ P2.r2 = 1)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: forbid, WMM-S: forbid, FM: forbid }
)"},

    {"SBE",
     "Store buffering with local forwarding: each thread reads its own "
     "buffered store early while the other thread still sees the old value.",
     R"(test SBE
init { a=0, b=0 }
thread P1 { St a 1; r1 = Ld a; r2 = Ld (b + r1 - 1); }
thread P2 { St b 1; r3 = Ld b; r4 = Ld (a + r3 - 1); }
exists (P1.r1 = 1 /\ P1.r2 = 0 /\ P2.r3 = 1 /\ P2.r4 = 0)
expect { SC: forbid, TSO: allow, PSO: allow, WMM: allow, WMM-S: allow }
)"},

    {"SBE",
     "Forwarding survives Ld-Ld fences: the early read comes from the local "
     "store buffer, not from a stale value, so Reconcile does not stop it.",
     R"(test SBE+Reconciles
init { a=0, b=0 }
thread P1 { St a 1; r1 = Ld a; Reconcile; r2 = Ld (b + r1 - 1); }
thread P2 { St b 1; r3 = Ld b; Reconcile; r4 = Ld (a + r3 - 1); }
exists (P1.r1 = 1 /\ P1.r2 = 0 /\ P2.r3 = 1 /\ P2.r4 = 0)
expect { SC: forbid, TSO: allow, PSO: allow, WMM: allow, WMM-S: allow }
)"},

    {"WRC",
     "Write-to-read causality: P2 observes a=2 and publishes b=1, yet P3 "
     "reads b=1 and still a=0. Requires a store visible to one observer "
     "before the rest, e.g. via a buffer shared by P1 and P2.",
     R"(test WRC
init { a=0, b=0 }
thread P1 { St a 2; }
thread P2 { r1 = Ld a; St b (r1 - 1); }
thread P3 { r2 = Ld b; Reconcile; r3 = Ld a; }
exists (P2.r1 = 2 /\ P3.r2 = 1 /\ P3.r3 = 0)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: forbid, WMM-S: allow, FM: allow }
topology { seg u1 parent mem; seg s1 parent u1; seg s2 parent u1; seg s3 parent mem; proc P1 at s1; proc P2 at s2; proc P3 at s3; }
)"},

    {"WRC",
     "WRC with a Commit after the observing load: the observed store must "
     "reach memory before the publication, restoring causality.",
     R"(test WRC+Commit
init { a=0, b=0 }
thread P1 { St a 2; }
thread P2 { r1 = Ld a; Commit; St b (r1 - 1); }
thread P3 { r2 = Ld b; Reconcile; r3 = Ld a; }
exists (P2.r1 = 2 /\ P3.r2 = 1 /\ P3.r3 = 0)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: forbid, WMM-S: forbid }
)"},

    {"WWC",
     "Write-to-write causality: the final memory value of a is the store "
     "that causally preceded the chain, possible only with non-atomic "
     "stores.",
     R"(test WWC
init { a=0, b=0 }
thread P1 { St a 2; }
thread P2 { r1 = Ld a; St b (r1 - 1); }
thread P3 { r2 = Ld b; St a r2; }
exists (P2.r1 = 2 /\ P3.r2 = 1 /\ m[a] = 2)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: forbid, WMM-S: allow }
)"},

    {"WWC",
     "WWC with a Commit after the observing load: the early-read store must "
     "hit memory before b is published, so it can no longer finish last.",
     R"(test WWC+Commit
init { a=0, b=0 }
thread P1 { St a 2; }
thread P2 { r1 = Ld a; Commit; St b (r1 - 1); }
thread P3 { r2 = Ld b; St a r2; }
exists (P2.r1 = 2 /\ P3.r2 = 1 /\ m[a] = 2)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: forbid, WMM-S: forbid }
)"},

    {"IRIW",
     "Independent reads of independent writes: the two readers disagree on "
     "the order of the two stores. Needs reader-shared buffers.",
     R"(test IRIW
init { a=0, b=0 }
thread P1 { St a 1; }
thread P2 { r1 = Ld a; Reconcile; r2 = Ld b; }
thread P3 { St b 1; }
thread P4 { r3 = Ld b; Reconcile; r4 = Ld a; }
exists (P2.r1 = 1 /\ P2.r2 = 0 /\ P4.r3 = 1 /\ P4.r4 = 0)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: forbid, WMM-S: allow }
)"},

    {"IRIW",
     "IRIW with Commits after the first loads: each observed store is "
     "globally advertised before the second load, so the readers agree.",
     R"(test IRIW+Commits
init { a=0, b=0 }
thread P1 { St a 1; }
thread P2 { r1 = Ld a; Commit; Reconcile; r2 = Ld b; }
thread P3 { St b 1; }
thread P4 { r3 = Ld b; Commit; Reconcile; r4 = Ld a; }
exists (P2.r1 = 1 /\ P2.r2 = 0 /\ P4.r3 = 1 /\ P4.r4 = 0)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: forbid, WMM-S: forbid }
)"},

    {"MP",
     "Control dependency: the guarded load may still observe stale data, as "
     "if it had been issued before the branch resolved.",
     R"(test MP+Ctrl
init { a=0, b=0 }
thread P1 { St a 1; Commit; St b 1; }
thread P2 { r1 = Ld b; if r1 = 0 exit; r2 = Ld a; }
exists (P2.r1 = 1 /\ P2.r2 = 0)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: allow, WMM-S: allow }
)"},

    {"MP",
     "Potential memory dependency: an unresolved store address between the "
     "loads does not order them; the data load may still read a stale "
     "value.",
     R"(test MP+Mem
init { a=0, b=0 }
thread P1 { St a 1; Commit; St b 100; }
thread P2 { r1 = Ld b; St (r1 + a) 42; r2 = Ld a; }
exists (P2.r1 = 100 /\ P2.r2 = 0)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: allow, WMM-S: allow }
)"},

    {"MP",
     "Data dependency: the second load's address comes from the first load, "
     "and it may still observe a stale value, as with value prediction.",
     R"(test MP+Data
init { a=0, b=0 }
thread P1 { St a 1; Commit; St b a; }
thread P2 { r1 = Ld b; r2 = Ld r1; }
exists (P2.r1 = a /\ P2.r2 = 0)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: allow, WMM-S: allow }
)"},

    {"CoRR",
     "Coherent read-read: two loads of one address by one thread must not "
     "observe values against the store order for that address.",
     R"(test CoRR
init { a=0 }
thread P1 { r1 = Ld a; r2 = Ld a; }
thread P2 { St a 1; }
exists (P1.r1 = 1 /\ P1.r2 = 0)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: forbid, WMM-S: forbid, FM: forbid }
)"},

    {"OOTA",
     "Out of thin air: each store forwards the other's loaded value, so 42 "
     "could only justify itself circularly.",
     R"(test OOTA
init { a=0, b=0 }
thread P1 { r1 = Ld b; St a r1; }
thread P2 { r2 = Ld a; St b r2; }
exists (P1.r1 = 42 /\ P2.r2 = 42)
expect { SC: forbid, TSO: forbid, PSO: forbid, WMM: forbid, WMM-S: forbid, FM: forbid }
)"},

    {"RMO-dep",
     "Transitive dependency chain through a store-to-load forward: the final "
     "load still reads a stale value, matching hardware with speculative "
     "loads and store forwarding.",
     R"(test RMO-dep
init { a=0, b=0, c=0 }
thread P1 { St a 1; Fence; St b 1; }
thread P2 { r1 = Ld b; if r1 != 1 exit; St c 1; r2 = Ld c; r3 = a + r2 - 1; r4 = Ld r3; }
exists (P2.r1 = 1 /\ P2.r2 = 1 /\ P2.r3 = a /\ P2.r4 = 0)
expect { WMM: allow, WMM-S: allow }
)"},
};

std::vector<CorpusEntry> build_corpus() {
  std::vector<CorpusEntry> out;
  for (const RawEntry& raw : kRaw) {
    CorpusEntry e;
    e.family = raw.family;
    e.note = raw.note;
    e.source = raw.source;
    e.test = parse_litmus(e.source);
    out.push_back(std::move(e));
  }
  return out;
}

} // namespace

const std::vector<CorpusEntry>& builtin_corpus() {
  static const std::vector<CorpusEntry> corpus = build_corpus();
  return corpus;
}

const CorpusEntry* corpus_entry(const std::string& name) {
  for (const auto& e : builtin_corpus())
    if (e.test.name == name) return &e;
  return nullptr;
}

std::vector<Instruction> map_cpp(const std::vector<CppOp>& ops) {
  std::vector<Instruction> out;
  for (const auto& op : ops) {
    switch (op.kind) {
      case CppOp::Kind::NonAtomicLoad:
      case CppOp::Kind::LoadRelaxed:
        out.push_back(Instruction::load(op.reg, Expr::addr(op.addr)));
        break;
      case CppOp::Kind::LoadConsume:
      case CppOp::Kind::LoadAcquire:
        out.push_back(Instruction::load(op.reg, Expr::addr(op.addr)));
        out.push_back(Instruction::reconcile());
        break;
      case CppOp::Kind::LoadSC:
        out.push_back(Instruction::commit());
        out.push_back(Instruction::reconcile());
        out.push_back(Instruction::load(op.reg, Expr::addr(op.addr)));
        out.push_back(Instruction::reconcile());
        break;
      case CppOp::Kind::NonAtomicStore:
      case CppOp::Kind::StoreRelaxed:
        out.push_back(Instruction::store(Expr::addr(op.addr), op.data));
        break;
      case CppOp::Kind::StoreRelease:
      case CppOp::Kind::StoreSC:
        out.push_back(Instruction::commit());
        out.push_back(Instruction::store(Expr::addr(op.addr), op.data));
        break;
    }
  }
  return out;
}

Program insert_sc_fences(const Program& p) {
  Program out = p;
  for (auto& th : out.threads) {
    std::vector<Instruction> code;
    for (const auto& ins : th.code) {
      if (ins.op == Instruction::Op::Store) {
        code.push_back(Instruction::commit());
      } else if (ins.op == Instruction::Op::Load) {
        code.push_back(Instruction::commit());
        code.push_back(Instruction::reconcile());
      }
      code.push_back(ins);
    }
    th.code = std::move(code);
  }
  return out;
}

LitmusTest insert_sc_fences_test(const LitmusTest& t) {
  LitmusTest out = t;
  out.program = insert_sc_fences(t.program);
  return out;
}

namespace {

const std::map<std::string, CppOp::Kind>& cpp_op_names() {
  static const std::map<std::string, CppOp::Kind> names = {
      {"load.na", CppOp::Kind::NonAtomicLoad},
      {"load.relaxed", CppOp::Kind::LoadRelaxed},
      {"load.consume", CppOp::Kind::LoadConsume},
      {"load.acquire", CppOp::Kind::LoadAcquire},
      {"load.sc", CppOp::Kind::LoadSC},
      {"store.na", CppOp::Kind::NonAtomicStore},
      {"store.relaxed", CppOp::Kind::StoreRelaxed},
      {"store.release", CppOp::Kind::StoreRelease},
      {"store.sc", CppOp::Kind::StoreSC},
  };
  return names;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::string render_instructions(const std::vector<Instruction>& code) {
  std::ostringstream os;
  for (std::size_t i = 0; i < code.size(); ++i) {
    const Instruction& ins = code[i];
    if (i) os << " ";
    switch (ins.op) {
      case Instruction::Op::Load:
        os << ins.reg << " = Ld " << ins.e1.name << ";";
        break;
      case Instruction::Op::Store:
        os << "St " << ins.e1.name << " " << ins.e2.name << ";";
        break;
      case Instruction::Op::Commit: os << "Commit;"; break;
      case Instruction::Op::Reconcile: os << "Reconcile;"; break;
      default: break;
    }
  }
  return os.str();
}

} // namespace

std::string map_cpp_document(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  bool in_thread = false;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!in_thread) {
      out << line << "\n";
      if (t.rfind("thread", 0) == 0 && t.find('{') != std::string::npos &&
          t.find('}') == std::string::npos)
        in_thread = true;
      continue;
    }
    if (t == "}") {
      in_thread = false;
      out << line << "\n";
      continue;
    }
    if (t.empty() || t[0] == '#') {
      out << line << "\n";
      continue;
    }
    if (!t.empty() && t.back() == ';') t.pop_back();
    std::istringstream ls(t);
    CppOp op;
    std::string first;
    ls >> first;
    std::string opname;
    if (t.find('=') != std::string::npos) {
      // "<reg> = <load-op> <addr>"
      op.reg = first;
      std::string eq;
      ls >> eq >> opname >> op.addr;
      if (eq != "=") throw std::runtime_error("bad operation line: " + line);
    } else {
      // "<store-op> <addr> <data>", data a single token rendered verbatim
      opname = first;
      std::string data;
      ls >> op.addr >> data;
      op.data = Expr::reg(data);
    }
    auto it = cpp_op_names().find(opname);
    if (it == cpp_op_names().end())
      throw std::runtime_error("unknown operation '" + opname + "' in: " + line);
    op.kind = it->second;
    out << "  " << render_instructions(map_cpp({op})) << "\n";
  }
  return out.str();
}

} // namespace memweave
