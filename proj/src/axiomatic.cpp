#include "memweave/axiomatic.hpp"

#include <algorithm>

namespace memweave {

bool ax_order(AxKind x, Value addr_x, AxKind y, Value addr_y) {
  switch (x) {
    case AxKind::Load:
      return y == AxKind::Load ? addr_x == addr_y : true;
    case AxKind::Store:
      switch (y) {
        case AxKind::Load: return false;
        case AxKind::Store: return addr_x == addr_y;
        case AxKind::Reconcile: return false;
        case AxKind::Commit: return true;
      }
      return false;
    case AxKind::Reconcile:
      return true;
    case AxKind::Commit:
      return y != AxKind::Load;
  }
  return false;
}

std::optional<bool> ax_order_partial(AxKind x, std::optional<Value> addr_x,
                                     AxKind y, std::optional<Value> addr_y) {
  bool needs_addr = (x == AxKind::Load && y == AxKind::Load) ||
                    (x == AxKind::Store && y == AxKind::Store);
  if (needs_addr && (!addr_x || !addr_y)) return std::nullopt;
  return ax_order(x, addr_x.value_or(0), y, addr_y.value_or(0));
}

AxProgram AxProgram::build(const CompiledProgram& p) {
  AxProgram ax;
  ax.by_thread.resize(p.thread_count());
  for (int t = 0; t < p.thread_count(); ++t) {
    const auto& code = p.threads()[t].code;
    for (int i = 0; i < static_cast<int>(code.size()); ++i) {
      const CInstr& ins = code[i];
      AxInstr a;
      a.tid = t;
      a.code_index = i;
      switch (ins.op) {
        case Instruction::Op::ExitIf:
          throw BranchyProgram();
        case Instruction::Op::Assign:
          continue; // dataflow only, not part of the memory order
        case Instruction::Op::Load: a.kind = AxKind::Load; break;
        case Instruction::Op::Store: a.kind = AxKind::Store; break;
        case Instruction::Op::Commit: a.kind = AxKind::Commit; break;
        case Instruction::Op::Reconcile: a.kind = AxKind::Reconcile; break;
      }
      ax.by_thread[t].push_back(static_cast<int>(ax.instrs.size()));
      ax.instrs.push_back(a);
    }
  }
  // Record literal addresses for static pruning: an address expression that
  // reads no register is a constant.
  auto reads_register = [&](ExprId id, auto&& self) -> bool {
    const ExprNode& n = p.expr_node(id);
    if (n.kind == Expr::Kind::RegRead) return true;
    if (n.kind == Expr::Kind::Add || n.kind == Expr::Kind::Sub)
      return self(n.lhs, self) || self(n.rhs, self);
    return false;
  };
  for (auto& a : ax.instrs) {
    const CInstr& ins = p.threads()[a.tid].code[a.code_index];
    if (a.kind == AxKind::Load || a.kind == AxKind::Store) {
      if (!reads_register(ins.e1, reads_register)) {
        std::vector<Value> no_regs(p.threads()[a.tid].reg_names.size(), 0);
        a.static_addr = p.eval(ins.e1, no_regs);
      }
    }
  }
  return ax;
}

namespace {

struct Resolution {
  // Per ax-instruction resolution state.
  std::vector<std::optional<Value>> addr;
  std::vector<std::optional<Value>> data;  // store data / load result
  std::vector<int> rf;                     // loads: source instr or -1 = init
  std::vector<int> mo_pos;                 // instr -> position in mo
};

// Evaluates an expression against a register file where some registers have
// unknown values (they depend on unresolved loads).
struct PartialEval {
  const CompiledProgram& p;
  const std::vector<Value>& regs;
  const std::vector<bool>& known;

  std::optional<Value> operator()(ExprId id) const {
    const ExprNode& n = p.expr_node(id);
    switch (n.kind) {
      case Expr::Kind::Const:
      case Expr::Kind::AddrLit:
        return n.value;
      case Expr::Kind::RegRead:
        if (!known[n.reg]) return std::nullopt;
        return regs[n.reg];
      case Expr::Kind::Add:
      case Expr::Kind::Sub: {
        auto l = (*this)(n.lhs), r = (*this)(n.rhs);
        if (!l || !r) return std::nullopt;
        return n.kind == Expr::Kind::Add ? *l + *r : *l - *r;
      }
    }
    return std::nullopt;
  }
};

// Walks one thread in program order tracking which register values are
// known, given partially resolved loads. Records newly resolvable addresses
// and store data.
bool dataflow_pass(const CompiledProgram& p, const AxProgram& ax, int tid,
                   Resolution& r) {
  const auto& code = p.threads()[tid].code;
  std::vector<Value> regs(p.threads()[tid].reg_names.size(), 0);
  std::vector<bool> known(regs.size(), true); // default-0 until poisoned
  bool progress = false;

  std::vector<int> ax_at(code.size(), -1);
  for (int idx : ax.by_thread[tid]) ax_at[ax.instrs[idx].code_index] = idx;

  PartialEval eval{p, regs, known};

  for (int i = 0; i < static_cast<int>(code.size()); ++i) {
    const CInstr& ins = code[i];
    switch (ins.op) {
      case Instruction::Op::Assign: {
        auto v = eval(ins.e1);
        known[ins.reg] = v.has_value();
        if (v) regs[ins.reg] = *v;
        break;
      }
      case Instruction::Op::Load: {
        int idx = ax_at[i];
        if (!r.addr[idx]) {
          auto a = eval(ins.e1);
          if (a) {
            r.addr[idx] = *a;
            progress = true;
          }
        }
        known[ins.reg] = r.data[idx].has_value();
        if (r.data[idx]) regs[ins.reg] = *r.data[idx];
        break;
      }
      case Instruction::Op::Store: {
        int idx = ax_at[i];
        if (!r.addr[idx]) {
          auto a = eval(ins.e1);
          if (a) {
            r.addr[idx] = *a;
            progress = true;
          }
        }
        if (!r.data[idx]) {
          auto d = eval(ins.e2);
          if (d) {
            r.data[idx] = *d;
            progress = true;
          }
        }
        break;
      }
      case Instruction::Op::Commit:
      case Instruction::Op::Reconcile:
      case Instruction::Op::ExitIf:
        break;
    }
  }
  return progress;
}

Value init_value(const CompiledProgram& p, Value loc) {
  int idx = p.decode(loc);
  return idx >= 0 ? p.init_values()[idx] : 0;
}

} // namespace

std::optional<AxExecution> resolve_execution(const CompiledProgram& p,
                                             const ObsSpec& obs,
                                             const AxProgram& ax,
                                             const std::vector<int>& mo,
                                             AxStats* stats) {
  const int n = static_cast<int>(ax.instrs.size());
  Resolution r;
  r.addr.assign(n, std::nullopt);
  r.data.assign(n, std::nullopt);
  r.rf.assign(n, -2);
  r.mo_pos.assign(n, -1);
  for (int pos = 0; pos < n; ++pos) r.mo_pos[mo[pos]] = pos;

  // Fixpoint: alternate dataflow over threads with Ld-Val resolution.
  for (;;) {
    bool progress = false;
    for (int t = 0; t < p.thread_count(); ++t)
      progress |= dataflow_pass(p, ax, t, r);

    for (int li = 0; li < n; ++li) {
      if (ax.instrs[li].kind != AxKind::Load || r.data[li] || !r.addr[li])
        continue;
      // Candidate stores: mo-before or po-before the load.
      bool ready = true;
      int best = -1;
      for (int si = 0; si < n && ready; ++si) {
        if (ax.instrs[si].kind != AxKind::Store) continue;
        bool mo_before = r.mo_pos[si] < r.mo_pos[li];
        bool po_before = ax.instrs[si].tid == ax.instrs[li].tid &&
                         ax.instrs[si].code_index < ax.instrs[li].code_index;
        if (!mo_before && !po_before) continue;
        if (!r.addr[si]) {
          ready = false; // cannot yet tell whether it is a same-address store
          break;
        }
        if (*r.addr[si] != *r.addr[li]) continue;
        if (best < 0 || r.mo_pos[si] > r.mo_pos[best]) best = si;
      }
      if (!ready) continue;
      if (best >= 0 && !r.data[best]) continue; // youngest candidate not valued
      r.data[li] = best >= 0 ? *r.data[best] : init_value(p, *r.addr[li]);
      r.rf[li] = best;
      progress = true;
    }

    bool done = true;
    for (int i = 0; i < n; ++i) {
      if (!r.addr[i] && ax.instrs[i].kind != AxKind::Commit &&
          ax.instrs[i].kind != AxKind::Reconcile)
        done = false;
      if (ax.instrs[i].kind == AxKind::Load && !r.data[i]) done = false;
      if (ax.instrs[i].kind == AxKind::Store && !r.data[i]) done = false;
    }
    if (done) break;
    if (!progress) {
      if (stats) ++stats->fixpoint_stalls;
      return std::nullopt;
    }
  }

  // Axiom Inst-Order over every program-order pair.
  for (const auto& thread : ax.by_thread) {
    for (std::size_t i = 0; i < thread.size(); ++i) {
      for (std::size_t j = i + 1; j < thread.size(); ++j) {
        int x = thread[i], y = thread[j];
        if (ax_order(ax.instrs[x].kind, r.addr[x].value_or(0),
                     ax.instrs[y].kind, r.addr[y].value_or(0)) &&
            r.mo_pos[x] > r.mo_pos[y])
          return std::nullopt;
      }
    }
  }

  // Axiom Ld-Val, re-verified against the final resolution.
  for (int li = 0; li < n; ++li) {
    if (ax.instrs[li].kind != AxKind::Load) continue;
    int best = -1;
    for (int si = 0; si < n; ++si) {
      if (ax.instrs[si].kind != AxKind::Store) continue;
      if (*r.addr[si] != *r.addr[li]) continue;
      bool mo_before = r.mo_pos[si] < r.mo_pos[li];
      bool po_before = ax.instrs[si].tid == ax.instrs[li].tid &&
                       ax.instrs[si].code_index < ax.instrs[li].code_index;
      if (!mo_before && !po_before) continue;
      if (best < 0 || r.mo_pos[si] > r.mo_pos[best]) best = si;
    }
    if (best != r.rf[li]) return std::nullopt;
    if (best >= 0 && *r.data[li] != *r.data[best]) return std::nullopt;
  }

  AxExecution exec;
  exec.mo = mo;
  exec.addr.resize(n);
  exec.value.resize(n);
  exec.rf.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    exec.addr[i] = r.addr[i].value_or(0);
    exec.value[i] = r.data[i].value_or(0);
    if (ax.instrs[i].kind == AxKind::Load) exec.rf[i] = std::max(r.rf[i], -1);
  }

  // Observation: final register file from a last full dataflow walk, final
  // memory from the mo-youngest store per declared address.
  Outcome o;
  for (const auto& [tid, reg] : obs.regs) {
    const auto& code = p.threads()[tid].code;
    std::vector<Value> regs(p.threads()[tid].reg_names.size(), 0);
    std::vector<int> ax_at(code.size(), -1);
    for (int idx : ax.by_thread[tid]) ax_at[ax.instrs[idx].code_index] = idx;
    for (int i = 0; i < static_cast<int>(code.size()); ++i) {
      const CInstr& ins = code[i];
      if (ins.op == Instruction::Op::Assign)
        regs[ins.reg] = p.eval(ins.e1, regs);
      else if (ins.op == Instruction::Op::Load)
        regs[ins.reg] = *r.data[ax_at[i]];
    }
    o.regs.push_back(regs[reg]);
  }
  o.memory = p.init_values();
  for (int a = 0; a < p.address_count(); ++a) {
    int best = -1;
    for (int si = 0; si < n; ++si) {
      if (ax.instrs[si].kind != AxKind::Store || exec.addr[si] != p.encode(a))
        continue;
      if (best < 0 || r.mo_pos[si] > r.mo_pos[best]) best = si;
    }
    if (best >= 0) o.memory[a] = exec.value[best];
  }
  exec.outcome = std::move(o);
  return exec;
}

namespace {

struct Enumerator {
  const CompiledProgram& p;
  const ObsSpec& obs;
  const AxProgram& ax;
  const AxOptions& opt;
  AxStats* stats;
  OutcomeSet* out;

  std::vector<int> mo;

  void run() {
    if (mo.size() == ax.instrs.size()) {
      if (stats) ++stats->orders_checked;
      auto exec = resolve_execution(p, obs, ax, mo, stats);
      if (exec) {
        if (stats) ++stats->consistent_executions;
        out->outcomes.insert(exec->outcome);
      }
      return;
    }
    for (int cand = 0; cand < static_cast<int>(ax.instrs.size()); ++cand) {
      if (std::find(mo.begin(), mo.end(), cand) != mo.end()) continue;
      if (opt.prune && !placeable(cand)) continue;
      mo.push_back(cand);
      run();
      mo.pop_back();
    }
  }

  // A candidate may enter the order only when every po-earlier instruction
  // that definitely orders before it is already placed.
  bool placeable(int cand) const {
    const AxInstr& y = ax.instrs[cand];
    for (int x : ax.by_thread[y.tid]) {
      if (ax.instrs[x].code_index >= y.code_index) break;
      if (std::find(mo.begin(), mo.end(), x) != mo.end()) continue;
      auto ord = ax_order_partial(ax.instrs[x].kind, ax.instrs[x].static_addr,
                                  y.kind, y.static_addr);
      if (ord.value_or(false)) return false;
    }
    return true;
  }
};

} // namespace

OutcomeSet axiomatic_outcomes(const CompiledProgram& p, const ObsSpec& obs,
                              const AxOptions& opt, AxStats* stats) {
  AxProgram ax = AxProgram::build(p);
  if (ax.instrs.size() > opt.max_instructions)
    throw TooLarge(ax.instrs.size(), opt.max_instructions);
  OutcomeSet out;
  AxStats local;
  Enumerator e{p, obs, ax, opt, stats ? stats : &local, &out, {}};
  e.run();
  out.stats.states_visited = (stats ? stats : &local)->orders_checked;
  out.stats.transitions_fired = (stats ? stats : &local)->consistent_executions;
  return out;
}

} // namespace memweave
