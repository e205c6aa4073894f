#include "memweave/models/baseline.hpp"

#include <sstream>

#include "memweave/explore.hpp"

namespace memweave {

CoreState initial_core(const CompiledProgram& p) {
  CoreState c;
  c.pc.assign(p.thread_count(), 0);
  c.regs.assign(p.total_regs(), 0);
  return c;
}

bool all_done(const CompiledProgram& p, const CoreState& c) {
  for (int t = 0; t < p.thread_count(); ++t)
    if (c.pc[t] < static_cast<int>(p.threads()[t].code.size())) return false;
  return true;
}

void key_core(std::string& out, const CoreState& c) {
  for (int pc : c.pc) keyio::put_u32(out, static_cast<std::uint32_t>(pc));
  keyio::put_i64s(out, c.regs);
}

int sb_youngest(const StoreBuffer& sb, Value addr) {
  for (int i = static_cast<int>(sb.size()) - 1; i >= 0; --i)
    if (sb[i].addr == addr) return i;
  return -1;
}

bool sb_contains(const StoreBuffer& sb, Value addr) {
  return sb_youngest(sb, addr) >= 0;
}

std::vector<int> sb_oldest_per_address(const StoreBuffer& sb) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(sb.size()); ++i) {
    bool first = true;
    for (int j = 0; j < i; ++j)
      if (sb[j].addr == sb[i].addr) first = false;
    if (first) out.push_back(i);
  }
  return out;
}

namespace {

void key_memory(std::string& out, const Memory& m) {
  keyio::put_i64s(out, m.declared);
  keyio::put_u32(out, static_cast<std::uint32_t>(m.extra.size()));
  for (const auto& [loc, v] : m.extra) {
    keyio::put_i64(out, loc);
    keyio::put_i64(out, v);
  }
}

void key_sb(std::string& out, const std::vector<StoreBuffer>& sbs) {
  for (const auto& sb : sbs) {
    keyio::put_u32(out, static_cast<std::uint32_t>(sb.size()));
    for (const auto& e : sb) {
      keyio::put_i64(out, e.addr);
      keyio::put_i64(out, e.value);
    }
  }
}

Outcome project(const CompiledProgram& p, const ObsSpec& obs,
                const CoreState& core, const Memory& mem) {
  Outcome o;
  o.regs.reserve(obs.regs.size());
  for (const auto& [tid, reg] : obs.regs)
    o.regs.push_back(core.regs[p.reg_base(tid) + reg]);
  o.memory = mem.declared;
  return o;
}

} // namespace

ScMachine::State ScMachine::initial_state() const {
  return State{initial_core(p_), Memory::initial(p_)};
}

std::vector<ScMachine::Transition> ScMachine::enabled(const State& s) const {
  std::vector<Transition> out;
  for (int t = 0; t < p_.thread_count(); ++t)
    if (s.core.pc[t] < static_cast<int>(p_.threads()[t].code.size()))
      out.push_back({t, s.core.pc[t]});
  return out;
}

ScMachine::State ScMachine::apply(const State& s, const Transition& t) const {
  State n = s;
  const CInstr& ins = p_.threads()[t.pid].code[t.instr];
  auto regs = thread_regs(p_, n.core, t.pid);
  int& pc = n.core.pc[t.pid];
  switch (ins.op) {
    case Instruction::Op::Load:
      regs[ins.reg] = n.mem.read(p_, p_.eval(ins.e1, regs));
      ++pc;
      break;
    case Instruction::Op::Store:
      n.mem.write(p_, p_.eval(ins.e1, regs), p_.eval(ins.e2, regs));
      ++pc;
      break;
    case Instruction::Op::Commit:
    case Instruction::Op::Reconcile:
      ++pc;
      break;
    case Instruction::Op::Assign:
      regs[ins.reg] = p_.eval(ins.e1, regs);
      ++pc;
      break;
    case Instruction::Op::ExitIf:
      if (rel_holds(ins.rel, p_.eval(ins.e1, regs), p_.eval(ins.e2, regs)))
        pc = static_cast<int>(p_.threads()[t.pid].code.size());
      else
        ++pc;
      break;
  }
  return n;
}

bool ScMachine::is_final(const State& s) const { return all_done(p_, s.core); }

Outcome ScMachine::observe(const State& s) const {
  return project(p_, obs_, s.core, s.mem);
}

std::string ScMachine::canonical_key(const State& s) const {
  std::string out;
  out.reserve(16 * s.core.regs.size() + 64);
  key_core(out, s.core);
  key_memory(out, s.mem);
  return out;
}

std::string ScMachine::describe(const Transition& t) const {
  std::ostringstream os;
  os << p_.threads()[t.pid].name << " SC-Exec #" << t.instr;
  return os.str();
}

TsoMachine::State TsoMachine::initial_state() const {
  State s{initial_core(p_), Memory::initial(p_), {}};
  s.sb.resize(p_.thread_count());
  return s;
}

std::vector<TsoMachine::Transition> TsoMachine::enabled(const State& s) const {
  std::vector<Transition> out;
  for (int t = 0; t < p_.thread_count(); ++t) {
    const auto& code = p_.threads()[t].code;
    if (s.core.pc[t] < static_cast<int>(code.size())) {
      const CInstr& ins = code[s.core.pc[t]];
      switch (ins.op) {
        case Instruction::Op::Load: {
          Value addr = p_.eval(ins.e1, thread_regs(p_, s.core, t));
          // Forwarding from the sb and reading memory are mutually
          // exclusive: with the address buffered only the youngest local
          // store is visible.
          out.push_back({Rule::Ld, t, -1, sb_contains(s.sb[t], addr)});
          break;
        }
        case Instruction::Op::Store:
          out.push_back({Rule::St, t});
          break;
        case Instruction::Op::Commit:
          if (s.sb[t].empty()) out.push_back({Rule::Com, t});
          break;
        case Instruction::Op::Reconcile: // no-op under TSO/PSO
        case Instruction::Op::Assign:
        case Instruction::Op::ExitIf:
          out.push_back({Rule::Nm, t});
          break;
      }
    }
    // Background dequeue: TSO takes the oldest entry overall, PSO the oldest
    // entry of any address.
    if (!s.sb[t].empty()) {
      if (pso_) {
        for (int idx : sb_oldest_per_address(s.sb[t]))
          out.push_back({Rule::DeqSb, t, idx});
      } else {
        out.push_back({Rule::DeqSb, t, 0});
      }
    }
  }
  return out;
}

TsoMachine::State TsoMachine::apply(const State& s, const Transition& t) const {
  State n = s;
  auto regs = thread_regs(p_, n.core, t.pid);
  int& pc = n.core.pc[t.pid];
  const auto& code = p_.threads()[t.pid].code;
  switch (t.rule) {
    case Rule::Nm: {
      const CInstr& ins = code[pc];
      if (ins.op == Instruction::Op::Assign) {
        regs[ins.reg] = p_.eval(ins.e1, regs);
        ++pc;
      } else if (ins.op == Instruction::Op::ExitIf) {
        if (rel_holds(ins.rel, p_.eval(ins.e1, regs), p_.eval(ins.e2, regs)))
          pc = static_cast<int>(code.size());
        else
          ++pc;
      } else {
        ++pc; // Reconcile
      }
      break;
    }
    case Rule::Ld: {
      const CInstr& ins = code[pc];
      Value addr = p_.eval(ins.e1, regs);
      int idx = sb_youngest(n.sb[t.pid], addr);
      regs[ins.reg] = idx >= 0 ? n.sb[t.pid][idx].value : n.mem.read(p_, addr);
      ++pc;
      break;
    }
    case Rule::St: {
      const CInstr& ins = code[pc];
      n.sb[t.pid].push_back({p_.eval(ins.e1, regs), p_.eval(ins.e2, regs)});
      ++pc;
      break;
    }
    case Rule::Com:
      ++pc;
      break;
    case Rule::DeqSb: {
      SbEntry e = n.sb[t.pid][t.sb_index];
      n.sb[t.pid].erase(n.sb[t.pid].begin() + t.sb_index);
      n.mem.write(p_, e.addr, e.value);
      break;
    }
  }
  return n;
}

bool TsoMachine::is_final(const State& s) const {
  if (!all_done(p_, s.core)) return false;
  for (const auto& sb : s.sb)
    if (!sb.empty()) return false;
  return true;
}

Outcome TsoMachine::observe(const State& s) const {
  return project(p_, obs_, s.core, s.mem);
}

std::string TsoMachine::canonical_key(const State& s) const {
  std::string out;
  out.reserve(16 * s.core.regs.size() + 128);
  key_core(out, s.core);
  key_memory(out, s.mem);
  key_sb(out, s.sb);
  return out;
}

std::string TsoMachine::describe(const Transition& t) const {
  std::ostringstream os;
  const char* model = pso_ ? "PSO" : "TSO";
  os << p_.threads()[t.pid].name << " " << model;
  switch (t.rule) {
    case Rule::Nm: os << "-Nm"; break;
    case Rule::Ld: os << "-Ld " << (t.from_sb ? "sb" : "m"); break;
    case Rule::St: os << "-St"; break;
    case Rule::Com: os << "-Com"; break;
    case Rule::DeqSb: os << "-DeqSb[" << t.sb_index << "]"; break;
  }
  return os.str();
}

} // namespace memweave
