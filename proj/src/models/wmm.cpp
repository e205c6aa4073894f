#include "memweave/models/wmm.hpp"

#include <sstream>

#include "memweave/explore.hpp"

namespace memweave {

std::pair<int, int> InvalBuffer::range(Value addr) const {
  int first = 0;
  while (first < static_cast<int>(entries_.size()) && entries_[first].addr < addr)
    ++first;
  int last = first;
  while (last < static_cast<int>(entries_.size()) && entries_[last].addr == addr)
    ++last;
  return {first, last};
}

int InvalBuffer::count(Value addr) const {
  auto [first, last] = range(addr);
  return last - first;
}

Value InvalBuffer::at(Value addr, int index) const {
  auto [first, last] = range(addr);
  return entries_[first + index].value;
}

void InvalBuffer::push_stale(Value addr, Value v) {
  auto [first, last] = range(addr);
  entries_.insert(entries_.begin() + last, {addr, v});
}

void InvalBuffer::erase_addr(Value addr) {
  auto [first, last] = range(addr);
  entries_.erase(entries_.begin() + first, entries_.begin() + last);
}

void InvalBuffer::erase_prefix(Value addr, int index) {
  auto [first, last] = range(addr);
  entries_.erase(entries_.begin() + first, entries_.begin() + first + index);
}

void key_ib(std::string& out, const InvalBuffer& ib) {
  keyio::put_u32(out, static_cast<std::uint32_t>(ib.raw().size()));
  static_assert(sizeof(InvalBuffer::Entry) == 2 * sizeof(Value));
  out.append(reinterpret_cast<const char*>(ib.raw().data()),
             ib.raw().size() * sizeof(InvalBuffer::Entry));
}

WmmMachine::State WmmMachine::initial_state() const {
  State s{initial_core(p_), Memory::initial(p_), {}, {}};
  s.sb.resize(p_.thread_count());
  s.ib.resize(p_.thread_count());
  return s;
}

std::vector<WmmMachine::Transition> WmmMachine::enabled(const State& s) const {
  std::vector<Transition> out;
  for (int t = 0; t < p_.thread_count(); ++t) {
    const auto& code = p_.threads()[t].code;
    if (s.core.pc[t] < static_cast<int>(code.size())) {
      const CInstr& ins = code[s.core.pc[t]];
      auto regs = thread_regs(p_, s.core, t);
      switch (ins.op) {
        case Instruction::Op::Load: {
          Value addr = p_.eval(ins.e1, regs);
          if (sb_contains(s.sb[t], addr)) {
            // Youngest local store shadows memory and the ib.
            Value v = s.sb[t][sb_youngest(s.sb[t], addr)].value;
            out.push_back({Rule::Ld, t, LdSource::Sb, -1, -1, addr, v});
          } else {
            out.push_back({Rule::Ld, t, LdSource::Mem, -1, -1, addr,
                           s.mem.read(p_, addr)});
            int stale = s.ib[t].count(addr);
            for (int i = 0; i < stale; ++i)
              out.push_back({Rule::Ld, t, LdSource::Ib, i, -1, addr,
                             s.ib[t].at(addr, i)});
          }
          break;
        }
        case Instruction::Op::Store: {
          Value addr = p_.eval(ins.e1, regs);
          Value data = p_.eval(ins.e2, regs);
          out.push_back({Rule::St, t, LdSource::Mem, -1, -1, addr, data});
          break;
        }
        case Instruction::Op::Commit:
          if (s.sb[t].empty()) out.push_back({Rule::Com, t});
          break;
        case Instruction::Op::Reconcile:
          out.push_back({Rule::Rec, t});
          break;
        case Instruction::Op::Assign:
        case Instruction::Op::ExitIf:
          out.push_back({Rule::Nm, t});
          break;
      }
    }
    // Background dequeue of the oldest store for any address.
    for (int idx : sb_oldest_per_address(s.sb[t]))
      out.push_back({Rule::DeqSb, t, LdSource::Mem, -1, idx, s.sb[t][idx].addr,
                     s.sb[t][idx].value});
  }
  return out;
}

WmmMachine::State WmmMachine::apply(const State& s, const Transition& t) const {
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
      } else if (rel_holds(ins.rel, p_.eval(ins.e1, regs),
                           p_.eval(ins.e2, regs))) {
        pc = static_cast<int>(code.size());
      } else {
        ++pc;
      }
      break;
    }
    case Rule::Ld: {
      const CInstr& ins = code[pc];
      switch (t.src) {
        case LdSource::Sb:
          regs[ins.reg] = n.sb[t.pid][sb_youngest(n.sb[t.pid], t.addr)].value;
          break;
        case LdSource::Mem:
          // Reading memory discards every stale value for the address.
          regs[ins.reg] = n.mem.read(p_, t.addr);
          n.ib[t.pid].erase_addr(t.addr);
          break;
        case LdSource::Ib:
          regs[ins.reg] = n.ib[t.pid].at(t.addr, t.ib_index);
          // Values staler than the result are gone; the result itself may be
          // observed again.
          n.ib[t.pid].erase_prefix(t.addr, t.ib_index);
          break;
      }
      ++pc;
      break;
    }
    case Rule::St: {
      n.sb[t.pid].push_back({t.addr, t.value});
      n.ib[t.pid].erase_addr(t.addr);
      ++pc;
      break;
    }
    case Rule::Com:
      ++pc;
      break;
    case Rule::Rec:
      n.ib[t.pid].clear();
      ++pc;
      break;
    case Rule::DeqSb: {
      SbEntry e = n.sb[t.pid][t.sb_index];
      Value stale = n.mem.read(p_, e.addr);
      for (int q = 0; q < p_.thread_count(); ++q) {
        if (q == t.pid || sb_contains(n.sb[q], e.addr)) continue;
        n.ib[q].push_stale(e.addr, stale);
      }
      n.sb[t.pid].erase(n.sb[t.pid].begin() + t.sb_index);
      n.mem.write(p_, e.addr, e.value);
      break;
    }
  }
  if (validate_) check_sb_ib_exclusion(n);
  return n;
}

bool WmmMachine::is_final(const State& s) const {
  if (!all_done(p_, s.core)) return false;
  for (const auto& sb : s.sb)
    if (!sb.empty()) return false;
  return true;
}

Outcome WmmMachine::observe(const State& s) const {
  Outcome o;
  o.regs.reserve(obs_.regs.size());
  for (const auto& [tid, reg] : obs_.regs)
    o.regs.push_back(s.core.regs[p_.reg_base(tid) + reg]);
  o.memory = s.mem.declared;
  return o;
}

std::string WmmMachine::canonical_key(const State& s) const {
  std::string out;
  out.reserve(16 * s.core.regs.size() + 192);
  key_core(out, s.core);
  keyio::put_i64s(out, s.mem.declared);
  keyio::put_u32(out, static_cast<std::uint32_t>(s.mem.extra.size()));
  for (const auto& [loc, v] : s.mem.extra) {
    keyio::put_i64(out, loc);
    keyio::put_i64(out, v);
  }
  for (const auto& sb : s.sb) {
    keyio::put_u32(out, static_cast<std::uint32_t>(sb.size()));
    for (const auto& e : sb) {
      keyio::put_i64(out, e.addr);
      keyio::put_i64(out, e.value);
    }
  }
  for (const auto& ib : s.ib) key_ib(out, ib);
  return out;
}

std::string WmmMachine::describe(const Transition& t) const {
  std::ostringstream os;
  os << p_.threads()[t.pid].name << " ";
  switch (t.rule) {
    case Rule::Nm: os << "WMM-Nm"; break;
    case Rule::Ld:
      os << "WMM-Ld "
         << (t.src == LdSource::Sb ? "sb" : t.src == LdSource::Mem ? "m" : "ib")
         << " " << p_.location_name(t.addr) << "=" << t.value;
      break;
    case Rule::St:
      os << "WMM-St " << p_.location_name(t.addr) << "=" << t.value;
      break;
    case Rule::Com: os << "WMM-Com"; break;
    case Rule::Rec: os << "WMM-Rec"; break;
    case Rule::DeqSb:
      os << "WMM-DeqSb " << p_.location_name(t.addr) << "=" << t.value;
      break;
  }
  return os.str();
}

void WmmMachine::check_sb_ib_exclusion(const State& s) {
  for (std::size_t pid = 0; pid < s.sb.size(); ++pid)
    for (const auto& e : s.sb[pid])
      if (s.ib[pid].has(e.addr))
        throw ModelInvariantViolation(
            "address buffered in both sb and ib of processor " +
            std::to_string(pid));
}

} // namespace memweave
