#include "memweave/models/fm.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "memweave/explore.hpp"

namespace memweave {

Topology Topology::compile(const TopologySpec& spec, const CompiledProgram& p) {
  Topology t;
  for (const auto& [name, _] : spec.segments) t.seg_names.push_back(name);
  auto index_of = [&](const std::string& name) {
    auto it = std::find(t.seg_names.begin(), t.seg_names.end(), name);
    return it == t.seg_names.end() ? -1 : static_cast<int>(it - t.seg_names.begin());
  };
  for (const auto& [_, parent] : spec.segments)
    t.parent.push_back(parent == "mem" ? -1 : index_of(parent));
  t.proc_seg.assign(p.thread_count(), -1);
  for (const auto& [proc, seg] : spec.procs) {
    bool known = false;
    for (int i = 0; i < p.thread_count(); ++i) {
      if (p.threads()[i].name == proc) {
        t.proc_seg[i] = index_of(seg);
        known = true;
      }
    }
    if (!known)
      throw std::runtime_error("topology proc '" + proc +
                               "' is not a thread of this program");
  }
  for (int i = 0; i < p.thread_count(); ++i)
    if (t.proc_seg[i] < 0)
      throw std::runtime_error("thread " + p.threads()[i].name +
                               " has no segment binding");
  return t;
}

Topology Topology::all_private(const CompiledProgram& p) {
  Topology t;
  for (int i = 0; i < p.thread_count(); ++i) {
    t.seg_names.push_back("s" + std::to_string(i + 1));
    t.parent.push_back(-1);
    t.proc_seg.push_back(i);
  }
  return t;
}

Topology Topology::paired_shared(const CompiledProgram& p) {
  Topology t;
  int n = p.thread_count();
  t.proc_seg.assign(n, -1);
  for (int i = 0; i + 1 < n; i += 2) {
    int shared = static_cast<int>(t.seg_names.size());
    t.seg_names.push_back("u" + std::to_string(i / 2 + 1));
    t.parent.push_back(-1);
    for (int k = 0; k < 2; ++k) {
      t.proc_seg[i + k] = static_cast<int>(t.seg_names.size());
      t.seg_names.push_back("s" + std::to_string(i + k + 1));
      t.parent.push_back(shared);
    }
  }
  if (n % 2 == 1) {
    t.proc_seg[n - 1] = static_cast<int>(t.seg_names.size());
    t.seg_names.push_back("s" + std::to_string(n));
    t.parent.push_back(-1);
  }
  return t;
}

FmMachine::State FmMachine::initial_state() const {
  State s;
  s.core = initial_core(p_);
  s.mem = Memory::initial(p_);
  s.blocked.assign(p_.thread_count(), Blocked::None);
  s.segs.resize(topo_.seg_names.size());
  return s;
}

std::vector<FmMachine::Transition> FmMachine::enabled(const State& s) const {
  std::vector<Transition> out;
  for (int t = 0; t < p_.thread_count(); ++t) {
    if (s.blocked[t] != Blocked::None) continue;
    if (s.core.pc[t] < static_cast<int>(p_.threads()[t].code.size()))
      out.push_back({Rule::Issue, t, -1, s.core.pc[t], {}, {}});
  }
  for (int g = 0; g < static_cast<int>(s.segs.size()); ++g) {
    const auto& seg = s.segs[g];
    for (int i = 0; i + 1 < static_cast<int>(seg.size()); ++i) {
      const FmRequest& r_old = seg[i];
      const FmRequest& r_new = seg[i + 1];
      bool same_addr_access = r_old.is_memory_access() &&
                              r_new.is_memory_access() &&
                              r_old.addr == r_new.addr;
      bool commit_over_store = r_new.kind == FmRequest::Kind::Commit &&
                               r_old.kind == FmRequest::Kind::Store;
      if (!same_addr_access && !commit_over_store)
        out.push_back({Rule::Reorder, -1, g, i, r_old, r_new});
      if (r_new.kind == FmRequest::Kind::Load &&
          r_old.kind == FmRequest::Kind::Store && r_old.addr == r_new.addr)
        out.push_back({Rule::Bypass, -1, g, i, r_old, r_new});
    }
    if (!seg.empty())
      out.push_back({Rule::Flow, -1, g, 0, seg.front(), {}});
  }
  return out;
}

void FmMachine::respond(State& n, const FmRequest& req, Value v) const {
  if (req.kind == FmRequest::Kind::Load) {
    n.core.regs[p_.reg_base(req.origin) + req.reg] = v;
    n.blocked[req.origin] = Blocked::None;
  } else if (req.kind == FmRequest::Kind::Commit) {
    n.blocked[req.origin] = Blocked::None;
  }
}

FmMachine::State FmMachine::apply(const State& s, const Transition& t) const {
  State n = s;
  switch (t.rule) {
    case Rule::Issue: {
      auto regs = thread_regs(p_, n.core, t.pid);
      int& pc = n.core.pc[t.pid];
      const auto& code = p_.threads()[t.pid].code;
      const CInstr& ins = code[pc];
      switch (ins.op) {
        case Instruction::Op::Load: {
          FmRequest r{FmRequest::Kind::Load, t.pid, ins.reg,
                      p_.eval(ins.e1, regs), 0};
          n.segs[topo_.proc_seg[t.pid]].push_back(r);
          n.blocked[t.pid] = Blocked::OnLoad;
          ++pc;
          break;
        }
        case Instruction::Op::Store: {
          FmRequest r{FmRequest::Kind::Store, t.pid, -1,
                      p_.eval(ins.e1, regs), p_.eval(ins.e2, regs)};
          n.segs[topo_.proc_seg[t.pid]].push_back(r);
          ++pc;
          break;
        }
        case Instruction::Op::Commit: {
          FmRequest r{FmRequest::Kind::Commit, t.pid, -1, 0, 0};
          n.segs[topo_.proc_seg[t.pid]].push_back(r);
          n.blocked[t.pid] = Blocked::OnCommit;
          ++pc;
          break;
        }
        case Instruction::Op::Reconcile:
          ++pc;
          break;
        case Instruction::Op::Assign:
          regs[ins.reg] = p_.eval(ins.e1, regs);
          ++pc;
          break;
        case Instruction::Op::ExitIf:
          if (rel_holds(ins.rel, p_.eval(ins.e1, regs), p_.eval(ins.e2, regs)))
            pc = static_cast<int>(code.size());
          else
            ++pc;
          break;
      }
      break;
    }
    case Rule::Reorder:
      std::swap(n.segs[t.seg][t.index], n.segs[t.seg][t.index + 1]);
      break;
    case Rule::Bypass: {
      FmRequest load = n.segs[t.seg][t.index + 1];
      respond(n, load, n.segs[t.seg][t.index].value);
      n.segs[t.seg].erase(n.segs[t.seg].begin() + t.index + 1);
      break;
    }
    case Rule::Flow: {
      FmRequest r = n.segs[t.seg].front();
      n.segs[t.seg].erase(n.segs[t.seg].begin());
      int up = topo_.parent[t.seg];
      if (up >= 0) {
        n.segs[up].push_back(r);
      } else {
        switch (r.kind) {
          case FmRequest::Kind::Load:
            respond(n, r, n.mem.read(p_, r.addr));
            break;
          case FmRequest::Kind::Store:
            n.mem.write(p_, r.addr, r.value);
            break;
          case FmRequest::Kind::Commit:
            respond(n, r, 0);
            break;
        }
      }
      break;
    }
  }
  return n;
}

bool FmMachine::is_final(const State& s) const {
  if (!all_done(p_, s.core)) return false;
  for (Blocked b : s.blocked)
    if (b != Blocked::None) return false;
  for (const auto& seg : s.segs)
    if (!seg.empty()) return false;
  return true;
}

Outcome FmMachine::observe(const State& s) const {
  Outcome o;
  o.regs.reserve(obs_.regs.size());
  for (const auto& [tid, reg] : obs_.regs)
    o.regs.push_back(s.core.regs[p_.reg_base(tid) + reg]);
  o.memory = s.mem.declared;
  return o;
}

std::string FmMachine::canonical_key(const State& s) const {
  std::string out;
  out.reserve(16 * s.core.regs.size() + 192);
  key_core(out, s.core);
  for (Blocked b : s.blocked) out.push_back(static_cast<char>(b));
  keyio::put_i64s(out, s.mem.declared);
  keyio::put_u32(out, static_cast<std::uint32_t>(s.mem.extra.size()));
  for (const auto& [loc, v] : s.mem.extra) {
    keyio::put_i64(out, loc);
    keyio::put_i64(out, v);
  }
  for (const auto& seg : s.segs) {
    keyio::put_u32(out, static_cast<std::uint32_t>(seg.size()));
    for (const auto& r : seg) {
      out.push_back(static_cast<char>(r.kind));
      keyio::put_u32(out, static_cast<std::uint32_t>(r.origin));
      keyio::put_u32(out, static_cast<std::uint32_t>(r.reg + 1));
      keyio::put_i64(out, r.addr);
      keyio::put_i64(out, r.value);
    }
  }
  return out;
}

namespace {

std::string request_str(const CompiledProgram& p, const FmRequest& r) {
  std::ostringstream os;
  switch (r.kind) {
    case FmRequest::Kind::Load:
      os << "Ld " << p.location_name(r.addr);
      break;
    case FmRequest::Kind::Store:
      os << "St " << p.location_name(r.addr) << "=" << r.value;
      break;
    case FmRequest::Kind::Commit:
      os << "Commit";
      break;
  }
  os << " (" << p.threads()[r.origin].name << ")";
  return os.str();
}

} // namespace

std::string FmMachine::describe(const Transition& t) const {
  std::ostringstream os;
  switch (t.rule) {
    case Rule::Issue:
      os << p_.threads()[t.pid].name << " FM-Issue #" << t.index;
      break;
    case Rule::Reorder:
      os << "FM-Reorder " << topo_.seg_names[t.seg] << " ["
         << request_str(p_, t.r_new) << " over " << request_str(p_, t.r_old)
         << "]";
      break;
    case Rule::Bypass:
      os << "FM-Bypass " << topo_.seg_names[t.seg] << " "
         << request_str(p_, t.r_new) << " := " << t.r_old.value;
      break;
    case Rule::Flow:
      os << "FM-Flow " << topo_.seg_names[t.seg] << " -> "
         << (topo_.parent[t.seg] >= 0 ? topo_.seg_names[topo_.parent[t.seg]]
                                      : std::string("mem"))
         << " " << request_str(p_, t.r_old);
      break;
  }
  return os.str();
}

} // namespace memweave
