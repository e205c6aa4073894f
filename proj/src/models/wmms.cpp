#include "memweave/models/wmms.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "memweave/explore.hpp"

namespace memweave {

namespace {

int tb_youngest(const TaggedBuffer& sb, Value addr) {
  for (int i = static_cast<int>(sb.size()) - 1; i >= 0; --i)
    if (sb[i].addr == addr) return i;
  return -1;
}

bool tb_contains_addr(const TaggedBuffer& sb, Value addr) {
  return tb_youngest(sb, addr) >= 0;
}

bool tb_contains_tag(const TaggedBuffer& sb, Tag tag) {
  return std::any_of(sb.begin(), sb.end(),
                     [&](const TaggedStore& e) { return e.tag == tag; });
}

// First (oldest) entry for the given address, or -1.
int tb_oldest_for_addr(const TaggedBuffer& sb, Value addr) {
  for (int i = 0; i < static_cast<int>(sb.size()); ++i)
    if (sb[i].addr == addr) return i;
  return -1;
}

} // namespace

bool CoherenceGraph::reaches(Tag from, Tag to) const {
  std::set<Tag> seen{from};
  std::vector<Tag> work{from};
  while (!work.empty()) {
    Tag cur = work.back();
    work.pop_back();
    if (cur == to) return true;
    for (const auto& [a, b] : edges)
      if (a == cur && seen.insert(b).second) work.push_back(b);
  }
  return false;
}

bool CoherenceGraph::acyclic() const {
  // Kahn's algorithm over the tag nodes.
  std::map<Tag, int> indeg;
  for (Tag n : nodes) indeg[n] = 0;
  for (const auto& [a, b] : edges) ++indeg[b];
  std::vector<Tag> ready;
  for (const auto& [n, d] : indeg)
    if (d == 0) ready.push_back(n);
  std::size_t removed = 0;
  while (!ready.empty()) {
    Tag n = ready.back();
    ready.pop_back();
    ++removed;
    for (const auto& [a, b] : edges)
      if (a == n && --indeg[b] == 0) ready.push_back(b);
  }
  return removed == nodes.size();
}

CoherenceGraph WmmsMachine::coherence_graph(const State& s) {
  CoherenceGraph g;
  std::set<Tag> nodes;
  std::set<std::pair<Tag, Tag>> edges;
  for (const auto& sb : s.sb) {
    // Per-address chains within one buffer, oldest to youngest.
    std::map<Value, Tag> last;
    for (const auto& e : sb) {
      nodes.insert(e.tag);
      auto it = last.find(e.addr);
      if (it != last.end()) edges.emplace(it->second, e.tag);
      last[e.addr] = e.tag;
    }
  }
  g.nodes.assign(nodes.begin(), nodes.end());
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

bool WmmsMachine::copy_allowed(const State& s, Tag tag, int from_pid,
                               int to_pid) {
  const TaggedStore* src = nullptr;
  for (const auto& e : s.sb[from_pid])
    if (e.tag == tag) src = &e;
  if (!src) return false;
  if (tb_contains_tag(s.sb[to_pid], tag)) return false; // t <co t immediately
  // The copy enters as the youngest entry for its address, adding one edge
  // from the current youngest same-address entry. A cycle appears exactly
  // when that predecessor is already reachable from the copied tag.
  int prev = tb_youngest(s.sb[to_pid], src->addr);
  if (prev < 0) return true;
  CoherenceGraph g = coherence_graph(s);
  return !g.reaches(tag, s.sb[to_pid][prev].tag);
}

Tag WmmsMachine::fresh_tag(const State& s) const {
  // Tags only need to be unique among buffered stores; the successor of the
  // maximum live tag is canonical across equivalent states.
  Tag next = 1;
  for (const auto& sb : s.sb)
    for (const auto& e : sb) next = std::max(next, e.tag + 1);
  return next;
}

WmmsMachine::State WmmsMachine::initial_state() const {
  State s{initial_core(p_), Memory::initial(p_), {}, {}};
  s.sb.resize(p_.thread_count());
  s.ib.resize(p_.thread_count());
  return s;
}

std::vector<WmmsMachine::Transition> WmmsMachine::enabled(const State& s) const {
  std::vector<Transition> out;
  for (int t = 0; t < p_.thread_count(); ++t) {
    const auto& code = p_.threads()[t].code;
    if (s.core.pc[t] < static_cast<int>(code.size())) {
      const CInstr& ins = code[s.core.pc[t]];
      switch (ins.op) {
        case Instruction::Op::Load: {
          Value addr = p_.eval(ins.e1, thread_regs(p_, s.core, t));
          if (tb_contains_addr(s.sb[t], addr)) {
            Value v = s.sb[t][tb_youngest(s.sb[t], addr)].value;
            out.push_back({Rule::Ld, t, LdSource::Sb, -1, 0, -1, addr, v});
          } else {
            out.push_back({Rule::Ld, t, LdSource::Mem, -1, 0, -1, addr,
                           s.mem.read(p_, addr)});
            int stale = s.ib[t].count(addr);
            for (int i = 0; i < stale; ++i)
              out.push_back({Rule::Ld, t, LdSource::Ib, i, 0, -1, addr,
                             s.ib[t].at(addr, i)});
          }
          // Copy-bound loads: pull a same-address store out of another
          // buffer and read it, when the coherence order stays acyclic.
          for (int q = 0; q < p_.thread_count(); ++q) {
            if (q == t) continue;
            for (const auto& e : s.sb[q]) {
              if (e.addr != addr) continue;
              if (copy_allowed(s, e.tag, q, t))
                out.push_back({Rule::Ld, t, LdSource::Copy, -1, e.tag, q,
                               addr, e.value});
            }
          }
          break;
        }
        case Instruction::Op::Store: {
          auto regs = thread_regs(p_, s.core, t);
          Value addr = p_.eval(ins.e1, regs);
          Value data = p_.eval(ins.e2, regs);
          out.push_back({Rule::St, t, LdSource::Mem, -1, 0, -1, addr, data});
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
  }

  // Background dequeue per store: enabled when every copy is the oldest
  // entry for its address in its buffer.
  std::set<Tag> considered;
  for (int q = 0; q < p_.thread_count(); ++q) {
    for (const auto& e : s.sb[q]) {
      if (!considered.insert(e.tag).second) continue;
      bool all_oldest = true;
      int holder = q;
      for (int r = 0; r < p_.thread_count() && all_oldest; ++r) {
        if (!tb_contains_tag(s.sb[r], e.tag)) continue;
        int oldest = tb_oldest_for_addr(s.sb[r], e.addr);
        if (s.sb[r][oldest].tag != e.tag) all_oldest = false;
      }
      if (all_oldest)
        out.push_back({Rule::DeqSb, holder, LdSource::Mem, -1, e.tag, -1,
                       e.addr, e.value});
    }
  }

  // Unbound background copies (exploration mode for cross-checking the
  // load-bound restriction).
  if (unrestricted_) {
    for (int q = 0; q < p_.thread_count(); ++q) {
      for (const auto& e : s.sb[q]) {
        for (int r = 0; r < p_.thread_count(); ++r) {
          if (r == q) continue;
          if (copy_allowed(s, e.tag, q, r))
            out.push_back({Rule::Copy, r, LdSource::Copy, -1, e.tag, q,
                           e.addr, e.value});
        }
      }
    }
  }
  return out;
}

WmmsMachine::State WmmsMachine::apply(const State& s, const Transition& t) const {
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
          regs[ins.reg] = n.sb[t.pid][tb_youngest(n.sb[t.pid], t.addr)].value;
          break;
        case LdSource::Mem:
          regs[ins.reg] = n.mem.read(p_, t.addr);
          n.ib[t.pid].erase_addr(t.addr);
          break;
        case LdSource::Ib:
          regs[ins.reg] = n.ib[t.pid].at(t.addr, t.ib_index);
          n.ib[t.pid].erase_prefix(t.addr, t.ib_index);
          break;
        case LdSource::Copy: {
          // Copy then read the fresh copy, which is now the youngest entry
          // for the address.
          n.sb[t.pid].push_back({t.addr, t.value, t.tag});
          n.ib[t.pid].erase_addr(t.addr);
          regs[ins.reg] = t.value;
          break;
        }
      }
      ++pc;
      break;
    }
    case Rule::St: {
      n.sb[t.pid].push_back({t.addr, t.value, fresh_tag(s)});
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
      Value stale = n.mem.read(p_, t.addr);
      // Stale insertion happens before the copies vanish, so buffers still
      // holding the address (including every copy holder) receive nothing.
      for (int q = 0; q < p_.thread_count(); ++q) {
        if (tb_contains_addr(n.sb[q], t.addr)) continue;
        n.ib[q].push_stale(t.addr, stale);
      }
      for (auto& sb : n.sb)
        std::erase_if(sb, [&](const TaggedStore& e) { return e.tag == t.tag; });
      n.mem.write(p_, t.addr, t.value);
      break;
    }
    case Rule::Copy: {
      n.sb[t.pid].push_back({t.addr, t.value, t.tag});
      n.ib[t.pid].erase_addr(t.addr);
      break;
    }
  }
  if (validate_) check_invariants(n);
  return n;
}

bool WmmsMachine::is_final(const State& s) const {
  if (!all_done(p_, s.core)) return false;
  for (const auto& sb : s.sb)
    if (!sb.empty()) return false;
  return true;
}

Outcome WmmsMachine::observe(const State& s) const {
  Outcome o;
  o.regs.reserve(obs_.regs.size());
  for (const auto& [tid, reg] : obs_.regs)
    o.regs.push_back(s.core.regs[p_.reg_base(tid) + reg]);
  o.memory = s.mem.declared;
  return o;
}

std::string WmmsMachine::canonical_key(const State& s) const {
  // Tags are identifiers: states that differ only by a tag bijection are the
  // same machine state. Rename tags by first appearance in buffer order.
  std::map<Tag, std::uint32_t> rename;
  std::string out;
  out.reserve(16 * s.core.regs.size() + 256);
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
      auto it = rename.find(e.tag);
      if (it == rename.end())
        it = rename.emplace(e.tag, static_cast<std::uint32_t>(rename.size())).first;
      keyio::put_u32(out, it->second);
    }
  }
  for (const auto& ib : s.ib) key_ib(out, ib);
  return out;
}

std::string WmmsMachine::describe(const Transition& t) const {
  std::ostringstream os;
  os << p_.threads()[t.pid].name << " ";
  switch (t.rule) {
    case Rule::Nm: os << "WMM-S-Nm"; break;
    case Rule::Ld:
      os << "WMM-S-Ld ";
      switch (t.src) {
        case LdSource::Sb: os << "sb"; break;
        case LdSource::Mem: os << "m"; break;
        case LdSource::Ib: os << "ib"; break;
        case LdSource::Copy:
          os << "copy[t" << t.tag << " from "
             << p_.threads()[t.from_pid].name << "]";
          break;
      }
      os << " " << p_.location_name(t.addr) << "=" << t.value;
      break;
    case Rule::St:
      os << "WMM-S-St " << p_.location_name(t.addr) << "=" << t.value;
      break;
    case Rule::Com: os << "WMM-S-Com"; break;
    case Rule::Rec: os << "WMM-S-Rec"; break;
    case Rule::DeqSb:
      os << "WMM-S-DeqSb t" << t.tag << " " << p_.location_name(t.addr) << "="
         << t.value;
      break;
    case Rule::Copy:
      os << "WMM-S-Copy t" << t.tag << " "
         << p_.threads()[t.from_pid].name << "->" << p_.threads()[t.pid].name
         << " " << p_.location_name(t.addr) << "=" << t.value;
      break;
  }
  return os.str();
}

void WmmsMachine::check_invariants(const State& s) {
  if (!coherence_graph(s).acyclic())
    throw ModelInvariantViolation("partial coherence order has a cycle");
  for (std::size_t pid = 0; pid < s.sb.size(); ++pid) {
    std::set<Tag> tags;
    for (const auto& e : s.sb[pid]) {
      if (!tags.insert(e.tag).second)
        throw ModelInvariantViolation("duplicate tag within one store buffer");
      if (s.ib[pid].has(e.addr))
        throw ModelInvariantViolation(
            "address buffered in both sb and ib of processor " +
            std::to_string(pid));
    }
  }
}

} // namespace memweave
