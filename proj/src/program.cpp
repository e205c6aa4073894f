#include "memweave/program.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace memweave {

namespace {

struct Compiler {
  const Program& src;
  CompiledProgram* out;
  std::vector<ExprNode>* nodes;
  std::map<std::string, int> addr_index;
  std::map<std::string, int>* regs = nullptr; // current thread

  ExprId compile_expr(const Expr& e) {
    ExprNode n;
    n.kind = e.kind;
    switch (e.kind) {
      case Expr::Kind::Const:
        n.value = e.value;
        break;
      case Expr::Kind::AddrLit:
        n.value = kAddressBase + addr_index.at(e.name);
        break;
      case Expr::Kind::RegRead: {
        auto it = regs->find(e.name);
        // Reads of never-assigned registers fall back to a scratch slot that
        // stays 0, preserving the default-0 rule.
        if (it == regs->end())
          it = regs->emplace(e.name, static_cast<int>(regs->size())).first;
        n.reg = it->second;
        break;
      }
      case Expr::Kind::Add:
      case Expr::Kind::Sub:
        n.lhs = compile_expr(e.kids[0]);
        n.rhs = compile_expr(e.kids[1]);
        break;
    }
    nodes->push_back(n);
    return static_cast<ExprId>(nodes->size() - 1);
  }
};

} // namespace

CompiledProgram CompiledProgram::compile(const Program& p) {
  CompiledProgram cp;
  Compiler c{p, &cp, &cp.nodes_, {}, nullptr};
  for (const auto& [name, v] : p.init) {
    c.addr_index.emplace(name, static_cast<int>(cp.addr_names_.size()));
    cp.addr_names_.push_back(name);
    cp.init_.push_back(v);
  }
  for (const auto& th : p.threads) {
    CThread ct;
    ct.name = th.name;
    std::map<std::string, int> regs;
    c.regs = &regs;
    for (const auto& ins : th.code) {
      CInstr ci;
      ci.op = ins.op;
      ci.rel = ins.rel;
      switch (ins.op) {
        case Instruction::Op::Load:
        case Instruction::Op::Assign: {
          ci.e1 = c.compile_expr(ins.e1);
          auto it = regs.find(ins.reg);
          if (it == regs.end())
            it = regs.emplace(ins.reg, static_cast<int>(regs.size())).first;
          ci.reg = it->second;
          break;
        }
        case Instruction::Op::Store:
        case Instruction::Op::ExitIf:
          ci.e1 = c.compile_expr(ins.e1);
          ci.e2 = c.compile_expr(ins.e2);
          break;
        case Instruction::Op::Commit:
        case Instruction::Op::Reconcile:
          break;
      }
      ct.code.push_back(ci);
    }
    ct.reg_names.resize(regs.size());
    for (const auto& [name, idx] : regs) ct.reg_names[idx] = name;
    cp.threads_.push_back(std::move(ct));
  }
  for (const auto& th : cp.threads_) {
    cp.reg_base_.push_back(cp.total_regs_);
    cp.total_regs_ += static_cast<int>(th.reg_names.size());
  }
  return cp;
}

Value CompiledProgram::eval(ExprId id, std::span<const Value> regs) const {
  const ExprNode& n = nodes_[id];
  switch (n.kind) {
    case Expr::Kind::Const:
    case Expr::Kind::AddrLit: return n.value;
    case Expr::Kind::RegRead: return regs[n.reg];
    case Expr::Kind::Add: return eval(n.lhs, regs) + eval(n.rhs, regs);
    case Expr::Kind::Sub: return eval(n.lhs, regs) - eval(n.rhs, regs);
  }
  return 0;
}

std::string CompiledProgram::location_name(Value enc) const {
  int idx = decode(enc);
  if (idx >= 0) return addr_names_[idx];
  return "loc(" + std::to_string(enc) + ")";
}

Memory Memory::initial(const CompiledProgram& p) {
  Memory m;
  m.declared = p.init_values();
  return m;
}

Value Memory::read(const CompiledProgram& p, Value loc) const {
  int idx = p.decode(loc);
  if (idx >= 0) return declared[idx];
  auto it = extra.find(loc);
  return it == extra.end() ? 0 : it->second;
}

void Memory::write(const CompiledProgram& p, Value loc, Value v) {
  int idx = p.decode(loc);
  if (idx >= 0) {
    declared[idx] = v;
  } else if (v == 0) {
    extra.erase(loc);
  } else {
    extra[loc] = v;
  }
}

ObsSpec ObsSpec::load_targets(const CompiledProgram& p) {
  std::set<std::pair<int, int>> set;
  for (int t = 0; t < p.thread_count(); ++t)
    for (const auto& ci : p.threads()[t].code)
      if (ci.op == Instruction::Op::Load) set.emplace(t, ci.reg);
  ObsSpec spec;
  spec.regs.assign(set.begin(), set.end());
  return spec;
}

ObsSpec ObsSpec::for_test(const CompiledProgram& p, const LitmusTest& t) {
  std::set<std::pair<int, int>> set;
  for (int tid = 0; tid < p.thread_count(); ++tid)
    for (const auto& ci : p.threads()[tid].code)
      if (ci.op == Instruction::Op::Load) set.emplace(tid, ci.reg);

  // Walk the condition for register mentions.
  std::vector<const Condition*> work{&t.condition};
  while (!work.empty()) {
    const Condition* c = work.back();
    work.pop_back();
    if (c->kind == Condition::Kind::RegEq) {
      int tid = -1;
      for (int i = 0; i < p.thread_count(); ++i)
        if (p.threads()[i].name == c->thread) tid = i;
      if (tid < 0) throw std::runtime_error("condition references unknown thread");
      const auto& names = p.threads()[tid].reg_names;
      auto it = std::find(names.begin(), names.end(), c->reg);
      if (it == names.end())
        throw std::runtime_error("condition references unknown register");
      set.emplace(tid, static_cast<int>(it - names.begin()));
    }
    for (const auto& k : c->kids) work.push_back(&k);
  }
  ObsSpec spec;
  spec.regs.assign(set.begin(), set.end());
  return spec;
}

int ObsSpec::index_of(int tid, int reg) const {
  auto it = std::lower_bound(regs.begin(), regs.end(), std::make_pair(tid, reg));
  if (it == regs.end() || *it != std::make_pair(tid, reg)) return -1;
  return static_cast<int>(it - regs.begin());
}

std::string render_outcome(const Outcome& o, const CompiledProgram& p,
                           const ObsSpec& spec) {
  std::ostringstream os;
  for (std::size_t i = 0; i < spec.regs.size(); ++i) {
    const auto& [tid, reg] = spec.regs[i];
    os << (i ? ", " : "") << p.threads()[tid].name << "."
       << p.threads()[tid].reg_names[reg] << "=" << o.regs[i];
  }
  for (int a = 0; a < p.address_count(); ++a) {
    if (!spec.regs.empty() || a) os << ", ";
    os << "m[" << p.addresses()[a] << "]=" << o.memory[a];
  }
  return os.str();
}

CompiledCondition CompiledCondition::compile(const Condition& c,
                                             const CompiledProgram& p,
                                             const ObsSpec& spec) {
  CompiledCondition cc;
  cc.root_ = cc.build(c, p, spec);
  return cc;
}

int CompiledCondition::build(const Condition& c, const CompiledProgram& p,
                             const ObsSpec& spec) {
  Node n;
  n.kind = c.kind;
  n.value = c.value;
  switch (c.kind) {
    case Condition::Kind::RegEq: {
      int tid = -1;
      for (int i = 0; i < p.thread_count(); ++i)
        if (p.threads()[i].name == c.thread) tid = i;
      const auto& names = p.threads()[tid].reg_names;
      auto it = std::find(names.begin(), names.end(), c.reg);
      n.obs_index = spec.index_of(tid, static_cast<int>(it - names.begin()));
      if (n.obs_index < 0)
        throw std::runtime_error("condition register missing from observation");
      break;
    }
    case Condition::Kind::MemEq: {
      for (int a = 0; a < p.address_count(); ++a)
        if (p.addresses()[a] == c.addr) n.addr_idx = a;
      if (n.addr_idx < 0)
        throw std::runtime_error("condition references unknown address");
      break;
    }
    case Condition::Kind::And:
    case Condition::Kind::Or:
      for (const auto& k : c.kids) n.kids.push_back(build(k, p, spec));
      break;
  }
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size() - 1);
}

bool CompiledCondition::eval(const Outcome& o) const {
  std::vector<char> memo(nodes_.size(), 0);
  // Nodes are in post-order: children precede parents.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    switch (n.kind) {
      case Condition::Kind::RegEq:
        memo[i] = o.regs[n.obs_index] == n.value;
        break;
      case Condition::Kind::MemEq:
        memo[i] = o.memory[n.addr_idx] == n.value;
        break;
      case Condition::Kind::And: {
        bool v = true;
        for (int k : n.kids) v = v && memo[k];
        memo[i] = v;
        break;
      }
      case Condition::Kind::Or: {
        bool v = false;
        for (int k : n.kids) v = v || memo[k];
        memo[i] = v;
        break;
      }
    }
  }
  return memo[root_];
}

bool check_condition(const CompiledCondition& c, const Outcome& o) {
  return c.eval(o);
}

} // namespace memweave
