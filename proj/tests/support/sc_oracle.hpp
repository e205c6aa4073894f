#ifndef MEMWEAVE_TESTS_SC_ORACLE_HPP_
#define MEMWEAVE_TESTS_SC_ORACLE_HPP_

#include <map>
#include <set>
#include <vector>

#include "memweave/litmus.hpp"
#include "memweave/program.hpp"

// Direct brute-force enumeration of every instruction interleaving under
// sequential consistency. Deliberately independent of the machine/explorer
// path: it interprets the AST recursively with no visited set.

namespace memweave::test {

struct ScOracle {
  const Program& prog;
  std::map<std::string, Value> enc;
  std::set<Outcome> outcomes;
  const CompiledProgram& cp; // only for outcome layout
  const ObsSpec& obs;

  ScOracle(const Program& p, const CompiledProgram& cp, const ObsSpec& obs)
      : prog(p), enc(p.address_encoding()), cp(cp), obs(obs) {}

  struct Sim {
    std::vector<std::map<std::string, Value>> regs;
    std::vector<std::size_t> pc;
    std::map<Value, Value> mem;
  };

  void run() {
    Sim s;
    s.regs.resize(prog.threads.size());
    s.pc.assign(prog.threads.size(), 0);
    for (std::size_t i = 0; i < prog.init.size(); ++i)
      s.mem[enc.at(prog.init[i].first)] = prog.init[i].second;
    step(s);
  }

  void step(Sim& s) {
    bool any = false;
    for (std::size_t t = 0; t < prog.threads.size(); ++t) {
      const auto& code = prog.threads[t].code;
      if (s.pc[t] >= code.size()) continue;
      any = true;
      Sim next = s;
      exec(next, t, code[s.pc[t]]);
      step(next);
    }
    if (!any) record(s);
  }

  void exec(Sim& s, std::size_t t, const Instruction& ins) {
    auto& regs = s.regs[t];
    switch (ins.op) {
      case Instruction::Op::Load: {
        Value a = eval_expr(ins.e1, regs, enc);
        auto it = s.mem.find(a);
        regs[ins.reg] = it == s.mem.end() ? 0 : it->second;
        ++s.pc[t];
        break;
      }
      case Instruction::Op::Store:
        s.mem[eval_expr(ins.e1, regs, enc)] = eval_expr(ins.e2, regs, enc);
        ++s.pc[t];
        break;
      case Instruction::Op::Assign:
        regs[ins.reg] = eval_expr(ins.e1, regs, enc);
        ++s.pc[t];
        break;
      case Instruction::Op::Commit:
      case Instruction::Op::Reconcile:
        ++s.pc[t];
        break;
      case Instruction::Op::ExitIf:
        if (rel_holds(ins.rel, eval_expr(ins.e1, regs, enc),
                      eval_expr(ins.e2, regs, enc)))
          s.pc[t] = prog.threads[t].code.size();
        else
          ++s.pc[t];
        break;
    }
  }

  void record(const Sim& s) {
    Outcome o;
    for (const auto& [tid, reg] : obs.regs) {
      const std::string& name = cp.threads()[tid].reg_names[reg];
      auto it = s.regs[tid].find(name);
      o.regs.push_back(it == s.regs[tid].end() ? 0 : it->second);
    }
    for (std::size_t a = 0; a < prog.init.size(); ++a)
      o.memory.push_back(s.mem.at(enc.at(prog.init[a].first)));
    outcomes.insert(std::move(o));
  }
};

inline std::set<Outcome> brute_force_sc(const Program& p,
                                        const CompiledProgram& cp,
                                        const ObsSpec& obs) {
  ScOracle oracle(p, cp, obs);
  oracle.run();
  return oracle.outcomes;
}

} // namespace memweave::test

#endif // MEMWEAVE_TESTS_SC_ORACLE_HPP_
