// Acceptance suite: runs every gating criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "memweave/axiomatic.hpp"
#include "memweave/corpus.hpp"
#include "memweave/models/fm.hpp"
#include "memweave/models/wmm.hpp"
#include "memweave/models/wmms.hpp"
#include "memweave/registry.hpp"
#include "support/sc_oracle.hpp"

using namespace memweave;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Gate {
  int failures = 0;
  std::ostringstream details;

  void report(int criterion, const std::string& what, bool ok,
              const std::string& info = "") {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion
              << ": " << what;
    if (!info.empty()) std::cout << " (" << info << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  }
};

// Outcome sets are reused across criteria.
struct Cache {
  std::map<std::pair<std::string, ModelId>, OutcomeSet> sets;

  const OutcomeSet& get(ModelId id, const LitmusTest& t) {
    auto key = std::make_pair(t.name, id);
    auto it = sets.find(key);
    if (it == sets.end()) {
      RunOptions opt;
      opt.validate = true; // machine invariants stay on throughout
      it = sets.emplace(key, outcomes_for(id, t, opt)).first;
    }
    return it->second;
  }
};

Verdict verdict_for(const OutcomeSet& set, const LitmusTest& t) {
  CompiledProgram p = CompiledProgram::compile(t.program);
  ObsSpec obs = ObsSpec::for_test(p, t);
  auto cond = CompiledCondition::compile(t.condition, p, obs);
  return verdict(set, cond);
}

void criterion1_verdict_grid(Gate& gate, Cache& cache) {
  auto suite_start = Clock::now();
  bool all_match = true;
  bool each_fast = true;
  std::string detail;
  for (const auto& e : builtin_corpus()) {
    auto test_start = Clock::now();
    for (const auto& [model, expected] : e.test.expectations) {
      Verdict got = verdict_for(cache.get(model, e.test), e.test);
      if (got != expected) {
        all_match = false;
        detail += e.test.name + "/" + model_name(model) + " got " +
                  verdict_name(got) + " want " + verdict_name(expected) + "; ";
      }
    }
    double ms = ms_since(test_start);
    if (ms > 10'000.0) {
      each_fast = false;
      detail += e.test.name + " took " + std::to_string(ms) + "ms; ";
    }
  }
  double total = ms_since(suite_start);
  bool in_budget = total < 120'000.0;
  std::ostringstream info;
  info << builtin_corpus().size() << " tests, " << static_cast<int>(total)
       << "ms total";
  if (!detail.empty()) info << "; " << detail;
  gate.report(1, "corpus verdict grid matches expectations, within time budget",
              all_match && each_fast && in_budget, info.str());
}

void criterion2_operational_equals_axiomatic(Gate& gate, Cache& cache) {
  bool ok = true;
  std::string detail;
  int checked = 0;
  for (const auto& e : builtin_corpus()) {
    if (!e.test.program.branch_free()) continue;
    ++checked;
    const auto& op = cache.get(ModelId::WMM, e.test);
    const auto& ax = cache.get(ModelId::WMM_AX, e.test);
    if (op.outcomes != ax.outcomes) {
      ok = false;
      std::size_t only_op = 0, only_ax = 0;
      for (const auto& o : op.outcomes)
        if (!ax.outcomes.count(o)) ++only_op;
      for (const auto& o : ax.outcomes)
        if (!op.outcomes.count(o)) ++only_ax;
      detail += e.test.name + " differs (+" + std::to_string(only_op) +
                " operational, +" + std::to_string(only_ax) + " axiomatic); ";
    }
  }
  gate.report(2, "WMM operational outcome sets equal WMM-AX outcome sets",
              ok && checked > 0,
              detail.empty() ? std::to_string(checked) + " branch-free tests"
                             : detail);
}

void criterion3_containment_chain(Gate& gate, Cache& cache) {
  const ModelId chain[] = {ModelId::SC, ModelId::TSO, ModelId::PSO,
                           ModelId::WMM, ModelId::WMMS};
  bool ok = true;
  std::string detail;
  int checked = 0;
  for (const auto& e : builtin_corpus()) {
    if (!e.test.program.fence_free()) continue;
    ++checked;
    for (std::size_t i = 0; i + 1 < std::size(chain); ++i) {
      if (!subset_of(cache.get(chain[i], e.test),
                     cache.get(chain[i + 1], e.test))) {
        ok = false;
        detail += e.test.name + ": " + model_name(chain[i]) +
                  " not within " + model_name(chain[i + 1]) + "; ";
      }
    }
  }
  // Strictness witnesses, one per inclusion.
  struct Witness {
    const char* test;
    ModelId weak, strong;
  } witnesses[] = {
      {"SB", ModelId::SC, ModelId::TSO},
      {"MP", ModelId::TSO, ModelId::PSO},
      {"MP+Commit", ModelId::PSO, ModelId::WMM}, // Ld-Ld reordering variant
      {"WRC", ModelId::WMM, ModelId::WMMS},
  };
  for (const auto& w : witnesses) {
    const auto& t = corpus_entry(w.test)->test;
    const auto& weak = cache.get(w.weak, t);
    const auto& strong = cache.get(w.strong, t);
    bool strict = subset_of(weak, strong) &&
                  weak.outcomes.size() < strong.outcomes.size();
    if (!strict) {
      ok = false;
      detail += std::string(w.test) + " fails strictness " +
                model_name(w.weak) + " < " + model_name(w.strong) + "; ";
    }
  }
  gate.report(3, "SC <= TSO <= PSO <= WMM <= WMM-S with strict witnesses", ok,
              detail.empty() ? std::to_string(checked) + " fence-free tests"
                             : detail);
}

void criterion4_fm_containment(Gate& gate) {
  bool ok = true;
  std::string detail;
  for (const auto& e : builtin_corpus()) {
    CompiledProgram p = CompiledProgram::compile(e.test.program);
    ObsSpec obs = ObsSpec::for_test(p, e.test);
    FmMachine fm(p, obs, Topology::paired_shared(p));
    OutcomeSet fm_set = enumerate_outcomes(fm, Limits{});
    WmmsMachine wmms(p, obs, true);
    OutcomeSet ss = enumerate_outcomes(wmms, Limits{});
    if (!subset_of(fm_set, ss)) {
      ok = false;
      detail += e.test.name + ": FM escapes WMM-S; ";
    }
  }
  // FM must exhibit the WRC outcome that WMM forbids.
  {
    const auto& wrc = corpus_entry("WRC")->test;
    RunOptions opt;
    Verdict v = verdict_for(outcomes_for(ModelId::FM, wrc, opt), wrc);
    if (v != Verdict::Allow) {
      ok = false;
      detail += "WRC outcome unreachable under FM; ";
    }
  }
  gate.report(4, "FM (shared subtree) outcomes contained in WMM-S, WRC reachable",
              ok, detail);
}

void criterion5_coherence_invariant(Gate& gate) {
  bool ok = true;
  std::string detail;
  // Validation is enabled inside apply(): any acyclicity violation throws.
  for (const auto& e : builtin_corpus()) {
    RunOptions opt;
    opt.validate = true;
    try {
      outcomes_for(ModelId::WMMS, e.test, opt);
    } catch (const std::exception& ex) {
      ok = false;
      detail += e.test.name + ": " + ex.what() + "; ";
    }
  }
  // The hand-built copy-rejection configuration must reproduce.
  {
    auto t = parse_litmus(
        "test fig\ninit { a=0 }\nthread P1 { }\nthread P2 { }\n"
        "thread P3 { }\nexists (m[a] = 0)\n");
    CompiledProgram p = CompiledProgram::compile(t.program);
    ObsSpec obs = ObsSpec::for_test(p, t);
    WmmsMachine m(p, obs);
    auto s = m.initial_state();
    const Value a = 1024;
    s.sb[0] = {{a, 10, 1}};
    s.sb[1] = {{a, 40, 4}, {a, 20, 2}, {a, 10, 1}};
    s.sb[2] = {{a, 30, 3}, {a, 20, 2}};
    bool graph_ok = WmmsMachine::coherence_graph(s).acyclic();
    bool rejects_cycle = !WmmsMachine::copy_allowed(s, 3, 2, 0);
    bool rejects_self = !WmmsMachine::copy_allowed(s, 1, 1, 0);
    bool allows_safe = WmmsMachine::copy_allowed(s, 1, 1, 2);
    if (!(graph_ok && rejects_cycle && rejects_self && allows_safe)) {
      ok = false;
      detail += "copy-rejection example mismatch; ";
    }
  }
  gate.report(5, "WMM-S coherence order acyclic everywhere, copy rejection exact",
              ok, detail);
}

void criterion6_sc_recovery(Gate& gate, Cache& cache) {
  bool ok = true;
  std::string detail;
  for (const char* name : {"SB", "MP", "LB", "CoRR", "SBE"}) {
    const auto& t = corpus_entry(name)->test;
    const auto& sc = cache.get(ModelId::SC, t);
    LitmusTest fenced = insert_sc_fences_test(t);
    RunOptions opt;
    auto wmm = outcomes_for(ModelId::WMM, fenced, opt);
    auto wmms = outcomes_for(ModelId::WMMS, fenced, opt);
    if (wmm.outcomes != sc.outcomes) {
      ok = false;
      detail += std::string(name) + ": WMM differs from SC; ";
    }
    if (wmms.outcomes != sc.outcomes) {
      ok = false;
      detail += std::string(name) + ": WMM-S differs from SC; ";
    }
  }
  gate.report(6, "conservative fence insertion recovers the SC outcome sets",
              ok, detail);
}

void criterion7_explorer_oracle(Gate& gate, Cache& cache) {
  bool ok = true;
  std::string detail;
  int small = 0;
  for (const auto& e : builtin_corpus()) {
    if (e.test.program.instruction_count() > 6) continue;
    ++small;
    CompiledProgram p = CompiledProgram::compile(e.test.program);
    ObsSpec obs = ObsSpec::for_test(p, e.test);
    if (cache.get(ModelId::SC, e.test).outcomes !=
        test::brute_force_sc(e.test.program, p, obs)) {
      ok = false;
      detail += e.test.name + ": SC differs from brute force; ";
    }
  }
  for (const auto& e : builtin_corpus()) {
    for (ModelId id : {ModelId::SC, ModelId::TSO, ModelId::PSO, ModelId::WMM,
                       ModelId::WMMS, ModelId::FM}) {
      RunOptions dfs, bfs;
      dfs.traversal = Traversal::Dfs;
      bfs.traversal = Traversal::Bfs;
      if (outcomes_for(id, e.test, dfs).outcomes !=
          outcomes_for(id, e.test, bfs).outcomes) {
        ok = false;
        detail += e.test.name + "/" + model_name(id) + ": DFS != BFS; ";
      }
    }
  }
  gate.report(7, "SC equals brute-force interleavings; DFS and BFS agree", ok,
              detail.empty() ? std::to_string(small) + " small tests" : detail);
}

} // namespace

int main() {
  Gate gate;
  Cache cache;
  auto start = Clock::now();
  try {
    criterion1_verdict_grid(gate, cache);
    criterion2_operational_equals_axiomatic(gate, cache);
    criterion3_containment_chain(gate, cache);
    criterion4_fm_containment(gate);
    criterion5_coherence_invariant(gate);
    criterion6_sc_recovery(gate, cache);
    criterion7_explorer_oracle(gate, cache);
  } catch (const std::exception& ex) {
    std::cout << "[FAIL] acceptance aborted: " << ex.what() << "\n";
    return 2;
  }
  std::cout << (gate.failures ? "FAILED" : "OK") << ": " << gate.failures
            << " failing criteria, " << static_cast<int>(ms_since(start))
            << "ms\n";
  return gate.failures ? 1 : 0;
}
