#ifndef MEMWEAVE_TESTS_HELPERS_HPP_
#define MEMWEAVE_TESTS_HELPERS_HPP_

#include <set>
#include <string>

#include "memweave/corpus.hpp"
#include "memweave/registry.hpp"

namespace memweave::test {

inline const LitmusTest& corpus_test(const std::string& name) {
  const CorpusEntry* e = corpus_entry(name);
  REQUIRE(e != nullptr);
  return e->test;
}

inline OutcomeSet run(ModelId id, const LitmusTest& t,
                      Traversal order = Traversal::Bfs) {
  RunOptions opt;
  opt.traversal = order;
  return outcomes_for(id, t, opt);
}

inline Verdict verdict_of(ModelId id, const LitmusTest& t) {
  CompiledProgram p = CompiledProgram::compile(t.program);
  ObsSpec obs = ObsSpec::for_test(p, t);
  auto cond = CompiledCondition::compile(t.condition, p, obs);
  return verdict(run(id, t), cond);
}

// Projects an outcome set onto (register values, declared memory) pairs for
// readable assertions.
inline std::set<std::vector<Value>> reg_sets(const OutcomeSet& s) {
  std::set<std::vector<Value>> out;
  for (const auto& o : s.outcomes) out.insert(o.regs);
  return out;
}

} // namespace memweave::test

#endif // MEMWEAVE_TESTS_HELPERS_HPP_
