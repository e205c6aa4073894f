#include <doctest.h>

#include "memweave/models/wmm.hpp"
#include "support/helpers.hpp"
#include "support/perloc_checker.hpp"

using namespace memweave;
using namespace memweave::test;

TEST_CASE("MP+Commit: the data load may read stale 0 from the ib") {
  CHECK(verdict_of(ModelId::WMM, corpus_test("MP+Commit")) == Verdict::Allow);
}

TEST_CASE("MP+Commit+Reconcile closes the stale read") {
  CHECK(verdict_of(ModelId::WMM, corpus_test("MP+Commit+Reconcile")) ==
        Verdict::Forbid);
}

TEST_CASE("WRC: stores are multi-copy atomic under WMM") {
  CHECK(verdict_of(ModelId::WMM, corpus_test("WRC")) == Verdict::Forbid);
  CHECK(verdict_of(ModelId::WMM, corpus_test("IRIW")) == Verdict::Forbid);
  CHECK(verdict_of(ModelId::WMM, corpus_test("WWC")) == Verdict::Forbid);
}

TEST_CASE("SBE stays allowed with Reconciles between the load pairs") {
  CHECK(verdict_of(ModelId::WMM, corpus_test("SBE+Reconciles")) ==
        Verdict::Allow);
}

TEST_CASE("LB and OOTA are structurally impossible") {
  CHECK(verdict_of(ModelId::WMM, corpus_test("LB")) == Verdict::Forbid);
  CHECK(verdict_of(ModelId::WMM, corpus_test("OOTA")) == Verdict::Forbid);
}

TEST_CASE("per-location SC: CoRR is forbidden") {
  CHECK(verdict_of(ModelId::WMM, corpus_test("CoRR")) == Verdict::Forbid);
}

TEST_CASE("dependency tests are allowed without Reconcile") {
  CHECK(verdict_of(ModelId::WMM, corpus_test("MP+Ctrl")) == Verdict::Allow);
  CHECK(verdict_of(ModelId::WMM, corpus_test("MP+Mem")) == Verdict::Allow);
  CHECK(verdict_of(ModelId::WMM, corpus_test("MP+Data")) == Verdict::Allow);
  CHECK(verdict_of(ModelId::WMM, corpus_test("RMO-dep")) == Verdict::Allow);
}

TEST_CASE("observe projects registers and drained memory") {
  SUBCASE("drained SB final memory") {
    for (const auto& o : run(ModelId::WMM, corpus_test("SB")).outcomes)
      CHECK(o.memory == std::vector<Value>{1, 1});
  }
  SUBCASE("empty program observes init") {
    auto t = parse_litmus(R"(test e
init { a=3 }
thread P1 { }
exists (m[a] = 3)
)");
    auto rs = run(ModelId::WMM, t);
    REQUIRE(rs.outcomes.size() == 1);
    CHECK(rs.outcomes.begin()->memory == std::vector<Value>{3});
  }
  SUBCASE("WWC records the final store order in memory") {
    // WMM forbids the (r1=2, r2=1, m[a]=2) combination but m[a]=2 itself
    // appears whenever the first store drains last.
    bool saw_two = false;
    for (const auto& o : run(ModelId::WMM, corpus_test("WWC")).outcomes)
      if (o.memory[0] == 2) saw_two = true;
    CHECK(saw_two);
  }
}

TEST_CASE("sb/ib exclusion holds after every transition (validated corpus run)") {
  RunOptions opt;
  opt.validate = true;
  for (const auto& e : builtin_corpus()) {
    CAPTURE(e.test.name);
    CHECK_NOTHROW(outcomes_for(ModelId::WMM, e.test, opt));
  }
}

TEST_CASE("ib load transitions enumerate each stale value and purge prefixes") {
  auto t = parse_litmus(R"(test ibrule
init { a=0 }
thread P1 { r1 = Ld a; }
exists (P1.r1 = 0)
)");
  auto p = CompiledProgram::compile(t.program);
  auto obs = ObsSpec::for_test(p, t);
  WmmMachine m(p, obs);
  auto s = m.initial_state();
  for (Value v : {0, 7, 9}) s.ib[0].push_stale(1024, v); // oldest stale first
  s.mem.declared[0] = 11;

  auto ts = m.enabled(s);
  // One memory read plus one transition per stale value.
  int mem_reads = 0, ib_reads = 0;
  for (const auto& tr : ts) {
    if (tr.src == WmmMachine::LdSource::Mem) ++mem_reads;
    if (tr.src == WmmMachine::LdSource::Ib) ++ib_reads;
  }
  CHECK(mem_reads == 1);
  CHECK(ib_reads == 3);

  // Reading the middle stale value drops only the older prefix.
  for (const auto& tr : ts) {
    if (tr.src == WmmMachine::LdSource::Ib && tr.ib_index == 1) {
      auto n = m.apply(s, tr);
      CHECK(n.core.regs[0] == 7);
      REQUIRE(n.ib[0].count(1024) == 2);
      CHECK(n.ib[0].at(1024, 0) == 7);
      CHECK(n.ib[0].at(1024, 1) == 9);
    }
    if (tr.src == WmmMachine::LdSource::Mem) {
      auto n = m.apply(s, tr);
      CHECK(n.core.regs[0] == 11);
      CHECK(n.ib[0].count(1024) == 0);
    }
  }
}

TEST_CASE("invalidation buffer keeps per-address staleness order, addresses sorted") {
  InvalBuffer ib;
  CHECK(ib.empty());
  ib.push_stale(2000, 5);
  ib.push_stale(1024, 0);
  ib.push_stale(1024, 7);
  ib.push_stale(2000, 6);
  CHECK(ib.count(1024) == 2);
  CHECK(ib.count(2000) == 2);
  CHECK(ib.at(1024, 0) == 0); // oldest stale first
  CHECK(ib.at(1024, 1) == 7);
  CHECK(ib.at(2000, 1) == 6);
  // Canonical layout groups by address regardless of insertion interleaving.
  REQUIRE(ib.raw().size() == 4);
  CHECK(ib.raw()[0].addr == 1024);
  CHECK(ib.raw()[3].addr == 2000);

  InvalBuffer other;
  other.push_stale(1024, 0);
  other.push_stale(1024, 7);
  other.push_stale(2000, 5);
  other.push_stale(2000, 6);
  CHECK(ib == other);

  ib.erase_prefix(2000, 1);
  CHECK(ib.count(2000) == 1);
  CHECK(ib.at(2000, 0) == 6);
  ib.erase_addr(1024);
  CHECK_FALSE(ib.has(1024));
  CHECK(ib.count(1024) == 0);
  ib.clear();
  CHECK(ib.empty());
}

TEST_CASE("witnesses and bounded path walks satisfy per-location SC") {
  SUBCASE("ghost replay of corpus witnesses") {
    for (const auto& e : builtin_corpus()) {
      CAPTURE(e.test.name);
      CompiledProgram p = CompiledProgram::compile(e.test.program);
      ObsSpec obs = ObsSpec::for_test(p, e.test);
      auto cond = CompiledCondition::compile(e.test.condition, p, obs);
      WmmMachine m(p, obs);
      auto trace = witness_trace(m, cond, Limits{});
      if (!trace) continue;
      PerLocGhost ghost(p.thread_count());
      auto s = m.initial_state();
      for (const auto& tr : trace->transitions) {
        CHECK(ghost.step(s, tr));
        s = m.apply(s, tr);
        CHECK(ghost.mirrors(s));
      }
    }
  }

  SUBCASE("exhaustive paths on small tests") {
    for (const char* name : {"CoRR", "MP+Commit", "MP", "SBE"}) {
      CAPTURE(name);
      const auto& t = corpus_test(name);
      CompiledProgram p = CompiledProgram::compile(t.program);
      ObsSpec obs = ObsSpec::for_test(p, t);
      WmmMachine m(p, obs);
      PerLocExplorer walker{m, 200000};
      walker.run();
      CHECK(walker.ok);
      CHECK(walker.paths > 0);
    }
  }
}
