#include <doctest.h>

#include "memweave/corpus.hpp"
#include "memweave/litmus.hpp"
#include "memweave/program.hpp"

using namespace memweave;

TEST_CASE("SB parses into two threads with four instructions") {
  auto t = parse_litmus(R"(test SB
init { a=0, b=0 }
thread P1 { St a 1; r1 = Ld b; }
thread P2 { St b 1; r2 = Ld a; }
exists (P1.r1 = 0 /\ P2.r2 = 0)
)");
  CHECK(t.name == "SB");
  REQUIRE(t.program.threads.size() == 2);
  CHECK(t.program.instruction_count() == 4);
  CHECK(t.program.threads[0].code[0].op == Instruction::Op::Store);
  CHECK(t.program.threads[0].code[1].op == Instruction::Op::Load);
  CHECK(t.condition.kind == Condition::Kind::And);
  CHECK(t.program.branch_free());
  CHECK(t.program.fence_free());
}

TEST_CASE("empty thread body is a zero-length thread") {
  auto t = parse_litmus(R"(test empty
init { a=0 }
thread P1 { }
exists (m[a] = 0)
)");
  REQUIRE(t.program.threads.size() == 1);
  CHECK(t.program.threads[0].code.empty());
}

TEST_CASE("Fence desugars to Commit then Reconcile") {
  auto t = parse_litmus(R"(test f
init { a=0 }
thread P1 { Fence; St a 1; }
exists (m[a] = 1)
)");
  REQUIRE(t.program.threads[0].code.size() == 3);
  CHECK(t.program.threads[0].code[0].op == Instruction::Op::Commit);
  CHECK(t.program.threads[0].code[1].op == Instruction::Op::Reconcile);
  CHECK(t.program.threads[0].code[2].op == Instruction::Op::Store);
}

TEST_CASE("parse errors carry position and cause") {
  // Trailing input after the last section.
  CHECK_THROWS_AS(parse_litmus("test t\ninit { a=0 }\nthread P1 { }\n"
                               "exists (m[a] = 0)\ngarbage"),
                  ParseError);
  // Duplicate thread name.
  CHECK_THROWS_AS(parse_litmus("test t\ninit { a=0 }\nthread P { }\n"
                               "thread P { }\nexists (m[a] = 0)\n"),
                  ParseError);
  // Unknown model id in expect.
  CHECK_THROWS_AS(parse_litmus("test t\ninit { a=0 }\nthread P { }\n"
                               "exists (m[a] = 0)\nexpect { RMO: allow }\n"),
                  ParseError);
  // Register read before any definition.
  CHECK_THROWS_AS(parse_litmus("test t\ninit { a=0 }\n"
                               "thread P { St a r9; }\nexists (m[a] = 0)\n"),
                  ParseError);
  // Condition over a register the thread never assigns.
  CHECK_THROWS_AS(parse_litmus("test t\ninit { a=0 }\nthread P { }\n"
                               "exists (P.r1 = 0)\n"),
                  ParseError);
  // A test with no threads at all.
  CHECK_THROWS_AS(parse_litmus("test t\ninit { a=0 }\nexists (m[a] = 0)\n"),
                  ParseError);
  try {
    parse_litmus("test t\ninit { a=0, a=1 }\nthread P { }\nexists (m[a]=0)\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("expression evaluation follows the address encoding") {
  std::map<std::string, Value> enc{{"a", 1024}, {"b", 1025}};
  std::map<std::string, Value> regs{{"r1", 1}};

  // b + r1 - 1 with r1 = 1 lands on b itself.
  Expr e = Expr::sub(Expr::add(Expr::addr("b"), Expr::reg("r1")),
                     Expr::constant(1));
  CHECK(eval_expr(e, regs, enc) == 1025);
  CHECK(eval_expr(Expr::constant(42), {}, {}) == 42);
  // Undefined registers read as zero.
  CHECK(eval_expr(Expr::reg("r3"), regs, enc) == 0);
}

TEST_CASE("addresses encode densely from 1024 in declaration order") {
  auto t = parse_litmus(R"(test enc
init { x=0, y=7, z=0 }
thread P1 { r1 = Ld y; }
exists (P1.r1 = 7)
)");
  auto enc = t.program.address_encoding();
  CHECK(enc.at("x") == 1024);
  CHECK(enc.at("y") == 1025);
  CHECK(enc.at("z") == 1026);
  auto cp = CompiledProgram::compile(t.program);
  CHECK(cp.decode(1025) == 1);
  CHECK(cp.decode(9999) == -1);
}

TEST_CASE("serialize/parse round trip over the whole corpus") {
  for (const auto& e : builtin_corpus()) {
    CAPTURE(e.test.name);
    std::string text = serialize_litmus(e.test);
    LitmusTest back = parse_litmus(text);
    CHECK(back == e.test);
    // A second round trip is textually stable.
    CHECK(serialize_litmus(back) == text);
  }
}

TEST_CASE("condition checking is plain boolean-tree evaluation") {
  auto t = parse_litmus(R"(test c
init { a=0 }
thread P1 { r1 = Ld a; r2 = Ld a; }
exists (P1.r1 = 0 /\ P1.r2 = 0 \/ m[a] = 2)
)");
  auto p = CompiledProgram::compile(t.program);
  auto obs = ObsSpec::for_test(p, t);
  auto cond = CompiledCondition::compile(t.condition, p, obs);

  Outcome o;
  o.regs = {0, 0};
  o.memory = {0};
  CHECK(check_condition(cond, o));
  o.regs = {1, 0};
  CHECK_FALSE(check_condition(cond, o));
  o.memory = {2};
  CHECK(check_condition(cond, o));
}

TEST_CASE("atom values may be address names") {
  const auto& t = *corpus_entry("MP+Data");
  // The right-hand side of "P2.r1 = a" resolved to a's encoding.
  const Condition& c = t.test.condition.kids[0];
  CHECK(c.kind == Condition::Kind::RegEq);
  CHECK(c.value == 1024);
}

TEST_CASE("expect clause round trips and answers queries") {
  const auto& sb = *corpus_entry("SB");
  CHECK(sb.test.expectation(ModelId::SC) == Verdict::Forbid);
  CHECK(sb.test.expectation(ModelId::TSO) == Verdict::Allow);
  CHECK_FALSE(sb.test.expectation(ModelId::WMM_AX).has_value());
}

TEST_CASE("topology block parses and validates") {
  const auto& wrc = *corpus_entry("WRC");
  REQUIRE(wrc.test.topology.has_value());
  CHECK(wrc.test.topology->segments.size() == 4);
  CHECK(wrc.test.topology->procs.size() == 3);

  CHECK_THROWS_AS(parse_litmus(R"(test t
init { a=0 }
thread P1 { }
exists (m[a] = 0)
topology { seg s1 parent s2; seg s2 parent s1; proc P1 at s1; }
)"),
                  ParseError);
  CHECK_THROWS_AS(parse_litmus(R"(test t
init { a=0 }
thread P1 { }
exists (m[a] = 0)
topology { seg s1 parent mem; proc P1 at s9; }
)"),
                  ParseError);
}
