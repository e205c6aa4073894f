#ifndef MEMWEAVE_CORPUS_HPP_
#define MEMWEAVE_CORPUS_HPP_

#include <string>
#include <vector>

#include "memweave/litmus.hpp"

// Built-in litmus corpus with per-model verdict expectations, the C++11
// operation mapping, and the conservative fence-insertion transform.

namespace memweave {

struct CorpusEntry {
  std::string family; // variant family, e.g. "MP"
  std::string note;   // what the test discriminates
  std::string source; // litmus document (also shipped under corpus/)
  LitmusTest test;
};

const std::vector<CorpusEntry>& builtin_corpus();
const CorpusEntry* corpus_entry(const std::string& name);

struct CppOp {
  enum class Kind {
    NonAtomicLoad,
    LoadRelaxed,
    LoadConsume,
    LoadAcquire,
    LoadSC,
    NonAtomicStore,
    StoreRelaxed,
    StoreRelease,
    StoreSC,
  };
  Kind kind = Kind::NonAtomicLoad;
  std::string reg;  // loads: destination
  std::string addr; // the atomic object
  Expr data;        // stores
};

// Row-exact mapping of C++ memory operations onto fence-bracketed loads and
// stores.
std::vector<Instruction> map_cpp(const std::vector<CppOp>& ops);

// Conservative transform guaranteeing sequentially consistent behavior: a
// Commit before every store, a Commit and a Reconcile before every load.
// Not idempotent; reapplication inserts more fences.
Program insert_sc_fences(const Program& p);

// Rewrites a document whose thread bodies hold one C++ operation per line
// (e.g. "r1 = load.acquire a;", "store.sc b 1;") into an ordinary litmus
// document. Lines outside thread bodies pass through unchanged.
std::string map_cpp_document(const std::string& text);

// Applies insert_sc_fences to a parsed test, keeping name/condition intact.
LitmusTest insert_sc_fences_test(const LitmusTest& t);

} // namespace memweave

#endif // MEMWEAVE_CORPUS_HPP_
