#ifndef MEMWEAVE_MODELS_FM_HPP_
#define MEMWEAVE_MODELS_FM_HPP_

#include <string>
#include <vector>

#include "memweave/models/baseline.hpp"

// Adapted flowing model: a tree of request segments rooted at the atomic
// memory, driven by an in-order issue harness. Loads and Commits block their
// thread until a response; stores flow without one. Requests may reorder and
// bypass inside a segment and flow toward the root.

namespace memweave {

struct Topology {
  std::vector<std::string> seg_names;
  std::vector<int> parent;   // per segment; -1 = atomic memory
  std::vector<int> proc_seg; // per thread: its leaf segment

  static Topology compile(const TopologySpec& spec, const CompiledProgram& p);
  // One private segment per processor, all parented to memory.
  static Topology all_private(const CompiledProgram& p);
  // First two processors share a write-through subtree, and so do every
  // following pair; an odd trailing processor gets a private segment.
  static Topology paired_shared(const CompiledProgram& p);
};

struct FmRequest {
  enum class Kind { Load, Store, Commit };
  Kind kind = Kind::Load;
  int origin = 0; // issuing thread
  int reg = -1;   // Load: destination register
  Value addr = 0;
  Value value = 0; // Store payload

  bool operator==(const FmRequest&) const = default;
  bool is_memory_access() const { return kind != Kind::Commit; }
};

class FmMachine {
 public:
  enum class Blocked : std::uint8_t { None, OnLoad, OnCommit };

  struct State {
    CoreState core;
    Memory mem;
    std::vector<Blocked> blocked;
    // Per segment, head (next to flow) first, tail last.
    std::vector<std::vector<FmRequest>> segs;
  };

  enum class Rule { Issue, Reorder, Bypass, Flow };

  struct Transition {
    Rule rule = Rule::Issue;
    int pid = -1;   // Issue
    int seg = -1;   // Reorder/Bypass/Flow
    int index = -1; // Reorder/Bypass: position of r_old
    FmRequest r_old, r_new; // captured for rendering
  };

  FmMachine(const CompiledProgram& p, const ObsSpec& obs, Topology topo)
      : p_(p), obs_(obs), topo_(std::move(topo)) {}

  State initial_state() const;
  std::vector<Transition> enabled(const State& s) const;
  State apply(const State& s, const Transition& t) const;
  bool is_final(const State& s) const;
  Outcome observe(const State& s) const;
  std::string canonical_key(const State& s) const;
  std::string describe(const Transition& t) const;

 private:
  void respond(State& n, const FmRequest& req, Value v) const;
  const CompiledProgram& p_;
  ObsSpec obs_;
  Topology topo_;
};

} // namespace memweave

#endif // MEMWEAVE_MODELS_FM_HPP_
