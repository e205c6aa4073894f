#ifndef MEMWEAVE_MODELS_WMMS_HPP_
#define MEMWEAVE_MODELS_WMMS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "memweave/models/wmm.hpp"

// WMM-S: WMM with non-atomic stores. Executed stores carry a tag; a
// background operation may copy a store into another processor's buffer as
// long as the partial coherence order over tags stays acyclic. Copies are
// explored only when bound to a load that reads the fresh copy, which keeps
// the legal behaviors unchanged and the state space finite.

namespace memweave {

using Tag = std::uint32_t;

struct TaggedStore {
  Value addr = 0;
  Value value = 0;
  Tag tag = 0;

  bool operator==(const TaggedStore&) const = default;
};

using TaggedBuffer = std::vector<TaggedStore>; // insertion order, oldest first

struct CoherenceGraph {
  std::vector<Tag> nodes;
  std::vector<std::pair<Tag, Tag>> edges; // older -> younger

  bool acyclic() const;
  bool reaches(Tag from, Tag to) const;
};

class WmmsMachine {
 public:
  struct State {
    CoreState core;
    Memory mem;
    std::vector<TaggedBuffer> sb;
    std::vector<InvalBuffer> ib;
  };

  enum class Rule { Nm, Ld, St, Com, Rec, DeqSb, Copy };
  enum class LdSource { Sb, Mem, Ib, Copy };

  struct Transition {
    Rule rule = Rule::Nm;
    int pid = 0;
    LdSource src = LdSource::Mem;
    int ib_index = -1;  // Ld from ib
    Tag tag = 0;        // DeqSb / Copy / copy-bound Ld
    int from_pid = -1;  // Copy / copy-bound Ld: source buffer
    Value addr = 0;
    Value value = 0;
  };

  WmmsMachine(const CompiledProgram& p, const ObsSpec& obs,
              bool validate = false, bool unrestricted_copy = false)
      : p_(p), obs_(obs), validate_(validate), unrestricted_(unrestricted_copy) {}

  State initial_state() const;
  std::vector<Transition> enabled(const State& s) const;
  State apply(const State& s, const Transition& t) const;
  bool is_final(const State& s) const;
  Outcome observe(const State& s) const;
  std::string canonical_key(const State& s) const;
  std::string describe(const Transition& t) const;

  static CoherenceGraph coherence_graph(const State& s);
  // Whether copying the store with `tag` from one buffer into `to_pid`
  // (as the youngest entry for its address) keeps the coherence order
  // acyclic. False when the tag is already buffered at the target.
  static bool copy_allowed(const State& s, Tag tag, int from_pid, int to_pid);

  static void check_invariants(const State& s);

 private:
  Tag fresh_tag(const State& s) const;
  const CompiledProgram& p_;
  ObsSpec obs_;
  bool validate_;
  bool unrestricted_;
};

} // namespace memweave

#endif // MEMWEAVE_MODELS_WMMS_HPP_
