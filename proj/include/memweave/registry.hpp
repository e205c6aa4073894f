#ifndef MEMWEAVE_REGISTRY_HPP_
#define MEMWEAVE_REGISTRY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "memweave/explore.hpp"
#include "memweave/litmus.hpp"
#include "memweave/models/fm.hpp"
#include "memweave/program.hpp"

// Runtime dispatch from a model id to the machine (or to the axiomatic
// enumeration) for a given test.

namespace memweave {

struct RunOptions {
  Limits limits;
  Traversal traversal = Traversal::Bfs;
  int jobs = 1;
  bool validate = false;          // per-transition machine invariant checks
  bool unrestricted_copy = false; // WMM-S: also explore unbound copies
  std::optional<TopologySpec> topology; // FM override (else test's, else private)
  std::size_t ax_bound = 10;      // WMM-AX enumeration bound
};

// Default state limit, overridable through MEMWEAVE_MAX_STATES.
std::size_t default_max_states();

Topology topology_for(const LitmusTest& t, const CompiledProgram& p,
                      const RunOptions& opt);

OutcomeSet outcomes_for(ModelId id, const LitmusTest& t, const RunOptions& opt);

// Trace lines witnessing the test's condition, or nullopt when Forbid.
// Not available for WMM-AX.
std::optional<std::vector<std::string>> witness_for(ModelId id,
                                                    const LitmusTest& t,
                                                    const RunOptions& opt);

} // namespace memweave

#endif // MEMWEAVE_REGISTRY_HPP_
