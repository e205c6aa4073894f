#include "memweave/registry.hpp"

#include <cstdlib>

#include "memweave/axiomatic.hpp"
#include "memweave/models/baseline.hpp"
#include "memweave/models/wmm.hpp"
#include "memweave/models/wmms.hpp"

namespace memweave {

std::size_t default_max_states() {
  if (const char* env = std::getenv("MEMWEAVE_MAX_STATES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return Limits{}.max_states;
}

Topology topology_for(const LitmusTest& t, const CompiledProgram& p,
                      const RunOptions& opt) {
  if (opt.topology) return Topology::compile(*opt.topology, p);
  if (t.topology) return Topology::compile(*t.topology, p);
  return Topology::all_private(p);
}

namespace {

template <typename M>
OutcomeSet run_machine(const M& m, const RunOptions& opt) {
  return enumerate_outcomes(m, opt.limits,
                            opt.jobs > 1 ? Traversal::ParallelBfs : opt.traversal,
                            opt.jobs);
}

template <typename M>
std::optional<std::vector<std::string>> run_witness(const M& m,
                                                    const LitmusTest& t,
                                                    const CompiledProgram& p,
                                                    const ObsSpec& obs,
                                                    const RunOptions& opt) {
  auto cond = CompiledCondition::compile(t.condition, p, obs);
  auto trace = witness_trace(m, cond, opt.limits);
  if (!trace) return std::nullopt;
  return trace_lines(m, *trace);
}

} // namespace

OutcomeSet outcomes_for(ModelId id, const LitmusTest& t, const RunOptions& opt) {
  CompiledProgram p = CompiledProgram::compile(t.program);
  ObsSpec obs = ObsSpec::for_test(p, t);
  switch (id) {
    case ModelId::SC:
      return run_machine(ScMachine(p, obs), opt);
    case ModelId::TSO:
      return run_machine(TsoMachine(p, obs, false), opt);
    case ModelId::PSO:
      return run_machine(TsoMachine(p, obs, true), opt);
    case ModelId::WMM:
      return run_machine(WmmMachine(p, obs, opt.validate), opt);
    case ModelId::WMMS:
      return run_machine(
          WmmsMachine(p, obs, opt.validate, opt.unrestricted_copy), opt);
    case ModelId::FM:
      return run_machine(FmMachine(p, obs, topology_for(t, p, opt)), opt);
    case ModelId::WMM_AX: {
      AxOptions ax;
      ax.max_instructions = opt.ax_bound;
      return axiomatic_outcomes(p, obs, ax);
    }
  }
  throw std::runtime_error("unknown model id");
}

std::optional<std::vector<std::string>> witness_for(ModelId id,
                                                    const LitmusTest& t,
                                                    const RunOptions& opt) {
  CompiledProgram p = CompiledProgram::compile(t.program);
  ObsSpec obs = ObsSpec::for_test(p, t);
  switch (id) {
    case ModelId::SC: {
      ScMachine m(p, obs);
      return run_witness(m, t, p, obs, opt);
    }
    case ModelId::TSO: {
      TsoMachine m(p, obs, false);
      return run_witness(m, t, p, obs, opt);
    }
    case ModelId::PSO: {
      TsoMachine m(p, obs, true);
      return run_witness(m, t, p, obs, opt);
    }
    case ModelId::WMM: {
      WmmMachine m(p, obs, opt.validate);
      return run_witness(m, t, p, obs, opt);
    }
    case ModelId::WMMS: {
      WmmsMachine m(p, obs, opt.validate, opt.unrestricted_copy);
      return run_witness(m, t, p, obs, opt);
    }
    case ModelId::FM: {
      FmMachine m(p, obs, topology_for(t, p, opt));
      return run_witness(m, t, p, obs, opt);
    }
    case ModelId::WMM_AX:
      throw std::runtime_error("witness traces are not available for WMM-AX");
  }
  throw std::runtime_error("unknown model id");
}

} // namespace memweave
