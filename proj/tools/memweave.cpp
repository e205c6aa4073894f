// memweave: run litmus tests under the SC/TSO/PSO/WMM/WMM-S/FM machines and
// the axiomatic WMM definition, compare models, and emit reports.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "memweave/axiomatic.hpp"
#include "memweave/corpus.hpp"
#include "memweave/registry.hpp"
#include "memweave/report.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace memweave;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string format = "table";
  std::size_t max_states = 0; // 0 = default/env
  int jobs = 1;
  bool validate = false;
  bool unrestricted_copy = false;
};

struct NamedTest {
  std::string label; // file path or corpus name
  LitmusTest test;
};

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<ModelId> parse_models(const std::string& list) {
  std::vector<ModelId> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto id = model_from_name(item);
    if (!id) throw CLI::ValidationError("--models", "unknown model '" + item + "'");
    out.push_back(*id);
  }
  if (out.empty()) throw CLI::ValidationError("--models", "empty model list");
  return out;
}

RunOptions make_options(const Common& c) {
  RunOptions opt;
  opt.limits.max_states = c.max_states ? c.max_states : default_max_states();
  opt.jobs = c.jobs;
  if (c.jobs > 1) opt.traversal = Traversal::ParallelBfs;
  opt.validate = c.validate;
  opt.unrestricted_copy = c.unrestricted_copy;
  return opt;
}

// Loads tests from files and/or the corpus; parse failures become rows.
std::vector<NamedTest> load_tests(const std::vector<std::string>& paths,
                                  bool use_corpus, RunReport& report,
                                  bool& had_errors) {
  std::vector<NamedTest> tests;
  if (use_corpus)
    for (const auto& e : builtin_corpus())
      tests.push_back({e.test.name, e.test});
  for (const auto& path : paths) {
    try {
      tests.push_back({path, parse_litmus(read_file(path))});
    } catch (const std::exception& ex) {
      ReportRow row;
      row.test = path;
      row.verdict = "error";
      row.error = ex.what();
      report.rows.push_back(row);
      had_errors = true;
    }
  }
  return tests;
}

void emit(const RunReport& report, const Common& c) {
  if (c.format == "json")
    std::cout << report_to_json(report).dump(2) << "\n";
  else
    std::cout << render_table(report);
}

int cmd_run(const std::vector<std::string>& paths, bool use_corpus,
            const std::string& models_arg, bool trace,
            const std::string& topology_path, const Common& c) {
  RunReport report;
  report.command = "run";
  bool had_errors = false;
  std::vector<NamedTest> tests = load_tests(paths, use_corpus, report, had_errors);
  if (tests.empty() && !had_errors) {
    std::cerr << "no tests given; pass files or --corpus\n";
    return kExitUsage;
  }

  std::vector<ModelId> forced;
  if (!models_arg.empty()) forced = parse_models(models_arg);
  RunOptions base = make_options(c);
  if (!topology_path.empty()) {
    for (ModelId id : forced)
      if (id != ModelId::FM) {
        std::cerr << "--topology applies only to FM\n";
        return kExitUsage;
      }
    if (forced.empty()) {
      std::cerr << "--topology requires --models FM\n";
      return kExitUsage;
    }
    base.topology = parse_topology_text(read_file(topology_path));
  }

  // One row per (test, model).
  struct Job {
    const NamedTest* test;
    ModelId model;
  };
  std::vector<Job> jobs;
  for (const auto& t : tests) {
    std::vector<ModelId> models = forced;
    if (models.empty()) {
      for (const auto& [m, _] : t.test.expectations) models.push_back(m);
      if (models.empty()) models = all_operational_models();
    }
    for (ModelId m : models) jobs.push_back({&t, m});
  }

  std::vector<ReportRow> rows(jobs.size());
  bool parallel_rows = c.jobs > 1 && jobs.size() >= 2 * static_cast<std::size_t>(c.jobs);
  RunOptions row_opt = base;
  if (parallel_rows) {
    row_opt.jobs = 1; // parallelism lives across rows here
    row_opt.traversal = Traversal::Bfs;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(c.jobs) if (parallel_rows)
#endif
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    ReportRow row;
    row.test = job.test->label;
    row.model = model_name(job.model);
    auto start = std::chrono::steady_clock::now();
    try {
      OutcomeSet set = outcomes_for(job.model, job.test->test, row_opt);
      CompiledProgram p = CompiledProgram::compile(job.test->test.program);
      ObsSpec obs = ObsSpec::for_test(p, job.test->test);
      auto cond = CompiledCondition::compile(job.test->test.condition, p, obs);
      Verdict v = verdict(set, cond);
      row.verdict = verdict_name(v);
      row.outcome_count = set.outcomes.size();
      row.states = set.stats.states_visited;
      row.transitions = set.stats.transitions_fired;
      if (auto expected = job.test->test.expectation(job.model)) {
        row.expected = verdict_name(*expected);
        row.match = (*expected == v);
      }
      if (trace && v == Verdict::Allow && job.model != ModelId::WMM_AX) {
        if (auto lines = witness_for(job.model, job.test->test, row_opt))
          row.trace = *lines;
      }
    } catch (const std::exception& ex) {
      row.verdict = "error";
      row.error = ex.what();
    }
    row.time_ms = ms_since(start);
    rows[i] = std::move(row);
  }
  report.rows.insert(report.rows.end(), rows.begin(), rows.end());

  emit(report, c);
  if (had_errors || report.errors() > 0) return kExitUsage;
  return report.mismatches() ? kExitMismatch : kExitOk;
}

int cmd_compare(const std::string& path, const std::string& models_arg,
                const Common& c) {
  std::vector<ModelId> models = parse_models(models_arg);
  RunReport report;
  report.command = "compare";
  LitmusTest test = parse_litmus(read_file(path));
  CompiledProgram p = CompiledProgram::compile(test.program);
  ObsSpec obs = ObsSpec::for_test(p, test);
  auto cond = CompiledCondition::compile(test.condition, p, obs);

  RunOptions opt = make_options(c);
  std::vector<OutcomeSet> sets(models.size());
  for (std::size_t i = 0; i < models.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    ReportRow row;
    row.test = test.name;
    row.model = model_name(models[i]);
    sets[i] = outcomes_for(models[i], test, opt);
    row.verdict = verdict_name(verdict(sets[i], cond));
    row.outcome_count = sets[i].outcomes.size();
    row.states = sets[i].stats.states_visited;
    row.transitions = sets[i].stats.transitions_fired;
    row.time_ms = ms_since(start);
    for (const auto& o : sets[i].outcomes)
      row.details.push_back(render_outcome(o, p, obs));
    report.rows.push_back(std::move(row));
  }

  // Pairwise containment matrix.
  ReportRow matrix;
  matrix.test = test.name;
  matrix.model = "matrix";
  matrix.verdict = "-";
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = 0; j < models.size(); ++j) {
      if (i == j) continue;
      bool sub = subset_of(sets[i], sets[j]);
      matrix.details.push_back(std::string(model_name(models[i])) +
                               (sub ? " subset-of " : " not-subset-of ") +
                               model_name(models[j]));
    }
  }
  report.rows.push_back(std::move(matrix));
  emit(report, c);
  return kExitOk;
}

int cmd_equiv(const std::vector<std::string>& paths, bool corpus_branch_free,
              const Common& c) {
  RunReport report;
  report.command = "equiv";
  bool had_errors = false;
  std::vector<NamedTest> tests;
  if (corpus_branch_free) {
    for (const auto& e : builtin_corpus())
      if (e.test.program.branch_free())
        tests.push_back({e.test.name, e.test});
  }
  for (const auto& path : paths) {
    try {
      tests.push_back({path, parse_litmus(read_file(path))});
    } catch (const std::exception& ex) {
      ReportRow row;
      row.test = path;
      row.verdict = "error";
      row.error = ex.what();
      report.rows.push_back(row);
      had_errors = true;
    }
  }
  if (tests.empty() && !had_errors) {
    std::cerr << "no tests given; pass files or --corpus-branch-free\n";
    return kExitUsage;
  }

  RunOptions opt = make_options(c);
  bool all_equal = true;
  for (const auto& t : tests) {
    ReportRow row;
    row.test = t.label;
    row.model = "WMM=WMM-AX";
    auto start = std::chrono::steady_clock::now();
    try {
      if (!t.test.program.branch_free())
        throw BranchyProgram();
      CompiledProgram p = CompiledProgram::compile(t.test.program);
      ObsSpec obs = ObsSpec::for_test(p, t.test);
      OutcomeSet op = outcomes_for(ModelId::WMM, t.test, opt);
      OutcomeSet ax = outcomes_for(ModelId::WMM_AX, t.test, opt);
      bool equal = op.outcomes == ax.outcomes;
      row.verdict = equal ? "equal" : "unequal";
      row.outcome_count = op.outcomes.size();
      row.states = op.stats.states_visited;
      row.transitions = ax.stats.states_visited; // orders enumerated
      if (!equal) {
        all_equal = false;
        for (const auto& o : op.outcomes)
          if (!ax.outcomes.count(o))
            row.details.push_back("operational only: " +
                                  render_outcome(o, p, obs));
        for (const auto& o : ax.outcomes)
          if (!op.outcomes.count(o))
            row.details.push_back("axiomatic only: " + render_outcome(o, p, obs));
      }
    } catch (const std::exception& ex) {
      row.verdict = "error";
      row.error = ex.what();
      had_errors = true;
    }
    row.time_ms = ms_since(start);
    report.rows.push_back(std::move(row));
  }
  emit(report, c);
  if (had_errors) return kExitUsage;
  return all_equal ? kExitOk : kExitMismatch;
}

int cmd_corpus_list() {
  for (const auto& e : builtin_corpus()) {
    std::cout << e.test.name << "  [" << e.family << ", "
              << e.test.program.threads.size() << " threads]\n";
    std::cout << "  " << e.note << "\n";
    std::cout << "  expect:";
    for (const auto& [m, v] : e.test.expectations)
      std::cout << " " << model_name(m) << ":" << verdict_name(v);
    std::cout << "\n";
  }
  return kExitOk;
}

std::string corpus_file_name(const std::string& test_name) {
  std::string out = test_name;
  for (char& ch : out) {
    if (ch == '+') ch = '_';
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out + ".litmus";
}

int cmd_corpus_export(const std::string& dir) {
  for (const auto& e : builtin_corpus()) {
    std::string path = dir + "/" + corpus_file_name(e.test.name);
    std::ofstream out(path);
    if (!out) {
      std::cerr << "cannot write " << path << "\n";
      return kExitUsage;
    }
    out << e.source;
  }
  std::cout << "wrote " << builtin_corpus().size() << " files to " << dir << "\n";
  return kExitOk;
}

int cmd_fences(const std::string& mode, const std::string& path) {
  std::string text = read_file(path);
  if (mode == "sc") {
    LitmusTest t = parse_litmus(text);
    std::cout << serialize_litmus(insert_sc_fences_test(t));
    return kExitOk;
  }
  std::string mapped = map_cpp_document(text);
  parse_litmus(mapped); // must be a valid litmus document
  std::cout << mapped;
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"memweave: an executable laboratory for weak memory models"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  Common common;
  app.add_option("--format", common.format, "output format")
      ->check(CLI::IsMember({"table", "json"}));
  app.add_option("--max-states", common.max_states,
                 "state limit per exploration (default 5000000, or "
                 "MEMWEAVE_MAX_STATES)");
  app.add_option("--jobs", common.jobs, "worker threads across tests and within exploration")
      ->check(CLI::PositiveNumber);
  app.add_flag("--validate", common.validate,
               "check machine invariants after every transition");
  app.add_flag("--unrestricted-copy", common.unrestricted_copy,
               "WMM-S: also explore background copies not bound to a load");

  // run
  auto* run = app.add_subcommand("run", "run tests under one or more models");
  std::vector<std::string> run_paths;
  bool run_corpus = false, run_trace = false;
  std::string run_models, run_topology;
  run->add_option("paths", run_paths, "litmus files");
  run->add_flag("--corpus", run_corpus, "run the built-in corpus");
  run->add_option("--models", run_models, "comma-separated model ids");
  run->add_flag("--trace", run_trace, "attach a witness trace to each allow");
  run->add_option("--topology", run_topology, "FM topology file");

  // compare
  auto* compare = app.add_subcommand("compare", "print outcome sets and containment");
  std::string cmp_path, cmp_models;
  compare->add_option("path", cmp_path, "litmus file")->required();
  compare->add_option("--models", cmp_models, "comma-separated model ids")
      ->required();

  // equiv
  auto* equiv = app.add_subcommand(
      "equiv", "check WMM operational vs axiomatic outcome-set equality");
  std::vector<std::string> eq_paths;
  bool eq_corpus = false;
  equiv->add_option("paths", eq_paths, "litmus files");
  equiv->add_flag("--corpus-branch-free", eq_corpus,
                  "all branch-free corpus entries");

  // corpus
  auto* corpus = app.add_subcommand("corpus", "inspect the built-in corpus");
  auto* list = corpus->add_subcommand("list", "list entries and expectations");
  auto* exp = corpus->add_subcommand("export", "write entries as .litmus files");
  std::string export_dir;
  exp->add_option("dir", export_dir, "target directory")->required();
  corpus->require_subcommand(1);

  // fences
  auto* fences = app.add_subcommand(
      "fences", "apply the SC fence insertion or the C++ operation mapping");
  std::string fences_mode, fences_path;
  fences->add_option("mode", fences_mode, "sc | cpp")
      ->required()
      ->check(CLI::IsMember({"sc", "cpp"}));
  fences->add_option("file", fences_path, "input file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

#ifdef _OPENMP
  omp_set_num_threads(common.jobs);
#endif

  try {
    if (run->parsed())
      return cmd_run(run_paths, run_corpus, run_models, run_trace, run_topology,
                     common);
    if (compare->parsed()) return cmd_compare(cmp_path, cmp_models, common);
    if (equiv->parsed()) return cmd_equiv(eq_paths, eq_corpus, common);
    if (corpus->parsed()) {
      if (list->parsed()) return cmd_corpus_list();
      if (exp->parsed()) return cmd_corpus_export(export_dir);
    }
    if (fences->parsed()) return cmd_fences(fences_mode, fences_path);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
