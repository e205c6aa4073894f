#ifndef MEMWEAVE_REPORT_HPP_
#define MEMWEAVE_REPORT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

// Machine- and human-readable run reports. Both renderings carry the same
// data; the JSON form follows schema/report.schema.json.

namespace memweave {

struct ReportRow {
  std::string test;
  std::string model;
  std::string verdict; // "allow", "forbid", or "error"
  std::optional<std::string> expected;
  std::optional<bool> match;
  std::uint64_t outcome_count = 0;
  std::uint64_t states = 0;
  std::uint64_t transitions = 0;
  double time_ms = 0.0;
  std::vector<std::string> trace;    // witness, when requested
  std::vector<std::string> details;  // outcome sets, diffs, containments
  std::string error;
};

struct RunReport {
  std::string command;
  std::vector<ReportRow> rows;

  int mismatches() const;
  int errors() const;
};

std::string render_table(const RunReport& r);
nlohmann::json report_to_json(const RunReport& r);

} // namespace memweave

#endif // MEMWEAVE_REPORT_HPP_
