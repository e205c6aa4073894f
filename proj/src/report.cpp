#include "memweave/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace memweave {

int RunReport::mismatches() const {
  int n = 0;
  for (const auto& row : rows)
    if (row.match && !*row.match) ++n;
  return n;
}

int RunReport::errors() const {
  int n = 0;
  for (const auto& row : rows)
    if (!row.error.empty()) ++n;
  return n;
}

std::string render_table(const RunReport& r) {
  std::ostringstream os;
  std::size_t test_w = 4, model_w = 5;
  for (const auto& row : r.rows) {
    test_w = std::max(test_w, row.test.size());
    model_w = std::max(model_w, row.model.size());
  }
  os << std::left << std::setw(static_cast<int>(test_w) + 2) << "test"
     << std::setw(static_cast<int>(model_w) + 2) << "model"
     << std::setw(9) << "verdict" << std::setw(10) << "expected"
     << std::setw(7) << "match" << std::right << std::setw(9) << "outcomes"
     << std::setw(10) << "states" << std::setw(10) << "ms" << "\n";
  for (const auto& row : r.rows) {
    os << std::left << std::setw(static_cast<int>(test_w) + 2) << row.test
       << std::setw(static_cast<int>(model_w) + 2) << row.model
       << std::setw(9) << row.verdict
       << std::setw(10) << row.expected.value_or("-")
       << std::setw(7) << (row.match ? (*row.match ? "yes" : "NO") : "-")
       << std::right << std::setw(9) << row.outcome_count
       << std::setw(10) << row.states
       << std::setw(10) << std::fixed << std::setprecision(1) << row.time_ms
       << "\n";
    if (!row.error.empty()) os << "  error: " << row.error << "\n";
    for (const auto& d : row.details) os << "  " << d << "\n";
    for (std::size_t i = 0; i < row.trace.size(); ++i)
      os << "    " << row.trace[i] << "\n";
  }
  return os.str();
}

nlohmann::json report_to_json(const RunReport& r) {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json j{{"test", row.test},
                     {"model", row.model},
                     {"verdict", row.verdict},
                     {"outcomes", row.outcome_count},
                     {"states", row.states},
                     {"transitions", row.transitions},
                     {"time_ms", row.time_ms}};
    if (row.expected) j["expected"] = *row.expected;
    if (row.match) j["match"] = *row.match;
    if (!row.trace.empty()) j["trace"] = row.trace;
    if (!row.details.empty()) j["details"] = row.details;
    if (!row.error.empty()) j["error"] = row.error;
    results.push_back(std::move(j));
  }
  return nlohmann::json{
      {"command", r.command},
      {"results", std::move(results)},
      {"summary",
       {{"total", r.rows.size()},
        {"mismatches", r.mismatches()},
        {"errors", r.errors()}}}};
}

} // namespace memweave
