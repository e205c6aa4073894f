#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "memweave/report.hpp"
#include "support/helpers.hpp"

using namespace memweave;
using nlohmann::json;

namespace {

// Interpreter for the subset of JSON Schema the shipped schema uses:
// type, properties, required, items, enum.
bool conforms(const json& value, const json& schema, std::string* why) {
  if (schema.contains("type")) {
    const std::string t = schema["type"];
    bool ok = (t == "object" && value.is_object()) ||
              (t == "array" && value.is_array()) ||
              (t == "string" && value.is_string()) ||
              (t == "integer" && value.is_number_integer()) ||
              (t == "number" && value.is_number()) ||
              (t == "boolean" && value.is_boolean());
    if (!ok) {
      *why = "expected type " + t + " at " + value.dump().substr(0, 40);
      return false;
    }
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& v : schema["enum"])
      if (v == value) ok = true;
    if (!ok) {
      *why = "value " + value.dump() + " not in enum";
      return false;
    }
  }
  if (schema.contains("required")) {
    for (const auto& key : schema["required"]) {
      if (!value.contains(key.get<std::string>())) {
        *why = "missing required key " + key.get<std::string>();
        return false;
      }
    }
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items()) {
      if (value.contains(key) && !conforms(value[key], sub, why)) return false;
    }
  }
  if (schema.contains("items") && value.is_array()) {
    for (const auto& item : value)
      if (!conforms(item, schema["items"], why)) return false;
  }
  return true;
}

json load_schema() {
  std::ifstream in(std::filesystem::path(MEMWEAVE_SOURCE_DIR) / "schema" /
                   "report.schema.json");
  REQUIRE(in.good());
  return json::parse(in);
}

} // namespace

TEST_CASE("JSON reports validate against the shipped schema") {
  RunReport r;
  r.command = "run";
  ReportRow row;
  row.test = "SB";
  row.model = "TSO";
  row.verdict = "allow";
  row.expected = "allow";
  row.match = true;
  row.outcome_count = 4;
  row.states = 57;
  row.transitions = 100;
  row.time_ms = 0.4;
  row.trace = {"1: P1 TSO-St", "2: P2 TSO-St"};
  r.rows.push_back(row);
  ReportRow bad;
  bad.test = "nope";
  bad.model = "SC";
  bad.verdict = "error";
  bad.error = "file not found";
  r.rows.push_back(bad);

  json j = report_to_json(r);
  std::string why;
  CHECK_MESSAGE(conforms(j, load_schema(), &why), why);
  CHECK(j["summary"]["total"] == 2);
  CHECK(j["summary"]["errors"] == 1);
  CHECK(j["summary"]["mismatches"] == 0);

  // Table rendering carries the same cells.
  std::string table = render_table(r);
  CHECK(table.find("SB") != std::string::npos);
  CHECK(table.find("allow") != std::string::npos);
  CHECK(table.find("file not found") != std::string::npos);
}

TEST_CASE("mismatch counting feeds the exit-code rule") {
  RunReport r;
  r.command = "run";
  ReportRow row;
  row.test = "t";
  row.model = "SC";
  row.verdict = "allow";
  row.expected = "forbid";
  row.match = false;
  r.rows.push_back(row);
  CHECK(r.mismatches() == 1);
  CHECK(r.errors() == 0);
}
