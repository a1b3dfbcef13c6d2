#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "seqdual/opideal.hpp"

namespace seqdual {

// One registered property suite run. trials = 0 picks the suite's default
// count. `tolerances` recognizes "exact" (closed-form and enumeration paths)
// and "ascent" (optimizer-backed paths); missing keys fall back to 1e-9 and
// 1e-3. When opt.audit is set, dims must stay <= 3 and lengths <= 4 so the
// grid oracle stays computable.
struct SuiteSpec {
  std::string name;
  int trials = 0;
  std::vector<int> dims = {1, 2, 3};
  std::vector<int> lengths = {1, 2, 3};
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 2024;
  OptConfig opt;
};

// A single checked identity or inequality. `detail` is a canonical JSON
// string holding the trial's inputs, plus the computed witness when the
// trial fails, so a failure can be re-run outside the suite.
struct TrialRecord {
  int index = 0;
  std::string description;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  int trials = 0;
  bool pass = true;
  std::vector<TrialRecord> records;

  nlohmann::json to_json() const;
  // Header line plus one line per failed trial and a final tally.
  std::string summary() const;
};

bool has_suite(const std::string& name);
std::vector<std::string> suite_names();

// Statement tags a suite's checks anchor to; the union over all suites must
// contain required_result_tags(), which a meta-test asserts.
std::vector<std::string> suite_covers(const std::string& name);
std::vector<std::string> required_result_tags();

// Runs the named suite. Unknown names raise std::invalid_argument. The same
// spec always produces an identical report: trial inputs derive from
// (seed, suite name, trial index) alone and trials run in index order.
SuiteReport run_suite(const SuiteSpec& spec);

}  // namespace seqdual
