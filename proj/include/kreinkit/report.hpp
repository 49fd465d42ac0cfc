#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kreinkit/defaults.hpp"
#include "kreinkit/linalg.hpp"

namespace kreinkit {

/// Outcome of one named verification step: either a residual against a
/// bound or a PSD/order verdict, plus a pass flag consistent with it.
struct StepReport {
  std::string step_name;
  double residual = 0.0;
  double tolerance = 0.0;
  std::optional<PsdVerdict> verdict;
  bool passed = false;
  std::string details;
};

/// One check row of a RunReport.
struct CheckRecord {
  std::string name;
  std::string verdict;  // relation or definiteness label, or "pass"/"fail"
  std::optional<double> residual;
  std::optional<double> min_eigenvalue;
  std::optional<double> max_eigenvalue;
  bool passed = false;
  std::string details;
};

/// Top-level machine-readable run summary emitted by the command front end.
struct RunReport {
  std::string command;
  std::uint64_t master_seed = 0;
  Tolerances tolerances;
  std::vector<CheckRecord> checks;
  bool overall_pass = true;
  std::string version;

  void add(CheckRecord record) {
    overall_pass = overall_pass && record.passed;
    checks.push_back(std::move(record));
  }
};

CheckRecord record_from_step(const StepReport& step);

/// JSON text of the report (schema version embedded), 2-space indented.
std::string to_json_text(const RunReport& report);

/// Renders a double exactly when it is a small dyadic rational (integer
/// over a power of two, like -1/4), else with 17 significant digits.
std::string format_dyadic(double x);

/// Complex entry as "re" or "re+im i" with dyadic formatting of each part.
std::string format_complex(const Complex& z);

/// Matrix as nested brackets with dyadic-exact entries where possible.
std::string format_matrix(const ComplexMatrix& m);

}  // namespace kreinkit
