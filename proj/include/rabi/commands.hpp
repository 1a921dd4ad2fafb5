#pragma once

// The four CLI commands as library functions returning plain tables, plus
// the CSV / JSON writers.  Exit-code mapping lives in the executable.

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rabi/config.hpp"

namespace rabi {

using Cell = std::variant<double, long, bool, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Extra results emitted as `# key value` lines (CSV) or a "notes" object (JSON).
  std::vector<std::pair<std::string, std::string>> notes;
};

[[nodiscard]] Table cmd_dynamics(const RunConfig& config);
[[nodiscard]] Table cmd_spectrum(const RunConfig& config);
[[nodiscard]] Table cmd_steady(const RunConfig& config);

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Analytic-vs-numeric oracle suite on fixed reference parameters, plus a
/// truncation check on the configured model and initial state.
[[nodiscard]] std::vector<VerifyCheck> cmd_verify(const RunConfig& config);
[[nodiscard]] Table verify_table(const std::vector<VerifyCheck>& checks);

/// CSV: comment header with the resolved config, column line, rows.
/// JSON: {"command", "config", "columns", "rows", "notes"}; rows are objects
/// keyed by the column names.
void write_table(std::ostream& out, const Table& table, const RunConfig& config);

}  // namespace rabi
