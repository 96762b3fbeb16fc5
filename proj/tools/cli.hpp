#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace isinglab::cli {

/// Exit codes of the ising_lab tool.
enum ExitCode : int { kSuccess = 0, kDomainError = 1, kConvergenceFlagged = 2 };

using Cell = std::variant<std::string, double, long long, bool>;

/// A result table with fixed column names.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// CSV with a header row; doubles use 17 significant digits.
std::string to_csv(const Table& table);
/// Array of records keyed by column name.
std::string to_json(const Table& table);

/// Parses "re" or "re,im".
std::pair<double, double> parse_complex(const std::string& text);
/// Parses "a:b:step" (inclusive, with rounding slack) or "v1,v2,...";
/// an empty string yields an empty grid.
std::vector<double> parse_grid(const std::string& text);
/// Parses "j0..j1".
std::pair<int, int> parse_range(const std::string& text);

/// Runs the tool as if invoked with argv; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace isinglab::cli
