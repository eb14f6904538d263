#pragma once

// Command-line front end: every computation as a subcommand emitting a CSV
// or JSON table with a fixed column schema.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "phifloor/arith_tables.hpp"

namespace phifloor::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kResource = 3,
  kArithmetic = 4,
  kDomain = 5,
  kIo = 6,
  kInternal = 7,
};

inline constexpr const char* kMemoryBudgetEnv = "PHIFLOOR_MEMORY_BUDGET";
inline constexpr const char* kVersion = "1.0.0";

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string subcommand;
  std::optional<std::uint64_t> x;
  std::optional<std::uint64_t> x_min;
  std::optional<std::uint64_t> x_max;
  double grid_ratio{2.0};
  std::uint64_t n{1};
  int delta{0};
  bool unweighted{false};
  std::uint64_t k{1};
  std::uint64_t samples{16};
  std::uint64_t count{0};  // derivative-check: random tuples instead of one
  double split_d{972.0 / 5.0};
  double tolerance{1e-12};
  std::uint64_t exact_cap{2000};
  std::string method{"auto"};
  std::string series{"thm1"};
  std::string input_path;
  std::string column{"residual"};
  std::size_t memory_budget{kDefaultMemoryBudget};
  int workers{1};
  OutputFormat format{OutputFormat::csv};
  std::string output_path;
  std::uint64_t seed{20181};
  bool timing{false};
};

/// Runs one configured subcommand, writing the table to `out` (or to
/// config.output_path) and any error record to `err`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and dispatches to run().
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience for tests: args exclude the program name.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phifloor::cli
