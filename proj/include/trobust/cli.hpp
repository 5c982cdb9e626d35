#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace trobust::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,
  kPreconditionError = 3,
  kConditionViolated = 4,
  kUsageError = 64,
};

/// Everything that determines a run besides the input file bytes.
struct RunConfig {
  std::string command;
  std::optional<std::string> input_path;
  std::optional<std::size_t> outlier;  ///< 1-based
  double d = 3.0;
  std::optional<double> rho;
  std::uint64_t seed = 1;
  std::string engine = "quadrature";
  std::string distance;
  std::string output_path = "report.json";
  std::optional<std::string> table_path;
  std::string y_ladder = "1e1:1e6:x10";
  std::size_t iterations = 20000;
  std::size_t burnin = 5000;
  std::size_t grid_points = 201;
  std::string fixture_kind = "conflict";
  std::optional<std::string> csv_path;
  double x_start = 1e3;
  double t_factor = 10.0;
  std::size_t steps = 4;
  std::string method = "ratio";
};

/// "a:b:xF" (geometric), "a:b:+S" or "a:b:S" (arithmetic), or "v1,v2,...".
std::vector<double> parse_ladder(const std::string& spec);

/// Executes one command; human-readable output goes to `out`, errors to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (including the program name) and runs it.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace trobust::cli
