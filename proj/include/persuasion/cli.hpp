#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace persuasion::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kBadInput = 2,
  kPrecondition = 3,
  kInternal = 4,
};

struct GlobalOptions {
  double tolerance = 1e-7;
  bool summary = false;
  std::string output;
  std::uint64_t seed = 7;
};

struct Range {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

// "3" or "2..5".
Range parse_range(std::string_view text);
// "2,3,10".
std::vector<double> parse_list(std::string_view text);

// RFC 4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(std::string_view text);

struct SolveOptions {
  std::string instance;
  std::string mode = "centralized";
  bool weighted = false;
  bool fallback = false;
};

struct VerifyOptions {
  std::string suite;
  std::optional<Range> K;
  std::vector<double> X;
  std::size_t trials = 0;  // 0: suite default
};

struct SweepOptions {
  std::string generator;
  std::optional<Range> K;
  std::vector<double> X;
  std::size_t lp_max_k = 0;  // 0: generator default
};

// Each command writes its report to `out` and returns an exit code; input and
// precondition problems are thrown as exceptions and mapped by run().
int cmd_solve(const SolveOptions& opt, const GlobalOptions& global, std::ostream& out);
int cmd_compare(const std::string& instance, const GlobalOptions& global, std::ostream& out);
int cmd_verify(const VerifyOptions& opt, const GlobalOptions& global, std::ostream& out);
int cmd_sweep(const SweepOptions& opt, const GlobalOptions& global, std::ostream& out);

// Full command line (argv[0] is the program name).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace persuasion::cli
