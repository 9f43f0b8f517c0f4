#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "dikin/approx.hpp"
#include "dikin/generate.hpp"
#include "dikin/instance_io.hpp"

namespace dikin::cli {

// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 1,
  kParseError = 2,
  kUnbounded = 3,
  kNoInterior = 4,
  kCounterexampleMismatch = 5,
  kNumericalError = 6,
  kUsageError = 64,
};

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kCsvHeader =
    "instance,n,m,center_iters,decrement,inner_ok,rho_hat,outer_bound,ratio,"
    "theorem_bound,ms_center,ms_trs,ms_oracle,error";

struct RunOutcome {
  int exit_code = kOk;
  Json report;
};

/// Flag value, else DIKIN_QCQP_SEED, else 1. Throws InvalidArgument when the
/// environment value is not an unsigned integer.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag);

struct CenterFlags {
  double tol = 1e-10;
  int max_iter = 200;
  std::optional<VectorXd> start;
  std::uint64_t seed = 1;
};

struct DikinFlags {
  CenterFlags center;
  int samples = 2000;
};

struct SolveFlags {
  CenterFlags center;
  double epsilon = 0.05;
  OracleMode oracle = OracleMode::Grid;
  int samples = 2000;
};

struct BenchFlags {
  int jobs = 1;
  std::uint64_t seed = 1;
  int samples = 2000;
  double epsilon = 0.05;
  /// When false the ms_* columns are left empty so the CSV is reproducible.
  bool timings = true;
};

RunOutcome cmd_validate(const std::filesystem::path& path);
RunOutcome cmd_center(const std::filesystem::path& path,
                      const CenterFlags& flags);
RunOutcome cmd_dikin(const std::filesystem::path& path, const DikinFlags& flags);
RunOutcome cmd_solve(const std::filesystem::path& path, const SolveFlags& flags);
RunOutcome cmd_counterexample();

/// Canonical instance text.
std::string cmd_gen(const GeneratorOptions& opts, bool example1_preset);

/// One CSV row (no newline) for an instance file.
std::string bench_row(const std::filesystem::path& path,
                      const BenchFlags& flags);

/// Header plus one row per *.json file in dir, in filename order.
std::string cmd_bench(const std::filesystem::path& dir,
                      const BenchFlags& flags);

/// Parses argv and dispatches. Reports go to `out` (or --out), diagnostics
/// to `err`.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

/// "1,2.5,-3" or "[1, 2.5, -3]". Throws InvalidArgument.
VectorXd parse_vector(const std::string& text);

}  // namespace dikin::cli
