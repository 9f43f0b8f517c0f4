#pragma once

#include <cstdint>
#include <optional>

#include "dikin/center.hpp"
#include "dikin/model.hpp"
#include "dikin/oracle.hpp"

namespace dikin {

/// c(m) = m^2 + m.
constexpr double c_of_m(std::size_t m) {
  const auto md = static_cast<double>(m);
  return md * md + md;
}

/// Throws EpsilonOutOfRange unless eps is in [0, 1 - 1/sqrt(2)].
void check_epsilon(double epsilon);

/// 1 - (1 - eps) / (c(m) (1 + eps)^2). Requires m >= 2 (MTooSmall) and
/// eps in [0, 1 - 1/sqrt(2)] (EpsilonOutOfRange); eps = 0 is the limit
/// value used for reporting.
double theorem_bound(std::size_t m, double epsilon);

/// (qx - z_min) / (z_max - z_min), clamped below at 0. Throws
/// DegenerateRange when z_max - z_min <= 1e-12 (1 + |z_max|).
double epsilon_minimizer_ratio(double qx, const RangeEstimate& range);

enum class OracleMode { Grid, Sampling, Off };

std::string_view to_string(OracleMode mode);

struct ApproxOptions {
  double epsilon = 0.05;
  CenterOptions center;
  OracleMode oracle = OracleMode::Grid;
  int samples = 2000;
  std::uint64_t seed = 1;
  GridOptions grid;
  RangeOptions range;
  /// Skips centering when set; must be the center of the problem's set.
  std::optional<CenterResult> precomputed_center;
};

struct ApproxCertificate {
  VectorXd solution;
  double objective_value = 0.0;
  std::size_t m = 0;
  double c_of_m = 0.0;
  double epsilon = 0.0;
  /// Theorem bound for m >= 2; 0 on the exact single-constraint path.
  double theorem_bound = 0.0;
  bool exact_trs_path = false;
  CenterResult center;
  double center_objective = 0.0;
  double min_slack = 0.0;
  /// Present unless the oracle is off.
  std::optional<RangeEstimate> range;
  std::optional<double> ratio_estimate;
  /// Set when the range was degenerate and the ratio is undefined.
  std::optional<std::string> ratio_note;
  /// Wall-clock milliseconds per stage.
  double ms_center = 0.0;
  double ms_trs = 0.0;
  double ms_oracle = 0.0;
};

/// Analytic center, then q minimized over E(center; 1) (or over the single
/// constraint ellipsoid when m == 1), then the ratio against an oracle
/// range. Throws NoInteriorFound, Unbounded, NotPositiveDefinite and the
/// errors of the stages.
ApproxCertificate approx_minimize(const ProblemInstance& problem,
                                  const ApproxOptions& opts = {});

/// Starting point for centering: the interior hint when strictly feasible,
/// else phase I.
VectorXd interior_start(const ProblemInstance& problem, std::uint64_t seed);

}  // namespace dikin
