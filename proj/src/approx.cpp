#include "dikin/approx.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "dikin/dikin.hpp"
#include "dikin/linalg.hpp"
#include "dikin/trs.hpp"

namespace dikin {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// The single constraint d - c^T x - 1/2 x^T Q x >= 0 with Q positive
// definite is (x - z)^T Q (x - z) <= r^2 with z = -Q^-1 c and
// r^2 = 2 d + c^T Q^-1 c.
TrsProblem single_constraint_trs(const QuadraticObjective& q,
                                 const EllipsoidConstraint& con) {
  const auto llt = cholesky(con.Q.matrix());
  if (!llt) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "a single constraint must have a positive definite matrix "
                "for the feasible set to be bounded",
                0);
  }
  const VectorXd z = -llt->solve(con.c);
  const double r2 = 2.0 * con.d - con.c.dot(z);
  if (!(r2 > 0.0)) {
    throw Error(ErrorCode::NoInteriorFound,
                "the single constraint ellipsoid has empty interior", 0);
  }
  return {q.Q, q.c, con.Q, z, std::sqrt(r2)};
}

}  // namespace

void check_epsilon(double epsilon) {
  const double eps_max = 1.0 - 1.0 / std::sqrt(2.0);
  if (!(epsilon >= 0.0 && epsilon <= eps_max)) {
    std::ostringstream os;
    os << "epsilon must lie in [0, 1 - 1/sqrt(2)], got " << epsilon;
    throw Error(ErrorCode::EpsilonOutOfRange, os.str());
  }
}

double theorem_bound(std::size_t m, double epsilon) {
  if (m < 2) {
    throw Error(ErrorCode::MTooSmall,
                "the approximation bound is stated for m >= 2");
  }
  check_epsilon(epsilon);
  const double onep = 1.0 + epsilon;
  return 1.0 - (1.0 - epsilon) / (c_of_m(m) * onep * onep);
}

double epsilon_minimizer_ratio(double qx, const RangeEstimate& range) {
  const double width = range.z_max_hat - range.z_min_hat;
  if (!(width > 1e-12 * (1.0 + std::abs(range.z_max_hat)))) {
    throw Error(ErrorCode::DegenerateRange,
                "objective is constant on the feasible set; every point is "
                "a 0-minimizer");
  }
  return std::max(0.0, (qx - range.z_min_hat) / width);
}

std::string_view to_string(OracleMode mode) {
  switch (mode) {
    case OracleMode::Grid: return "grid";
    case OracleMode::Sampling: return "sampling";
    case OracleMode::Off: return "off";
  }
  return "unknown";
}

VectorXd interior_start(const ProblemInstance& problem, std::uint64_t seed) {
  const auto& set = problem.feasible_set;
  if (problem.interior_hint && problem.interior_hint->size() == set.dim() &&
      set.min_slack(*problem.interior_hint) > 0.0) {
    return *problem.interior_hint;
  }
  return find_interior_point(set, seed);
}

ApproxCertificate approx_minimize(const ProblemInstance& problem,
                                  const ApproxOptions& opts) {
  const auto& set = problem.feasible_set;
  const auto& q = problem.objective;
  if (q.dim() != set.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "objective and constraints differ in dimension");
  }
  check_epsilon(opts.epsilon);
  ApproxCertificate cert;
  cert.m = set.size();
  cert.c_of_m = c_of_m(cert.m);
  cert.epsilon = opts.epsilon;

  auto t0 = Clock::now();
  if (opts.precomputed_center) {
    cert.center = *opts.precomputed_center;
  } else {
    cert.center = analytic_center(set, interior_start(problem, opts.seed),
                                  opts.center);
    cert.ms_center = ms_since(t0);
  }
  const VectorXd& xbar = cert.center.center;
  cert.center_objective = q.value(xbar);

  t0 = Clock::now();
  TrsProblem trs;
  if (cert.m == 1) {
    cert.exact_trs_path = true;
    cert.theorem_bound = 0.0;
    trs = single_constraint_trs(q, set[0]);
  } else {
    cert.theorem_bound = theorem_bound(cert.m, opts.epsilon);
    const DikinEllipsoid unit = dikin_at_center(set, cert.center, 1.0);
    trs = TrsProblem{q.Q, q.c, unit.metric, unit.center, 1.0};
  }
  VectorXd x = solve_trs(trs).minimizer;
  // E(center; 1) lies in F; guard the rounding at its boundary.
  for (int k = 0; k < 60 && set.min_slack(x) < 0.0; ++k) {
    x = xbar + (1.0 - std::ldexp(1.0, -40 + k)) * (x - xbar);
  }
  if (!cert.exact_trs_path && q.value(x) > cert.center_objective) x = xbar;
  cert.solution = x;
  cert.objective_value = q.value(x);
  cert.min_slack = set.min_slack(x);
  cert.ms_trs = ms_since(t0);

  t0 = Clock::now();
  if (opts.oracle != OracleMode::Off) {
    RangeEstimate range;
    if (opts.oracle == OracleMode::Grid && set.dim() <= 3) {
      range = grid_extrema(q, set, opts.grid, xbar);
    } else {
      RangeOptions ro = opts.range;
      ro.grid = opts.grid;
      range = estimate_range(q, set, xbar, opts.samples, opts.seed, {x}, ro);
    }
    // The returned point is feasible, so it bounds the minimum too.
    if (cert.objective_value < range.z_min_hat) {
      range.z_min_hat = cert.objective_value;
      range.argmin_hat = x;
    }
    try {
      cert.ratio_estimate = epsilon_minimizer_ratio(cert.objective_value, range);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateRange) throw;
      cert.ratio_note = e.what();
    }
    cert.range = std::move(range);
  }
  cert.ms_oracle = ms_since(t0);
  return cert;
}

}  // namespace dikin
