#pragma once

#include <cstdint>
#include <variant>

#include "dikin/model.hpp"

namespace dikin {

struct CenterOptions {
  /// Stop when lambda^2 / 2 <= decrement_tol.
  double decrement_tol = 1e-10;
  int max_iterations = 200;
  double armijo_sigma = 0.25;
  double backtrack_factor = 0.5;
  /// Iterates farther than this from the origin signal an unbounded set.
  double divergence_radius = 1e8;

  /// Throws InvalidArgument when a field is out of range.
  void check() const;
};

struct CenterResult {
  VectorXd center;
  /// Newton decrement sqrt(grad^T H^-1 grad) at `center`.
  double newton_decrement = 0.0;
  int iterations = 0;
  double barrier_value = 0.0;
  SymmetricMatrix hessian_at_center;
  /// Barrier value after each accepted step, starting point first.
  std::vector<double> value_trace;
};

/// Phase I: subgradient ascent on min_i g_i(x) from the origin. Throws
/// NoInteriorFound when no point with min_i g_i > 0 (relative to the data
/// scale) appears within `max_iterations`.
VectorXd find_interior_point(const Intersection& set, std::uint64_t seed,
                             int max_iterations = 20000);

/// Damped Newton on the log barrier from a strictly feasible start.
/// Throws NotStrictlyFeasible (start), Unbounded, MaxIterations.
CenterResult analytic_center(const Intersection& set, const VectorXd& start,
                             const CenterOptions& opts = {});

struct Bounded {};
struct UnboundedDirection {
  VectorXd direction;
};
using Boundedness = std::variant<Bounded, UnboundedDirection>;

/// F is unbounded iff some v != 0 has Q_i v = 0 and c_i^T v <= 0 for all i.
/// Searches the common nullspace of the Q_i for such a direction.
Boundedness check_boundedness(const Intersection& set);

}  // namespace dikin
