#pragma once

#include <cstdint>

#include "dikin/center.hpp"
#include "dikin/model.hpp"

namespace dikin {

/// E(center; r) = {x : (x - center)^T H (x - center) <= r^2}.
struct DikinEllipsoid {
  VectorXd center;
  SymmetricMatrix metric;
  double radius = 1.0;

  double norm_sq(const VectorXd& x) const;
  double norm(const VectorXd& x) const;
  bool contains(const VectorXd& x, double tol = 0.0) const;
};

/// Ellipsoid with the barrier Hessian at the center as metric. Throws
/// MetricNotPD for a degenerate Hessian, InvalidArgument for r <= 0.
DikinEllipsoid dikin_at_center(const Intersection& set, const CenterResult& cr,
                               double radius);

struct InnerCertificate {
  double radius = 1.0;
  /// min over E of g_i, one entry per constraint.
  VectorXd min_slacks;
  bool ok = false;
};

/// One exact trust-region solve per constraint; ok iff every minimum is
/// >= -tol.
InnerCertificate certify_inner(const Intersection& set, const DikinEllipsoid& e,
                               double tol = 1e-8);

/// Largest radius whose ellipsoid is certified inside F, by bisection.
double largest_inner_radius(const Intersection& set, const DikinEllipsoid& e,
                            double tol = 1e-6);

struct OuterOptions {
  int samples = 2000;
  std::uint64_t seed = 1;
  /// Best candidates refined by boundary ascent.
  int top_k = 16;
  int refine_steps = 200;
  /// Direction sweep per angular coordinate for n <= 3 (0 disables).
  int sweep_resolution = 400;
};

struct OuterEstimate {
  /// max Dikin norm over every feasible point examined; a lower bound on the
  /// true outer radius.
  double rho_hat = 0.0;
  VectorXd witness;
  long long points_checked = 0;
  /// Points whose squared Dikin norm exceeded m^2 + m + 1e-6.
  long long bound_violations = 0;
};

/// Samples F by hit-and-run, projects samples radially to the boundary,
/// sweeps boundary directions for n <= 3, then refines the best top_k by
/// ascent of the Dikin norm along the boundary.
OuterEstimate empirical_outer_radius(const Intersection& set,
                                     const DikinEllipsoid& unit,
                                     const OuterOptions& opts = {});

struct ContainmentReport {
  InnerCertificate inner;
  double empirical_outer_radius = 0.0;
  /// sqrt(m^2 + m)
  double corrected_bound = 0.0;
  /// m, the radius the uncorrected statement claims.
  double old_bound = 0.0;
  bool outer_ok = false;
  /// rho_hat > m: F is not contained in E(center; m).
  bool old_bound_violated = false;
  /// rho_hat / sqrt(m^2 + m).
  double bound_gap = 0.0;
  VectorXd witness_point;
  long long points_checked = 0;
  long long bound_violations = 0;
};

ContainmentReport containment_report(const Intersection& set,
                                     const CenterResult& cr,
                                     const OuterOptions& opts = {},
                                     double tol = 1e-6);

/// Reproduction of the one-constraint interval {x^2 <= 1}.
struct CounterexampleReport {
  Intersection set;
  CenterResult center;
  double hessian = 0.0;
  ContainmentReport containment;
  /// E(0;1) inside F.
  bool inner_contained = false;
  /// F inside E(0; m). Expected false.
  bool contained_in_old_bound = true;
  /// F == E(0; sqrt(2)): inner certification at sqrt(2) and rho_hat <=
  /// sqrt(2) within tolerance.
  bool tight_at_corrected_bound = false;
  double min_slack_at_corrected = 0.0;
  bool matches_expected = false;
};

/// Expected: center 0 (1e-8), Hessian 2 (1e-12), min slack 0.5 on E(0;1)
/// (1e-8), rho_hat sqrt(2) (1e-6).
CounterexampleReport counterexample_report();

Intersection example1_set();

}  // namespace dikin
