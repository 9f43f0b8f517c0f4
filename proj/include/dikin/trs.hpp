#pragma once

#include "dikin/model.hpp"

namespace dikin {

/// minimize 1/2 x^T A x + b^T x  subject to  (x - z)^T H (x - z) <= r^2,
/// with H positive definite and A of any inertia.
struct TrsProblem {
  SymmetricMatrix A;
  VectorXd b;
  SymmetricMatrix H;
  VectorXd center_z;
  double radius_r = 1.0;

  double objective(const VectorXd& x) const;
};

struct TrsSolution {
  VectorXd minimizer;
  double value = 0.0;
  /// Multiplier of 1/2 (x - z)^T H (x - z) <= 1/2 r^2.
  double multiplier = 0.0;
  bool boundary = false;
  bool hard_case = false;
};

/// Residuals of the global optimality conditions:
///   stationarity    ||(A + lambda H)(x - z) + A z + b||,
///   complementarity lambda * |r^2 - (x - z)^T H (x - z)|,
///   curvature       lambda_min(A + lambda H),
///   feasibility     (x - z)^T H (x - z) - r^2.
struct TrsCertificate {
  double stationarity = 0.0;
  double complementarity = 0.0;
  double min_eigenvalue = 0.0;
  double feasibility = 0.0;
  /// Scale of the data, 1 + ||b||, used by the relative stationarity test.
  double scale = 1.0;

  bool holds(double kkt_tol = 1e-8, double comp_tol = 1e-8,
             double psd_tol = 1e-8) const;
};

TrsCertificate certify(const TrsProblem& p, const TrsSolution& s);

/// Global solution via eigendecomposition of the whitened matrix and a
/// safeguarded Newton iteration on 1/||y(lambda)|| - 1/r, with explicit
/// hard-case handling. Throws NotPositiveDefinite, DimensionMismatch,
/// InvalidArgument (r <= 0), NoConvergence.
TrsSolution solve_trs(const TrsProblem& p, double tol = 1e-12);

struct DikinEllipsoid;

/// min of g over E(center; r); >= 0 certifies E lies inside the constraint.
double minimize_constraint_over_ellipsoid(const EllipsoidConstraint& con,
                                          const DikinEllipsoid& e);

}  // namespace dikin
