#pragma once

#include "dikin/model.hpp"

namespace dikin {

/// L(x) = -sum log g_i(x) with its gradient and Hessian at a strictly
/// feasible point.
struct BarrierEval {
  double value = 0.0;
  VectorXd gradient;
  SymmetricMatrix hessian;
  VectorXd point;
};

/// Throws NotStrictlyFeasible naming the first constraint with g_i(x) <= 0.
BarrierEval evaluate_barrier(const Intersection& set, const VectorXd& x);

double barrier_value(const Intersection& set, const VectorXd& x);
/// sum (c_i + Q_i x) / g_i(x)
VectorXd barrier_gradient(const Intersection& set, const VectorXd& x);
/// sum (c_i + Q_i x)(c_i + Q_i x)^T / g_i^2 + Q_i / g_i
SymmetricMatrix barrier_hessian(const Intersection& set, const VectorXd& x);

// ---------------------------------------------------------------------------
// Quantities from the outer-containment argument. With d = x - center,
//   Delta_i = 1/2 d^T Q_i d,  gbar_i = g_i(center),
//   ratio_i = (g_i(x) + Delta_i) / gbar_i.
// ---------------------------------------------------------------------------

struct ProofQuantities {
  VectorXd deltas;
  VectorXd slacks_at_x;
  VectorXd slacks_at_center;
  VectorXd ratio_terms;
  /// (c_i + Q_i center)^T d, one entry per constraint.
  VectorXd normal_dots;
  /// d^T H(center) d.
  double dikin_norm_sq = 0.0;
};

/// `center` must be strictly feasible; `x` is arbitrary.
ProofQuantities proof_quantities(const Intersection& set,
                                 const VectorXd& center, const VectorXd& x);

/// r_i = -(c_i + Q_i center)^T d - (g_i(x) - gbar_i + Delta_i). Zero up to
/// rounding for every x since g_i is quadratic.
VectorXd taylor_identity_residual(const Intersection& set,
                                  const VectorXd& center, const VectorXd& x);

/// Rounding scale of each Taylor residual entry: 1 + the largest magnitude
/// among the four terms.
VectorXd taylor_identity_scale(const Intersection& set, const VectorXd& center,
                               const VectorXd& x);

struct IdentityTolerance {
  /// Largest admissible ||grad L(center)||_2 * ||x - center||_2.
  double stationarity_budget = 1e-6;
  /// Rounding allowance, relative to 1 + the magnitude of the compared sides.
  double numerical = 1e-9;
};

struct CenterSumIdentity {
  /// sum (c_i + Q_i center)^T d / gbar_i, which equals grad L(center)^T d.
  double lhs = 0.0;
  /// sum (g_i + Delta_i) / gbar_i; equals m - lhs.
  double sum_ratio = 0.0;
  /// ||grad L(center)||_2 * ||d||_2, bound on |lhs| and |m - sum_ratio|.
  double budget = 0.0;
};

/// Throws CenterNotStationary when the budget exceeds
/// tol.stationarity_budget.
CenterSumIdentity center_sum_identity(const Intersection& set,
                                      const VectorXd& center,
                                      const VectorXd& x,
                                      const IdentityTolerance& tol = {});

struct ProofInequalities {
  /// sum Delta_i / gbar_i, at most m.
  double s1 = 0.0;
  /// sum ratio_i^2, at most m^2.
  double s2 = 0.0;
  /// Tolerance applied to both comparisons.
  double tol = 0.0;
  bool ok = false;
};

/// Requires a stationary center and a feasible x (g_i(x) >= -feas_tol).
/// Throws CenterNotStationary or InfeasiblePoint.
ProofInequalities proof_inequalities(const Intersection& set,
                                     const VectorXd& center, const VectorXd& x,
                                     const IdentityTolerance& tol = {},
                                     double feas_tol = 1e-8);

/// sum (ratio_i - 1)^2 + delta_weight * sum Delta_i / gbar_i. The exact
/// expansion of the Dikin norm uses delta_weight = 2.
double dikin_decomposition(const ProofQuantities& pq,
                           double delta_weight = 2.0);

/// |d^T H(center) d - dikin_decomposition(pq, 2)|. Purely algebraic, the
/// center need not be stationary.
double dikin_decomposition_residual(const Intersection& set,
                                    const VectorXd& center, const VectorXd& x);

}  // namespace dikin
