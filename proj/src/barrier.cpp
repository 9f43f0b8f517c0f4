#include "dikin/barrier.hpp"

#include <cmath>
#include <sstream>

namespace dikin {

namespace {

VectorXd strict_slacks(const Intersection& set, const VectorXd& x,
                       const char* what) {
  const VectorXd g = set.slacks(x);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (!(g(i) > 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << what << " is not strictly feasible: g_" << i << " = " << g(i);
      throw Error(ErrorCode::NotStrictlyFeasible, os.str(),
                  static_cast<int>(i));
    }
  }
  return g;
}

}  // namespace

BarrierEval evaluate_barrier(const Intersection& set, const VectorXd& x) {
  const VectorXd g = strict_slacks(set, x, "point");
  const Eigen::Index n = set.dim();
  BarrierEval out;
  out.point = x;
  out.gradient = VectorXd::Zero(n);
  MatrixXd h = MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < set.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    const auto& con = set[k];
    const VectorXd a = con.normal(x);
    out.value -= std::log(g(i));
    out.gradient += a / g(i);
    h.selfadjointView<Eigen::Lower>().rankUpdate(a, 1.0 / (g(i) * g(i)));
    h.triangularView<Eigen::Lower>() += con.Q.matrix() / g(i);
  }
  h.triangularView<Eigen::StrictlyUpper>() = h.transpose();
  out.hessian = SymmetricMatrix(h);
  return out;
}

double barrier_value(const Intersection& set, const VectorXd& x) {
  const VectorXd g = strict_slacks(set, x, "point");
  return -g.array().log().sum();
}

VectorXd barrier_gradient(const Intersection& set, const VectorXd& x) {
  const VectorXd g = strict_slacks(set, x, "point");
  VectorXd grad = VectorXd::Zero(set.dim());
  for (std::size_t k = 0; k < set.size(); ++k) {
    grad += set[k].normal(x) / g(static_cast<Eigen::Index>(k));
  }
  return grad;
}

SymmetricMatrix barrier_hessian(const Intersection& set, const VectorXd& x) {
  return evaluate_barrier(set, x).hessian;
}

ProofQuantities proof_quantities(const Intersection& set,
                                 const VectorXd& center, const VectorXd& x) {
  const VectorXd gbar = strict_slacks(set, center, "center");
  if (x.size() != set.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "point dimension mismatch");
  }
  const auto m = static_cast<Eigen::Index>(set.size());
  const VectorXd d = x - center;
  ProofQuantities pq;
  pq.deltas.resize(m);
  pq.slacks_at_x = set.slacks(x);
  pq.slacks_at_center = gbar;
  pq.ratio_terms.resize(m);
  pq.normal_dots.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& con = set[static_cast<std::size_t>(i)];
    pq.deltas(i) = 0.5 * d.dot(con.Q.matrix() * d);
    pq.ratio_terms(i) = (pq.slacks_at_x(i) + pq.deltas(i)) / gbar(i);
    pq.normal_dots(i) = con.normal(center).dot(d);
    pq.dikin_norm_sq += pq.normal_dots(i) * pq.normal_dots(i) /
                            (gbar(i) * gbar(i)) +
                        2.0 * pq.deltas(i) / gbar(i);
  }
  return pq;
}

VectorXd taylor_identity_residual(const Intersection& set,
                                  const VectorXd& center, const VectorXd& x) {
  const ProofQuantities pq = proof_quantities(set, center, x);
  return -pq.normal_dots -
         (pq.slacks_at_x - pq.slacks_at_center + pq.deltas);
}

VectorXd taylor_identity_scale(const Intersection& set, const VectorXd& center,
                               const VectorXd& x) {
  const ProofQuantities pq = proof_quantities(set, center, x);
  VectorXd scale(pq.deltas.size());
  for (Eigen::Index i = 0; i < scale.size(); ++i) {
    scale(i) = 1.0 + std::max({std::abs(pq.normal_dots(i)),
                               std::abs(pq.slacks_at_x(i)),
                               std::abs(pq.slacks_at_center(i)),
                               std::abs(pq.deltas(i))});
  }
  return scale;
}

namespace {

double stationarity_budget(const Intersection& set, const VectorXd& center,
                           const VectorXd& x) {
  return barrier_gradient(set, center).norm() * (x - center).norm();
}

void require_stationary(double budget, const IdentityTolerance& tol) {
  if (budget > tol.stationarity_budget) {
    std::ostringstream os;
    os.precision(3);
    os << "center is not stationary enough: |grad L| * |x - center| = "
       << budget << " exceeds " << tol.stationarity_budget;
    throw Error(ErrorCode::CenterNotStationary, os.str());
  }
}

}  // namespace

CenterSumIdentity center_sum_identity(const Intersection& set,
                                      const VectorXd& center,
                                      const VectorXd& x,
                                      const IdentityTolerance& tol) {
  const ProofQuantities pq = proof_quantities(set, center, x);
  CenterSumIdentity out;
  out.budget = stationarity_budget(set, center, x);
  require_stationary(out.budget, tol);
  out.lhs = (pq.normal_dots.array() / pq.slacks_at_center.array()).sum();
  out.sum_ratio = pq.ratio_terms.sum();
  return out;
}

ProofInequalities proof_inequalities(const Intersection& set,
                                     const VectorXd& center, const VectorXd& x,
                                     const IdentityTolerance& tol,
                                     double feas_tol) {
  const ProofQuantities pq = proof_quantities(set, center, x);
  for (Eigen::Index i = 0; i < pq.slacks_at_x.size(); ++i) {
    if (pq.slacks_at_x(i) < -feas_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "point violates constraint " << i << ": g = "
         << pq.slacks_at_x(i);
      throw Error(ErrorCode::InfeasiblePoint, os.str(), static_cast<int>(i));
    }
  }
  const double budget = stationarity_budget(set, center, x);
  require_stationary(budget, tol);

  const auto m = static_cast<double>(set.size());
  ProofInequalities out;
  out.s1 = (pq.deltas.array() / pq.slacks_at_center.array()).sum();
  out.s2 = pq.ratio_terms.squaredNorm();
  // s1 = m - sum g_i/gbar_i - lhs and s2 <= (sum ratio_i)^2 = (m - lhs)^2,
  // so the stationarity residual enters linearly (twice m for s2).
  out.tol = budget * (1.0 + 2.0 * m) + tol.numerical * (1.0 + m * m);
  out.ok = out.s1 <= m + out.tol && out.s2 <= m * m + out.tol;
  return out;
}

double dikin_decomposition(const ProofQuantities& pq, double delta_weight) {
  return (pq.ratio_terms.array() - 1.0).square().sum() +
         delta_weight *
             (pq.deltas.array() / pq.slacks_at_center.array()).sum();
}

double dikin_decomposition_residual(const Intersection& set,
                                    const VectorXd& center,
                                    const VectorXd& x) {
  const ProofQuantities pq = proof_quantities(set, center, x);
  const SymmetricMatrix h = barrier_hessian(set, center);
  const VectorXd d = x - center;
  const double qf = d.dot(h.matrix() * d);
  return std::abs(qf - dikin_decomposition(pq, 2.0));
}

}  // namespace dikin
