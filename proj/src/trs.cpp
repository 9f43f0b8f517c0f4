#include "dikin/trs.hpp"

#include <cmath>
#include <sstream>

#include "dikin/dikin.hpp"
#include "dikin/linalg.hpp"

namespace dikin {

double TrsProblem::objective(const VectorXd& x) const {
  return 0.5 * x.dot(A.matrix() * x) + b.dot(x);
}

bool TrsCertificate::holds(double kkt_tol, double comp_tol,
                           double psd_tol) const {
  return stationarity <= kkt_tol * scale && complementarity <= comp_tol &&
         min_eigenvalue >= -psd_tol && feasibility <= comp_tol;
}

TrsCertificate certify(const TrsProblem& p, const TrsSolution& s) {
  const VectorXd dx = s.minimizer - p.center_z;
  const MatrixXd shifted = p.A.matrix() + s.multiplier * p.H.matrix();
  const double hnorm = dx.dot(p.H.matrix() * dx);
  const double r2 = p.radius_r * p.radius_r;
  TrsCertificate c;
  c.scale = 1.0 + p.b.norm();
  c.stationarity =
      (shifted * dx + p.A.matrix() * p.center_z + p.b).norm();
  c.complementarity = s.multiplier * std::abs(r2 - hnorm) / std::max(1.0, r2);
  // Eigenvalues of A + lambda H carry rounding proportional to its size.
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(shifted, Eigen::EigenvaluesOnly);
  const double size = 1.0 + es.eigenvalues().cwiseAbs().maxCoeff();
  c.min_eigenvalue = es.eigenvalues()(0) / size;
  c.feasibility = std::max(0.0, hnorm - r2) / std::max(1.0, r2);
  return c;
}

namespace {

void check_problem(const TrsProblem& p) {
  const Eigen::Index n = p.b.size();
  if (p.A.dim() != n || p.H.dim() != n || p.center_z.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "trust-region problem data have inconsistent dimensions");
  }
  if (!(p.radius_r > 0.0) || !std::isfinite(p.radius_r)) {
    throw Error(ErrorCode::InvalidArgument,
                "trust-region radius must be positive");
  }
}

// Sign of the first clearly nonzero entry; ties in the hard case are broken
// towards a nonnegative first component.
double leading_sign(const VectorXd& v) {
  const double cutoff = 1e-12 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > cutoff) return v(i) < 0.0 ? -1.0 : 1.0;
  }
  return 1.0;
}

}  // namespace

TrsSolution solve_trs(const TrsProblem& p, double tol) {
  check_problem(p);
  const auto llt = cholesky(p.H.matrix());
  if (!llt) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "trust-region metric H is not positive definite");
  }
  const Eigen::Index n = p.b.size();
  const double r = p.radius_r;

  // H = L L^T; y = L^T (x - z). The problem becomes
  //   min 1/2 y^T M y + g^T y  s.t. ||y|| <= r,  M = L^-1 A L^-T.
  const auto lower = llt->matrixL();
  MatrixXd w = lower.solve(p.A.matrix());
  MatrixXd m = lower.solve(w.transpose());
  m = 0.5 * (m + m.transpose());
  const VectorXd g =
      lower.solve(p.A.matrix() * p.center_z + p.b);

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  const VectorXd& mu = es.eigenvalues();
  const MatrixXd& v = es.eigenvectors();
  const VectorXd gamma = v.transpose() * g;

  const double mu_scale = 1.0 + mu.cwiseAbs().maxCoeff();
  const double eig_tol = 1e-10 * mu_scale;
  const double gamma_tol = 1e-10 * (1.0 + g.norm());
  Eigen::Index bottom = 1;  // size of the smallest eigenvalue's eigenspace
  while (bottom < n && mu(bottom) <= mu(0) + eig_tol) ++bottom;
  const bool orthogonal_to_bottom =
      gamma.head(bottom).cwiseAbs().maxCoeff() <= gamma_tol;

  // Eigen-coordinates of y(lambda) = -(M + lambda I)^-1 g; `skip` drops the
  // bottom eigenspace (used when its components vanish).
  auto y_of = [&](double lambda, bool skip) {
    VectorXd y = VectorXd::Zero(n);
    for (Eigen::Index j = skip ? bottom : 0; j < n; ++j) {
      const double denom = mu(j) + lambda;
      if (gamma(j) != 0.0) y(j) = -gamma(j) / denom;
    }
    return y;
  };

  TrsSolution sol;
  VectorXd y_eig;
  bool solved = false;

  if (mu(0) > eig_tol) {
    VectorXd y0 = y_of(0.0, false);
    if (y0.norm() <= r) {
      y_eig = std::move(y0);
      solved = true;
    }
  } else if (mu(0) >= -eig_tol && orthogonal_to_bottom) {
    // Singular PSD with g in the range: minimum-norm unconstrained minimizer.
    VectorXd y0 = y_of(0.0, true);
    if (y0.norm() <= r) {
      y_eig = std::move(y0);
      solved = true;
    }
  }

  if (!solved && mu(0) < -eig_tol && orthogonal_to_bottom) {
    VectorXd yh = y_of(-mu(0), true);
    const double yh_norm = yh.norm();
    if (yh_norm <= r) {
      const double tau = std::sqrt(std::max(0.0, r * r - yh_norm * yh_norm));
      const VectorXd dir_x = lower.transpose().solve(VectorXd(v.col(0)));
      yh(0) += leading_sign(dir_x) * tau;
      y_eig = std::move(yh);
      sol.multiplier = -mu(0);
      sol.boundary = true;
      sol.hard_case = true;
      solved = true;
    }
  }

  if (!solved) {
    // Boundary solution: ||y(lambda)|| = r with lambda > max(0, -mu_min).
    const double lambda_low = std::max(0.0, -mu(0));
    double lo = lambda_low;
    double hi = lambda_low + g.norm() / r;
    double lambda = hi;
    bool converged = false;
    for (int it = 0; it < 500; ++it) {
      const VectorXd y = y_of(lambda, false);
      const double norm = y.norm();
      if (std::abs(norm - r) <= tol * r) {
        converged = true;
        break;
      }
      if (norm > r) {
        lo = lambda;
      } else {
        hi = lambda;
      }
      if (hi - lo <= 1e-15 * (1.0 + hi)) {
        converged = true;
        break;
      }
      // Newton on phi(lambda) = 1/||y|| - 1/r, phi' = (sum y_j^2/(mu_j +
      // lambda)) / ||y||^3.
      double dsum = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (y(j) != 0.0) dsum += y(j) * y(j) / (mu(j) + lambda);
      }
      const double phi = 1.0 / norm - 1.0 / r;
      const double dphi = dsum / (norm * norm * norm);
      double next = lambda - phi / dphi;
      if (!std::isfinite(next) || next <= lo || next >= hi) {
        next = 0.5 * (lo + hi);
      }
      lambda = next;
    }
    if (!converged) {
      std::ostringstream os;
      os << "secular equation did not converge (bracket [" << lo << ", "
         << hi << "])";
      throw Error(ErrorCode::NoConvergence, os.str());
    }
    y_eig = y_of(lambda, false);
    // Land exactly on the sphere; the root-finder leaves O(tol) slack.
    const double norm = y_eig.norm();
    if (norm > 0.0) y_eig *= r / norm;
    sol.multiplier = lambda;
    sol.boundary = true;
  }

  const VectorXd y = v * y_eig;
  sol.minimizer = p.center_z + lower.transpose().solve(y);
  sol.value = p.objective(sol.minimizer);
  return sol;
}

double minimize_constraint_over_ellipsoid(const EllipsoidConstraint& con,
                                          const DikinEllipsoid& e) {
  // min g = d + min (1/2 x^T (-Q) x + (-c)^T x) over the ellipsoid.
  TrsProblem p{SymmetricMatrix(-con.Q.matrix()), -con.c, e.metric, e.center,
               e.radius};
  return con.d + solve_trs(p).value;
}

}  // namespace dikin
