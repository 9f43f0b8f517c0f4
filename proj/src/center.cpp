#include "dikin/center.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dikin/barrier.hpp"
#include "dikin/linalg.hpp"
#include "dikin/rng.hpp"

namespace dikin {

void CenterOptions::check() const {
  const bool ok = decrement_tol > 0.0 && max_iterations > 0 &&
                  armijo_sigma > 0.0 && armijo_sigma < 0.5 &&
                  backtrack_factor > 0.0 && backtrack_factor < 1.0 &&
                  divergence_radius > 0.0;
  if (!ok) throw Error(ErrorCode::InvalidArgument, "invalid CenterOptions");
}

namespace {

double data_scale(const Intersection& set) {
  double scale = 1.0;
  for (const auto& con : set.constraints()) {
    scale = std::max(scale, std::abs(con.d));
  }
  return scale;
}

// One run of subgradient ascent on phi(x) = min_i g_i(x): Polyak steps
// towards the level push / sqrt(k + 1) > 0.
std::optional<VectorXd> ascend(const Intersection& set, VectorXd x,
                               double threshold, int max_iterations) {
  const double push = 1e-2 * data_scale(set);
  for (int k = 0; k < max_iterations; ++k) {
    const VectorXd g = set.slacks(x);
    Eigen::Index worst = 0;
    const double phi = g.minCoeff(&worst);
    if (phi > threshold) return x;
    const VectorXd ascent = -set[static_cast<std::size_t>(worst)].normal(x);
    const double norm_sq = ascent.squaredNorm();
    // A concave slack is maximal where its gradient vanishes.
    if (norm_sq <= 1e-300) return std::nullopt;
    const double target = push / std::sqrt(static_cast<double>(k) + 1.0);
    const double step = (target - phi) / norm_sq;
    x += step * ascent;
    if (!x.allFinite()) return std::nullopt;
  }
  return std::nullopt;
}

double newton_decrement_sq(const VectorXd& grad, const VectorXd& step) {
  return std::max(0.0, -grad.dot(step));
}

struct NewtonStep {
  VectorXd step;
  double decrement_sq = 0.0;
};

NewtonStep newton_step(const BarrierEval& eval) {
  auto fac = cholesky_with_jitter(eval.hessian.matrix());
  if (!fac) {
    throw Error(ErrorCode::Unbounded,
                "barrier Hessian is numerically singular; the feasible set "
                "is unbounded or degenerate");
  }
  NewtonStep out;
  out.step = -fac->llt.solve(eval.gradient);
  out.decrement_sq = newton_decrement_sq(eval.gradient, out.step);
  return out;
}

bool strictly_feasible(const Intersection& set, const VectorXd& x) {
  return (set.slacks(x).array() > 0.0).all();
}

}  // namespace

VectorXd find_interior_point(const Intersection& set, std::uint64_t seed,
                             int max_iterations) {
  const double threshold = 1e-12 * data_scale(set);
  const Eigen::Index n = set.dim();
  if (auto x = ascend(set, VectorXd::Zero(n), threshold, max_iterations)) {
    return *x;
  }
  // Restarts from random points near the origin, in case the ascent
  // stalled at a kink.
  Rng rng(seed);
  for (int restart = 0; restart < 3; ++restart) {
    const VectorXd start = rng.normal_vector(n);
    if (auto x = ascend(set, start, threshold, max_iterations / 4)) {
      return *x;
    }
  }
  throw Error(ErrorCode::NoInteriorFound,
              "no strictly feasible point found; the interior is empty or "
              "thinner than the working tolerance");
}

CenterResult analytic_center(const Intersection& set, const VectorXd& start,
                             const CenterOptions& opts) {
  opts.check();
  if (start.size() != set.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "start point dimension mismatch");
  }
  VectorXd x = start;
  BarrierEval eval = evaluate_barrier(set, x);
  CenterResult result;
  result.value_trace.push_back(eval.value);

  for (int it = 0; it < opts.max_iterations; ++it) {
    NewtonStep ns = newton_step(eval);
    if (0.5 * ns.decrement_sq <= opts.decrement_tol) {
      if (!cholesky(eval.hessian.matrix())) {
        throw Error(ErrorCode::Unbounded,
                    "barrier Hessian is singular at the stationary point; "
                    "the feasible set is unbounded or degenerate");
      }
      // Full Newton steps converge quadratically here; take them while the
      // decrement keeps shrinking. Barrier values differ only by rounding at
      // this point, so they are not compared.
      for (int polish = 0; polish < 5 && ns.decrement_sq > 0.0; ++polish) {
        const VectorXd trial = x + ns.step;
        if (!strictly_feasible(set, trial)) break;
        BarrierEval next = evaluate_barrier(set, trial);
        NewtonStep next_step = newton_step(next);
        if (!(next_step.decrement_sq < ns.decrement_sq)) break;
        x = trial;
        eval = std::move(next);
        ns = std::move(next_step);
        result.value_trace.push_back(eval.value);
      }
      result.center = x;
      result.newton_decrement = std::sqrt(ns.decrement_sq);
      result.iterations = it;
      result.barrier_value = eval.value;
      result.hessian_at_center = eval.hessian;
      return result;
    }

    const double lambda_sq = ns.decrement_sq;
    double t = 1.0;
    auto stalled = [&] { return t < 1e-20; };
    while (!strictly_feasible(set, x + t * ns.step)) {
      t *= opts.backtrack_factor;
      if (stalled()) break;
    }
    while (!stalled() && barrier_value(set, x + t * ns.step) >
                             eval.value - opts.armijo_sigma * t * lambda_sq) {
      t *= opts.backtrack_factor;
    }
    if (stalled()) {
      std::ostringstream os;
      os.precision(3);
      os << "line search stalled at iteration " << it
         << " with Newton decrement " << std::sqrt(lambda_sq);
      throw Error(ErrorCode::MaxIterations, os.str());
    }
    x += t * ns.step;
    if (x.norm() > opts.divergence_radius) {
      throw Error(ErrorCode::Unbounded,
                  "Newton iterates left the divergence radius; the feasible "
                  "set is unbounded");
    }
    eval = evaluate_barrier(set, x);
    result.value_trace.push_back(eval.value);
  }
  throw Error(ErrorCode::MaxIterations,
              "analytic center not reached within " +
                  std::to_string(opts.max_iterations) + " iterations");
}

namespace {

// Dense tableau simplex with Bland's rule for
//   maximize obj^T y  subject to  A y <= b,  y >= 0,  with b >= 0,
// so the slack basis is an initial feasible vertex. Returns the optimal y.
// The feasible region used below is bounded, so no unbounded exit exists.
VectorXd simplex_max(const MatrixXd& a, const VectorXd& b,
                     const VectorXd& obj) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index vars = a.cols();
  const Eigen::Index cols = vars + rows;
  MatrixXd tab = MatrixXd::Zero(rows + 1, cols + 1);
  tab.topLeftCorner(rows, vars) = a;
  tab.block(0, vars, rows, rows).setIdentity();
  tab.topRightCorner(rows, 1) = b;
  tab.block(rows, 0, 1, vars) = -obj.transpose();
  std::vector<Eigen::Index> basis(static_cast<std::size_t>(rows));
  for (Eigen::Index r = 0; r < rows; ++r) basis[r] = vars + r;

  constexpr double kEps = 1e-12;
  for (int iter = 0; iter < 100000; ++iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (tab(rows, j) < -kEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (tab(r, enter) > kEps) {
        const double ratio = tab(r, cols) / tab(r, enter);
        if (leave < 0 || ratio < best - kEps) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + kEps && basis[r] < basis[leave]) {
          leave = r;
        }
      }
    }
    if (leave < 0) break;
    tab.row(leave) /= tab(leave, enter);
    for (Eigen::Index r = 0; r <= rows; ++r) {
      if (r != leave && tab(r, enter) != 0.0) {
        tab.row(r) -= tab(r, enter) * tab.row(leave);
      }
    }
    basis[leave] = enter;
  }
  VectorXd y = VectorXd::Zero(vars);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (basis[r] < vars) y(basis[r]) = tab(r, cols);
  }
  return y;
}

VectorXd canonical_sign(VectorXd v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      if (v(i) < 0.0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace

Boundedness check_boundedness(const Intersection& set) {
  const Eigen::Index n = set.dim();
  MatrixXd q_sum = MatrixXd::Zero(n, n);
  for (const auto& con : set.constraints()) q_sum += con.Q.matrix();

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(q_sum);
  const VectorXd& lambda = es.eigenvalues();
  const double cutoff = 1e-10 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  Eigen::Index k = 0;
  while (k < n && lambda(k) <= cutoff) ++k;
  if (k == 0) return Bounded{};
  const MatrixXd null_basis = es.eigenvectors().leftCols(k);

  // Rows a_i = N^T c_i: the linear parts restricted to the recession
  // candidates. The cone {w : A w <= 0} must be {0} for boundedness.
  const auto m = static_cast<Eigen::Index>(set.size());
  MatrixXd a(m, k);
  double a_scale = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    a.row(i) = (null_basis.transpose() * set[static_cast<std::size_t>(i)].c)
                   .transpose();
    a_scale += a.row(i).norm();
  }
  const double tol = 1e-10 * std::max(1.0, a_scale);

  Eigen::JacobiSVD<MatrixXd> svd(a, Eigen::ComputeFullV);
  const VectorXd& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  if (rank < k) {
    const VectorXd w = svd.matrixV().col(k - 1);
    return UnboundedDirection{canonical_sign((null_basis * w).normalized())};
  }

  // maximize -sum_i a_i^T w  s.t.  A w <= 0,  -1 <= w <= 1, with
  // w = w_plus - w_minus.
  const VectorXd s = a.colwise().sum().transpose();
  MatrixXd lp_a = MatrixXd::Zero(m + 2 * k, 2 * k);
  lp_a.topLeftCorner(m, k) = a;
  lp_a.topRightCorner(m, k) = -a;
  lp_a.bottomRows(2 * k).setIdentity();
  VectorXd lp_b = VectorXd::Zero(m + 2 * k);
  lp_b.tail(2 * k).setOnes();
  VectorXd obj(2 * k);
  obj << -s, s;
  const VectorXd y = simplex_max(lp_a, lp_b, obj);
  const VectorXd w = y.head(k) - y.tail(k);
  if (obj.dot(y) > tol && (a * w).maxCoeff() <= tol) {
    return UnboundedDirection{(null_basis * w).normalized()};
  }
  return Bounded{};
}

}  // namespace dikin
