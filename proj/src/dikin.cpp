#include "dikin/dikin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dikin/linalg.hpp"
#include "dikin/oracle.hpp"
#include "dikin/trs.hpp"

namespace dikin {

double DikinEllipsoid::norm_sq(const VectorXd& x) const {
  const VectorXd d = x - center;
  return d.dot(metric.matrix() * d);
}

double DikinEllipsoid::norm(const VectorXd& x) const {
  return std::sqrt(std::max(0.0, norm_sq(x)));
}

bool DikinEllipsoid::contains(const VectorXd& x, double tol) const {
  return norm_sq(x) <= radius * radius + tol;
}

DikinEllipsoid dikin_at_center(const Intersection& set, const CenterResult& cr,
                               double radius) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "Dikin radius must be positive");
  }
  if (cr.center.size() != set.dim() ||
      cr.hessian_at_center.dim() != set.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "center result does not match the feasible set");
  }
  if (!cholesky(cr.hessian_at_center.matrix())) {
    throw Error(ErrorCode::MetricNotPD,
                "barrier Hessian at the center is not positive definite");
  }
  return {cr.center, cr.hessian_at_center, radius};
}

InnerCertificate certify_inner(const Intersection& set, const DikinEllipsoid& e,
                               double tol) {
  InnerCertificate out;
  out.radius = e.radius;
  out.min_slacks.resize(static_cast<Eigen::Index>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    out.min_slacks(static_cast<Eigen::Index>(i)) =
        minimize_constraint_over_ellipsoid(set[i], e);
  }
  out.ok = out.min_slacks.minCoeff() >= -tol;
  return out;
}

double largest_inner_radius(const Intersection& set, const DikinEllipsoid& e,
                            double tol) {
  const auto m = static_cast<double>(set.size());
  double lo = 0.0;
  double hi = std::sqrt(m * m + m) + 1.0;
  DikinEllipsoid probe = e;
  while (hi - lo > tol) {
    probe.radius = 0.5 * (lo + hi);
    if (certify_inner(set, probe, 0.0).ok) {
      lo = probe.radius;
    } else {
      hi = probe.radius;
    }
  }
  return lo;
}

namespace {

// Boundary points along whitened directions u: x = center + t L^-T u.
void sweep_directions(const Intersection& set, const DikinEllipsoid& e,
                      int resolution, std::vector<VectorXd>& out) {
  const Eigen::Index n = set.dim();
  const auto llt = cholesky(e.metric.matrix());
  if (!llt) return;
  const auto upper = llt->matrixU();
  auto push = [&](const VectorXd& u) {
    const VectorXd dir = upper.solve(u);
    out.push_back(radial_boundary_point(set, e.center, e.center + dir));
  };
  constexpr double kPi = std::numbers::pi;
  if (n == 1) {
    push(VectorXd::Constant(1, 1.0));
    push(VectorXd::Constant(1, -1.0));
  } else if (n == 2) {
    for (int k = 0; k < 2 * resolution; ++k) {
      const double th = kPi * k / resolution;
      VectorXd u(2);
      u << std::cos(th), std::sin(th);
      push(u);
    }
  } else if (n == 3) {
    for (int i = 0; i <= resolution; ++i) {
      const double th = kPi * i / resolution;
      const int ring = (i == 0 || i == resolution) ? 1 : 2 * resolution;
      for (int k = 0; k < ring; ++k) {
        const double ph = kPi * k / resolution;
        VectorXd u(3);
        u << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
            std::cos(th);
        push(u);
      }
    }
  }
}

}  // namespace

OuterEstimate empirical_outer_radius(const Intersection& set,
                                     const DikinEllipsoid& unit,
                                     const OuterOptions& opts) {
  const auto m = static_cast<double>(set.size());
  const double bound_sq = m * m + m + 1e-6;

  std::vector<VectorXd> points =
      sample_feasible(set, unit.center, opts.samples, opts.seed);
  const std::size_t sampled = points.size();
  for (std::size_t i = 0; i < sampled; ++i) {
    points.push_back(radial_boundary_point(set, unit.center, points[i]));
  }
  if (set.dim() <= 3 && opts.sweep_resolution > 0) {
    sweep_directions(set, unit, opts.sweep_resolution, points);
  }

  OuterEstimate est;
  est.witness = unit.center;
  double best_sq = 0.0;
  auto consider = [&](const VectorXd& p) {
    const double v = unit.norm_sq(p);
    ++est.points_checked;
    if (v > bound_sq) ++est.bound_violations;
    if (v > best_sq) {
      best_sq = v;
      est.witness = p;
    }
    return v;
  };

  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    ranked.emplace_back(consider(points[i]), i);
  }
  const std::size_t k =
      std::min(points.size(), static_cast<std::size_t>(std::max(0, opts.top_k)));
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<long>(k),
                    ranked.end(), [](const auto& a, const auto& b) {
                      return a.first > b.first ||
                             (a.first == b.first && a.second < b.second);
                    });

  // Ascent of (x - c)^T H (x - c) written as 1/2 x^T (2H) x - (2 H c)^T x.
  const MatrixXd& h = unit.metric.matrix();
  const QuadraticObjective dikin_sq{SymmetricMatrix(2.0 * h),
                                    -2.0 * h * unit.center};
  for (std::size_t i = 0; i < k; ++i) {
    consider(polish(dikin_sq, set, unit.center, points[ranked[i].second],
                    opts.refine_steps, true));
  }
  est.rho_hat = std::sqrt(best_sq);
  return est;
}

ContainmentReport containment_report(const Intersection& set,
                                     const CenterResult& cr,
                                     const OuterOptions& opts, double tol) {
  const DikinEllipsoid unit = dikin_at_center(set, cr, 1.0);
  const auto m = static_cast<double>(set.size());
  ContainmentReport rep;
  rep.inner = certify_inner(set, unit);
  const OuterEstimate outer = empirical_outer_radius(set, unit, opts);
  rep.empirical_outer_radius = outer.rho_hat;
  rep.corrected_bound = std::sqrt(m * m + m);
  rep.old_bound = m;
  rep.outer_ok = outer.rho_hat <= rep.corrected_bound + tol;
  rep.old_bound_violated = outer.rho_hat > m + tol;
  rep.bound_gap = outer.rho_hat / rep.corrected_bound;
  rep.witness_point = outer.witness;
  rep.points_checked = outer.points_checked;
  rep.bound_violations = outer.bound_violations;
  return rep;
}

Intersection example1_set() {
  // x^2 <= 1 as g(x) = 1 - 0 x - 1/2 (2) x^2.
  return Intersection({EllipsoidConstraint{
      SymmetricMatrix(MatrixXd::Constant(1, 1, 2.0)), VectorXd::Zero(1),
      1.0}});
}

CounterexampleReport counterexample_report() {
  Intersection set = example1_set();
  const VectorXd start = find_interior_point(set, 0);
  CenterResult cr = analytic_center(set, start);
  const double sqrt2 = std::sqrt(2.0);

  OuterOptions opts;
  opts.samples = 1000;
  opts.seed = 42;
  ContainmentReport rep = containment_report(set, cr, opts);

  DikinEllipsoid corrected = dikin_at_center(set, cr, sqrt2);
  const InnerCertificate at_corrected = certify_inner(set, corrected);

  CounterexampleReport out{std::move(set), std::move(cr), 0.0, std::move(rep)};
  out.hessian = out.center.hessian_at_center(0, 0);
  out.inner_contained = out.containment.inner.ok;
  out.contained_in_old_bound = !out.containment.old_bound_violated;
  out.min_slack_at_corrected = at_corrected.min_slacks.minCoeff();
  out.tight_at_corrected_bound =
      at_corrected.ok && out.containment.empirical_outer_radius <= sqrt2 + 1e-6;

  const bool numbers_ok =
      std::abs(out.center.center(0)) <= 1e-8 &&
      std::abs(out.hessian - 2.0) <= 1e-12 &&
      std::abs(out.containment.inner.min_slacks(0) - 0.5) <= 1e-8 &&
      std::abs(out.containment.empirical_outer_radius - sqrt2) <= 1e-6 &&
      std::abs(std::abs(out.containment.witness_point(0)) - 1.0) <= 1e-6;
  out.matches_expected = numbers_ok && out.inner_contained &&
                         !out.contained_in_old_bound &&
                         out.tight_at_corrected_bound;
  return out;
}

}  // namespace dikin
