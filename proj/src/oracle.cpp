#include "dikin/oracle.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "dikin/barrier.hpp"
#include "dikin/center.hpp"
#include "dikin/linalg.hpp"
#include "dikin/rng.hpp"

namespace dikin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string_view to_string(RangeEstimate::Method m) {
  return m == RangeEstimate::Method::Grid ? "grid" : "sampling";
}

Chord feasible_chord(const Intersection& set, const VectorXd& x,
                     const VectorXd& d) {
  double lo = -kInf;
  double hi = kInf;
  for (const auto& con : set.constraints()) {
    // g(x + t d) = c0 + b t + a t^2.
    const double a = -0.5 * d.dot(con.Q.matrix() * d);
    const double b = -con.normal(x).dot(d);
    const double c0 = std::max(con.slack(x), 0.0);
    if (a < 0.0) {
      const double sq = std::sqrt(b * b - 4.0 * a * c0);
      const double qv = -0.5 * (b + std::copysign(sq, b));
      double r1 = 0.0;
      double r2 = 0.0;
      if (qv != 0.0) {
        r1 = qv / a;
        r2 = c0 / qv;
      }
      lo = std::max(lo, std::min(r1, r2));
      hi = std::min(hi, std::max(r1, r2));
    } else if (b > 0.0) {
      lo = std::max(lo, -c0 / b);
    } else if (b < 0.0) {
      hi = std::min(hi, -c0 / b);
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::Unbounded,
                "feasible chord is infinite; the feasible set is unbounded");
  }
  return {std::min(lo, 0.0), std::max(hi, 0.0)};
}

VectorXd radial_boundary_point(const Intersection& set, const VectorXd& from,
                               const VectorXd& through) {
  const VectorXd d = through - from;
  if (d.norm() == 0.0) return from;
  return from + feasible_chord(set, from, d).hi * d;
}

std::vector<VectorXd> sample_feasible(const Intersection& set,
                                      const VectorXd& center, int count,
                                      std::uint64_t seed,
                                      const SamplerOptions& opts) {
  if (center.size() != set.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "center dimension mismatch");
  }
  if (!(set.min_slack(center) > 0.0)) {
    throw Error(ErrorCode::NotStrictlyFeasible,
                "hit-and-run needs a strictly feasible start");
  }
  if (count < 0 || opts.burn_in < 0 || opts.thinning < 1) {
    throw Error(ErrorCode::InvalidArgument, "invalid sampler options");
  }
  Rng rng(seed);
  std::vector<VectorXd> out;
  out.reserve(static_cast<std::size_t>(count));
  VectorXd x = center;
  const long long total =
      opts.burn_in + static_cast<long long>(opts.thinning) * count;
  for (long long step = 1; step <= total; ++step) {
    const VectorXd d = rng.unit_vector(set.dim());
    const Chord ch = feasible_chord(set, x, d);
    x += rng.uniform(ch.lo, ch.hi) * d;
    if (step > opts.burn_in && (step - opts.burn_in) % opts.thinning == 0) {
      out.push_back(x);
    }
  }
  return out;
}

VectorXd polish(const QuadraticObjective& q, const Intersection& set,
                const VectorXd& center, VectorXd x, int steps, bool maximize) {
  const double sign = maximize ? -1.0 : 1.0;
  auto f = [&](const VectorXd& p) { return sign * q.value(p); };
  const VectorXd x_in = x;
  const double f_in = f(x_in);

  // Boundary points are nudged inside so the barrier is finite.
  for (int k = 0; k < 60 && !(set.min_slack(x) > 0.0); ++k) {
    x = center + (1.0 - std::ldexp(1.0, -30 + k / 2)) * (x - center);
  }
  if (!(set.min_slack(x) > 0.0)) return x_in;

  const MatrixXd sq = sign * q.Q.matrix();
  const double scale = 1.0 + std::abs(f(x)) +
                       q.gradient(x).norm() * (1.0 + (x - center).norm());
  int budget = steps;
  for (double mu = 1e-3 * scale; mu > 1e-13 * scale && budget > 0; mu *= 0.1) {
    // Modified Newton on f + mu L: eigenvalues of the Hessian are replaced
    // by their magnitudes so every step is a descent direction.
    for (int it = 0; it < 50 && budget > 0; ++it, --budget) {
      const BarrierEval b = evaluate_barrier(set, x);
      const VectorXd g = sign * q.gradient(x) + mu * b.gradient;
      const MatrixXd h = sq + mu * b.hessian.matrix();
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
      const VectorXd& lam = es.eigenvalues();
      const double floor = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());
      const VectorXd inv = lam.cwiseAbs().cwiseMax(floor).cwiseInverse();
      const VectorXd p =
          -es.eigenvectors() * (inv.asDiagonal() * (es.eigenvectors().transpose() * g));
      const double slope = g.dot(p);
      if (!(-slope > 1e-15 * scale)) break;
      const double phi = f(x) + mu * b.value;
      double t = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
        const VectorXd y = x + t * p;
        if (!(set.min_slack(y) > 0.0)) continue;
        if (f(y) + mu * barrier_value(set, y) <= phi + 1e-4 * t * slope) {
          x = y;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
  }
  return f(x) <= f_in ? x : x_in;
}

namespace {

// Small fixed-size copy of the data for fast grid evaluation.
struct SmallSet {
  int n = 0;
  struct Con {
    std::array<double, 9> q{};
    std::array<double, 3> c{};
    double d = 0.0;
  };
  std::vector<Con> cons;
  std::array<double, 9> oq{};
  std::array<double, 3> oc{};

  SmallSet(const QuadraticObjective& obj, const Intersection& set)
      : n(static_cast<int>(set.dim())) {
    auto copy = [this](const MatrixXd& m, const VectorXd& v,
                       std::array<double, 9>& qa, std::array<double, 3>& ca) {
      for (int i = 0; i < n; ++i) {
        ca[i] = v(i);
        for (int j = 0; j < n; ++j) qa[i * 3 + j] = m(i, j);
      }
    };
    for (const auto& con : set.constraints()) {
      Con c;
      copy(con.Q.matrix(), con.c, c.q, c.c);
      c.d = con.d;
      cons.push_back(c);
    }
    copy(obj.Q.matrix(), obj.c, oq, oc);
  }

  static double quad(const std::array<double, 9>& qa,
                     const std::array<double, 3>& ca, const double* x, int n) {
    double lin = 0.0;
    double quad = 0.0;
    for (int i = 0; i < n; ++i) {
      lin += ca[i] * x[i];
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += qa[i * 3 + j] * x[j];
      quad += x[i] * row;
    }
    return 0.5 * quad + lin;
  }

  bool feasible(const double* x) const {
    for (const auto& c : cons) {
      if (c.d - quad(c.q, c.c, x, n) < 0.0) return false;
    }
    return true;
  }

  double objective(const double* x) const { return quad(oq, oc, x, n); }
};

VectorXd default_center(const Intersection& set) {
  const VectorXd start = find_interior_point(set, 0);
  return analytic_center(set, start).center;
}

}  // namespace

RangeEstimate grid_extrema(const QuadraticObjective& q, const Intersection& set,
                           const GridOptions& opts,
                           const std::optional<VectorXd>& center_in) {
  const Eigen::Index n = set.dim();
  if (n > 3) {
    throw Error(ErrorCode::DimensionTooLarge,
                "grid oracle supports n <= 3, got n = " + std::to_string(n));
  }
  if (q.dim() != n) {
    throw Error(ErrorCode::DimensionMismatch, "objective dimension mismatch");
  }
  const VectorXd center = center_in ? *center_in : default_center(set);
  int res = opts.resolution;
  if (res <= 0) res = n == 1 ? 20001 : (n == 2 ? 801 : 121);
  if (res < 2) throw Error(ErrorCode::InvalidArgument, "resolution < 2");

  VectorXd lo = VectorXd::Constant(n, -kInf);
  VectorXd hi = VectorXd::Constant(n, kInf);
  {
    const SymmetricMatrix h = barrier_hessian(set, center);
    const auto m = static_cast<double>(set.size());
    const MatrixXd hinv = h.matrix().inverse();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double ext = std::sqrt((m * m + m) * hinv(j, j)) * (1.0 + 1e-9);
      lo(j) = center(j) - ext;
      hi(j) = center(j) + ext;
    }
  }
  for (const auto& con : set.constraints()) {
    const auto llt = cholesky(con.Q.matrix());
    if (!llt) continue;
    const MatrixXd qinv = llt->solve(MatrixXd::Identity(n, n));
    const VectorXd z = -qinv * con.c;
    const double r2 = std::max(0.0, 2.0 * con.d + con.c.dot(qinv * con.c));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double ext = std::sqrt(r2 * qinv(j, j)) * (1.0 + 1e-12);
      lo(j) = std::max(lo(j), z(j) - ext);
      hi(j) = std::min(hi(j), z(j) + ext);
    }
  }

  const SmallSet small(q, set);
  RangeEstimate est;
  est.method = RangeEstimate::Method::Grid;
  est.argmin_hat = center;
  est.argmax_hat = center;
  est.z_min_hat = est.z_max_hat = q.value(center);

  std::array<double, 3> x{};
  std::array<int, 3> idx{};
  const long long total = static_cast<long long>(std::pow(res, n));
  std::array<double, 3> best_min{};
  std::array<double, 3> best_max{};
  bool any_min = false;
  bool any_max = false;
  for (long long flat = 0; flat < total; ++flat) {
    long long rem = flat;
    for (int j = 0; j < n; ++j) {
      idx[j] = static_cast<int>(rem % res);
      rem /= res;
      const double t = static_cast<double>(idx[j]) / (res - 1);
      x[j] = lo(j) + t * (hi(j) - lo(j));
    }
    if (!small.feasible(x.data())) continue;
    const double v = small.objective(x.data());
    if (v < est.z_min_hat) {
      est.z_min_hat = v;
      best_min = x;
      any_min = true;
    }
    if (v > est.z_max_hat) {
      est.z_max_hat = v;
      best_max = x;
      any_max = true;
    }
  }
  est.samples_used = total;
  auto to_vec = [n](const std::array<double, 3>& a) {
    VectorXd v(n);
    for (Eigen::Index j = 0; j < n; ++j) v(j) = a[j];
    return v;
  };
  if (any_min) est.argmin_hat = to_vec(best_min);
  if (any_max) est.argmax_hat = to_vec(best_max);

  est.argmin_hat =
      polish(q, set, center, est.argmin_hat, opts.polish_steps, false);
  est.argmax_hat =
      polish(q, set, center, est.argmax_hat, opts.polish_steps, true);
  est.z_min_hat = std::min(est.z_min_hat, q.value(est.argmin_hat));
  est.z_max_hat = std::max(est.z_max_hat, q.value(est.argmax_hat));
  return est;
}

RangeEstimate estimate_range(const QuadraticObjective& q,
                             const Intersection& set, const VectorXd& center,
                             int count, std::uint64_t seed,
                             const std::vector<VectorXd>& extra_points,
                             const RangeOptions& opts) {
  if (q.dim() != set.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "objective dimension mismatch");
  }
  const std::vector<VectorXd> samples =
      sample_feasible(set, center, count, seed);

  std::vector<VectorXd> candidates;
  candidates.reserve(2 * samples.size() + extra_points.size() + 1);
  candidates.push_back(center);
  for (const auto& s : samples) {
    candidates.push_back(s);
    candidates.push_back(radial_boundary_point(set, center, s));
  }
  for (const auto& p : extra_points) {
    if (p.size() == set.dim() && set.min_slack(p) >= -1e-10) {
      candidates.push_back(p);
    }
  }

  RangeEstimate est;
  est.method = RangeEstimate::Method::Sampling;
  est.samples_used = static_cast<long long>(candidates.size());
  est.z_min_hat = est.z_max_hat = q.value(center);
  est.argmin_hat = est.argmax_hat = center;

  auto consider = [&](const VectorXd& p) {
    const double v = q.value(p);
    if (v < est.z_min_hat) {
      est.z_min_hat = v;
      est.argmin_hat = p;
    }
    if (v > est.z_max_hat) {
      est.z_max_hat = v;
      est.argmax_hat = p;
    }
  };

  const std::size_t block = static_cast<std::size_t>(std::max(1, opts.polish_block));
  for (std::size_t start = 0; start < candidates.size(); start += block) {
    const std::size_t stop = std::min(candidates.size(), start + block);
    std::size_t imin = start;
    std::size_t imax = start;
    for (std::size_t i = start; i < stop; ++i) {
      consider(candidates[i]);
      const double v = q.value(candidates[i]);
      if (v < q.value(candidates[imin])) imin = i;
      if (v > q.value(candidates[imax])) imax = i;
    }
    consider(polish(q, set, center, candidates[imin], opts.polish_steps, false));
    consider(polish(q, set, center, candidates[imax], opts.polish_steps, true));
  }

  if (opts.grid_cross_check && set.dim() <= 3) {
    const RangeEstimate grid = grid_extrema(q, set, opts.grid, center);
    consider(grid.argmin_hat);
    consider(grid.argmax_hat);
    est.samples_used += grid.samples_used;
    est.grid_checked = true;
  }
  return est;
}

}  // namespace dikin
