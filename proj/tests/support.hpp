#pragma once

// Independent reference computations for the test suites. Nothing here calls
// the solver code paths it is used to check.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "dikin/model.hpp"

namespace dikin::testing {

inline Intersection unit_interval() {
  return Intersection({EllipsoidConstraint{
      SymmetricMatrix(MatrixXd::Constant(1, 1, 2.0)), VectorXd::Zero(1), 1.0}});
}

inline EllipsoidConstraint halfspace(const VectorXd& c, double d) {
  return EllipsoidConstraint{SymmetricMatrix::zero(c.size()), c, d};
}

// {x >= 0} and {x <= 1} in one dimension.
inline Intersection halfspace_pair() {
  return Intersection({halfspace(VectorXd::Constant(1, -1.0), 0.0),
                       halfspace(VectorXd::Constant(1, 1.0), 1.0)});
}

inline Intersection unit_ball(Eigen::Index n) {
  return Intersection({EllipsoidConstraint{SymmetricMatrix::identity(n, 2.0),
                                           VectorXd::Zero(n), 1.0}});
}

// Sum of -log slacks evaluated term by term.
inline double naive_barrier(const Intersection& set, const VectorXd& x) {
  double v = 0.0;
  for (const auto& con : set.constraints()) {
    const double g = con.d - con.c.dot(x) - 0.5 * x.dot(con.Q.matrix() * x);
    v -= std::log(g);
  }
  return v;
}

inline VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f,
                            const VectorXd& x, double h) {
  VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

inline MatrixXd fd_jacobian(
    const std::function<VectorXd(const VectorXd&)>& f, const VectorXd& x,
    double h) {
  MatrixXd j(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    j.col(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return j;
}

// Brute-force minimum of 1/2 x^T A x + b^T x over (x-z)^T H (x-z) <= r^2,
// n <= 3: x = z + r W u with H = V D V^T, W = V D^-1/2 and u in the unit
// ball. A dense grid in u is followed by projected gradient descent from the
// best few grid points.
struct GridMin {
  double value = std::numeric_limits<double>::infinity();
  VectorXd argmin;
};

inline GridMin trs_grid_oracle(const MatrixXd& a, const VectorXd& b,
                               const MatrixXd& h, const VectorXd& z, double r) {
  const Eigen::Index n = a.rows();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
  const MatrixXd w = r * es.eigenvectors() *
                     es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  const MatrixXd au = w.transpose() * a * w;
  const VectorXd bu = w.transpose() * (a * z + b);
  const double base = 0.5 * z.dot(a * z) + b.dot(z);
  auto f = [&](const VectorXd& u) { return base + 0.5 * u.dot(au * u) + bu.dot(u); };

  std::vector<std::pair<double, VectorXd>> best;
  auto offer = [&](const VectorXd& u) {
    const double v = f(u);
    if (best.size() < 8 || v < best.back().first) {
      best.emplace_back(v, u);
      std::sort(best.begin(), best.end(),
                [](const auto& p, const auto& q) { return p.first < q.first; });
      if (best.size() > 8) best.pop_back();
    }
  };
  const int k = n == 1 ? 20001 : (n == 2 ? 801 : 101);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      u(i) = -1.0 + 2.0 * idx[static_cast<std::size_t>(i)] / (k - 1);
    }
    const double nrm = u.norm();
    if (nrm <= 1.0) offer(u);
    // Boundary points along the same ray keep the sphere covered.
    if (nrm > 0.0) offer(u / nrm);
    Eigen::Index i = 0;
    while (i < n && ++idx[static_cast<std::size_t>(i)] == k) {
      idx[static_cast<std::size_t>(i)] = 0;
      ++i;
    }
    if (i == n) break;
  }

  const double lip = std::max(1e-12, au.cwiseAbs().rowwise().sum().maxCoeff());
  GridMin out;
  for (auto [v, u] : best) {
    for (int it = 0; it < 20000; ++it) {
      VectorXd next = u - (au * u + bu) / lip;
      const double nn = next.norm();
      if (nn > 1.0) next /= nn;
      if ((next - u).norm() < 1e-15) break;
      u = next;
    }
    const double fv = f(u);
    if (fv < out.value) {
      out.value = fv;
      out.argmin = z + w * u;
    }
  }
  return out;
}

inline double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace dikin::testing
