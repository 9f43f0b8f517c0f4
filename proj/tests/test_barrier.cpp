#include <gtest/gtest.h>

#include <cmath>

#include "dikin/barrier.hpp"
#include "dikin/center.hpp"
#include "dikin/generate.hpp"
#include "dikin/oracle.hpp"
#include "dikin/rng.hpp"
#include "support.hpp"

using namespace dikin;
namespace t = dikin::testing;

namespace {

VectorXd scalar(double x) { return VectorXd::Constant(1, x); }

Intersection doubled_interval() {
  const auto f = t::unit_interval();
  return Intersection({f[0], f[0]});
}

// A strictly feasible point drawn along a random ray from the origin.
VectorXd random_interior(const Intersection& set, Rng& rng) {
  const VectorXd dir = rng.unit_vector(set.dim());
  const Chord ch = feasible_chord(set, VectorXd::Zero(set.dim()), dir);
  return rng.uniform(0.05, 0.95) * ch.hi * dir;
}

}  // namespace

TEST(Barrier, UnitIntervalValues) {
  const auto f = t::unit_interval();
  EXPECT_DOUBLE_EQ(barrier_value(f, scalar(0.0)), 0.0);
  EXPECT_NEAR(barrier_value(f, scalar(0.5)), 0.28768207245178090, 1e-15);
  EXPECT_NEAR(barrier_value(doubled_interval(), scalar(0.5)),
              2.0 * -std::log(0.75), 1e-15);
}

TEST(Barrier, UnitIntervalDerivatives) {
  const auto f = t::unit_interval();
  EXPECT_DOUBLE_EQ(barrier_gradient(f, scalar(0.0))(0), 0.0);
  EXPECT_NEAR(barrier_gradient(f, scalar(0.5))(0), 4.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(barrier_hessian(f, scalar(0.0))(0, 0), 2.0);
  for (double x : {-0.9, -0.3, 0.2, 0.7}) {
    const double expect = 2.0 * (1 + x * x) / ((1 - x * x) * (1 - x * x));
    EXPECT_NEAR(barrier_hessian(f, scalar(x))(0, 0), expect, 1e-12 * expect);
  }
}

TEST(Barrier, InfeasiblePointThrowsWithIndex) {
  const auto f = doubled_interval();
  try {
    evaluate_barrier(f, scalar(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotStrictlyFeasible);
    EXPECT_EQ(e.index(), 0);
  }
}

TEST(Barrier, MatchesNaiveSumAndFiniteDifferences) {
  Rng rng(99);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto p = generate_instance(suite_options(seed));
    const auto& set = p.feasible_set;
    for (int k = 0; k < 5; ++k) {
      const VectorXd x = random_interior(set, rng);
      const BarrierEval ev = evaluate_barrier(set, x);
      EXPECT_NEAR(ev.value, t::naive_barrier(set, x),
                  1e-12 * (1 + std::abs(ev.value)));
      const VectorXd g_fd = t::fd_gradient(
          [&](const VectorXd& y) { return t::naive_barrier(set, y); }, x, 1e-6);
      EXPECT_LE((ev.gradient - g_fd).norm(), 1e-5 * (1 + g_fd.norm()));
      const MatrixXd h_fd = t::fd_jacobian(
          [&](const VectorXd& y) { return barrier_gradient(set, y); }, x, 1e-6);
      EXPECT_LE((ev.hessian.matrix() - h_fd).norm(),
                1e-5 * (1 + h_fd.norm()));
    }
  }
}

TEST(Barrier, HessianIsPositiveSemidefinite) {
  Rng rng(5);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto p = generate_instance(suite_options(seed));
    const VectorXd x = random_interior(p.feasible_set, rng);
    const SymmetricMatrix h = barrier_hessian(p.feasible_set, x);
    EXPECT_GE(h.min_eigenvalue(), -1e-12 * h.inf_norm());
  }
}

TEST(ProofQuantities, UnitIntervalHandValues) {
  const auto f = t::unit_interval();
  auto pq = proof_quantities(f, scalar(0.0), scalar(1.0));
  EXPECT_DOUBLE_EQ(pq.deltas(0), 1.0);
  EXPECT_DOUBLE_EQ(pq.slacks_at_center(0), 1.0);
  EXPECT_DOUBLE_EQ(pq.slacks_at_x(0), 0.0);
  EXPECT_DOUBLE_EQ(pq.ratio_terms(0), 1.0);

  pq = proof_quantities(f, scalar(0.0), scalar(0.5));
  EXPECT_DOUBLE_EQ(pq.deltas(0), 0.25);
  EXPECT_DOUBLE_EQ(pq.slacks_at_x(0), 0.75);
  EXPECT_DOUBLE_EQ(pq.ratio_terms(0), 1.0);
}

TEST(ProofQuantities, ZeroDisplacement) {
  const auto p = generate_instance(suite_options(11));
  const VectorXd x = VectorXd::Zero(p.feasible_set.dim());
  const auto pq = proof_quantities(p.feasible_set, x, x);
  EXPECT_EQ(pq.deltas, VectorXd::Zero(pq.deltas.size()));
  EXPECT_EQ(pq.ratio_terms, VectorXd::Ones(pq.ratio_terms.size()));
  EXPECT_EQ(taylor_identity_residual(p.feasible_set, x, x),
            VectorXd::Zero(pq.deltas.size()));
}

TEST(TaylorIdentity, ExactForQuadraticSlacks) {
  EXPECT_LE(taylor_identity_residual(t::unit_interval(), scalar(0.0),
                                     scalar(0.7))
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
  GeneratorOptions o;
  o.n = 5;
  o.m = 4;
  o.seed = 3;
  const auto p = generate_instance(o);
  Rng rng(1);
  for (int k = 0; k < 50; ++k) {
    const VectorXd c = random_interior(p.feasible_set, rng);
    const VectorXd x = 3.0 * rng.normal_vector(5);
    const VectorXd r = taylor_identity_residual(p.feasible_set, c, x);
    const VectorXd s = taylor_identity_scale(p.feasible_set, c, x);
    EXPECT_LE((r.array() / s.array()).abs().maxCoeff(), 1e-10);
  }
}

TEST(CenterSumIdentity, UnitInterval) {
  const auto id =
      center_sum_identity(t::unit_interval(), scalar(0.0), scalar(0.9));
  EXPECT_DOUBLE_EQ(id.lhs, 0.0);
  EXPECT_NEAR(id.sum_ratio, 1.0, 1e-15);
}

TEST(CenterSumIdentity, HoldsAtNewtonCenter) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto p = generate_instance(suite_options(seed));
    const auto& set = p.feasible_set;
    const auto cr = analytic_center(set, VectorXd::Zero(set.dim()));
    const auto m = static_cast<double>(set.size());
    EXPECT_NEAR(center_sum_identity(set, cr.center, cr.center).sum_ratio, m,
                1e-12 * m);
    for (const auto& x : sample_feasible(set, cr.center, 20, seed)) {
      EXPECT_NEAR(center_sum_identity(set, cr.center, x).sum_ratio, m, 1e-6);
    }
  }
}

TEST(CenterSumIdentity, RejectsNonCenter) {
  try {
    center_sum_identity(t::unit_interval(), scalar(0.5), scalar(0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CenterNotStationary);
  }
}

TEST(ProofInequalities, TightOnUnitInterval) {
  const auto f = t::unit_interval();
  auto pi = proof_inequalities(f, scalar(0.0), scalar(1.0));
  EXPECT_DOUBLE_EQ(pi.s1, 1.0);
  EXPECT_DOUBLE_EQ(pi.s2, 1.0);
  EXPECT_TRUE(pi.ok);
  pi = proof_inequalities(f, scalar(0.0), scalar(0.0));
  EXPECT_DOUBLE_EQ(pi.s1, 0.0);
  EXPECT_DOUBLE_EQ(pi.s2, 1.0);
}

TEST(ProofInequalities, HoldOnSampledPoints) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto p = generate_instance(suite_options(seed));
    const auto& set = p.feasible_set;
    const auto cr = analytic_center(set, VectorXd::Zero(set.dim()));
    const auto m = static_cast<double>(set.size());
    for (const auto& x : sample_feasible(set, cr.center, 30, seed)) {
      const auto pi = proof_inequalities(set, cr.center, x);
      EXPECT_TRUE(pi.ok);
      EXPECT_LE(pi.s1, m + 1e-6);
      EXPECT_LE(pi.s2, m * m + 1e-6);
    }
  }
}

TEST(ProofInequalities, InfeasiblePointThrows) {
  try {
    proof_inequalities(t::unit_interval(), scalar(0.0), scalar(1.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfeasiblePoint);
  }
}

TEST(DikinDecomposition, CoefficientTwoIsPinned) {
  const auto f = t::unit_interval();
  const auto pq = proof_quantities(f, scalar(0.0), scalar(1.0));
  EXPECT_DOUBLE_EQ(pq.dikin_norm_sq, 2.0);
  EXPECT_DOUBLE_EQ(dikin_decomposition(pq), 2.0);
  EXPECT_DOUBLE_EQ(dikin_decomposition(pq, 1.0), 1.0);
  EXPECT_EQ(dikin_decomposition_residual(f, scalar(0.0), scalar(1.0)), 0.0);
  EXPECT_EQ(dikin_decomposition_residual(f, scalar(0.0), scalar(0.0)), 0.0);
}

TEST(DikinDecomposition, RandomEightDimensional) {
  GeneratorOptions o;
  o.n = 8;
  o.m = 5;
  o.seed = 17;
  const auto p = generate_instance(o);
  const auto cr = analytic_center(p.feasible_set, VectorXd::Zero(8));
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const VectorXd x = cr.center + rng.normal_vector(8);
    const auto pq = proof_quantities(p.feasible_set, cr.center, x);
    EXPECT_LE(dikin_decomposition_residual(p.feasible_set, cr.center, x),
              1e-9 * std::max(1.0, pq.dikin_norm_sq));
  }
}
