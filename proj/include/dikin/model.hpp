#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dikin/error.hpp"

namespace dikin {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Dense symmetric matrix. Input is symmetrized as (A + A^T) / 2 on
/// construction; the largest pre-symmetrization mismatch is kept so the
/// validation report can mention it.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const MatrixXd& a);

  static SymmetricMatrix zero(Eigen::Index n);
  static SymmetricMatrix identity(Eigen::Index n, double scale = 1.0);

  Eigen::Index dim() const { return m_.rows(); }
  const MatrixXd& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  /// max |a_ij - a_ji| of the matrix passed to the constructor.
  double asymmetry() const { return asymmetry_; }
  bool was_symmetrized() const { return asymmetry_ > 0.0; }
  bool all_finite() const { return m_.allFinite(); }

  /// Infinity norm (max absolute row sum).
  double inf_norm() const;
  double min_eigenvalue() const;
  bool is_zero() const { return m_.isZero(0.0); }

 private:
  MatrixXd m_;
  double asymmetry_ = 0.0;
};

/// One constraint g(x) = d - c^T x - 1/2 x^T Q x >= 0 with Q PSD.
struct EllipsoidConstraint {
  SymmetricMatrix Q;
  VectorXd c;
  double d = 0.0;

  Eigen::Index dim() const { return c.size(); }

  /// d - c^T x - 1/2 x^T Q x.
  double slack(const VectorXd& x) const;
  /// c + Q x, i.e. minus the gradient of the slack.
  VectorXd normal(const VectorXd& x) const;
  /// Default PSD tolerance 1e-10 * ||Q||_inf.
  double psd_tolerance() const { return 1e-10 * Q.inf_norm(); }
};

/// Evaluate d - c^T x - 1/2 x^T Q x; throws DimensionMismatch.
double constraint_slack(const EllipsoidConstraint& con, const VectorXd& x);

/// The feasible set: m >= 1 constraints sharing a dimension.
class Intersection {
 public:
  explicit Intersection(std::vector<EllipsoidConstraint> constraints);

  Eigen::Index dim() const { return n_; }
  std::size_t size() const { return constraints_.size(); }
  const std::vector<EllipsoidConstraint>& constraints() const {
    return constraints_;
  }
  const EllipsoidConstraint& operator[](std::size_t i) const {
    return constraints_[i];
  }

  VectorXd slacks(const VectorXd& x) const;
  double min_slack(const VectorXd& x) const;

 private:
  std::vector<EllipsoidConstraint> constraints_;
  Eigen::Index n_ = 0;
};

enum class Feasibility { Strict, Boundary, Infeasible };

std::string_view to_string(Feasibility f);

/// Strict if all g_i > tol, Infeasible if some g_i < -tol, Boundary otherwise.
Feasibility feasibility(const Intersection& set, const VectorXd& x,
                        double tol);

/// q(x) = 1/2 x^T Q x + c^T x; Q may be indefinite.
struct QuadraticObjective {
  SymmetricMatrix Q;
  VectorXd c;

  Eigen::Index dim() const { return c.size(); }
  double value(const VectorXd& x) const;
  VectorXd gradient(const VectorXd& x) const;
};

struct ProblemInstance {
  QuadraticObjective objective;
  Intersection feasible_set;
  std::optional<VectorXd> interior_hint;
  /// Value of the "n" field when read from a file; 0 means unset.
  Eigen::Index declared_dim = 0;

  Eigen::Index dim() const { return feasible_set.dim(); }
  std::size_t num_constraints() const { return feasible_set.size(); }
};

struct Violation {
  enum class Kind {
    NotSymmetric,  // informational: input was symmetrized
    PsdClamped,    // informational: eigenvalue in [-psd_tol, 0) clamped
    NotPsd,
    NonFinite,
    Dimension,
    HintNotInterior,
  };
  Kind kind;
  /// Constraint index, or -1 for the objective / instance level.
  int index;
  std::string message;
  /// Informational entries (normalizations) do not fail validation.
  bool informational = false;
};

std::string_view to_string(Violation::Kind kind);

struct ValidationReport {
  std::vector<Violation> entries;

  bool ok() const;
  std::vector<Violation> failures() const;
  std::vector<Violation> notes() const;
};

/// Checks symmetry, PSD of each Q_i (via eigendecomposition), finiteness,
/// dimension consistency and strict feasibility of the hint.
ValidationReport validate(const ProblemInstance& problem,
                          double feas_tol = 1e-12);

/// Returns a copy of the constraint with eigenvalues in [-psd_tol, 0)
/// raised to zero. Throws NotPositiveDefinite if any eigenvalue is below
/// -psd_tol.
EllipsoidConstraint clamp_psd(const EllipsoidConstraint& con);

}  // namespace dikin
