#include "dikin/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dikin {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotStrictlyFeasible: return "NotStrictlyFeasible";
    case ErrorCode::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorCode::CenterNotStationary: return "CenterNotStationary";
    case ErrorCode::NoInteriorFound: return "NoInteriorFound";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::MetricNotPD: return "MetricNotPD";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::EpsilonOutOfRange: return "EpsilonOutOfRange";
    case ErrorCode::MTooSmall: return "MTooSmall";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

SymmetricMatrix::SymmetricMatrix(const MatrixXd& a) {
  if (a.rows() != a.cols()) {
    std::ostringstream os;
    os << "matrix is " << a.rows() << "x" << a.cols() << ", expected square";
    throw Error(ErrorCode::DimensionMismatch, os.str());
  }
  m_ = 0.5 * (a + a.transpose());
  if (a.size() > 0) asymmetry_ = (a - a.transpose()).cwiseAbs().maxCoeff();
}

SymmetricMatrix SymmetricMatrix::zero(Eigen::Index n) {
  return SymmetricMatrix(MatrixXd::Zero(n, n));
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index n, double scale) {
  return SymmetricMatrix(scale * MatrixXd::Identity(n, n));
}

double SymmetricMatrix::inf_norm() const {
  if (m_.size() == 0) return 0.0;
  return m_.cwiseAbs().rowwise().sum().maxCoeff();
}

double SymmetricMatrix::min_eigenvalue() const {
  if (m_.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double EllipsoidConstraint::slack(const VectorXd& x) const {
  return d - c.dot(x) - 0.5 * x.dot(Q.matrix() * x);
}

VectorXd EllipsoidConstraint::normal(const VectorXd& x) const {
  return c + Q.matrix() * x;
}

double constraint_slack(const EllipsoidConstraint& con, const VectorXd& x) {
  if (x.size() != con.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "point has dimension " + std::to_string(x.size()) +
                    ", constraint has " + std::to_string(con.dim()));
  }
  return con.slack(x);
}

Intersection::Intersection(std::vector<EllipsoidConstraint> constraints)
    : constraints_(std::move(constraints)) {
  if (constraints_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "intersection needs m >= 1");
  }
  n_ = constraints_.front().dim();
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto& con = constraints_[i];
    if (con.dim() != n_ || con.Q.dim() != n_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "constraint " + std::to_string(i) + " has dimension " +
                      std::to_string(con.dim()) + ", expected " +
                      std::to_string(n_),
                  static_cast<int>(i));
    }
  }
}

VectorXd Intersection::slacks(const VectorXd& x) const {
  if (x.size() != n_) {
    throw Error(ErrorCode::DimensionMismatch,
                "point has dimension " + std::to_string(x.size()) +
                    ", feasible set has " + std::to_string(n_));
  }
  VectorXd g(static_cast<Eigen::Index>(constraints_.size()));
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    g(static_cast<Eigen::Index>(i)) = constraints_[i].slack(x);
  }
  return g;
}

double Intersection::min_slack(const VectorXd& x) const {
  return slacks(x).minCoeff();
}

std::string_view to_string(Feasibility f) {
  switch (f) {
    case Feasibility::Strict: return "Strict";
    case Feasibility::Boundary: return "Boundary";
    case Feasibility::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

Feasibility feasibility(const Intersection& set, const VectorXd& x,
                        double tol) {
  const VectorXd g = set.slacks(x);
  if ((g.array() > tol).all()) return Feasibility::Strict;
  if ((g.array() < -tol).any()) return Feasibility::Infeasible;
  return Feasibility::Boundary;
}

double QuadraticObjective::value(const VectorXd& x) const {
  return 0.5 * x.dot(Q.matrix() * x) + c.dot(x);
}

VectorXd QuadraticObjective::gradient(const VectorXd& x) const {
  return Q.matrix() * x + c;
}

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::NotSymmetric: return "not_symmetric";
    case Violation::Kind::PsdClamped: return "psd_clamped";
    case Violation::Kind::NotPsd: return "not_psd";
    case Violation::Kind::NonFinite: return "non_finite";
    case Violation::Kind::Dimension: return "dimension";
    case Violation::Kind::HintNotInterior: return "hint_not_interior";
  }
  return "unknown";
}

bool ValidationReport::ok() const {
  return std::none_of(entries.begin(), entries.end(),
                      [](const Violation& v) { return !v.informational; });
}

std::vector<Violation> ValidationReport::failures() const {
  std::vector<Violation> out;
  for (const auto& v : entries) {
    if (!v.informational) out.push_back(v);
  }
  return out;
}

std::vector<Violation> ValidationReport::notes() const {
  std::vector<Violation> out;
  for (const auto& v : entries) {
    if (v.informational) out.push_back(v);
  }
  return out;
}

namespace {

void check_matrix(const SymmetricMatrix& q, int index, const char* what,
                  ValidationReport& report) {
  if (!q.all_finite()) {
    report.entries.push_back({Violation::Kind::NonFinite, index,
                              std::string(what) + " has non-finite entries"});
    return;
  }
  if (q.was_symmetrized()) {
    std::ostringstream os;
    os.precision(3);
    os << what << " was symmetrized (max asymmetry " << q.asymmetry() << ")";
    report.entries.push_back(
        {Violation::Kind::NotSymmetric, index, os.str(), true});
  }
}

}  // namespace

ValidationReport validate(const ProblemInstance& problem, double feas_tol) {
  ValidationReport report;
  const auto& set = problem.feasible_set;
  const Eigen::Index n = set.dim();

  if (problem.declared_dim != 0 && problem.declared_dim != n) {
    report.entries.push_back(
        {Violation::Kind::Dimension, -1,
         "declared n = " + std::to_string(problem.declared_dim) +
             " but constraints have dimension " + std::to_string(n)});
  }
  const auto& obj = problem.objective;
  if (obj.c.size() != n || obj.Q.dim() != n) {
    report.entries.push_back(
        {Violation::Kind::Dimension, -1,
         "objective has dimension " + std::to_string(obj.c.size()) +
             " but constraints have dimension " + std::to_string(n)});
  }
  check_matrix(obj.Q, -1, "objective Q", report);
  if (!obj.c.allFinite()) {
    report.entries.push_back(
        {Violation::Kind::NonFinite, -1, "objective c has non-finite entries"});
  }

  for (std::size_t k = 0; k < set.size(); ++k) {
    const int i = static_cast<int>(k);
    const auto& con = set[k];
    const std::string label = "constraint " + std::to_string(i) + " Q";
    check_matrix(con.Q, i, label.c_str(), report);
    if (!con.c.allFinite() || !std::isfinite(con.d)) {
      report.entries.push_back({Violation::Kind::NonFinite, i,
                                "constraint " + std::to_string(i) +
                                    " has non-finite c or d"});
      continue;
    }
    if (!con.Q.all_finite()) continue;
    const double lmin = con.Q.min_eigenvalue();
    const double tol = con.psd_tolerance();
    std::ostringstream os;
    os.precision(17);
    if (lmin < -tol) {
      os << "constraint " << i << " Q has eigenvalue " << lmin
         << " < -psd_tol = " << -tol;
      report.entries.push_back({Violation::Kind::NotPsd, i, os.str()});
    } else if (lmin < 0.0) {
      os << "constraint " << i << " Q eigenvalue " << lmin
         << " clamped to 0";
      report.entries.push_back(
          {Violation::Kind::PsdClamped, i, os.str(), true});
    }
  }

  if (problem.interior_hint) {
    const VectorXd& hint = *problem.interior_hint;
    if (hint.size() != n) {
      report.entries.push_back(
          {Violation::Kind::Dimension, -1,
           "interior_hint has dimension " + std::to_string(hint.size())});
    } else {
      const VectorXd g = set.slacks(hint);
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        if (!(g(i) > feas_tol)) {
          std::ostringstream os;
          os.precision(17);
          os << "interior_hint has slack " << g(i) << " at constraint " << i;
          report.entries.push_back({Violation::Kind::HintNotInterior,
                                    static_cast<int>(i), os.str()});
        }
      }
    }
  }
  return report;
}

EllipsoidConstraint clamp_psd(const EllipsoidConstraint& con) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(con.Q.matrix());
  const double tol = con.psd_tolerance();
  VectorXd lambda = es.eigenvalues();
  if (lambda.size() > 0 && lambda(0) < -tol) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "constraint matrix is not positive semidefinite");
  }
  if (lambda.size() == 0 || lambda(0) >= 0.0) return con;
  lambda = lambda.cwiseMax(0.0);
  const MatrixXd& v = es.eigenvectors();
  return {SymmetricMatrix(v * lambda.asDiagonal() * v.transpose()), con.c,
          con.d};
}

}  // namespace dikin
