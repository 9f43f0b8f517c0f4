#include "dikin/generate.hpp"

#include <cmath>

#include "dikin/rng.hpp"

namespace dikin {

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Balls: return "balls";
    case InstanceKind::Mixed: return "mixed";
    case InstanceKind::HalfspaceCapped: return "halfspace-capped";
  }
  return "unknown";
}

std::optional<InstanceKind> parse_instance_kind(std::string_view name) {
  if (name == "balls") return InstanceKind::Balls;
  if (name == "mixed") return InstanceKind::Mixed;
  if (name == "halfspace-capped") return InstanceKind::HalfspaceCapped;
  return std::nullopt;
}

namespace {

MatrixXd random_spd(Eigen::Index n, double cond, Rng& rng, Eigen::Index drop) {
  MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.normal();
  }
  const MatrixXd b = a.transpose() * a / static_cast<double>(n) +
                     0.1 * MatrixXd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(b);
  const VectorXd logs = es.eigenvalues().array().log();
  const double lo = logs.minCoeff();
  const double span = logs.maxCoeff() - lo;
  const double scale = rng.uniform(0.5, 2.0);
  VectorXd spec(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double t = span > 0.0 ? (logs(j) - lo) / span : 0.0;
    spec(j) = scale * std::pow(cond, t);
  }
  // Eigenvalues ascend, so dropping the first `drop` leaves a PSD matrix of
  // rank n - drop.
  spec.head(drop).setZero();
  const MatrixXd& v = es.eigenvectors();
  return v * spec.asDiagonal() * v.transpose();
}

}  // namespace

ProblemInstance generate_instance(const GeneratorOptions& opts) {
  if (opts.n < 1 || opts.m < 1 || !(opts.cond >= 1.0) ||
      !(opts.margin > 0.0) || !(opts.cap_radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "invalid generator options");
  }
  const Eigen::Index n = opts.n;
  Rng rng(opts.seed);

  std::vector<EllipsoidConstraint> cons;
  for (int i = 0; i < opts.m; ++i) {
    Rng local = rng.split(static_cast<std::uint64_t>(i));
    enum class Shape { Ball, Halfspace, Cylinder, Cap } shape = Shape::Ball;
    switch (opts.kind) {
      case InstanceKind::Balls:
        shape = Shape::Ball;
        break;
      case InstanceKind::Mixed:
        shape = i == 0 ? Shape::Ball
                       : (i % 2 == 1 ? Shape::Halfspace : Shape::Cylinder);
        break;
      case InstanceKind::HalfspaceCapped:
        shape = i == opts.m - 1
                    ? Shape::Cap
                    : (i % 2 == 0 ? Shape::Halfspace : Shape::Cylinder);
        break;
    }
    EllipsoidConstraint con;
    switch (shape) {
      case Shape::Ball:
        con.Q = SymmetricMatrix(random_spd(n, opts.cond, local, 0));
        break;
      case Shape::Halfspace:
        con.Q = SymmetricMatrix::zero(n);
        break;
      case Shape::Cylinder:
        con.Q = SymmetricMatrix(
            random_spd(n, opts.cond, local, std::max<Eigen::Index>(1, n / 2)));
        break;
      case Shape::Cap:
        con.Q = SymmetricMatrix::identity(
            n, 2.0 / (opts.cap_radius * opts.cap_radius));
        break;
    }
    if (shape == Shape::Cap) {
      con.c = VectorXd::Zero(n);
      con.d = 1.0;
    } else {
      con.c = 0.5 * local.normal_vector(n);
      con.d = opts.margin + local.uniform(0.5, 1.5);
    }
    cons.push_back(std::move(con));
  }

  Rng obj_rng = rng.split(0xFFFFu);
  MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = obj_rng.normal();
  }
  QuadraticObjective objective{SymmetricMatrix(0.5 * (g + g.transpose())),
                               obj_rng.normal_vector(n)};
  return ProblemInstance{std::move(objective), Intersection(std::move(cons)),
                         VectorXd::Zero(n), n};
}

ProblemInstance example1_instance() {
  QuadraticObjective q{SymmetricMatrix(MatrixXd::Constant(1, 1, -2.0)),
                       VectorXd::Zero(1)};
  Intersection set({EllipsoidConstraint{
      SymmetricMatrix(MatrixXd::Constant(1, 1, 2.0)), VectorXd::Zero(1), 1.0}});
  return ProblemInstance{std::move(q), std::move(set), VectorXd::Zero(1), 1};
}

GeneratorOptions suite_options(std::uint64_t seed) {
  GeneratorOptions o;
  o.seed = seed;
  o.n = 2 + static_cast<int>((seed - 1) % 9);
  o.m = 1 + static_cast<int>((5 * seed) % 8);
  static constexpr InstanceKind kKinds[] = {
      InstanceKind::Balls, InstanceKind::Mixed, InstanceKind::HalfspaceCapped};
  o.kind = kKinds[seed % 3];
  return o;
}

}  // namespace dikin
