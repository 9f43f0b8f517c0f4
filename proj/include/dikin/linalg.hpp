#pragma once

#include <optional>

#include <Eigen/Dense>

namespace dikin {

/// Cholesky with the diagonal jitter ladder {0, 1e-12, 1e-9, 1e-6} * trace/n.
/// Returns nothing if every rung fails.
struct JitteredCholesky {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};
std::optional<JitteredCholesky> cholesky_with_jitter(const Eigen::MatrixXd& a);

/// Plain Cholesky; nothing if `a` is not numerically positive definite
/// (failed factorization or reciprocal condition estimate below min_rcond).
std::optional<Eigen::LLT<Eigen::MatrixXd>> cholesky(const Eigen::MatrixXd& a,
                                                    double min_rcond = 1e-14);

}  // namespace dikin
