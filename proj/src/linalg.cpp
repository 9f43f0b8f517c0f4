#include "dikin/linalg.hpp"

namespace dikin {

std::optional<Eigen::LLT<Eigen::MatrixXd>> cholesky(const Eigen::MatrixXd& a,
                                                    double min_rcond) {
  if (a.size() == 0 || !a.allFinite()) return std::nullopt;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) return std::nullopt;
  if (!(llt.rcond() >= min_rcond)) return std::nullopt;
  return llt;
}

std::optional<JitteredCholesky> cholesky_with_jitter(const Eigen::MatrixXd& a) {
  static constexpr double kLadder[] = {0.0, 1e-12, 1e-9, 1e-6};
  if (a.size() == 0 || !a.allFinite()) return std::nullopt;
  const double scale = std::abs(a.trace()) / static_cast<double>(a.rows());
  for (double rung : kLadder) {
    const double jitter = rung * scale;
    Eigen::MatrixXd shifted = a;
    shifted.diagonal().array() += jitter;
    if (auto llt = cholesky(shifted)) return JitteredCholesky{*llt, jitter};
  }
  return std::nullopt;
}

}  // namespace dikin
