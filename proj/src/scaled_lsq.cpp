#include "scaled_lsq.hpp"

#include <limits>

namespace fdw::detail {

ScaledSolve scaled_lstsq(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y) {
  ScaledSolve out;
  out.scales = A.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < out.scales.size(); ++j) {
    if (out.scales(j) == 0.0) out.scales(j) = 1.0;
  }
  const Eigen::MatrixXd As = A * out.scales.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  out.condition_number = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  out.x = out.scales.cwiseInverse().asDiagonal() * svd.solve(Y);
  const double ynorm = Y.norm();
  out.residual = ynorm > 0.0 ? (A * out.x - Y).norm() / ynorm : 0.0;
  return out;
}

}  // namespace fdw::detail
