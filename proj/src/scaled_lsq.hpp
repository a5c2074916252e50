#pragma once

#include <Eigen/Dense>

namespace fdw::detail {

struct ScaledSolve {
  Eigen::MatrixXd x;
  Eigen::VectorXd scales;
  double condition_number = 0.0;
  double residual = 0.0;  // ||A x - Y||_F / ||Y||_F, zero for zero data
};

/// Least squares A x = Y with the columns of A normalized to unit length.
/// Zero columns keep scale 1. The condition number is that of the
/// normalized matrix; infinite when it is rank deficient in floating point.
ScaledSolve scaled_lstsq(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y);

}  // namespace fdw::detail
