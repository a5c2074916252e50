#include "fdw/ode_lab.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "fdw/error.hpp"
#include "fdw/format.hpp"
#include "fdw/inverse.hpp"
#include "scaled_lsq.hpp"

namespace fdw {

namespace {

void check_samples(std::span<const double> t, std::span<const double> y, double T, int columns) {
  require(t.size() == y.size(), "times and values differ in length");
  require(t.size() >= static_cast<std::size_t>(3 * columns), "need at least three samples per column");
  for (double ti : t) require(ti > 2.0 * T, "sample times must exceed 2T");
}

void check_condition(double cond) {
  if (!(cond <= kPeelConditionLimit)) {
    fail(ErrorKind::IllConditioned,
         "scalar fit: condition number " + format_double(cond) + " exceeds " +
             format_double(kPeelConditionLimit));
  }
}

std::vector<SourceProfile> dual_profiles(double T, int L) {
  std::vector<SourceProfile> out;
  for (auto& c : moment_dual_basis(T, L)) out.emplace_back(std::vector<PolynomialPiece>{{0.0, T, c}}, T);
  return out;
}

}  // namespace

double solve_scalar(const FractionalOrder& alpha, double lambda, double a, double b,
                    const SourceProfile& mu, double t) {
  require(t > 0.0, "t must be positive");
  const Kernels& ker = kernels_for(alpha);
  double u = a * ker.relaxation(lambda, t);
  if (alpha.has_velocity()) u += b * ker.velocity(lambda, t);
  return u + ker.duhamel(lambda, mu, t);
}

std::vector<std::vector<double>> moment_dual_basis(double T, int L) {
  require(T > 0.0, "T must be positive");
  require(L >= 0, "moment count must be nonnegative");
  // Work in s = T sigma, then rescale the monomial coefficients.
  const int n = L + 1;
  Eigen::MatrixXd H(n, n);
  for (int m = 0; m < n; ++m) {
    for (int j = 0; j < n; ++j) H(m, j) = ((m % 2) ? -1.0 : 1.0) / (m + j + 1);
  }
  const Eigen::MatrixXd C = H.fullPivLu().inverse();
  std::vector<std::vector<double>> out(n, std::vector<double>(n));
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < n; ++j) out[l][j] = C(j, l) / std::pow(T, j + l + 1);
  }
  return out;
}

ScalarRecovery recover_scalar(std::span<const double> t, std::span<const double> y,
                              const FractionalOrder& alpha, double lambda, double T,
                              int moment_count) {
  require(lambda > 0.0, "lambda must be positive");
  require(moment_count >= 0, "moment count must be nonnegative");
  const int L = moment_count;
  const int lead = alpha.has_velocity() ? 2 : 1;
  const int cols = lead + L + 1;
  check_samples(t, y, T, cols);

  const Kernels& ker = kernels_for(alpha);
  const std::vector<SourceProfile> basis = dual_profiles(T, L);
  Eigen::MatrixXd A(t.size(), cols);
  Eigen::VectorXd rhs(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    rhs(i) = y[i];
    A(i, 0) = ker.relaxation(lambda, t[i]);
    if (lead == 2) A(i, 1) = ker.velocity(lambda, t[i]);
    for (int l = 0; l <= L; ++l) A(i, lead + l) = ker.duhamel(lambda, basis[l], t[i]);
  }
  const detail::ScaledSolve sol = detail::scaled_lstsq(A, rhs);
  check_condition(sol.condition_number);

  ScalarRecovery out;
  out.a_hat = sol.x(0, 0);
  if (lead == 2) out.b_hat = sol.x(1, 0);
  for (int l = 0; l <= L; ++l) out.moments.push_back(sol.x(lead + l, 0));
  out.verified_moments = L + 1;
  out.condition_number = sol.condition_number;
  out.residual = sol.residual;
  return out;
}

PointRecovery point_observation_recover(const ProblemSpec& spec, double x0,
                                        std::span<const double> t, std::span<const double> y,
                                        int moment_count) {
  validate(spec);
  require(spec.a.is_zero() && spec.b.is_zero(), "point observation recovery needs zero initial data");
  require(moment_count >= 0, "moment count must be nonnegative");
  const int L = moment_count;
  const double T = spec.horizon_T;
  check_samples(t, y, T, L + 1);

  PointRecovery out;
  const std::vector<double> phi = spec.op.eigenfunctions_at(x0);
  std::vector<double> w(phi.size());
  for (std::size_t n = 0; n < phi.size(); ++n) {
    w[n] = spec.f.coeffs[n] * phi[n];
    out.weight_sum += w[n];
  }
  if (std::abs(out.weight_sum) <= kDegeneratePointTolerance) {
    fail(ErrorKind::DegeneratePoint,
         "f(x0) = " + format_double(out.weight_sum) + " vanishes at x0 = " + format_double(x0));
  }

  const Kernels& ker = kernels_for(spec.alpha);
  const std::vector<SourceProfile> basis = dual_profiles(T, L);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(t.size(), L + 1);
  Eigen::VectorXd rhs(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    rhs(i) = y[i];
    for (int l = 0; l <= L; ++l) {
      for (std::size_t n = 0; n < w.size(); ++n) {
        if (w[n] != 0.0) A(i, l) += w[n] * ker.duhamel(spec.op.eigenvalues()[n], basis[l], t[i]);
      }
    }
  }
  const detail::ScaledSolve sol = detail::scaled_lstsq(A, rhs);
  check_condition(sol.condition_number);
  for (int l = 0; l <= L; ++l) out.moments.push_back(sol.x(l, 0));
  out.condition_number = sol.condition_number;
  out.residual = sol.residual;
  return out;
}

}  // namespace fdw
