#pragma once

// Model self-adjoint operators with explicit eigenpairs on an interval
// (0, L). Eigenfunctions are the Dirichlet sine modes
//   phi_n(x) = sqrt(2/L) sin(n pi x / L),  n = 1..M,
// and the eigenvalues are either those of -d^2/dx^2, (n pi / L)^2, or a
// user-supplied strictly increasing positive sequence.

#include <functional>
#include <span>
#include <vector>

#include "fdw/quadrature.hpp"

namespace fdw {

/// Spectral coefficients c_1..c_M against the operator's eigenfunctions.
struct SpatialField {
  std::vector<double> coeffs;

  std::size_t modes() const noexcept { return coeffs.size(); }
  bool is_zero() const noexcept;
  double norm() const noexcept;  // l2 norm of the coefficients
};

SpatialField zero_field(std::size_t modes);

class SpectralOperator {
 public:
  /// -u'' on (0, length) with Dirichlet conditions.
  static SpectralOperator dirichlet_laplacian_1d(double length, int modes);
  /// Prescribed eigenvalues with sine eigenfunctions on (0, length).
  /// domain_dim only enters the Weyl growth check.
  static SpectralOperator diagonal(std::vector<double> eigenvalues, double length, int domain_dim = 1);

  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  double eigenvalue(int n) const { return eigenvalues_.at(static_cast<std::size_t>(n - 1)); }
  int modes() const noexcept { return static_cast<int>(eigenvalues_.size()); }
  double length() const noexcept { return length_; }
  int domain_dim() const noexcept { return domain_dim_; }

  /// phi_n(x), n is 1-based.
  double eigenfunction(int n, double x) const;
  /// phi_1(x) .. phi_M(x).
  std::vector<double> eigenfunctions_at(double x) const;

 private:
  SpectralOperator(std::vector<double> eigenvalues, double length, int domain_dim);

  std::vector<double> eigenvalues_;
  double length_;
  int domain_dim_;
};

/// sum_n c_n phi_n(x)
double synthesize(const SpectralOperator& op, const SpatialField& field, double x);
std::vector<double> synthesize(const SpectralOperator& op, const SpatialField& field,
                               std::span<const double> xs);

inline constexpr int kDefaultProjectionNodes = 512;

/// Composite Gauss-Legendre grid on (0, L): panels of 16 nodes.
QuadratureGrid projection_grid(const SpectralOperator& op, int nodes = kDefaultProjectionNodes);

/// c_n = sum_i w_i f(x_i) phi_n(x_i) over a projection grid.
/// Throws GridTooCoarse when the grid has fewer than 8 nodes per
/// oscillation of the highest mode (4 M nodes in total).
SpatialField project(const SpectralOperator& op, const QuadratureGrid& grid,
                     std::span<const double> samples);
SpatialField project(const SpectralOperator& op, const std::function<double(double)>& f,
                     int nodes = kDefaultProjectionNodes);

struct WeylFit {
  double c0 = 0.0;             // geometric mean of lambda_n / n^{2/d} over the fit range
  double slope = 0.0;          // log-log regression slope over the fit range
  double max_rel_residual = 0.0;
  bool holds = false;          // max_rel_residual < 0.05
};

/// Fits lambda_n ~ c0 n^{2/d} over the top half of the modes.
/// Requires at least 10 modes.
WeylFit weyl_check(const SpectralOperator& op);

}  // namespace fdw
