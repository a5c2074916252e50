#include "fdw/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fdw/error.hpp"

namespace fdw {

bool SpatialField::is_zero() const noexcept {
  for (double c : coeffs) {
    if (c != 0.0) return false;
  }
  return true;
}

double SpatialField::norm() const noexcept {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return std::sqrt(s);
}

SpatialField zero_field(std::size_t modes) { return SpatialField{std::vector<double>(modes, 0.0)}; }

SpectralOperator::SpectralOperator(std::vector<double> eigenvalues, double length, int domain_dim)
    : eigenvalues_(std::move(eigenvalues)), length_(length), domain_dim_(domain_dim) {
  require(length_ > 0.0 && std::isfinite(length_), "domain length must be positive");
  require(domain_dim_ >= 1, "domain dimension must be positive");
  require(!eigenvalues_.empty(), "operator needs at least one mode");
  require(eigenvalues_.front() > 0.0, "eigenvalues must be positive");
  for (std::size_t i = 1; i < eigenvalues_.size(); ++i) {
    if (!(eigenvalues_[i] > eigenvalues_[i - 1]) || !std::isfinite(eigenvalues_[i])) {
      std::ostringstream os;
      os << "eigenvalues must be strictly increasing (mode " << i + 1 << ")";
      throw ValidationError(os.str());
    }
  }
}

SpectralOperator SpectralOperator::dirichlet_laplacian_1d(double length, int modes) {
  require(modes >= 1, "operator needs at least one mode");
  require(length > 0.0, "domain length must be positive");
  std::vector<double> ev(static_cast<std::size_t>(modes));
  for (int n = 1; n <= modes; ++n) {
    const double k = n * std::numbers::pi / length;
    ev[n - 1] = k * k;
  }
  return SpectralOperator(std::move(ev), length, 1);
}

SpectralOperator SpectralOperator::diagonal(std::vector<double> eigenvalues, double length,
                                            int domain_dim) {
  return SpectralOperator(std::move(eigenvalues), length, domain_dim);
}

double SpectralOperator::eigenfunction(int n, double x) const {
  if (n < 1 || n > modes()) {
    std::ostringstream os;
    os << "mode " << n << " outside 1.." << modes();
    throw ValidationError(os.str());
  }
  return std::sqrt(2.0 / length_) * std::sin(n * std::numbers::pi * x / length_);
}

std::vector<double> SpectralOperator::eigenfunctions_at(double x) const {
  std::vector<double> out(eigenvalues_.size());
  const double scale = std::sqrt(2.0 / length_);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = scale * std::sin((n + 1) * std::numbers::pi * x / length_);
  }
  return out;
}

double synthesize(const SpectralOperator& op, const SpatialField& field, double x) {
  require(field.modes() <= static_cast<std::size_t>(op.modes()), "field has more modes than the operator");
  double s = 0.0;
  for (std::size_t n = 0; n < field.modes(); ++n) {
    s += field.coeffs[n] * op.eigenfunction(static_cast<int>(n + 1), x);
  }
  return s;
}

std::vector<double> synthesize(const SpectralOperator& op, const SpatialField& field,
                               std::span<const double> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(synthesize(op, field, x));
  return out;
}

QuadratureGrid projection_grid(const SpectralOperator& op, int nodes) {
  constexpr int kPerPanel = 16;
  require(nodes >= kPerPanel && nodes % kPerPanel == 0, "projection grid size must be a multiple of 16");
  return composite_gauss_legendre(0.0, op.length(), nodes / kPerPanel, kPerPanel);
}

SpatialField project(const SpectralOperator& op, const QuadratureGrid& grid,
                     std::span<const double> samples) {
  require(samples.size() == grid.nodes.size(), "sample count must match the quadrature grid");
  // Mode M has M/2 full oscillations on the interval.
  if (grid.nodes.size() < 4 * static_cast<std::size_t>(op.modes())) {
    std::ostringstream os;
    os << grid.nodes.size() << " quadrature nodes cannot resolve mode " << op.modes()
       << " (need at least " << 4 * op.modes() << ")";
    fail(ErrorKind::GridTooCoarse, os.str());
  }
  SpatialField out = zero_field(static_cast<std::size_t>(op.modes()));
  for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
    const double wf = grid.weights[i] * samples[i];
    if (wf == 0.0) continue;
    const std::vector<double> phi = op.eigenfunctions_at(grid.nodes[i]);
    for (std::size_t n = 0; n < phi.size(); ++n) out.coeffs[n] += wf * phi[n];
  }
  return out;
}

SpatialField project(const SpectralOperator& op, const std::function<double(double)>& f, int nodes) {
  const QuadratureGrid grid = projection_grid(op, nodes);
  std::vector<double> samples;
  samples.reserve(grid.nodes.size());
  for (double x : grid.nodes) samples.push_back(f(x));
  return project(op, grid, samples);
}

WeylFit weyl_check(const SpectralOperator& op) {
  require(op.modes() >= 10, "Weyl check needs at least 10 modes");
  const int m = op.modes();
  const int first = m / 2 + 1;
  const double power = 2.0 / op.domain_dim();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, s_log_c = 0;
  const int count = m - first + 1;
  for (int n = first; n <= m; ++n) {
    const double lx = std::log(static_cast<double>(n));
    const double ly = std::log(op.eigenvalue(n));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    s_log_c += ly - power * lx;
  }
  WeylFit fit;
  fit.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  fit.c0 = std::exp(s_log_c / count);
  for (int n = first; n <= m; ++n) {
    const double model = fit.c0 * std::pow(static_cast<double>(n), power);
    fit.max_rel_residual = std::max(fit.max_rel_residual, std::abs(op.eigenvalue(n) / model - 1.0));
  }
  fit.holds = fit.max_rel_residual < 0.05;
  return fit;
}

}  // namespace fdw
