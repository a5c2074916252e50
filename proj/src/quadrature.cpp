#include "fdw/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "fdw/error.hpp"

namespace fdw {

GaussLegendreRule gauss_legendre(int n) {
  require(n >= 1, "Gauss-Legendre order must be positive");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const GaussLegendreRule& gauss_legendre_cached(int n) {
  static const std::array<GaussLegendreRule, 12> rules = [] {
    std::array<GaussLegendreRule, 12> out;
    for (int k = 1; k < 12; ++k) out[k] = gauss_legendre(1 << k);
    return out;
  }();
  for (int k = 1; k < 12; ++k) {
    if (n == (1 << k)) return rules[k];
  }
  fail(ErrorKind::Validation, "cached Gauss-Legendre rules exist only for n = 2..2048, powers of two");
}

QuadratureGrid composite_gauss_legendre(double a, double b, int panels, int per_panel) {
  require(b > a, "quadrature interval must have positive length");
  require(panels >= 1 && per_panel >= 1, "quadrature needs at least one panel and node");
  const GaussLegendreRule rule = gauss_legendre(per_panel);
  QuadratureGrid grid;
  grid.nodes.reserve(static_cast<std::size_t>(panels) * per_panel);
  grid.weights.reserve(grid.nodes.capacity());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (int i = 0; i < per_panel; ++i) {
      grid.nodes.push_back(lo + 0.5 * h * (rule.nodes[i] + 1.0));
      grid.weights.push_back(0.5 * h * rule.weights[i]);
    }
  }
  return grid;
}

}  // namespace fdw
