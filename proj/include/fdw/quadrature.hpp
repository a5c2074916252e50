#pragma once

#include <vector>

namespace fdw {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

/// Shared rules for n = 2^k, 1 <= k <= 11. Built once, read-only afterwards.
const GaussLegendreRule& gauss_legendre_cached(int n);

/// Nodes and weights of a composite rule on [a, b].
struct QuadratureGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadratureGrid composite_gauss_legendre(double a, double b, int panels, int per_panel);

}  // namespace fdw
