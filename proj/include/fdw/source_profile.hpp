#pragma once

// Time factor mu(t) of the source: a piecewise polynomial supported in
// [0, T], together with its signed moments
//   mu_m = int_0^T (-s)^m mu(s) ds,
// the leading indices derived from them, and the order-dependent exponent
// lattice and admissibility test.

#include <vector>

#include "fdw/order.hpp"

namespace fdw {

/// mu(s) = sum_j coeffs[j] s^j on [t0, t1]. Powers of the absolute time s.
struct PolynomialPiece {
  double t0 = 0.0;
  double t1 = 0.0;
  std::vector<double> coeffs;
};

class SourceProfile {
 public:
  /// Pieces must lie in [0, T], be ordered and non-overlapping, and not
  /// all vanish.
  SourceProfile(std::vector<PolynomialPiece> pieces, double horizon_T);

  static SourceProfile constant(double value, double horizon_T);

  double horizon() const noexcept { return horizon_; }
  const std::vector<PolynomialPiece>& pieces() const noexcept { return pieces_; }

  double operator()(double t) const;
  double moment(int m) const;
  /// Upper bound on sup |mu|, tight to a relative 1e-6 or so.
  double sup_norm() const noexcept { return sup_norm_; }

  SourceProfile scaled(double c) const;

 private:
  std::vector<PolynomialPiece> pieces_;
  double horizon_;
  double sup_norm_ = 0.0;
};

inline constexpr double kMomentTolerance = 1e-10;
inline constexpr int kMaxLeadingIndex = 64;

/// mu_m = int (-s)^m mu(s) ds, integrated exactly piece by piece.
double moment(const SourceProfile& mu, int m);

/// |mu_m| relative to the natural scale ||mu||_inf T^{m+1} / (m+1).
double relative_moment(const SourceProfile& mu, int m);

struct LeadingIndex {
  int ell = 0;
  double moment = 0.0;
};

/// Smallest m <= 64 whose relative moment exceeds tol.
/// Throws Error(IndexSearchExhausted) otherwise.
LeadingIndex leading_index(const SourceProfile& mu, double tol = kMomentTolerance);

/// Smallest m where either profile has a relative moment above tol.
int pair_leading_index(const SourceProfile& mu, const SourceProfile& mu2,
                       double tol = kMomentTolerance);

struct ExponentLattice {
  double alpha = 0.0;
  std::vector<int> indices;  // m(1) < m(2) < ...
};

/// First `count` positive integers j with alpha j not an integer.
/// Requires alpha in (0,1) or (1,2).
ExponentLattice exponent_lattice(const FractionalOrder& alpha, int count);

enum class AlphaRegime { Sub, Super };

struct Admissibility {
  bool admissible = true;
  double nearest_excluded = 0.0;
  long long excluded_numerator = 0;    // nearest excluded value = numerator / denominator
  long long excluded_denominator = 1;
  double distance = 0.0;
};

inline constexpr double kAdmissibleTolerance = 1e-9;

/// Tests alpha against {(ell+1)/n}, and for Super also {(ell+2)/n}, n >= 1.
Admissibility admissible_alpha(const FractionalOrder& alpha, int ell, AlphaRegime regime,
                               double tol = kAdmissibleTolerance);

/// Regime implied by the value of alpha; requires alpha in (0,1) or (1,2).
AlphaRegime regime_of(const FractionalOrder& alpha);

}  // namespace fdw
