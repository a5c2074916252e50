#include "fdw/source_profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "fdw/error.hpp"
#include "fdw/ml_special.hpp"

namespace fdw {

namespace {

double eval_poly(const std::vector<double>& c, double s) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
  return v;
}

double eval_poly_abs_derivative_bound(const std::vector<double>& c, double smax) {
  double v = 0.0;
  for (std::size_t j = 1; j < c.size(); ++j) {
    v += j * std::abs(c[j]) * std::pow(smax, static_cast<double>(j - 1));
  }
  return v;
}

}  // namespace

SourceProfile::SourceProfile(std::vector<PolynomialPiece> pieces, double horizon_T)
    : pieces_(std::move(pieces)), horizon_(horizon_T) {
  require(horizon_ > 0.0 && std::isfinite(horizon_), "source horizon T must be positive");
  require(!pieces_.empty(), "source profile needs at least one piece");
  bool nonzero = false;
  double prev_end = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const PolynomialPiece& p = pieces_[i];
    std::ostringstream where;
    where << "source piece " << i << ": ";
    require(p.t0 >= 0.0 && p.t1 <= horizon_ && p.t0 < p.t1,
            where.str() + "interval must satisfy 0 <= t0 < t1 <= T");
    require(p.t0 >= prev_end, where.str() + "pieces must be ordered and non-overlapping");
    require(!p.coeffs.empty(), where.str() + "needs at least one coefficient");
    for (double c : p.coeffs) {
      require(std::isfinite(c), where.str() + "coefficients must be finite");
      if (c != 0.0) nonzero = true;
    }
    prev_end = p.t1;
  }
  require(nonzero, "source profile must not vanish identically");

  // Dense sampling plus a Lipschitz correction gives a guaranteed upper bound.
  constexpr int kSamples = 4096;
  for (const PolynomialPiece& p : pieces_) {
    double best = 0.0;
    for (int i = 0; i <= kSamples; ++i) {
      const double s = p.t0 + (p.t1 - p.t0) * i / kSamples;
      best = std::max(best, std::abs(eval_poly(p.coeffs, s)));
    }
    const double slack = 0.5 * (p.t1 - p.t0) / kSamples *
                         eval_poly_abs_derivative_bound(p.coeffs, std::max(std::abs(p.t0), std::abs(p.t1)));
    sup_norm_ = std::max(sup_norm_, best + slack);
  }
}

SourceProfile SourceProfile::constant(double value, double horizon_T) {
  return SourceProfile({PolynomialPiece{0.0, horizon_T, {value}}}, horizon_T);
}

double SourceProfile::operator()(double t) const {
  for (const PolynomialPiece& p : pieces_) {
    if (t >= p.t0 && t <= p.t1) return eval_poly(p.coeffs, t);
  }
  return 0.0;
}

double SourceProfile::moment(int m) const {
  require(m >= 0, "moment order must be nonnegative");
  double total = 0.0;
  for (const PolynomialPiece& p : pieces_) {
    for (std::size_t j = 0; j < p.coeffs.size(); ++j) {
      const double e = static_cast<double>(m + j + 1);
      total += p.coeffs[j] * (std::pow(p.t1, e) - std::pow(p.t0, e)) / e;
    }
  }
  return (m % 2 == 0) ? total : -total;
}

SourceProfile SourceProfile::scaled(double c) const {
  std::vector<PolynomialPiece> out = pieces_;
  for (PolynomialPiece& p : out) {
    for (double& v : p.coeffs) v *= c;
  }
  return SourceProfile(std::move(out), horizon_);
}

double moment(const SourceProfile& mu, int m) { return mu.moment(m); }

double relative_moment(const SourceProfile& mu, int m) {
  const double scale = mu.sup_norm() * std::pow(mu.horizon(), m + 1.0) / (m + 1.0);
  return std::abs(mu.moment(m)) / scale;
}

LeadingIndex leading_index(const SourceProfile& mu, double tol) {
  for (int m = 0; m <= kMaxLeadingIndex; ++m) {
    if (relative_moment(mu, m) > tol) return {m, mu.moment(m)};
  }
  fail(ErrorKind::IndexSearchExhausted, "no moment of order <= 64 is distinguishable from zero");
}

int pair_leading_index(const SourceProfile& mu, const SourceProfile& mu2, double tol) {
  for (int m = 0; m <= kMaxLeadingIndex; ++m) {
    if (relative_moment(mu, m) > tol || relative_moment(mu2, m) > tol) return m;
  }
  fail(ErrorKind::IndexSearchExhausted, "no moment of order <= 64 is distinguishable from zero");
}

ExponentLattice exponent_lattice(const FractionalOrder& alpha, int count) {
  require(alpha.fractional(), "exponent lattice requires alpha in (0,1) or (1,2)");
  require(count >= 1, "lattice size must be positive");
  ExponentLattice out;
  out.alpha = alpha.value();
  for (int j = 1; static_cast<int>(out.indices.size()) < count; ++j) {
    if (!near_integer(alpha.value() * j)) out.indices.push_back(j);
  }
  return out;
}

AlphaRegime regime_of(const FractionalOrder& alpha) {
  require(alpha.fractional(), "admissibility is defined for alpha in (0,1) or (1,2)");
  return alpha.value() < 1.0 ? AlphaRegime::Sub : AlphaRegime::Super;
}

Admissibility admissible_alpha(const FractionalOrder& alpha, int ell, AlphaRegime regime, double tol) {
  require(ell >= 0, "leading index must be nonnegative");
  const double a = alpha.value();
  Admissibility out;
  out.distance = std::numeric_limits<double>::infinity();
  auto scan = [&](long long numerator) {
    const double center = static_cast<double>(numerator) / a;
    const long long base = std::max<long long>(1, std::llround(center));
    for (long long n = std::max<long long>(1, base - 1); n <= base + 1; ++n) {
      const double v = static_cast<double>(numerator) / static_cast<double>(n);
      const double d = std::abs(a - v);
      if (d < out.distance) {
        out.distance = d;
        out.nearest_excluded = v;
        out.excluded_numerator = numerator;
        out.excluded_denominator = n;
      }
    }
  };
  scan(ell + 1);
  if (regime == AlphaRegime::Super) scan(ell + 2);
  // Reduce numerator / denominator.
  long long g = std::gcd(out.excluded_numerator, out.excluded_denominator);
  if (g > 1) {
    out.excluded_numerator /= g;
    out.excluded_denominator /= g;
  }
  out.admissible = out.distance > tol;
  return out;
}

}  // namespace fdw
