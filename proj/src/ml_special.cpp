#include "fdw/ml_special.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "fdw/error.hpp"

namespace fdw {

namespace {

using quad = __float128;

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kQuadEps = 1.925929944387235853e-34;  // 2^-112
constexpr int kMaxTerms = 200000;
constexpr double kAcceptRelative = 1e-10;

// sin(pi x) with the argument reduced exactly to [-1/2, 1/2].
double sin_pi(double x) noexcept {
  double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
  if (r > 0.5) r = 1.0 - r;
  if (r < -0.5) r = -1.0 - r;
  return std::sin(std::numbers::pi * r);
}

quad rgamma_q(quad x) noexcept {
  // Arguments here are beta k + gamma > 0, so no poles.
  return 1 / tgammaq(x);
}

// 1/Gamma(x) for any real x, evaluated in binary128 and rounded once.
// The argument gamma - beta k is exact in binary128 for the k used here,
// which avoids the loss of relative accuracy that the double reflection
// formula suffers near the poles.
double rgamma_accurate(quad x) noexcept {
  if (x > 0) return static_cast<double>(1 / tgammaq(x));
  const quad r = x - roundq(x);
  if (r == 0) return 0.0;
  const quad y = 1 - x;
  if (y > 1700) {
    const double s = static_cast<double>(sinq(M_PIq * r));
    const double sign = (std::fmod(std::round(static_cast<double>(roundq(x))), 2.0) == 0.0) ? 1.0 : -1.0;
    return sign * std::copysign(std::exp(static_cast<double>(lgammaq(y)) +
                                         std::log(std::abs(s) / std::numbers::pi)), s);
  }
  // sin(pi x) = (-1)^round(x) sin(pi r)
  const quad sgn = (fmodq(roundq(x), 2) == 0) ? 1 : -1;
  return static_cast<double>(tgammaq(y) * sgn * sinq(M_PIq * r) / M_PIq);
}

quad asymptotic_arg(const MLOrderPair& p, std::size_t k) noexcept {
  return static_cast<quad>(p.gamma) - static_cast<quad>(p.beta) * static_cast<quad>(k);
}

// Coefficient sources: either tabulated or computed on the fly.
struct OnTheFly {
  MLOrderPair p;
  double taylor(std::size_t k) const { return gamma_recip(p.beta * k + p.gamma); }
  quad taylor_q(std::size_t k) const {
    return rgamma_q(static_cast<quad>(p.beta) * k + p.gamma);
  }
  double asymptotic(std::size_t k) const { return rgamma_accurate(asymptotic_arg(p, k)); }
};

struct Tabulated {
  const MLOrderPair& p;
  const std::vector<double>& t;
  const std::vector<double>& qhi;
  const std::vector<double>& qlo;
  const std::vector<double>& a;
  double taylor(std::size_t k) const {
    return k < t.size() ? t[k] : gamma_recip(p.beta * k + p.gamma);
  }
  quad taylor_q(std::size_t k) const {
    if (k < qhi.size()) return static_cast<quad>(qhi[k]) + qlo[k];
    return rgamma_q(static_cast<quad>(p.beta) * k + p.gamma);
  }
  double asymptotic(std::size_t k) const {
    return k < a.size() ? a[k] : rgamma_accurate(asymptotic_arg(p, k));
  }
};

// Neumaier compensated accumulator.
struct Compensated {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

template <class Coeffs>
MLEvaluation taylor_double(const Coeffs& c, double z) {
  Compensated acc;
  double abs_sum = 0.0;
  double prev = 0.0;
  std::size_t k = 0;
  double tail = 0.0;
  for (; k < static_cast<std::size_t>(kMaxTerms); ++k) {
    const double term = (k == 0 ? 1.0 : std::pow(z, static_cast<double>(k))) * c.taylor(k);
    if (!std::isfinite(term)) {
      fail(ErrorKind::NonConvergence, "Taylor series overflow for E(z)");
    }
    acc.add(term);
    abs_sum += std::abs(term);
    // Once the ratio of successive terms drops below 1/2 it stays there
    // (Gamma(u + beta)/Gamma(u) increases in u), so the tail is bounded by
    // twice the next term.
    if (k > 0 && prev != 0.0 && std::abs(term) <= 0.5 * std::abs(prev)) {
      const double next = std::pow(z, static_cast<double>(k + 1)) * c.taylor(k + 1);
      const double scale = std::max(std::abs(acc.value()), 1e-300);
      if (std::abs(next) <= 1e-18 * scale || next == 0.0) {
        tail = 2.0 * std::abs(next);
        break;
      }
    }
    prev = term;
  }
  if (k >= static_cast<std::size_t>(kMaxTerms)) {
    fail(ErrorKind::NonConvergence, "Taylor series did not terminate");
  }
  const double value = acc.value();
  const double bound = 4.0 * kEps * abs_sum + tail + kEps * std::abs(value);
  return {value, bound, MLBranch::TaylorSeries};
}

template <class Coeffs>
MLEvaluation taylor_quad(const Coeffs& c, double z) {
  const quad zq = z;
  quad power = 1;
  quad sum = 0;
  quad abs_sum = 0;
  quad prev = 0;
  quad tail = 0;
  std::size_t k = 0;
  for (; k < static_cast<std::size_t>(kMaxTerms); ++k) {
    if (k > 0) power *= zq;
    const quad term = power * c.taylor_q(k);
    sum += term;
    abs_sum += fabsq(term);
    if (k > 0 && prev != 0 && fabsq(term) <= fabsq(prev) / 2) {
      const quad next = power * zq * c.taylor_q(k + 1);
      const quad scale = fmaxq(fabsq(sum), static_cast<quad>(1e-300));
      if (fabsq(next) <= static_cast<quad>(1e-36) * scale || next == 0) {
        tail = 2 * fabsq(next);
        break;
      }
    }
    prev = term;
  }
  if (k >= static_cast<std::size_t>(kMaxTerms)) {
    fail(ErrorKind::NonConvergence, "extended-precision Taylor series did not terminate");
  }
  const double value = static_cast<double>(sum);
  const double rounding = static_cast<double>(abs_sum * (static_cast<quad>(k) + 8) * kQuadEps);
  const double bound = rounding + static_cast<double>(tail) + kEps * std::abs(value);
  return {value, bound, MLBranch::HighPrecisionFallback};
}

// Contribution of the poles of s^{beta-gamma}/(s^beta + x) that lie on the
// principal sheet (1 < beta <= 2), or on the cut for beta = 1 with integer
// gamma. Zero otherwise.
struct PoleTerm {
  double value = 0.0;
  double rounding = 0.0;
};

PoleTerm pole_contribution(const MLOrderPair& p, double x, double rho) {
  if (p.beta > 1.0) {
    const double theta = std::numbers::pi / p.beta;
    const double re = rho * std::cos(theta);
    const double phase = rho * std::sin(theta) + (1.0 - p.gamma) * theta;
    const double mag = (2.0 / p.beta) * std::exp(re) * std::pow(rho, 1.0 - p.gamma);
    // rho carries a relative rounding error, which shifts both the decay
    // exponent and the phase by about |rho| eps.
    const double rounding = mag * kEps * (4.0 * (std::abs(re) + std::abs(phase)) + 8.0);
    return {mag * std::cos(phase), rounding};
  }
  if (p.beta == 1.0 && near_integer(p.gamma)) {
    // e^{-x} (-x)^{1-gamma}
    const long n = std::lround(1.0 - p.gamma);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double v = sign * std::exp(-x) * std::pow(x, static_cast<double>(n));
    return {v, std::abs(v) * kEps * (4.0 * x + 8.0)};
  }
  return {};
}

// Upper envelope of |1/Gamma(gamma - beta k)|. By reflection the
// coefficient equals Gamma(u) |sin(pi (gamma - beta k))| / pi with
// u = beta k + 1 - gamma; Gamma is frozen at its minimum for small u.
double log_coefficient_envelope(const MLOrderPair& p, std::size_t k, double ck) {
  constexpr double kGammaArgMin = 1.4616321449683623;
  const double u = std::max(p.beta * static_cast<double>(k) + 1.0 - p.gamma, kGammaArgMin);
  const double log_env = std::lgamma(u) - std::log(std::numbers::pi);
  return ck == 0.0 ? log_env : std::max(log_env, std::log(std::abs(ck)));
}

template <class Coeffs>
MLEvaluation asymptotic_optimal(const Coeffs& c, const MLOrderPair& p, double x) {
  const double rho = std::pow(x, 1.0 / p.beta);
  const double log_x = std::log(x);
  // Terms: -(-x)^{-k} / Gamma(gamma - beta k) = (-1)^{k+1} x^{-k} c_k.
  // Truncation is decided on the envelope, which is convex in k and
  // bounds every term from above.
  double sum = 0.0;
  double abs_sum = 0.0;
  double last_env = std::numeric_limits<double>::infinity();
  double omitted = 0.0;
  const std::size_t cap = static_cast<std::size_t>(std::ceil(4.0 * rho / p.beta)) + 64;
  for (std::size_t k = 1; k <= cap; ++k) {
    const double ck = c.asymptotic(k);
    if (!std::isfinite(ck)) {
      omitted = std::numeric_limits<double>::infinity();
      break;
    }
    const double env = std::exp(log_coefficient_envelope(p, k, ck) - static_cast<double>(k) * log_x);
    if (env >= last_env || env <= 1e-18 * std::max(std::abs(sum), 1e-300)) {
      omitted = env;
      break;
    }
    last_env = env;
    if (ck == 0.0) continue;
    const double term = ((k % 2 == 1) ? 1.0 : -1.0) * ck * std::pow(x, -static_cast<double>(k));
    sum += term;
    abs_sum += std::abs(term);
  }
  const PoleTerm poles = pole_contribution(p, x, rho);
  const double value = sum + poles.value;
  // Non-algebraic remainder of the cut integral, O(exp(-rho)).
  const double exp_part =
      10.0 * (2.0 / p.beta) * std::exp(-rho) * std::max(1.0, std::pow(rho, 1.0 - p.gamma));
  const double bound = omitted + exp_part + 8.0 * kEps * abs_sum + poles.rounding;
  return {value, bound, MLBranch::AsymptoticSeries};
}

template <class Coeffs>
MLEvaluation evaluate_with(const Coeffs& c, const MLOrderPair& p, double z) {
  if (z == 0.0) return {gamma_recip(p.gamma), 0.0, MLBranch::TaylorSeries};
  MLEvaluation out;
  if (z > 0.0) {
    out = taylor_double(c, z);
  } else {
    const double x = -z;
    const double rho = std::pow(x, 1.0 / p.beta);
    if (rho <= kTaylorScale) {
      out = taylor_double(c, z);
    } else if (rho >= kAsymptoticScale) {
      out = asymptotic_optimal(c, p, x);
    } else {
      out = taylor_quad(c, z);
    }
  }
  if (!(out.abs_error_bound <= kAcceptRelative * std::max(1.0, std::abs(out.value)))) {
    std::ostringstream os;
    os << "E_{" << p.beta << "," << p.gamma << "}(" << z << "): error bound "
       << out.abs_error_bound << " exceeds tolerance";
    fail(ErrorKind::NonConvergence, os.str());
  }
  return out;
}

}  // namespace

const char* to_string(MLBranch branch) noexcept {
  switch (branch) {
    case MLBranch::TaylorSeries: return "TaylorSeries";
    case MLBranch::AsymptoticSeries: return "AsymptoticSeries";
    case MLBranch::HighPrecisionFallback: return "HighPrecisionFallback";
  }
  return "?";
}

bool near_integer(double x, double tol) noexcept {
  return std::abs(x - std::round(x)) < tol;
}

double gamma_recip(double x) noexcept {
  if (x <= 0.0 && near_integer(x)) return 0.0;
  if (x > 0.0) {
    if (x < 170.0) return 1.0 / std::tgamma(x);
    return std::exp(-std::lgamma(x));
  }
  // Reflection: 1/Gamma(x) = Gamma(1 - x) sin(pi x) / pi.
  const double y = 1.0 - x;
  const double s = sin_pi(x);
  if (y < 170.0) return std::tgamma(y) * s / std::numbers::pi;
  return std::copysign(std::exp(std::lgamma(y) + std::log(std::abs(s) / std::numbers::pi)), s);
}

void validate(const MLOrderPair& p) {
  if (!(p.beta > 0.0 && p.beta <= 2.0)) {
    std::ostringstream os;
    os << "Mittag-Leffler order beta=" << p.beta << " outside (0, 2]";
    throw ValidationError(os.str());
  }
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) {
    std::ostringstream os;
    os << "Mittag-Leffler offset gamma=" << p.gamma << " must be positive";
    throw ValidationError(os.str());
  }
}

MLEvaluation ml_eval(const MLOrderPair& p, double z) {
  validate(p);
  require(std::isfinite(z), "Mittag-Leffler argument must be finite");
  return evaluate_with(OnTheFly{p}, p, z);
}

MLEvaluation ml_eval_on_branch(const MLOrderPair& p, double z, MLBranch branch) {
  validate(p);
  require(std::isfinite(z) && z <= 0.0, "forced-branch evaluation requires finite z <= 0");
  const OnTheFly c{p};
  switch (branch) {
    case MLBranch::TaylorSeries: return taylor_double(c, z);
    case MLBranch::HighPrecisionFallback: return taylor_quad(c, z);
    case MLBranch::AsymptoticSeries:
      require(z < 0.0, "asymptotic branch requires z < 0");
      return asymptotic_optimal(c, p, -z);
  }
  return {};
}

MLEvaluation ml_asym_neg(const MLOrderPair& p, double x, int n_terms) {
  validate(p);
  require(p.beta < 2.0, "asymptotic series requires beta < 2");
  require(x >= 1.0, "asymptotic series requires x >= 1");
  require(n_terms >= 1, "asymptotic series requires n_terms >= 1");
  double sum = 0.0;
  double abs_sum = 0.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n_terms; ++k) {
    const double ck = gamma_recip(p.gamma - p.beta * k);
    if (ck == 0.0) continue;
    const double mag = std::abs(ck) * std::pow(x, -static_cast<double>(k));
    if (mag > last) {
      std::ostringstream os;
      os << "asymptotic terms of E_{" << p.beta << "," << p.gamma << "}(-" << x
         << ") grow at k=" << k << " < n_terms=" << n_terms;
      fail(ErrorKind::AsymptoticDivergence, os.str());
    }
    last = mag;
    sum += ((k % 2 == 1) ? 1.0 : -1.0) * std::copysign(mag, ck);
    abs_sum += mag;
  }
  const double c1 = std::abs(gamma_recip(p.gamma - p.beta * (n_terms + 1)));
  const double c2 = std::abs(gamma_recip(p.gamma - p.beta * (n_terms + 2))) / x;
  const double bound =
      std::pow(x, -static_cast<double>(n_terms + 1)) * std::max(c1, c2) + 4.0 * kEps * abs_sum;
  return {sum, bound, MLBranch::AsymptoticSeries};
}

MittagLeffler::MittagLeffler(MLOrderPair p) : order_(p) {
  validate(p);
  // Taylor coefficients sufficient for every z handled by the Taylor
  // branches: z > 0 up to moderate size and rho < kAsymptoticScale.
  const double x_max = std::pow(kAsymptoticScale, p.beta);
  const double log_x = std::log(x_max);
  for (std::size_t k = 0;; ++k) {
    const quad cq = rgamma_q(static_cast<quad>(p.beta) * k + p.gamma);
    const double hi = static_cast<double>(cq);
    taylor_q_hi_.push_back(hi);
    taylor_q_lo_.push_back(static_cast<double>(cq - hi));
    taylor_.push_back(hi);
    const double log_term = k * log_x + std::log(std::max(hi, 1e-308));
    if (k > 8 && (log_term < -100.0 || hi == 0.0)) break;
  }
  const std::size_t n_asym = static_cast<std::size_t>(std::ceil(4.0 * kAsymptoticScale / p.beta)) + 64;
  asymptotic_.resize(n_asym + 1, 0.0);
  for (std::size_t k = 1; k <= n_asym; ++k) {
    asymptotic_[k] = rgamma_accurate(asymptotic_arg(p, k));
  }
}

MLEvaluation MittagLeffler::evaluate(double z) const {
  require(std::isfinite(z), "Mittag-Leffler argument must be finite");
  return evaluate_with(Tabulated{order_, taylor_, taylor_q_hi_, taylor_q_lo_, asymptotic_}, order_, z);
}

}  // namespace fdw
