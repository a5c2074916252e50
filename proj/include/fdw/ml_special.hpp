#pragma once

// Mittag-Leffler functions E_{beta,gamma}(z) on the real axis and the
// reciprocal gamma function.
//
// Three evaluation branches are used for z < 0, selected by the effective
// scale rho = |z|^(1/beta), which controls both the cancellation in the
// Taylor series (sum of |terms| ~ exp(rho)) and the accuracy of the
// optimally truncated asymptotic series (~ exp(-rho)):
//
//   rho <= kTaylorScale      Taylor series in double, compensated summation
//   rho >= kAsymptoticScale  asymptotic series, optimal truncation, plus the
//                            exponentially small pole contributions that
//                            exist for 1 < beta <= 2
//   otherwise                Taylor series in binary128 arithmetic
//
// Every evaluation carries an absolute error bound.

#include <cstddef>
#include <vector>

namespace fdw {

struct MLOrderPair {
  double beta = 1.0;
  double gamma = 1.0;
};

enum class MLBranch { TaylorSeries, AsymptoticSeries, HighPrecisionFallback };

const char* to_string(MLBranch branch) noexcept;

struct MLEvaluation {
  double value = 0.0;
  double abs_error_bound = 0.0;
  MLBranch branch = MLBranch::TaylorSeries;
};

inline constexpr double kTaylorScale = 6.0;
inline constexpr double kAsymptoticScale = 36.0;
/// |x - round(x)| below this counts as an integer when testing for gamma poles.
inline constexpr double kIntegerTolerance = 1e-12;

/// True when x lies within kIntegerTolerance of an integer.
bool near_integer(double x, double tol = kIntegerTolerance) noexcept;

/// 1/Gamma(x). Exactly zero at the poles x = 0, -1, -2, ...
double gamma_recip(double x) noexcept;

/// Checks beta in (0, 2] and gamma > 0; throws ValidationError otherwise.
void validate(const MLOrderPair& p);

/// E_{beta,gamma}(z). Throws Error(NonConvergence) when no branch reaches
/// abs_error_bound <= 1e-10 * max(1, |value|).
MLEvaluation ml_eval(const MLOrderPair& p, double z);

/// Evaluates E_{beta,gamma}(z), z <= 0, on a prescribed branch regardless of
/// the scale-based selection, without the acceptance check. Used to compare
/// branches where their domains overlap.
MLEvaluation ml_eval_on_branch(const MLOrderPair& p, double z, MLBranch branch);

/// Truncated asymptotic series for E_{beta,gamma}(-x):
///   -sum_{k=1}^{n_terms} (-x)^{-k} / Gamma(gamma - beta k).
/// The bound is x^{-(n_terms+1)} * C with
///   C = max(|1/Gamma(gamma - beta (n+1))|, |1/Gamma(gamma - beta (n+2))| / x),
/// i.e. the size of the first omitted term, looking one term further when
/// that term sits on a gamma pole. No exponentially small contributions
/// are included. Requires x >= 1 and 0 < beta < 2.
/// Throws Error(AsymptoticDivergence) if the nonzero term magnitudes grow
/// before n_terms is reached.
MLEvaluation ml_asym_neg(const MLOrderPair& p, double x, int n_terms);

/// Evaluator for a fixed (beta, gamma) with the series coefficients
/// tabulated once. Immutable after construction; safe to share across
/// threads. Returns the same values as ml_eval.
class MittagLeffler {
 public:
  explicit MittagLeffler(MLOrderPair p);

  MLEvaluation evaluate(double z) const;
  double operator()(double z) const { return evaluate(z).value; }

  const MLOrderPair& order() const noexcept { return order_; }

 private:
  MLOrderPair order_;
  std::vector<double> taylor_;      // 1/Gamma(beta k + gamma)
  std::vector<double> asymptotic_;  // 1/Gamma(gamma - beta k), index k >= 1
  // binary128 Taylor coefficients, stored as hi/lo double pairs so the
  // header stays free of compiler-specific types.
  std::vector<double> taylor_q_hi_;
  std::vector<double> taylor_q_lo_;
};

}  // namespace fdw
