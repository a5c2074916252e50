#pragma once

// Scalar problem d_t^alpha y = -lambda y + mu(t), y(0) = a, y'(0) = b, and
// recovery of a, b and the leading moments of mu from late samples.
//
// The fit uses the exact solution components as columns: E_{a,1}(-l t^a),
// t E_{a,2}(-l t^a) and the Duhamel responses D[p_l] to the polynomials p_l
// on (0, T) with moments int (-s)^m p_l(s) ds = delta_{ml}, m, l <= L.
// Each column is the complete power-law series of its parameter, so
// colliding exponents never split a parameter across columns, and the
// coefficient of D[p_l] is the l-th moment of any polynomial mu of degree
// at most L.

#include <span>
#include <vector>

#include "fdw/forward.hpp"
#include "fdw/order.hpp"
#include "fdw/source_profile.hpp"

namespace fdw {

/// a E_{a,1}(-l t^a) + b t E_{a,2}(-l t^a) + D(l, t); b is ignored for alpha <= 1.
double solve_scalar(const FractionalOrder& alpha, double lambda, double a, double b,
                    const SourceProfile& mu, double t);

inline constexpr int kDefaultMomentCount = 3;

struct ScalarRecovery {
  double a_hat = 0.0;
  double b_hat = 0.0;                // zero unless alpha > 1
  std::vector<double> moments;       // mu_0 .. mu_L
  int verified_moments = 0;          // L + 1
  double condition_number = 0.0;
  double residual = 0.0;
};

/// Dual polynomials p_0..p_L on (0, T), coefficients in powers of s.
std::vector<std::vector<double>> moment_dual_basis(double T, int L);

/// Joint fit of samples y(t_i), t_i > 2T. Throws Error(IllConditioned) when
/// the scaled design exceeds kPeelConditionLimit, which is the case at the
/// classical orders, where all columns are multiples of one exponential.
ScalarRecovery recover_scalar(std::span<const double> t, std::span<const double> y,
                              const FractionalOrder& alpha, double lambda, double T,
                              int moment_count = kDefaultMomentCount);

struct PointRecovery {
  std::vector<double> moments;
  double weight_sum = 0.0;  // f(x0) = sum_n f_n phi_n(x0)
  double condition_number = 0.0;
  double residual = 0.0;
};

inline constexpr double kDegeneratePointTolerance = 1e-8;

/// Moments of mu from samples of u(x0, t) with zero initial data. The
/// columns are sum_n f_n phi_n(x0) D_n[p_l](t). Throws
/// Error(DegeneratePoint) when |f(x0)| <= kDegeneratePointTolerance.
PointRecovery point_observation_recover(const ProblemSpec& spec, double x0,
                                        std::span<const double> t, std::span<const double> y,
                                        int moment_count = kDefaultMomentCount);

}  // namespace fdw
