#pragma once

// Series solution of
//   d_t^alpha u = -A u + mu(t) f(x),  u(0) = a,  u_t(0) = b (alpha > 1),
// mode by mode:
//   u_n(t) = E_{a,1}(-l t^a) a_n + t E_{a,2}(-l t^a) b_n + D(l, t) f_n,
//   D(l, t) = int_0^min(t,T) (t-s)^{a-1} E_{a,a}(-l (t-s)^a) mu(s) ds.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fdw/ml_special.hpp"
#include "fdw/order.hpp"
#include "fdw/source_profile.hpp"
#include "fdw/spectrum.hpp"

namespace fdw {

struct ProblemSpec {
  FractionalOrder alpha;
  SpectralOperator op;
  SpatialField a;
  SpatialField b;  // empty unless alpha > 1
  SpatialField f;
  SourceProfile mu;
  double horizon_T;
};

/// Checks field sizes against the operator, b present iff alpha > 1, and
/// mu.horizon() == horizon_T. Throws ValidationError.
void validate(const ProblemSpec& spec);

/// Builds a spec, padding b with zeros when alpha > 1 and b is empty.
ProblemSpec make_spec(FractionalOrder alpha, SpectralOperator op, SpatialField a, SpatialField b,
                      SpatialField f, SourceProfile mu);

/// Relative tolerance of the node-doubling test in the Duhamel quadrature.
inline constexpr double kQuadratureTolerance = 1e-9;

/// Evaluator bound to one fractional order. Holds tabulated Mittag-Leffler
/// evaluators; immutable and shareable after construction.
class Kernels {
 public:
  explicit Kernels(const FractionalOrder& alpha);

  const FractionalOrder& alpha() const noexcept { return alpha_; }
  /// E_{a,1}(-l t^a)
  double relaxation(double lambda, double t) const;
  /// t E_{a,2}(-l t^a)
  double velocity(double lambda, double t) const;
  /// D(l, t) for the given profile.
  double duhamel(double lambda, const SourceProfile& mu, double t) const;

 private:
  FractionalOrder alpha_;
  MittagLeffler e1_;
  MittagLeffler e2_;
  MittagLeffler ea_;
};

/// Per-thread cached kernels for the given order.
const Kernels& kernels_for(const FractionalOrder& alpha);

double duhamel_mode(double lambda, const FractionalOrder& alpha, const SourceProfile& mu, double t);

class ForwardModel {
 public:
  explicit ForwardModel(ProblemSpec spec);

  const ProblemSpec& spec() const noexcept { return spec_; }
  const Kernels& kernels() const noexcept { return kernels_; }

  /// Spectral coefficients u_n(t), t > 0.
  SpatialField solve(double t) const;
  double value(double x, double t) const;

 private:
  ProblemSpec spec_;
  Kernels kernels_;
};

SpatialField solve(const ProblemSpec& spec, double t);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// 2M+1 equispaced interior points of omega.
std::vector<double> observation_points(const ProblemSpec& spec, Interval omega);

/// count points log-spaced on [lo, hi], endpoints included.
std::vector<double> log_spaced(double lo, double hi, int count);

struct ObservationSet {
  std::vector<double> points;
  std::vector<double> times;
  std::vector<double> values;  // x-major: values[i * times.size() + j] = u(x_i, t_j)
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  double at(std::size_t i, std::size_t j) const { return values[i * times.size() + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * times.size(), times.size()};
  }
};

/// u(x_i, t_j) at the given points (default: observation_points) and times
/// t_j > T, plus optional i.i.d. Gaussian noise drawn from a mt19937_64
/// generator seeded with `seed`.
ObservationSet observe(const ForwardModel& model, Interval omega, std::span<const double> times,
                       double noise_sigma = 0.0, std::uint64_t seed = 0,
                       std::optional<std::vector<double>> points = std::nullopt);
ObservationSet observe(const ProblemSpec& spec, Interval omega, std::span<const double> times,
                       double noise_sigma = 0.0, std::uint64_t seed = 0);

/// Header `x,t,value`, rows x-major, shortest round-trip number format.
void write_csv(const ObservationSet& obs, std::ostream& out);
ObservationSet read_observations_csv(std::istream& in);

/// Max over x_grid and over grid times t_j = j h with t_from <= t_j <= t_check of
/// |d_t^alpha u + A u - mu f|, with the derivative discretized from solution
/// values on the uniform grid {0, h, 2h, ...}:
///   alpha < 1      L1 scheme
///   alpha = 1      backward difference
///   1 < alpha < 2  L1 scheme of order alpha-1 applied to u' (central differences, u'(0) = b)
///   alpha = 2      central second difference
double caputo_residual(const ForwardModel& model, std::span<const double> x_grid, double h,
                       double t_check, double t_from = 0.0);

}  // namespace fdw
