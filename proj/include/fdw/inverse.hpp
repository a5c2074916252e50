#pragma once

// Recovery of (a, b, f) from late-time observations:
//   (i)   per observation point, a joint least-squares fit of the late-time
//         expansion terms Q_k, R_k, S_k mu_{l0};
//   (ii)  the eigenfunction sample system [phi_n(x_i)] turns the pointwise
//         coefficients into per-mode coefficients;
//   (iii) per mode, the sequence over k is inverted for a_n, b_n, f_n.

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdw/forward.hpp"
#include "fdw/order.hpp"
#include "fdw/source_profile.hpp"
#include "fdw/spectrum.hpp"

namespace fdw {

/// Scaled condition numbers above this are reported as IllConditioned.
inline constexpr double kPeelConditionLimit = 1e12;
/// Limit for the moment systems, whose condition grows only like the
/// inverse relative gap between eigenvalues.
inline constexpr double kMomentConditionLimit = 1e6;

struct PeelResult {
  std::vector<double> coefficients;  // c_1..c_K, ordered as the exponents
  std::vector<bool> trusted;         // p_k < cutoff
  double condition_number = 0.0;     // of the column-scaled design
  double residual = 0.0;             // ||A c - y|| / max(||y||, tiny)
};

/// Least-squares fit y_i ~ sum_k c_k t_i^{-p_k} with column scaling.
/// Requires >= 3K samples over at least two decades of t, and exponents
/// ascending with gaps >= kCollisionTolerance.
/// Throws Error(IllConditioned) above kPeelConditionLimit.
PeelResult peel_exponents(std::span<const double> t, std::span<const double> y,
                          std::span<const double> exponents,
                          double cutoff = std::numeric_limits<double>::infinity());

struct MomentFit {
  std::vector<double> coefficients;  // c_1..c_M
  double condition_number = 0.0;
  double residual = 0.0;
};

/// Least-squares solve of g_k = sum_n c_n lambda_n^{-powers_k}, column n
/// divided by lambda_n^{-powers_1}. Requires K >= M + 2 and strictly
/// increasing positive lambdas. Throws Error(IllConditioned) above
/// kMomentConditionLimit.
MomentFit invert_moment_sequence(std::span<const double> g, std::span<const double> powers,
                                 std::span<const double> lambdas);

struct StageDiagnostic {
  std::string stage;
  double residual = 0.0;
  double condition_number = 0.0;
};

struct RecoveryReport {
  double alpha = 0.0;
  int K = 0;
  int ell0 = 0;
  double mu_ell0 = 0.0;
  SpatialField a_hat;
  SpatialField b_hat;  // empty unless alpha > 1
  SpatialField f_hat;
  double mu_scale = 1.0;
  std::vector<StageDiagnostic> stages;  // peel, sample, moment-a, [moment-b], moment-f
};

/// Default number of expansion terms per kind.
inline constexpr int kDefaultTerms = 4;

/// Runs the three-stage pipeline on the first M modes of op.
/// Requires all times > 2T and at least M observation points. Throws
/// Error(InadmissibleAlpha) when alpha is classical or excluded for the
/// leading index of mu, and propagates IllConditioned.
RecoveryReport reconstruct(const ObservationSet& obs, const FractionalOrder& alpha,
                           const SpectralOperator& op, const SourceProfile& mu, int K, int M);

struct SimultaneousReport {
  int ell1 = 0;
  double a_diff_norm = 0.0;
  double b_diff_norm = 0.0;
  double f_ratio = 0.0;  // <f2_hat, f_hat> / <f_hat, f_hat>
  std::vector<double> mu_moment_relation;  // mu2_{l1} mu_m - mu_{l1} mu2_m, m = 0..K
  RecoveryReport difference;
  RecoveryReport first;
  RecoveryReport second;
};

/// Compares two observation sets on the same points and times. The
/// difference data u - u2 is reconstructed with the profile mu; the ratio
/// of the recovered spatial factors comes from reconstructing each set
/// with its own profile.
SimultaneousReport simultaneous_reconstruct(const ObservationSet& obs, const ObservationSet& obs2,
                                            const FractionalOrder& alpha,
                                            const SpectralOperator& op, const SourceProfile& mu,
                                            const SourceProfile& mu2, int K, int M);

enum class WitnessOrder { One, Two };

struct Witness {
  WitnessOrder order = WitnessOrder::One;
  double parameter = 1.0;  // lambda for One, r for Two
  double T = 1.0;
  double a = 0.0;
  double b = 0.0;
  double f = 1.0;
};

/// Initial data and source factor making the classical solution vanish for
/// t > T with mu = 1 on (0, T):
///   One: a = -(e^{lT} - 1)/l;  Two: a = -(cos rT - 1)/r^2, b = -sin(rT)/r.
Witness nonuniqueness_witness(WitnessOrder order, double parameter, double T);

/// Scalar solution at order alpha driven by the witness data, with
/// lambda = parameter (One) or r^2 (Two) and mu = 1 on (0, T).
double witness_solution(const Witness& w, const FractionalOrder& alpha, double t);

/// Header `field,mode,true,recovered,abs_err`; `true` and `abs_err` are left
/// empty when no reference spec is supplied.
void write_recovery_csv(const RecoveryReport& report, std::ostream& out,
                        const std::optional<ProblemSpec>& truth = std::nullopt);
void write_report(const RecoveryReport& report, std::ostream& out);

}  // namespace fdw
