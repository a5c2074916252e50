#pragma once

#include <string>

namespace fdw {

enum class Regime {
  Subdiffusive,    // 0 < alpha < 1
  Diffusive,       // alpha = 1
  Superdiffusive,  // 1 < alpha < 2
  Wave,            // alpha = 2
};

const char* to_string(Regime regime) noexcept;

/// Denominator cap and tolerance used to decide whether alpha is rational.
inline constexpr long long kRationalDenominatorCap = 1000000;
inline constexpr double kRationalTolerance = 1e-12;

/// Order of the time derivative, alpha in (0, 2].
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha);

  double value() const noexcept { return alpha_; }
  Regime regime() const noexcept { return regime_; }

  /// alpha not in {1, 2}.
  bool fractional() const noexcept {
    return regime_ == Regime::Subdiffusive || regime_ == Regime::Superdiffusive;
  }
  /// alpha > 1: the problem carries an initial velocity.
  bool has_velocity() const noexcept { return alpha_ > 1.0; }

  /// p/q with q <= kRationalDenominatorCap and |alpha - p/q| < kRationalTolerance,
  /// found from the continued-fraction convergents.
  bool rational() const noexcept { return denominator_ != 0; }
  long long numerator() const noexcept { return numerator_; }
  long long denominator() const noexcept { return denominator_; }

  std::string describe() const;

 private:
  double alpha_;
  Regime regime_;
  long long numerator_ = 0;
  long long denominator_ = 0;
};

}  // namespace fdw
