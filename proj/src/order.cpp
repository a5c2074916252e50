#include "fdw/order.hpp"

#include <cmath>
#include <sstream>

#include "fdw/error.hpp"

namespace fdw {

const char* to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::Subdiffusive: return "subdiffusive";
    case Regime::Diffusive: return "diffusive";
    case Regime::Superdiffusive: return "superdiffusive";
    case Regime::Wave: return "wave";
  }
  return "?";
}

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    std::ostringstream os;
    os << "alpha=" << alpha << " outside (0, 2]";
    throw ValidationError(os.str());
  }
  if (alpha == 1.0) {
    regime_ = Regime::Diffusive;
  } else if (alpha == 2.0) {
    regime_ = Regime::Wave;
  } else {
    regime_ = alpha < 1.0 ? Regime::Subdiffusive : Regime::Superdiffusive;
  }

  // Convergents h_k / k_k of the continued fraction of alpha.
  long long h_prev = 1, h = static_cast<long long>(std::floor(alpha));
  long long k_prev = 0, k = 1;
  double rest = alpha - std::floor(alpha);
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(alpha - static_cast<double>(h) / static_cast<double>(k)) < kRationalTolerance) {
      numerator_ = h;
      denominator_ = k;
      break;
    }
    if (rest < 1e-300) break;
    const double inv = 1.0 / rest;
    const long long a = static_cast<long long>(std::floor(inv));
    rest = inv - std::floor(inv);
    const long long h_next = a * h + h_prev;
    const long long k_next = a * k + k_prev;
    if (k_next > kRationalDenominatorCap) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
}

std::string FractionalOrder::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "alpha=" << alpha_ << " (" << to_string(regime_);
  if (rational()) {
    os << ", rational " << numerator_ << "/" << denominator_;
  } else {
    os << ", irrational";
  }
  os << ")";
  return os.str();
}

}  // namespace fdw
