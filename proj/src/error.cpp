#include "fdw/error.hpp"

namespace fdw {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::AsymptoticDivergence: return "AsymptoticDivergence";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::IndexSearchExhausted: return "IndexSearchExhausted";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::ExponentCollision: return "ExponentCollision";
    case ErrorKind::InadmissibleAlpha: return "InadmissibleAlpha";
    case ErrorKind::DegeneratePoint: return "DegeneratePoint";
  }
  return "Unknown";
}

}  // namespace fdw
