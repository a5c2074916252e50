#include "fdw/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <limits>
#include <sstream>

#include "fdw/error.hpp"
#include "fdw/format.hpp"
#include "fdw/ml_special.hpp"

namespace fdw {

double gen_binom(double x, int ell) {
  require(ell >= 0, "binomial index must be nonnegative");
  double v = 1.0;
  for (int j = 0; j < ell; ++j) v *= (x - j) / (j + 1.0);
  return v;
}

double TailExpansion::remainder_bound(double t) const {
  return remainder_constant * std::pow(t, -sigma - order - 1.0);
}

double TailExpansion::evaluate(double t) const {
  double s = 0.0;
  for (const TailTerm& term : terms) s += term.coefficient * std::pow(t, -term.exponent);
  return s;
}

TailExpansion tail_integral_expansion(double sigma, const SourceProfile& mu, int order, double tol) {
  require(sigma > 0.0, "tail exponent sigma must be positive");
  require(order >= 0, "expansion order must be nonnegative");
  TailExpansion out;
  out.sigma = sigma;
  out.order = order;
  for (int ell = 0; ell <= order; ++ell) {
    if (relative_moment(mu, ell) <= tol) continue;
    out.terms.push_back({ell, sigma + ell, gen_binom(-sigma, ell) * mu.moment(ell)});
  }
  const double T = mu.horizon();
  out.remainder_constant = std::abs(gen_binom(-sigma, order + 1)) * std::pow(2.0, sigma + order + 1.0) *
                           mu.sup_norm() * std::pow(T, order + 2.0) / (order + 2.0);
  return out;
}

double q_prefactor(double alpha, int m) {
  return ((m % 2 == 1) ? 1.0 : -1.0) * gamma_recip(1.0 - alpha * m);
}

double r_prefactor(double alpha, int m) {
  return ((m % 2 == 1) ? 1.0 : -1.0) * gamma_recip(2.0 - alpha * m);
}

double s_prefactor(double alpha, int m, int ell0) {
  return ((m % 2 == 0) ? 1.0 : -1.0) * gamma_recip(-alpha * m) * gen_binom(-alpha * m - 1.0, ell0);
}

CoefficientFields coefficient_fields(const ProblemSpec& spec, int K) {
  validate(spec);
  require(K >= 1, "number of expansion terms must be positive");
  CoefficientFields out;
  out.lattice = exponent_lattice(spec.alpha, K);
  const LeadingIndex li = leading_index(spec.mu);
  out.ell0 = li.ell;
  out.mu_ell0 = li.moment;
  const double a = spec.alpha.value();
  const auto& lambdas = spec.op.eigenvalues();
  const std::size_t modes = spec.a.modes();
  for (int m : out.lattice.indices) {
    const double q = q_prefactor(a, m);
    const double s = s_prefactor(a, m, out.ell0);
    SpatialField Q = zero_field(modes), S = zero_field(modes);
    for (std::size_t n = 0; n < modes; ++n) {
      const double lm = std::pow(lambdas[n], -static_cast<double>(m));
      Q.coeffs[n] = q * spec.a.coeffs[n] * lm;
      S.coeffs[n] = s * spec.f.coeffs[n] * lm / lambdas[n];
    }
    out.Q.push_back(std::move(Q));
    out.S.push_back(std::move(S));
    out.q_prefactor.push_back(q);
    out.s_prefactor.push_back(s);
    if (spec.alpha.has_velocity()) {
      const double r = r_prefactor(a, m);
      SpatialField R = zero_field(modes);
      for (std::size_t n = 0; n < modes; ++n) {
        R.coeffs[n] = r * spec.b.coeffs[n] * std::pow(lambdas[n], -static_cast<double>(m));
      }
      out.R.push_back(std::move(R));
      out.r_prefactor.push_back(r);
    }
  }
  return out;
}

const char* to_string(TermKind kind) noexcept {
  switch (kind) {
    case TermKind::Q: return "Q";
    case TermKind::R: return "R";
    case TermKind::S: return "S";
  }
  return "?";
}

std::vector<std::pair<TermKind, double>> expansion_exponents(const FractionalOrder& alpha, int ell0, int N) {
  const ExponentLattice lattice = exponent_lattice(alpha, N);
  const double a = alpha.value();
  std::vector<std::pair<TermKind, double>> out;
  for (int m : lattice.indices) {
    out.emplace_back(TermKind::Q, a * m);
    if (alpha.has_velocity()) out.emplace_back(TermKind::R, a * m - 1.0);
    out.emplace_back(TermKind::S, a * m + ell0 + 1.0);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
  return out;
}

LateTimeExpansion late_time_expansion(const ProblemSpec& spec, int N, double collision_tol) {
  const CoefficientFields cf = coefficient_fields(spec, N);
  const double a = spec.alpha.value();
  LateTimeExpansion out;
  for (int k = 0; k < N; ++k) {
    const int m = cf.lattice.indices[k];
    out.terms.push_back({TermKind::Q, k + 1, a * m, cf.Q[k]});
    if (spec.alpha.has_velocity()) out.terms.push_back({TermKind::R, k + 1, a * m - 1.0, cf.R[k]});
    SpatialField S = cf.S[k];
    for (double& c : S.coeffs) c *= cf.mu_ell0;
    out.terms.push_back({TermKind::S, k + 1, a * m + cf.ell0 + 1.0, std::move(S)});
  }
  std::stable_sort(out.terms.begin(), out.terms.end(),
                   [](const ExpansionTerm& x, const ExpansionTerm& y) { return x.exponent < y.exponent; });

  out.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.terms.size(); ++i) {
    for (std::size_t j = i + 1; j < out.terms.size(); ++j) {
      if (out.terms[i].kind == out.terms[j].kind) continue;
      const double gap = std::abs(out.terms[i].exponent - out.terms[j].exponent);
      if (gap <= collision_tol) {
        std::ostringstream os;
        os.precision(12);
        os << to_string(out.terms[i].kind) << out.terms[i].k << " and " << to_string(out.terms[j].kind)
           << out.terms[j].k << " share exponent " << out.terms[i].exponent << " ("
           << spec.alpha.describe() << ", l0=" << cf.ell0 << ")";
        fail(ErrorKind::ExponentCollision, os.str());
      }
      out.min_gap = std::min(out.min_gap, gap);
    }
  }

  // Leading omitted exponent of each data kind that is present.
  const ExponentLattice next = exponent_lattice(spec.alpha, N + 1);
  const double a_next = a * next.indices[N];
  double err = std::numeric_limits<double>::infinity();
  if (!spec.a.is_zero()) err = std::min(err, a_next);
  if (spec.alpha.has_velocity() && !spec.b.is_zero()) err = std::min(err, a_next - 1.0);
  if (!spec.f.is_zero()) {
    err = std::min(err, a_next + cf.ell0 + 1.0);
    for (int ell = cf.ell0 + 1; ell <= kMaxLeadingIndex; ++ell) {
      if (relative_moment(spec.mu, ell) > kMomentTolerance) {
        err = std::min(err, a * next.indices[0] + ell + 1.0);
        break;
      }
    }
  }
  out.error_exponent = std::isfinite(err) ? err : a_next;
  return out;
}

SpatialField expansion_coefficients(const std::vector<ExpansionTerm>& terms, std::size_t modes, double t) {
  SpatialField out = zero_field(modes);
  for (const ExpansionTerm& term : terms) {
    require(term.coeff.modes() == modes, "expansion term has the wrong number of modes");
    const double w = std::pow(t, -term.exponent);
    for (std::size_t n = 0; n < modes; ++n) out.coeffs[n] += term.coeff.coeffs[n] * w;
  }
  return out;
}

double expansion_eval(const SpectralOperator& op, const std::vector<ExpansionTerm>& terms, double x,
                      double t) {
  if (terms.empty()) return 0.0;
  return synthesize(op, expansion_coefficients(terms, terms.front().coeff.modes(), t), x);
}

void write_csv(const LateTimeExpansion& expansion, std::ostream& out) {
  out << "kind,k,exponent,mode,coeff\n";
  for (const ExpansionTerm& term : expansion.terms) {
    for (std::size_t n = 0; n < term.coeff.modes(); ++n) {
      out << to_string(term.kind) << ',' << term.k << ',' << format_double(term.exponent) << ','
          << n + 1 << ',' << format_double(term.coeff.coeffs[n]) << '\n';
    }
  }
}

}  // namespace fdw
