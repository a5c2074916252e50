#pragma once

// Late-time power-law expansion of the series solution for t > 2T:
//   u ~ sum_k Q_k t^{-a m(k)} + sum_k R_k t^{1 - a m(k)}            (a > 1)
//     + sum_k S_k mu_{l0} t^{-a m(k) - l0 - 1}
// with m(k) the exponent lattice of a and l0 the leading moment index of mu.

#include <iosfwd>
#include <vector>

#include "fdw/forward.hpp"
#include "fdw/source_profile.hpp"
#include "fdw/spectrum.hpp"

namespace fdw {

/// (x)(x-1)...(x-l+1) / l!, with gen_binom(x, 0) = 1.
double gen_binom(double x, int ell);

struct TailTerm {
  int ell = 0;
  double exponent = 0.0;     // sigma + ell
  double coefficient = 0.0;  // gen_binom(-sigma, ell) mu_ell
};

/// Expansion of J(t) = int_0^T (t - s)^{-sigma} mu(s) ds in powers t^{-sigma-ell}.
struct TailExpansion {
  double sigma = 0.0;
  int order = 0;                 // L
  std::vector<TailTerm> terms;   // ell = l0..L, zero moments dropped
  double remainder_constant = 0.0;

  /// |J(t) - sum of terms| <= remainder_constant t^{-sigma-L-1} for t >= 2T.
  double remainder_bound(double t) const;
  double evaluate(double t) const;
};

/// The remainder constant is |gen_binom(-sigma, L+1)| 2^{sigma+L+1} ||mu||_inf T^{L+2} / (L+2),
/// from the Lagrange remainder of (1 - eta)^{-sigma} on 0 <= eta <= 1/2.
TailExpansion tail_integral_expansion(double sigma, const SourceProfile& mu, int order,
                                      double tol = kMomentTolerance);

struct CoefficientFields {
  ExponentLattice lattice;
  int ell0 = 0;
  double mu_ell0 = 0.0;
  std::vector<SpatialField> Q;
  std::vector<SpatialField> R;  // empty unless alpha > 1
  std::vector<SpatialField> S;  // without the mu_{l0} factor

  /// Spectral prefactors: Q_k has coefficients q_k * a_n / l_n^{m(k)}, etc.
  std::vector<double> q_prefactor;
  std::vector<double> r_prefactor;
  std::vector<double> s_prefactor;
};

CoefficientFields coefficient_fields(const ProblemSpec& spec, int K);

/// Prefactors as functions of alpha and m alone.
double q_prefactor(double alpha, int m);
double r_prefactor(double alpha, int m);
double s_prefactor(double alpha, int m, int ell0);

enum class TermKind { Q, R, S };

const char* to_string(TermKind kind) noexcept;

struct ExpansionTerm {
  TermKind kind = TermKind::Q;
  int k = 1;
  double exponent = 0.0;  // the term is coeff * t^{-exponent}
  SpatialField coeff;
};

struct LateTimeExpansion {
  std::vector<ExpansionTerm> terms;  // ascending exponent
  double error_exponent = 0.0;
  double min_gap = 0.0;              // smallest distance between exponents of different kinds
};

inline constexpr double kCollisionTolerance = 1e-9;

/// Merged, exponent-sorted term list up to k = N, with the S terms carrying
/// mu_{l0}. error_exponent is the smallest exponent among the leading
/// omitted terms of the data kinds that are present. Throws
/// Error(ExponentCollision) when terms of different kinds share an exponent.
LateTimeExpansion late_time_expansion(const ProblemSpec& spec, int N,
                                      double collision_tol = kCollisionTolerance);

/// Exponents only: {a m(k)}, {a m(k) - 1} (a > 1), {a m(k) + l0 + 1}.
std::vector<std::pair<TermKind, double>> expansion_exponents(const FractionalOrder& alpha, int ell0, int N);

/// sum_terms coeff(x) t^{-exponent}
double expansion_eval(const SpectralOperator& op, const std::vector<ExpansionTerm>& terms, double x,
                      double t);
SpatialField expansion_coefficients(const std::vector<ExpansionTerm>& terms, std::size_t modes, double t);

/// Header `kind,k,exponent,mode,coeff`, one row per term and mode.
void write_csv(const LateTimeExpansion& expansion, std::ostream& out);

}  // namespace fdw
