#include "fdw/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Dense>

#include "fdw/asymptotics.hpp"
#include "fdw/error.hpp"
#include "fdw/format.hpp"
#include "fdw/quadrature.hpp"
#include "scaled_lsq.hpp"

namespace fdw {

namespace {

std::string fmt(double v) { return format_double(v); }

void check_condition(double cond, double limit, const std::string& stage) {
  if (!(cond <= limit)) {
    fail(ErrorKind::IllConditioned,
         stage + ": condition number " + fmt(cond) + " exceeds " + fmt(limit));
  }
}

// int_0^T (t - s)^{-sigma} mu(s) ds for t > 2T, Gauss-Legendre per piece.
double tail_integral(double sigma, const SourceProfile& mu, double t) {
  const GaussLegendreRule& rule = gauss_legendre_cached(64);
  double sum = 0.0;
  for (const auto& piece : mu.pieces()) {
    const double half = 0.5 * (piece.t1 - piece.t0);
    const double mid = 0.5 * (piece.t1 + piece.t0);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double s = mid + half * rule.nodes[i];
      double p = 0.0;
      for (auto c = piece.coeffs.rbegin(); c != piece.coeffs.rend(); ++c) p = p * s + *c;
      sum += half * rule.weights[i] * std::pow(t - s, -sigma) * p;
    }
  }
  return sum;
}

struct Column {
  TermKind kind;
  int k;
  int m;
};

}  // namespace

PeelResult peel_exponents(std::span<const double> t, std::span<const double> y,
                          std::span<const double> exponents, double cutoff) {
  const std::size_t K = exponents.size();
  require(K >= 1, "at least one exponent is required");
  require(t.size() == y.size(), "times and values differ in length");
  require(t.size() >= 3 * K, "need at least 3K samples");
  for (double ti : t) require(ti > 0.0, "sample times must be positive");
  const auto [tmin, tmax] = std::minmax_element(t.begin(), t.end());
  require(*tmax >= 100.0 * *tmin, "sample times must span at least two decades");
  for (std::size_t k = 1; k < K; ++k) {
    require(exponents[k] - exponents[k - 1] >= kCollisionTolerance,
            "exponents must be ascending and distinct");
  }

  Eigen::MatrixXd A(t.size(), K);
  Eigen::VectorXd rhs(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    rhs(i) = y[i];
    for (std::size_t k = 0; k < K; ++k) A(i, k) = std::pow(t[i], -exponents[k]);
  }
  const detail::ScaledSolve sol = detail::scaled_lstsq(A, rhs);
  check_condition(sol.condition_number, kPeelConditionLimit, "peel");

  PeelResult out;
  out.condition_number = sol.condition_number;
  out.residual = sol.residual;
  for (std::size_t k = 0; k < K; ++k) {
    out.coefficients.push_back(sol.x(k, 0));
    out.trusted.push_back(exponents[k] < cutoff);
  }
  return out;
}

MomentFit invert_moment_sequence(std::span<const double> g, std::span<const double> powers,
                                 std::span<const double> lambdas) {
  const std::size_t K = g.size(), M = lambdas.size();
  require(M >= 1, "at least one eigenvalue is required");
  require(powers.size() == K, "powers and moments differ in length");
  require(K >= M + 2, "need K >= M + 2 moments");
  for (std::size_t n = 0; n < M; ++n) {
    require(lambdas[n] > 0.0, "eigenvalues must be positive");
    if (n > 0) require(lambdas[n] > lambdas[n - 1], "eigenvalues must be strictly increasing");
  }

  Eigen::MatrixXd A(K, M);
  Eigen::VectorXd rhs(K);
  for (std::size_t k = 0; k < K; ++k) {
    rhs(k) = g[k];
    for (std::size_t n = 0; n < M; ++n) {
      A(k, n) = std::pow(lambdas[n], -(powers[k] - powers[0]));
    }
  }
  const detail::ScaledSolve sol = detail::scaled_lstsq(A, rhs);
  check_condition(sol.condition_number, kMomentConditionLimit, "moment inversion");

  MomentFit out;
  out.condition_number = sol.condition_number;
  out.residual = sol.residual;
  for (std::size_t n = 0; n < M; ++n) {
    out.coefficients.push_back(sol.x(n, 0) * std::pow(lambdas[n], powers[0]));
  }
  return out;
}

RecoveryReport reconstruct(const ObservationSet& obs, const FractionalOrder& alpha,
                           const SpectralOperator& op, const SourceProfile& mu, int K, int M) {
  require(K >= 3, "reconstruct needs K >= 3 terms per kind");
  require(M >= 1 && M <= op.modes(), "mode count must lie in 1..op.modes()");
  if (!alpha.fractional()) {
    fail(ErrorKind::InadmissibleAlpha,
         "alpha = " + fmt(alpha.value()) + " is a classical order; data do not determine (a, f)");
  }
  const LeadingIndex li = leading_index(mu);
  const Admissibility adm = admissible_alpha(alpha, li.ell, regime_of(alpha));
  if (!adm.admissible) {
    fail(ErrorKind::InadmissibleAlpha,
         "alpha = " + fmt(alpha.value()) + " is excluded for leading index " +
             std::to_string(li.ell) + " (excluded value " + std::to_string(adm.excluded_numerator) +
             "/" + std::to_string(adm.excluded_denominator) + ")");
  }

  const double T = mu.horizon();
  const std::size_t P = obs.points.size(), nt = obs.times.size();
  require(obs.values.size() == P * nt, "observation matrix has the wrong size");
  require(P >= static_cast<std::size_t>(M), "need at least M observation points");
  for (double t : obs.times) require(t > 2.0 * T, "observation times must exceed 2T");

  const double a = alpha.value();
  const ExponentLattice lattice = exponent_lattice(alpha, K);
  std::vector<Column> columns;
  for (int k = 0; k < K; ++k) columns.push_back({TermKind::Q, k, lattice.indices[k]});
  if (alpha.has_velocity()) {
    for (int k = 0; k < K; ++k) columns.push_back({TermKind::R, k, lattice.indices[k]});
  }
  for (int k = 0; k < K; ++k) columns.push_back({TermKind::S, k, lattice.indices[k]});

  // (i) pointwise fit. The S columns are the exact tail integrals scaled so
  // their leading power has unit coefficient; the fitted value is S_k mu_{l0}.
  Eigen::MatrixXd A(nt, columns.size());
  for (std::size_t j = 0; j < nt; ++j) {
    const double t = obs.times[j];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const double am = a * columns[c].m;
      switch (columns[c].kind) {
        case TermKind::Q: A(j, c) = std::pow(t, -am); break;
        case TermKind::R: A(j, c) = std::pow(t, 1.0 - am); break;
        case TermKind::S:
          A(j, c) = tail_integral(am + 1.0, mu, t) / (gen_binom(-am - 1.0, li.ell) * li.moment);
          break;
      }
    }
  }
  Eigen::MatrixXd Y(nt, P);
  for (std::size_t i = 0; i < P; ++i) {
    for (std::size_t j = 0; j < nt; ++j) Y(j, i) = obs.at(i, j);
  }
  const detail::ScaledSolve peel = detail::scaled_lstsq(A, Y);
  check_condition(peel.condition_number, kPeelConditionLimit, "peel");

  // (ii) eigenfunction sample system, one right-hand side per column.
  Eigen::MatrixXd Phi(P, M);
  for (std::size_t i = 0; i < P; ++i) {
    for (int n = 0; n < M; ++n) Phi(i, n) = op.eigenfunction(n + 1, obs.points[i]);
  }
  const detail::ScaledSolve sample = detail::scaled_lstsq(Phi, peel.x.transpose());
  check_condition(sample.condition_number, kPeelConditionLimit, "eigenfunction sample system");
  const Eigen::MatrixXd& modal = sample.x;  // M x columns

  RecoveryReport report;
  report.alpha = a;
  report.K = K;
  report.ell0 = li.ell;
  report.mu_ell0 = li.moment;
  report.stages.push_back({"peel", peel.residual, peel.condition_number});
  report.stages.push_back({"sample", sample.residual, sample.condition_number});

  // (iii) per mode, the K-term sequence of each kind.
  auto invert = [&](TermKind kind, const std::string& stage) {
    SpatialField field = zero_field(M);
    StageDiagnostic diag{stage, 0.0, 0.0};
    for (int n = 0; n < M; ++n) {
      std::vector<double> g, powers;
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].kind != kind) continue;
        const int m = columns[c].m;
        double pref = 0.0, offset = 0.0;
        switch (kind) {
          case TermKind::Q: pref = q_prefactor(a, m); break;
          case TermKind::R: pref = r_prefactor(a, m); break;
          case TermKind::S:
            pref = s_prefactor(a, m, li.ell) * li.moment;
            offset = 1.0;
            break;
        }
        g.push_back(modal(n, c) / pref);
        powers.push_back(m + offset);
      }
      const double lambda = op.eigenvalue(n + 1);
      const MomentFit fit = invert_moment_sequence(g, powers, std::span<const double>(&lambda, 1));
      field.coeffs[n] = fit.coefficients[0];
      diag.residual = std::max(diag.residual, fit.residual);
      diag.condition_number = std::max(diag.condition_number, fit.condition_number);
    }
    report.stages.push_back(diag);
    return field;
  };
  report.a_hat = invert(TermKind::Q, "moment-a");
  if (alpha.has_velocity()) report.b_hat = invert(TermKind::R, "moment-b");
  report.f_hat = invert(TermKind::S, "moment-f");
  return report;
}

SimultaneousReport simultaneous_reconstruct(const ObservationSet& obs, const ObservationSet& obs2,
                                            const FractionalOrder& alpha,
                                            const SpectralOperator& op, const SourceProfile& mu,
                                            const SourceProfile& mu2, int K, int M) {
  require(obs.points == obs2.points && obs.times == obs2.times,
          "observation sets must share points and times");
  require(obs.values.size() == obs2.values.size(), "observation matrices differ in size");

  SimultaneousReport out;
  out.ell1 = pair_leading_index(mu, mu2);
  if (alpha.fractional()) {
    const Admissibility adm = admissible_alpha(alpha, out.ell1, regime_of(alpha));
    if (!adm.admissible) {
      fail(ErrorKind::InadmissibleAlpha, "alpha = " + fmt(alpha.value()) +
                                             " is excluded for leading index " +
                                             std::to_string(out.ell1));
    }
  }

  ObservationSet diff = obs;
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= obs2.values[i];
  out.difference = reconstruct(diff, alpha, op, mu, K, M);
  out.first = reconstruct(obs, alpha, op, mu, K, M);
  out.second = reconstruct(obs2, alpha, op, mu2, K, M);

  out.a_diff_norm = out.difference.a_hat.norm();
  out.b_diff_norm = out.difference.b_hat.norm();
  double num = 0.0, den = 0.0;
  for (int n = 0; n < M; ++n) {
    num += out.second.f_hat.coeffs[n] * out.first.f_hat.coeffs[n];
    den += out.first.f_hat.coeffs[n] * out.first.f_hat.coeffs[n];
  }
  out.f_ratio = den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
  out.difference.mu_scale = out.f_ratio;
  out.second.mu_scale = out.f_ratio;

  const double m1 = mu.moment(out.ell1), m2 = mu2.moment(out.ell1);
  for (int m = 0; m <= K; ++m) {
    out.mu_moment_relation.push_back(m2 * mu.moment(m) - m1 * mu2.moment(m));
  }
  return out;
}

Witness nonuniqueness_witness(WitnessOrder order, double parameter, double T) {
  require(T > 0.0, "T must be positive");
  Witness w;
  w.order = order;
  w.parameter = parameter;
  w.T = T;
  w.f = 1.0;
  if (order == WitnessOrder::One) {
    require(parameter != 0.0, "lambda must be nonzero");
    w.a = -std::expm1(parameter * T) / parameter;
  } else {
    require(parameter > 0.0, "r must be positive");
    const double r = parameter;
    w.a = -(std::cos(r * T) - 1.0) / (r * r);
    w.b = -std::sin(r * T) / r;
  }
  return w;
}

double witness_solution(const Witness& w, const FractionalOrder& alpha, double t) {
  const double lambda = w.order == WitnessOrder::One ? w.parameter : w.parameter * w.parameter;
  require(lambda > 0.0, "the witness eigenvalue must be positive");
  const Kernels& ker = kernels_for(alpha);
  double u = w.a * ker.relaxation(lambda, t);
  if (alpha.has_velocity()) u += w.b * ker.velocity(lambda, t);
  u += w.f * ker.duhamel(lambda, SourceProfile::constant(1.0, w.T), t);
  return u;
}

void write_recovery_csv(const RecoveryReport& report, std::ostream& out,
                        const std::optional<ProblemSpec>& truth) {
  out << "field,mode,true,recovered,abs_err\n";
  auto rows = [&](const char* name, const SpatialField& hat, const SpatialField* ref) {
    for (std::size_t n = 0; n < hat.modes(); ++n) {
      out << name << ',' << n + 1 << ',';
      if (ref && n < ref->modes()) {
        out << fmt(ref->coeffs[n]) << ',' << fmt(hat.coeffs[n]) << ','
            << fmt(std::abs(hat.coeffs[n] - ref->coeffs[n])) << '\n';
      } else {
        out << ',' << fmt(hat.coeffs[n]) << ",\n";
      }
    }
  };
  rows("a", report.a_hat, truth ? &truth->a : nullptr);
  rows("b", report.b_hat, truth ? &truth->b : nullptr);
  rows("f", report.f_hat, truth ? &truth->f : nullptr);
}

void write_report(const RecoveryReport& report, std::ostream& out) {
  out << "alpha: " << fmt(report.alpha) << '\n'
      << "terms per kind: " << report.K << '\n'
      << "leading index: " << report.ell0 << '\n'
      << "leading moment: " << fmt(report.mu_ell0) << '\n'
      << "mu scale: " << fmt(report.mu_scale) << '\n';
  for (const auto& s : report.stages) {
    out << "stage " << s.stage << ": residual " << fmt(s.residual) << ", condition "
        << fmt(s.condition_number) << '\n';
  }
  out << "norm a_hat: " << fmt(report.a_hat.norm()) << '\n';
  if (report.b_hat.modes() > 0) out << "norm b_hat: " << fmt(report.b_hat.norm()) << '\n';
  out << "norm f_hat: " << fmt(report.f_hat.norm()) << '\n';
}

}  // namespace fdw
