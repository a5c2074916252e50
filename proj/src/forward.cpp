#include "fdw/forward.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "fdw/error.hpp"
#include "fdw/format.hpp"
#include "fdw/quadrature.hpp"

namespace fdw {

void validate(const ProblemSpec& spec) {
  const std::size_t m = static_cast<std::size_t>(spec.op.modes());
  require(spec.a.modes() == m, "initial value a must have one coefficient per mode");
  require(spec.f.modes() == m, "source field f must have one coefficient per mode");
  if (spec.alpha.has_velocity()) {
    require(spec.b.modes() == m, "initial velocity b must have one coefficient per mode when alpha > 1");
  } else {
    require(spec.b.modes() == 0, "initial velocity b is only defined for alpha > 1");
  }
  require(spec.horizon_T > 0.0, "horizon T must be positive");
  require(spec.mu.horizon() == spec.horizon_T, "source profile horizon must equal T");
}

ProblemSpec make_spec(FractionalOrder alpha, SpectralOperator op, SpatialField a, SpatialField b,
                      SpatialField f, SourceProfile mu) {
  if (alpha.has_velocity() && b.modes() == 0) b = zero_field(static_cast<std::size_t>(op.modes()));
  const double T = mu.horizon();
  ProblemSpec spec{alpha, std::move(op), std::move(a), std::move(b), std::move(f), std::move(mu), T};
  validate(spec);
  return spec;
}

Kernels::Kernels(const FractionalOrder& alpha)
    : alpha_(alpha),
      e1_({alpha.value(), 1.0}),
      e2_({alpha.value(), 2.0}),
      ea_({alpha.value(), alpha.value()}) {}

double Kernels::relaxation(double lambda, double t) const {
  return e1_(-lambda * std::pow(t, alpha_.value()));
}

double Kernels::velocity(double lambda, double t) const {
  return t * e2_(-lambda * std::pow(t, alpha_.value()));
}

double Kernels::duhamel(double lambda, const SourceProfile& mu, double t) const {
  require(t > 0.0, "Duhamel term requires t > 0");
  const double a = alpha_.value();
  // u = t - s = v^p. For integer p with p a >= 4 the integrand
  //   p v^{p a - 1} E_{a,a}(-l v^{p a}) mu(t - v^p)
  // is smooth enough at v = 0 for Gauss-Legendre to converge fast.
  const int p = alpha_.fractional() ? static_cast<int>(std::ceil(4.0 / a)) : 1;
  const double pa = p * a;
  double total = 0.0;
  for (const PolynomialPiece& piece : mu.pieces()) {
    const double s0 = piece.t0;
    const double s1 = std::min(piece.t1, t);
    if (s1 <= s0) continue;
    const double v_lo = std::pow(t - s1, 1.0 / p);
    const double v_hi = std::pow(t - s0, 1.0 / p);
    const double mid = 0.5 * (v_lo + v_hi);
    const double half = 0.5 * (v_hi - v_lo);
    auto integrate = [&](int n, double& abs_out, double& noise_out) {
      const GaussLegendreRule& rule = gauss_legendre_cached(n);
      double sum = 0.0;
      double abs_sum = 0.0;
      double noise = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = mid + half * rule.nodes[i];
        const double u = std::pow(v, p);
        const double s = t - u;
        double mu_s = 0.0;
        for (auto it = piece.coeffs.rbegin(); it != piece.coeffs.rend(); ++it) mu_s = mu_s * s + *it;
        const double jac = p == 1 ? std::pow(u, a - 1.0) : p * std::pow(v, pa - 1.0);
        const MLEvaluation e = ea_.evaluate(-lambda * std::pow(u, a));
        const double g = jac * e.value * mu_s;
        sum += rule.weights[i] * g;
        abs_sum += rule.weights[i] * std::abs(g);
        noise += rule.weights[i] * std::abs(jac * mu_s) * e.abs_error_bound;
      }
      abs_out = half * abs_sum;
      noise_out = half * noise;
      return half * sum;
    };
    // Kernel evaluation errors put a floor under the attainable agreement.
    double scale = 0.0;
    double noise = 0.0;
    double prev = integrate(16, scale, noise);
    bool converged = false;
    double value = prev;
    for (int n = 32; n <= 256; n *= 2) {
      value = integrate(n, scale, noise);
      if (std::abs(value - prev) <=
          kQuadratureTolerance * std::max(std::abs(value), scale) + 4.0 * noise) {
        converged = true;
        break;
      }
      prev = value;
    }
    if (!converged) {
      std::ostringstream os;
      os << "Duhamel quadrature for lambda=" << lambda << ", t=" << t
         << " did not converge after 4 node doublings";
      fail(ErrorKind::QuadratureNotConverged, os.str());
    }
    total += value;
  }
  return total;
}

const Kernels& kernels_for(const FractionalOrder& alpha) {
  thread_local std::optional<Kernels> cached;
  if (!cached || cached->alpha().value() != alpha.value()) cached.emplace(alpha);
  return *cached;
}

double duhamel_mode(double lambda, const FractionalOrder& alpha, const SourceProfile& mu, double t) {
  require(lambda > 0.0, "eigenvalue must be positive");
  return kernels_for(alpha).duhamel(lambda, mu, t);
}

ForwardModel::ForwardModel(ProblemSpec spec) : spec_(std::move(spec)), kernels_(spec_.alpha) {
  validate(spec_);
}

SpatialField ForwardModel::solve(double t) const {
  require(t > 0.0, "solve requires t > 0");
  const std::size_t m = spec_.a.modes();
  SpatialField out = zero_field(m);
  for (std::size_t n = 0; n < m; ++n) {
    const double lambda = spec_.op.eigenvalues()[n];
    double u = 0.0;
    if (spec_.a.coeffs[n] != 0.0) u += kernels_.relaxation(lambda, t) * spec_.a.coeffs[n];
    if (spec_.alpha.has_velocity() && spec_.b.coeffs[n] != 0.0) {
      u += kernels_.velocity(lambda, t) * spec_.b.coeffs[n];
    }
    if (spec_.f.coeffs[n] != 0.0) u += kernels_.duhamel(lambda, spec_.mu, t) * spec_.f.coeffs[n];
    out.coeffs[n] = u;
  }
  return out;
}

double ForwardModel::value(double x, double t) const { return synthesize(spec_.op, solve(t), x); }

SpatialField solve(const ProblemSpec& spec, double t) { return ForwardModel(spec).solve(t); }

std::vector<double> observation_points(const ProblemSpec& spec, Interval omega) {
  require(omega.lo >= 0.0 && omega.hi <= spec.op.length() && omega.lo < omega.hi,
          "observation interval must be a nonempty subinterval of the domain");
  const int count = 2 * spec.op.modes() + 1;
  std::vector<double> xs(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) xs[i] = omega.lo + (i + 1) * (omega.hi - omega.lo) / (count + 1);
  return xs;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  require(lo > 0.0 && hi > lo && count >= 2, "log spacing needs 0 < lo < hi and count >= 2");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

ObservationSet observe(const ForwardModel& model, Interval omega, std::span<const double> times,
                       double noise_sigma, std::uint64_t seed, std::optional<std::vector<double>> points) {
  const ProblemSpec& spec = model.spec();
  require(noise_sigma >= 0.0, "noise level must be nonnegative");
  require(!times.empty(), "observation needs at least one time");
  for (double t : times) require(t > spec.horizon_T, "observation times must exceed T");
  ObservationSet obs;
  obs.points = points ? std::move(*points) : observation_points(spec, omega);
  for (double x : obs.points) {
    require(x >= omega.lo && x <= omega.hi, "observation points must lie in omega");
  }
  obs.times.assign(times.begin(), times.end());
  obs.noise_sigma = noise_sigma;
  obs.seed = seed;
  obs.values.assign(obs.points.size() * obs.times.size(), 0.0);
  std::vector<std::vector<double>> phi;
  phi.reserve(obs.points.size());
  for (double x : obs.points) phi.push_back(spec.op.eigenfunctions_at(x));
  for (std::size_t j = 0; j < obs.times.size(); ++j) {
    const SpatialField u = model.solve(obs.times[j]);
    for (std::size_t i = 0; i < obs.points.size(); ++i) {
      double v = 0.0;
      for (std::size_t n = 0; n < u.modes(); ++n) v += u.coeffs[n] * phi[i][n];
      obs.values[i * obs.times.size() + j] = v;
    }
  }
  if (noise_sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (double& v : obs.values) v += noise(rng);
  }
  return obs;
}

ObservationSet observe(const ProblemSpec& spec, Interval omega, std::span<const double> times,
                       double noise_sigma, std::uint64_t seed) {
  return observe(ForwardModel(spec), omega, times, noise_sigma, seed);
}

void write_csv(const ObservationSet& obs, std::ostream& out) {
  out << "x,t,value\n";
  for (std::size_t i = 0; i < obs.points.size(); ++i) {
    for (std::size_t j = 0; j < obs.times.size(); ++j) {
      out << format_double(obs.points[i]) << ',' << format_double(obs.times[j]) << ','
          << format_double(obs.at(i, j)) << '\n';
    }
  }
}

ObservationSet read_observations_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "observation CSV is empty");
  require(line.rfind("x,t,value", 0) == 0, "observation CSV must start with header x,t,value");
  std::vector<double> xs, ts, vs;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    double fields[3];
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(row, cell, ',')) {
        throw ValidationError("observation CSV line " + std::to_string(lineno) + ": expected 3 fields");
      }
      try {
        fields[c] = std::stod(cell);
      } catch (const std::exception&) {
        throw ValidationError("observation CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    xs.push_back(fields[0]);
    ts.push_back(fields[1]);
    vs.push_back(fields[2]);
  }
  ObservationSet obs;
  for (std::size_t r = 0; r < xs.size(); ++r) {
    if (obs.points.empty() || obs.points.back() != xs[r]) obs.points.push_back(xs[r]);
    if (obs.points.size() == 1) obs.times.push_back(ts[r]);
  }
  require(!obs.points.empty(), "observation CSV has no rows");
  require(obs.points.size() * obs.times.size() == vs.size(),
          "observation CSV must contain a full x-major grid");
  for (std::size_t r = 0; r < ts.size(); ++r) {
    require(ts[r] == obs.times[r % obs.times.size()], "observation CSV times differ between points");
  }
  obs.values = std::move(vs);
  return obs;
}

double caputo_residual(const ForwardModel& model, std::span<const double> x_grid, double h,
                       double t_check, double t_from) {
  const ProblemSpec& spec = model.spec();
  require(h > 0.0 && t_check > h, "residual grid needs 0 < h < t_check");
  const double a = spec.alpha.value();
  const int steps = static_cast<int>(std::floor(t_check / h + 1e-9));
  const std::size_t m = spec.a.modes();
  // A central difference for u' needs one point past the last residual time.
  const bool needs_lookahead = spec.alpha.has_velocity();
  const int last = needs_lookahead ? steps + 1 : steps;

  std::vector<std::vector<double>> u(m, std::vector<double>(static_cast<std::size_t>(last) + 1));
  for (std::size_t n = 0; n < m; ++n) u[n][0] = spec.a.coeffs[n];
  for (int j = 1; j <= last; ++j) {
    const SpatialField c = model.solve(j * h);
    for (std::size_t n = 0; n < m; ++n) u[n][j] = c.coeffs[n];
  }

  auto l1_weights = [&](double order) {
    std::vector<double> w(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) w[k] = std::pow(k + 1.0, 1.0 - order) - std::pow(static_cast<double>(k), 1.0 - order);
    return w;
  };

  const int first = std::max(1, static_cast<int>(std::ceil(t_from / h - 1e-9)));
  std::vector<std::vector<double>> phi;
  for (double x : x_grid) phi.push_back(spec.op.eigenfunctions_at(x));

  std::vector<double> w;
  double scale = 0.0;
  if (spec.alpha.regime() == Regime::Subdiffusive) {
    w = l1_weights(a);
    scale = std::pow(h, -a) / std::tgamma(2.0 - a);
  } else if (spec.alpha.regime() == Regime::Superdiffusive) {
    w = l1_weights(a - 1.0);
    scale = std::pow(h, 1.0 - a) / std::tgamma(3.0 - a);
  }

  std::vector<std::vector<double>> du(m);
  if (spec.alpha.regime() == Regime::Superdiffusive) {
    for (std::size_t n = 0; n < m; ++n) {
      du[n].resize(static_cast<std::size_t>(steps) + 1);
      du[n][0] = spec.b.coeffs[n];
      for (int j = 1; j <= steps; ++j) du[n][j] = (u[n][j + 1] - u[n][j - 1]) / (2.0 * h);
    }
  }

  double worst = 0.0;
  std::vector<double> r(m);
  for (int j = first; j <= steps; ++j) {
    const double t = j * h;
    for (std::size_t n = 0; n < m; ++n) {
      double d = 0.0;
      switch (spec.alpha.regime()) {
        case Regime::Subdiffusive:
          for (int k = 0; k < j; ++k) d += w[k] * (u[n][j - k] - u[n][j - k - 1]);
          d *= scale;
          break;
        case Regime::Diffusive:
          d = (u[n][j] - u[n][j - 1]) / h;
          break;
        case Regime::Superdiffusive:
          for (int k = 0; k < j; ++k) d += w[k] * (du[n][j - k] - du[n][j - k - 1]);
          d *= scale;
          break;
        case Regime::Wave:
          d = (u[n][j + 1] - 2.0 * u[n][j] + u[n][j - 1]) / (h * h);
          break;
      }
      r[n] = d + spec.op.eigenvalues()[n] * u[n][j] - spec.mu(t) * spec.f.coeffs[n];
    }
    for (const auto& ph : phi) {
      double v = 0.0;
      for (std::size_t n = 0; n < m; ++n) v += r[n] * ph[n];
      worst = std::max(worst, std::abs(v));
    }
  }
  return worst;
}

}  // namespace fdw
