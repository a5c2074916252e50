#include <doctest.h>

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>

#include "fdw/error.hpp"
#include "fdw/inverse.hpp"

using namespace fdw;

namespace {

std::optional<ErrorKind> kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

double rel(const SpatialField& hat, const SpatialField& ref) {
  double num = 0, den = 0;
  for (std::size_t n = 0; n < ref.modes(); ++n) {
    num += std::pow(hat.coeffs[n] - ref.coeffs[n], 2);
    den += ref.coeffs[n] * ref.coeffs[n];
  }
  return std::sqrt(num / den);
}

ObservationSet zeros(std::size_t points, const std::vector<double>& times) {
  ObservationSet o;
  for (std::size_t i = 0; i < points; ++i) o.points.push_back(0.1 + 0.02 * i);
  o.times = times;
  o.values.assign(points * times.size(), 0.0);
  return o;
}

const std::vector<double> kWindow = log_spaced(8.0, 2048.0, 80);

}  // namespace

TEST_CASE("peeling a synthetic power sum") {
  const std::vector<double> t = log_spaced(10.0, 1e4, 60);
  std::vector<double> y, z(t.size(), 0.0);
  for (double ti : t) y.push_back(2 * std::pow(ti, -0.5) - 3 * std::pow(ti, -1.2) + 0.1 * std::pow(ti, -2.7));
  const std::vector<double> p{0.5, 1.2, 2.7};
  const PeelResult r = peel_exponents(t, y, p);
  CHECK(r.coefficients[0] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.coefficients[1] == doctest::Approx(-3.0).epsilon(1e-6));
  CHECK(r.coefficients[2] == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(r.trusted == std::vector<bool>{true, true, true});

  const PeelResult cut = peel_exponents(t, y, p, 2.0);
  CHECK(cut.trusted == std::vector<bool>{true, true, false});

  for (double c : peel_exponents(t, z, p).coefficients) CHECK(std::abs(c) < 1e-10);
}

TEST_CASE("peeling preconditions") {
  const std::vector<double> t = log_spaced(10.0, 1e4, 60), y(60, 0.0);
  CHECK_THROWS_AS(peel_exponents(t, y, std::vector<double>{1.0, 0.5}), ValidationError);
  CHECK_THROWS_AS(peel_exponents(log_spaced(10.0, 50.0, 60), y, std::vector<double>{0.5}), ValidationError);
  CHECK_THROWS_AS(peel_exponents(std::span(t).first(5), std::span(y).first(5), std::vector<double>{0.5, 1.0}),
                  ValidationError);
  std::vector<double> crowded;
  for (int k = 0; k < 6; ++k) crowded.push_back(0.5 + 1e-3 * k);
  CHECK(kind_of([&] { peel_exponents(t, y, crowded); }) == ErrorKind::IllConditioned);
}

TEST_CASE("moment sequence inversion") {
  const std::vector<double> lambdas{1, 4, 9}, c{1, -2, 0.5}, powers{1, 2, 3, 4, 5, 6};
  std::vector<double> g;
  for (double p : powers) {
    double s = 0;
    for (int n = 0; n < 3; ++n) s += c[n] * std::pow(lambdas[n], -p);
    g.push_back(s);
  }
  const MomentFit fit = invert_moment_sequence(g, powers, lambdas);
  for (int n = 0; n < 3; ++n) CHECK(fit.coefficients[n] == doctest::Approx(c[n]).epsilon(1e-8));

  const std::vector<double> zero(6, 0.0);
  for (double v : invert_moment_sequence(zero, powers, lambdas).coefficients) CHECK(std::abs(v) < 1e-10);

  CHECK(kind_of([&] { invert_moment_sequence(g, powers, std::vector<double>{1, 1.0000001, 9}); }) ==
        ErrorKind::IllConditioned);
  CHECK_THROWS_AS(invert_moment_sequence(std::span(g).first(4), std::span(powers).first(4), lambdas),
                  ValidationError);
}

TEST_CASE("zero observations give zero fields at admissible orders") {
  const auto op = SpectralOperator::dirichlet_laplacian_1d(0.5, 3);
  const SourceProfile mus[] = {SourceProfile::constant(1.0, 1.0), SourceProfile({{0.0, 1.0, {1.0, -2.0}}}, 1.0)};
  for (double a : {0.4, 1 / std::sqrt(2.0), 0.9, 1.3, std::sqrt(2.0), 1.9}) {
    for (const auto& mu : mus) {
      const FractionalOrder alpha(a);
      if (!admissible_alpha(alpha, leading_index(mu).ell, regime_of(alpha)).admissible) continue;
      const RecoveryReport r = reconstruct(zeros(7, kWindow), alpha, op, mu, 4, 3);
      CHECK(r.a_hat.norm() < 1e-8);
      CHECK(r.f_hat.norm() < 1e-8);
      if (alpha.has_velocity()) CHECK(r.b_hat.norm() < 1e-8);
      CHECK(r.stages.size() == (alpha.has_velocity() ? 5u : 4u));
    }
  }
}

TEST_CASE("two-mode round trip at alpha = 1/sqrt(2)") {
  const double a = 1 / std::sqrt(2.0);
  const auto spec = make_spec(FractionalOrder(a), SpectralOperator::dirichlet_laplacian_1d(1.0, 2),
                              SpatialField{{1.0, 0.5}}, SpatialField{}, SpatialField{{1.0, -0.5}},
                              SourceProfile::constant(1.0, 1.0));
  const ObservationSet obs = observe(spec, {0.2, 0.5}, kWindow);
  const RecoveryReport r = reconstruct(obs, spec.alpha, spec.op, spec.mu, kDefaultTerms, 2);
  CHECK(rel(r.a_hat, spec.a) < 1e-3);
  CHECK(rel(r.f_hat, spec.f) < 1e-3);
  for (const auto& s : r.stages) CHECK(std::isfinite(s.condition_number));
}

TEST_CASE("initial velocity is recovered for alpha = sqrt(2)") {
  const auto spec = make_spec(FractionalOrder(std::sqrt(2.0)), SpectralOperator::dirichlet_laplacian_1d(0.5, 3),
                              SpatialField{{1.0, 0.5, -0.3}}, SpatialField{{0.4, -0.2, 0.1}},
                              SpatialField{{1.0, -0.5, 0.25}}, SourceProfile::constant(1.0, 1.0));
  const ObservationSet obs = observe(spec, {0.1, 0.25}, kWindow);
  const RecoveryReport r = reconstruct(obs, spec.alpha, spec.op, spec.mu, kDefaultTerms, 3);
  CHECK(rel(r.a_hat, spec.a) < 1e-3);
  CHECK(rel(r.b_hat, spec.b) < 1e-3);
  CHECK(rel(r.f_hat, spec.f) < 1e-3);

  std::stringstream csv;
  write_recovery_csv(r, csv, spec);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "field,mode,true,recovered,abs_err");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 9);
}

TEST_CASE("excluded and classical orders are refused") {
  const auto op = SpectralOperator::dirichlet_laplacian_1d(1.0, 2);
  const auto mu = SourceProfile::constant(1.0, 1.0);
  CHECK(kind_of([&] { reconstruct(zeros(5, kWindow), FractionalOrder(0.5), op, mu, 4, 2); }) ==
        ErrorKind::InadmissibleAlpha);
  CHECK(kind_of([&] { reconstruct(zeros(5, kWindow), FractionalOrder(1.0), op, mu, 4, 2); }) ==
        ErrorKind::InadmissibleAlpha);
  const SourceProfile lin({{0.0, 1.0, {1.0, -2.0}}}, 1.0);
  CHECK(kind_of([&] { reconstruct(zeros(5, kWindow), FractionalOrder(1.5), op, lin, 4, 2); }) ==
        ErrorKind::InadmissibleAlpha);
  CHECK_THROWS_AS(reconstruct(zeros(5, log_spaced(1.5, 100.0, 40)), FractionalOrder(0.7), op, mu, 4, 2),
                  ValidationError);
}

TEST_CASE("scaling ambiguity of the source factorization") {
  const double a = 1 / std::sqrt(2.0);
  const auto op = SpectralOperator::dirichlet_laplacian_1d(0.5, 2);
  const auto mu = SourceProfile::constant(1.0, 1.0);
  const auto s1 = make_spec(FractionalOrder(a), op, SpatialField{{1.0, 0.5}}, SpatialField{},
                            SpatialField{{1.0, -0.5}}, mu);
  for (double c : {0.5, 2.0, -3.0}) {
    const auto s2 = make_spec(FractionalOrder(a), op, SpatialField{{1.0, 0.5}}, SpatialField{},
                              SpatialField{{c, -0.5 * c}}, mu.scaled(1.0 / c));
    const ObservationSet o1 = observe(s1, {0.1, 0.25}, kWindow);
    const ObservationSet o2 = observe(s2, {0.1, 0.25}, kWindow);
    double gap = 0;
    for (std::size_t i = 0; i < o1.values.size(); ++i) gap = std::max(gap, std::abs(o1.values[i] - o2.values[i]));
    CHECK(gap <= 1e-12);
    const SimultaneousReport r = simultaneous_reconstruct(o1, o2, s1.alpha, op, s1.mu, s2.mu, 4, 2);
    CHECK(r.f_ratio == doctest::Approx(c).epsilon(1e-3));
    CHECK(r.a_diff_norm < 1e-8);
    for (double v : r.mu_moment_relation) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("distinct source products leave nonzero relation residuals") {
  const double a = 1 / std::sqrt(2.0);
  const auto op = SpectralOperator::dirichlet_laplacian_1d(0.5, 2);
  const auto mu = SourceProfile::constant(1.0, 1.0);
  const SourceProfile mu2({{0.0, 1.0, {1.0, 1.0}}}, 1.0);
  const auto s1 = make_spec(FractionalOrder(a), op, SpatialField{{1.0, 0.5}}, SpatialField{}, SpatialField{{1.0, -0.5}}, mu);
  const auto s2 = make_spec(FractionalOrder(a), op, SpatialField{{1.0, 0.5}}, SpatialField{}, SpatialField{{1.0, -0.5}}, mu2);
  const SimultaneousReport r =
      simultaneous_reconstruct(observe(s1, {0.1, 0.25}, kWindow), observe(s2, {0.1, 0.25}, kWindow), s1.alpha, op,
                               mu, mu2, 4, 2);
  // mu2_0 mu_1 - mu_0 mu2_1 = 1.5 (-1/2) - (-5/6) = 1/12
  CHECK(r.mu_moment_relation[0] == doctest::Approx(0.0));
  CHECK(r.mu_moment_relation[1] == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(r.f_ratio == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("classical-order witnesses") {
  const Witness one = nonuniqueness_witness(WitnessOrder::One, 1.0, 1.0);
  CHECK(one.a == doctest::Approx(-(M_E - 1)).epsilon(1e-15));
  CHECK(one.f == 1.0);
  const Witness two = nonuniqueness_witness(WitnessOrder::Two, 1.0, M_PI);
  CHECK(two.a == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(std::abs(two.b) < 1e-15);
  const Witness two_b = nonuniqueness_witness(WitnessOrder::Two, 2.0, M_PI / 2);
  CHECK(two_b.a == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(two_b.b) < 1e-15);

  double m1 = 0, m2 = 0, m3 = 0, frac = 0;
  for (int j = 0; j <= 60; ++j) {
    const double s = 0.1 + 8.9 * j / 60.0;
    m1 = std::max(m1, std::abs(witness_solution(one, FractionalOrder(1.0), 1.0 + s)));
    m2 = std::max(m2, std::abs(witness_solution(two, FractionalOrder(2.0), M_PI * (1.0 + s / 1.0))));
    m3 = std::max(m3, std::abs(witness_solution(two_b, FractionalOrder(2.0), M_PI / 2 * (1.0 + s))));
    frac = std::max(frac, std::abs(witness_solution(one, FractionalOrder(1 / std::sqrt(2.0)), 1.0 + s)));
  }
  CHECK(m1 < 1e-12);
  CHECK(m2 < 1e-10);
  CHECK(m3 < 1e-10);
  CHECK(frac > 1e-3);
  CHECK_THROWS_AS(nonuniqueness_witness(WitnessOrder::Two, -1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(nonuniqueness_witness(WitnessOrder::One, 0.0, 1.0), ValidationError);
}
