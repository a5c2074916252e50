#include <doctest.h>

#include <cmath>

#include "fdw/error.hpp"
#include "fdw/inverse.hpp"
#include "fdw/ode_lab.hpp"

using namespace fdw;

namespace {

const std::vector<double> kWindow = log_spaced(8.0, 2048.0, 80);

std::vector<double> samples(double alpha, double lambda, double a, double b, const SourceProfile& mu) {
  std::vector<double> y;
  for (double t : kWindow) y.push_back(solve_scalar(FractionalOrder(alpha), lambda, a, b, mu, t));
  return y;
}

SourceProfile linear() { return SourceProfile({{0.0, 1.0, {1.0, -2.0}}}, 1.0); }

}  // namespace

TEST_CASE("scalar solution at classical orders") {
  const auto mu = SourceProfile::constant(1.0, 1.0);
  for (double t : {1.5, 3.0, 7.0}) {
    const double one = solve_scalar(FractionalOrder(1.0), 2.0, 0.5, 0.0, mu, t);
    CHECK(one == doctest::Approx(0.5 * std::exp(-2 * t) + std::exp(-2 * t) * std::expm1(2.0) / 2).epsilon(1e-10));
    const double r = 1.5;
    const double two = solve_scalar(FractionalOrder(2.0), r * r, 0.5, 0.2, mu, t);
    const double ref = 0.5 * std::cos(r * t) + 0.2 * std::sin(r * t) / r + (std::cos(r * (t - 1)) - std::cos(r * t)) / (r * r);
    CHECK(two == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("moment dual basis") {
  const auto basis = moment_dual_basis(2.0, 3);
  for (int l = 0; l <= 3; ++l) {
    const SourceProfile p({{0.0, 2.0, basis[l]}}, 2.0);
    for (int m = 0; m <= 3; ++m) CHECK(p.moment(m) == doctest::Approx(m == l ? 1.0 : 0.0).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("scalar round trip") {
  const double a = 1 / std::sqrt(2.0);
  const ScalarRecovery r = recover_scalar(kWindow, samples(a, 2.0, 1.0, 0.0, linear()), FractionalOrder(a), 2.0, 1.0);
  CHECK(r.a_hat == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(r.moments[0]) < 1e-3);
  CHECK(r.moments[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-3));
  CHECK(r.verified_moments == 4);

  const ScalarRecovery s = recover_scalar(kWindow, samples(std::sqrt(2.0), 2.0, 1.0, 0.7, linear()),
                                          FractionalOrder(std::sqrt(2.0)), 2.0, 1.0);
  CHECK(s.b_hat == doctest::Approx(0.7).epsilon(1e-3));
  CHECK(s.a_hat == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("zero samples give zero estimates") {
  const std::vector<double> zero(kWindow.size(), 0.0);
  for (double a : {0.4, 0.5, 1 / std::sqrt(2.0), 1.3, 1.5}) {
    const ScalarRecovery r = recover_scalar(kWindow, zero, FractionalOrder(a), 3.0, 1.0);
    CHECK(std::abs(r.a_hat) < 1e-8);
    CHECK(std::abs(r.b_hat) < 1e-8);
    for (double m : r.moments) CHECK(std::abs(m) < 1e-8);
  }
}

TEST_CASE("witness data: rank deficient at alpha = 1, full rank at fractional order") {
  const Witness w = nonuniqueness_witness(WitnessOrder::One, 1.0, 1.0);
  std::vector<double> y;
  for (double t : kWindow) y.push_back(witness_solution(w, FractionalOrder(1.0), t));
  bool ill = false;
  try {
    recover_scalar(kWindow, y, FractionalOrder(1.0), 1.0, 1.0);
  } catch (const Error& e) {
    ill = e.kind() == ErrorKind::IllConditioned;
  }
  CHECK(ill);

  const FractionalOrder frac(1 / std::sqrt(2.0));
  std::vector<double> yf;
  for (double t : kWindow) yf.push_back(witness_solution(w, frac, t));
  const ScalarRecovery r = recover_scalar(kWindow, yf, frac, 1.0, 1.0);
  CHECK(r.a_hat == doctest::Approx(w.a).epsilon(1e-6));
  CHECK(r.moments[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("initial value is insensitive to a moment-free source perturbation") {
  // P4 shifted to (0, 1) has vanishing moments of order 0..3.
  const SourceProfile base = linear();
  const SourceProfile shifted({{0.0, 1.0, {1.0 + 0.01, -2.0 - 0.2, 0.9, -1.4, 0.7}}}, 1.0);
  const double a = 0.6;
  const ScalarRecovery r0 = recover_scalar(kWindow, samples(a, 2.0, 1.0, 0.0, base), FractionalOrder(a), 2.0, 1.0);
  const ScalarRecovery r1 = recover_scalar(kWindow, samples(a, 2.0, 1.0, 0.0, shifted), FractionalOrder(a), 2.0, 1.0);
  CHECK(std::abs(r0.a_hat - r1.a_hat) < 1e-6);
}

TEST_CASE("point observation") {
  const double a = 1 / std::sqrt(2.0);
  const auto spec = make_spec(FractionalOrder(a), SpectralOperator::dirichlet_laplacian_1d(1.0, 2), zero_field(2),
                              SpatialField{}, SpatialField{{1.0, -0.5}}, SourceProfile::constant(1.0, 1.0));
  const ForwardModel model(spec);
  std::vector<double> y, zero(kWindow.size(), 0.0);
  for (double t : kWindow) y.push_back(model.value(0.3, t));
  const PointRecovery r = point_observation_recover(spec, 0.3, kWindow, y);
  CHECK(r.moments[0] == doctest::Approx(1.0).epsilon(1e-3));
  for (double m : point_observation_recover(spec, 0.3, kWindow, zero).moments) CHECK(std::abs(m) < 1e-8);

  const auto node = make_spec(FractionalOrder(a), SpectralOperator::dirichlet_laplacian_1d(1.0, 2), zero_field(2),
                              SpatialField{}, SpatialField{{0.0, 1.0}}, SourceProfile::constant(1.0, 1.0));
  bool degenerate = false;
  try {
    point_observation_recover(node, 0.5, kWindow, y);
  } catch (const Error& e) {
    degenerate = e.kind() == ErrorKind::DegeneratePoint;
  }
  CHECK(degenerate);
}
