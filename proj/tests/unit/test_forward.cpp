#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fdw/error.hpp"
#include "fdw/forward.hpp"

using namespace fdw;

namespace {

ProblemSpec two_mode(double alpha) {
  return make_spec(FractionalOrder(alpha), SpectralOperator::dirichlet_laplacian_1d(1.0, 2),
                   SpatialField{{1.0, 0.5}}, SpatialField{}, SpatialField{{1.0, -0.5}},
                   SourceProfile::constant(1.0, 1.0));
}

}  // namespace

TEST_CASE("Duhamel term at alpha = 1 is the exponential closed form") {
  const auto mu = SourceProfile::constant(1.0, 1.0);
  for (double lambda : {0.5, 1.0, 2.0}) {
    for (int j = 1; j <= 30; ++j) {
      const double t = 1.0 + 0.3 * j;
      const double ref = std::exp(-lambda * t) * std::expm1(lambda) / lambda;
      const double d = duhamel_mode(lambda, FractionalOrder(1.0), mu, t);
      CHECK(std::abs(d - ref) <= 1e-9 * std::abs(ref));
    }
  }
}

TEST_CASE("Duhamel term at alpha = 2 is the trigonometric closed form") {
  const double T = 1.0;
  const auto mu = SourceProfile::constant(1.0, T);
  for (double r : {0.5, 1.0, 2.0}) {
    double peak = 0.0, worst = 0.0;
    for (int j = 1; j <= 30; ++j) {
      const double t = T + 0.3 * j;
      const double ref = (std::cos(r * (T - t)) - std::cos(r * t)) / (r * r);
      const double d = duhamel_mode(r * r, FractionalOrder(2.0), mu, t);
      peak = std::max(peak, std::abs(ref));
      worst = std::max(worst, std::abs(d - ref));
    }
    CHECK(worst <= 1e-9 * peak);
  }
}

TEST_CASE("zero data gives the zero solution") {
  const auto spec = make_spec(FractionalOrder(0.7), SpectralOperator::dirichlet_laplacian_1d(1.0, 3),
                              zero_field(3), SpatialField{}, zero_field(3),
                              SourceProfile::constant(1.0, 1.0));
  CHECK(solve(spec, 3.0).is_zero());
}

TEST_CASE("initial value only: relaxation function per mode") {
  const auto spec = make_spec(FractionalOrder(0.6), SpectralOperator::dirichlet_laplacian_1d(1.0, 2),
                              SpatialField{{2.0, 0.0}}, SpatialField{}, zero_field(2),
                              SourceProfile::constant(1.0, 1.0));
  const double t = 1.7, lambda = M_PI * M_PI;
  const double ref = 2.0 * ml_eval({0.6, 1.0}, -lambda * std::pow(t, 0.6)).value;
  CHECK(solve(spec, t).coeffs[0] == doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("velocity term for alpha > 1") {
  const auto spec = make_spec(FractionalOrder(1.5), SpectralOperator::diagonal({2.0}, 1.0),
                              SpatialField{{0.0}}, SpatialField{{1.0}}, SpatialField{{0.0}},
                              SourceProfile::constant(1.0, 1.0));
  const double t = 2.5;
  const double ref = t * ml_eval({1.5, 2.0}, -2.0 * std::pow(t, 1.5)).value;
  CHECK(solve(spec, t).coeffs[0] == doctest::Approx(ref).epsilon(1e-13));
  CHECK_THROWS_AS(make_spec(FractionalOrder(0.5), SpectralOperator::diagonal({2.0}, 1.0),
                            SpatialField{{0.0}}, SpatialField{{1.0}}, SpatialField{{0.0}},
                            SourceProfile::constant(1.0, 1.0)),
                  ValidationError);
}

TEST_CASE("observations: layout, determinism, noise") {
  const ForwardModel model(two_mode(0.8));
  const std::vector<double> times = log_spaced(2.0, 200.0, 12);
  CHECK(times.front() == doctest::Approx(2.0));
  CHECK(times.back() == doctest::Approx(200.0));
  const ObservationSet clean = observe(model, {0.2, 0.5}, times);
  CHECK(clean.points.size() == 5);
  CHECK(clean.at(2, 3) == doctest::Approx(model.value(clean.points[2], times[3])).epsilon(1e-15));

  const ObservationSet n1 = observe(model, {0.2, 0.5}, times, 1e-3, 11);
  const ObservationSet n2 = observe(model, {0.2, 0.5}, times, 1e-3, 11);
  const ObservationSet n3 = observe(model, {0.2, 0.5}, times, 1e-3, 12);
  CHECK(n1.values == n2.values);
  CHECK(n1.values != n3.values);
  double ss = 0.0;
  for (std::size_t i = 0; i < n1.values.size(); ++i) ss += std::pow(n1.values[i] - clean.values[i], 2);
  const double sd = std::sqrt(ss / n1.values.size());
  CHECK(sd > 0.6e-3);
  CHECK(sd < 1.4e-3);

  CHECK_THROWS_AS(observe(model, {0.2, 0.5}, std::vector<double>{0.5}), ValidationError);
}

TEST_CASE("observation CSV round trip") {
  const ObservationSet obs = observe(ForwardModel(two_mode(0.8)), {0.2, 0.5}, log_spaced(2.0, 50.0, 4));
  std::stringstream ss;
  write_csv(obs, ss);
  CHECK(ss.str().rfind("x,t,value\n", 0) == 0);
  const ObservationSet back = read_observations_csv(ss);
  CHECK(back.points == obs.points);
  CHECK(back.times == obs.times);
  CHECK(back.values == obs.values);
}

TEST_CASE("Caputo residual converges under grid refinement") {
  const double lambda = M_PI * M_PI;
  const auto spec = make_spec(FractionalOrder(0.5), SpectralOperator::diagonal({lambda}, 1.0),
                              SpatialField{{1.0}}, SpatialField{}, SpatialField{{1.0}},
                              SourceProfile::constant(1.0, 2.0));
  const ForwardModel model(spec);
  const std::vector<double> xs{0.3};
  const double r1 = caputo_residual(model, xs, 0.02, 1.0, 0.5);
  const double r2 = caputo_residual(model, xs, 0.01, 1.0, 0.5);
  CHECK(r1 / r2 >= 1.5);
}
