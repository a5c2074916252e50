#include <doctest.h>

#include <cmath>
#include <random>

#include "fdw/error.hpp"
#include "fdw/ml_special.hpp"

using namespace fdw;

namespace {

struct Reference {
  double beta, gamma, z, value;
};

// 40+ digit series sums, rounded to 20 significant digits.
const Reference kReference[] = {
    {0.5, 1, -2, 0.25539567631050574387},
    {0.5, 1, -30, 0.018795888861416751497},
    {0.7071067811865476, 1, -3, 0.13623586960373189046},
    {0.7071067811865476, 0.7071067811865476, -40, 0.00015015791518530758729},
    {0.4, 0.4, -8, 0.0038190633005111419658},
    {1.3, 1, -10, -0.040670092992621639599},
    {1.3, 2, -60, 0.012915555803066332344},
    {1.6, 1.6, -200, -7.9624745971439144457e-6},
    {1.9, 1, -25, 0.43534902705681804333},
    {0.25, 1, -4, 0.17291766990277474255},
    {1.5, 0.5, -90, 0.00036794707363391534174},
    {0.9, 2, -150, 0.0069978287350331258579},
};

double scale_of(const MLOrderPair& p, double z) { return std::pow(std::abs(z), 1.0 / p.beta); }

}  // namespace

TEST_CASE("reciprocal gamma") {
  CHECK(gamma_recip(0.0) == 0.0);
  CHECK(gamma_recip(-3.0) == 0.0);
  CHECK(gamma_recip(0.5) == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-15));
  CHECK(gamma_recip(5.0) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
  CHECK(gamma_recip(-0.5) == doctest::Approx(-0.5 / std::sqrt(M_PI)).epsilon(1e-14));
}

TEST_CASE("order validation") {
  CHECK_THROWS_AS(validate({2.5, 1.0}), ValidationError);
  CHECK_THROWS_AS(validate({0.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(validate({1.0, 0.0}), ValidationError);
  CHECK_NOTHROW(validate({2.0, 0.1}));
}

TEST_CASE("classical orders reduce to elementary functions") {
  for (int i = 0; i <= 100; ++i) {
    const double x = 0.5 * i;
    CHECK(std::abs(ml_eval({1, 1}, -x).value - std::exp(-x)) <= 1e-12);
    if (x > 0) CHECK(std::abs(ml_eval({1, 2}, -x).value - (-std::expm1(-x)) / x) <= 1e-12);
    const double r = 0.2 * i;
    CHECK(std::abs(ml_eval({2, 1}, -r * r).value - std::cos(r)) <= 1e-10);
    if (r > 0) CHECK(std::abs(ml_eval({2, 2}, -r * r).value - std::sin(r) / r) <= 1e-10);
  }
}

TEST_CASE("high-precision reference values") {
  for (const auto& ref : kReference) {
    CAPTURE(ref.beta);
    CAPTURE(ref.gamma);
    CAPTURE(ref.z);
    const MLEvaluation e = ml_eval({ref.beta, ref.gamma}, ref.z);
    CHECK(std::abs(e.value - ref.value) <= e.abs_error_bound + 4e-16 * std::abs(ref.value));
    CHECK(std::abs(e.value - ref.value) <= 1e-12 * std::max(1.0, std::abs(ref.value)));
  }
}

TEST_CASE("E_{1/2,1}(-x) against erfcx at large x") {
  // erfcx(1e3) and erfcx(1e6)
  const MLEvaluation a = ml_eval({0.5, 1}, -1e3);
  CHECK(a.value == doctest::Approx(5.641893014533876542e-4).epsilon(1e-13));
  const MLEvaluation b = ml_eval({0.5, 1}, -1e6);
  CHECK(b.value == doctest::Approx(5.641895835474741922e-7).epsilon(1e-13));
  CHECK(b.branch == MLBranch::AsymptoticSeries);
}

TEST_CASE("branch selection by scale") {
  const MLOrderPair p{0.7, 1.0};
  CHECK(ml_eval(p, -std::pow(5.0, 0.7)).branch == MLBranch::TaylorSeries);
  CHECK(ml_eval(p, -std::pow(20.0, 0.7)).branch == MLBranch::HighPrecisionFallback);
  CHECK(ml_eval(p, -std::pow(40.0, 0.7)).branch == MLBranch::AsymptoticSeries);
}

TEST_CASE("branches agree where their domains overlap") {
  for (double beta : {0.3, 0.6, 0.9, 1.2, 1.5, 1.8}) {
    for (double gamma : {0.5, 1.0, beta, 2.0}) {
      const MLOrderPair p{beta, gamma};
      for (double rho : {28.0, 32.0, 36.0, 40.0}) {
        const double z = -std::pow(rho, beta);
        const MLEvaluation q = ml_eval_on_branch(p, z, MLBranch::HighPrecisionFallback);
        const MLEvaluation s = ml_eval_on_branch(p, z, MLBranch::AsymptoticSeries);
        CAPTURE(beta);
        CAPTURE(gamma);
        CAPTURE(rho);
        CHECK(std::abs(q.value - s.value) <= q.abs_error_bound + s.abs_error_bound);
      }
      for (double rho : {2.0, 4.0, 6.0}) {
        const double z = -std::pow(rho, beta);
        const MLEvaluation d = ml_eval_on_branch(p, z, MLBranch::TaylorSeries);
        const MLEvaluation q = ml_eval_on_branch(p, z, MLBranch::HighPrecisionFallback);
        CHECK(std::abs(d.value - q.value) <= d.abs_error_bound + q.abs_error_bound);
      }
    }
  }
}

TEST_CASE("tabulated evaluator matches the free function") {
  const MittagLeffler e({0.75, 0.75});
  for (double x : {0.0, 0.3, 3.0, 12.0, 50.0, 400.0, 1e5}) {
    const MLEvaluation a = e.evaluate(-x);
    const MLEvaluation b = ml_eval({0.75, 0.75}, -x);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-14));
    CHECK(a.branch == b.branch);
  }
}

TEST_CASE("complete monotonicity for beta <= 1: positive and decreasing") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ub(0.05, 1.0), ux(0.0, 8.0);
  for (int i = 0; i < 300; ++i) {
    const MLOrderPair p{ub(gen), 1.0};
    const double x = std::exp(ux(gen)) - 1.0;
    const double v0 = ml_eval(p, -x).value, v1 = ml_eval(p, -1.05 * x - 1e-3).value;
    CAPTURE(p.beta);
    CAPTURE(x);
    CHECK(v0 > 0.0);
    CHECK(v1 < v0);
  }
}

TEST_CASE("first omitted term tracks the truncation error") {
  // The bound is the first omitted term, so the error may exceed it by the
  // size of the following terms.
  for (double beta : {0.4, 0.8, 1.3}) {
    const MLOrderPair p{beta, 1.0};
    for (double x : {100.0, 1000.0}) {
      const MLEvaluation full = ml_eval(p, -x);
      for (int n : {1, 2, 3, 5}) {
        const MLEvaluation t = ml_asym_neg(p, x, n);
        CHECK(std::abs(t.value - full.value) <= 1.25 * t.abs_error_bound + full.abs_error_bound);
      }
    }
  }
}

TEST_CASE("asymptotic series divergence is reported") {
  CHECK_THROWS_AS(
      {
        try {
          ml_asym_neg({0.5, 1.0}, 1.5, 40);
        } catch (const Error& e) {
          CHECK(e.kind() == ErrorKind::AsymptoticDivergence);
          throw;
        }
      },
      Error);
}
