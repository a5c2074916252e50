#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fdw/asymptotics.hpp"
#include "fdw/error.hpp"
#include "fdw/forward.hpp"
#include "fdw/inverse.hpp"
#include "fdw/ml_special.hpp"
#include "fdw/ode_lab.hpp"
#include "fdw/source_profile.hpp"
#include "fdw/spectrum.hpp"

namespace py = pybind11;
using namespace fdw;

namespace {

SpatialField field(std::vector<double> c) { return SpatialField{std::move(c)}; }

}  // namespace

PYBIND11_MODULE(_fdw, m) {
  m.doc() = "Time-fractional diffusion-wave toolkit";

  static py::exception<Error> error(m, "Error");
  static py::exception<ValidationError> validation_error(m, "ValidationError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const Error& e) {
      const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
      py::set_error(error, msg.c_str());
    }
  });

  py::enum_<MLBranch>(m, "MLBranch")
      .value("TaylorSeries", MLBranch::TaylorSeries)
      .value("AsymptoticSeries", MLBranch::AsymptoticSeries)
      .value("HighPrecisionFallback", MLBranch::HighPrecisionFallback);

  py::class_<MLEvaluation>(m, "MLEvaluation")
      .def_readonly("value", &MLEvaluation::value)
      .def_readonly("abs_error_bound", &MLEvaluation::abs_error_bound)
      .def_readonly("branch", &MLEvaluation::branch);

  m.def("gamma_recip", &gamma_recip, py::arg("x"));
  m.def(
      "ml_eval", [](double beta, double gamma, double z) { return ml_eval({beta, gamma}, z); },
      py::arg("beta"), py::arg("gamma"), py::arg("z"));
  m.def(
      "ml_asym_neg",
      [](double beta, double gamma, double x, int n) { return ml_asym_neg({beta, gamma}, x, n); },
      py::arg("beta"), py::arg("gamma"), py::arg("x"), py::arg("n_terms"));

  py::class_<FractionalOrder>(m, "FractionalOrder")
      .def(py::init<double>(), py::arg("alpha"))
      .def_property_readonly("value", &FractionalOrder::value)
      .def_property_readonly("rational", &FractionalOrder::rational)
      .def_property_readonly("numerator", &FractionalOrder::numerator)
      .def_property_readonly("denominator", &FractionalOrder::denominator)
      .def("__repr__", &FractionalOrder::describe);

  py::class_<SpectralOperator>(m, "SpectralOperator")
      .def_static("dirichlet_laplacian_1d", &SpectralOperator::dirichlet_laplacian_1d, py::arg("length"),
                  py::arg("modes"))
      .def_static("diagonal", &SpectralOperator::diagonal, py::arg("eigenvalues"), py::arg("length"),
                  py::arg("domain_dim") = 1)
      .def_property_readonly("eigenvalues", &SpectralOperator::eigenvalues)
      .def_property_readonly("modes", &SpectralOperator::modes)
      .def_property_readonly("length", &SpectralOperator::length)
      .def("eigenfunction", &SpectralOperator::eigenfunction, py::arg("n"), py::arg("x"));

  m.def(
      "project",
      [](const SpectralOperator& op, const std::function<double(double)>& f, int nodes) {
        return project(op, f, nodes).coeffs;
      },
      py::arg("op"), py::arg("f"), py::arg("nodes") = kDefaultProjectionNodes);
  m.def(
      "synthesize",
      [](const SpectralOperator& op, std::vector<double> c, double x) { return synthesize(op, field(c), x); },
      py::arg("op"), py::arg("coeffs"), py::arg("x"));

  py::class_<SourceProfile>(m, "SourceProfile")
      .def(py::init([](std::vector<std::tuple<double, double, std::vector<double>>> pieces, double T) {
             std::vector<PolynomialPiece> ps;
             for (auto& [t0, t1, c] : pieces) ps.push_back({t0, t1, c});
             return SourceProfile(std::move(ps), T);
           }),
           py::arg("pieces"), py::arg("T"))
      .def_static("constant", &SourceProfile::constant, py::arg("value"), py::arg("T"))
      .def("__call__", &SourceProfile::operator(), py::arg("t"))
      .def("moment", &SourceProfile::moment, py::arg("m"))
      .def("scaled", &SourceProfile::scaled, py::arg("c"))
      .def_property_readonly("horizon", &SourceProfile::horizon);

  m.def(
      "leading_index",
      [](const SourceProfile& mu) {
        const LeadingIndex li = leading_index(mu);
        return py::make_tuple(li.ell, li.moment);
      },
      py::arg("mu"));

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def(py::init([](double alpha, const SpectralOperator& op, std::vector<double> a, std::vector<double> b,
                       std::vector<double> f, const SourceProfile& mu) {
             return make_spec(FractionalOrder(alpha), op, field(a), field(b), field(f), mu);
           }),
           py::arg("alpha"), py::arg("op"), py::arg("a"), py::arg("b"), py::arg("f"), py::arg("mu"))
      .def_property_readonly("alpha", [](const ProblemSpec& s) { return s.alpha.value(); })
      .def_property_readonly("op", [](const ProblemSpec& s) { return s.op; })
      .def_property_readonly("T", [](const ProblemSpec& s) { return s.horizon_T; });

  py::class_<ForwardModel>(m, "ForwardModel")
      .def(py::init<ProblemSpec>(), py::arg("spec"))
      .def("solve", [](const ForwardModel& fm, double t) { return fm.solve(t).coeffs; }, py::arg("t"))
      .def("value", &ForwardModel::value, py::arg("x"), py::arg("t"))
      .def(
          "duhamel",
          [](const ForwardModel& fm, double lambda, double t) {
            return fm.kernels().duhamel(lambda, fm.spec().mu, t);
          },
          py::arg("lam"), py::arg("t"));

  m.def(
      "duhamel_mode",
      [](double lambda, double alpha, const SourceProfile& mu, double t) {
        return duhamel_mode(lambda, FractionalOrder(alpha), mu, t);
      },
      py::arg("lam"), py::arg("alpha"), py::arg("mu"), py::arg("t"));

  py::class_<ObservationSet>(m, "ObservationSet")
      .def(py::init([](std::vector<double> points, std::vector<double> times, std::vector<double> values) {
             if (values.size() != points.size() * times.size()) {
               throw ValidationError("values must hold len(points) * len(times) entries");
             }
             ObservationSet o;
             o.points = std::move(points);
             o.times = std::move(times);
             o.values = std::move(values);
             return o;
           }),
           py::arg("points"), py::arg("times"), py::arg("values"))
      .def_readonly("points", &ObservationSet::points)
      .def_readonly("times", &ObservationSet::times)
      .def_readonly("values", &ObservationSet::values)
      .def_readonly("noise_sigma", &ObservationSet::noise_sigma)
      .def_readonly("seed", &ObservationSet::seed);

  m.def(
      "observe",
      [](const ForwardModel& fm, double lo, double hi, std::vector<double> times, double sigma,
         std::uint64_t seed) { return observe(fm, {lo, hi}, times, sigma, seed); },
      py::arg("model"), py::arg("lo"), py::arg("hi"), py::arg("times"), py::arg("noise") = 0.0,
      py::arg("seed") = 0);
  m.def("log_spaced", &log_spaced, py::arg("lo"), py::arg("hi"), py::arg("count"));

  py::enum_<TermKind>(m, "TermKind").value("Q", TermKind::Q).value("R", TermKind::R).value("S", TermKind::S);
  py::class_<ExpansionTerm>(m, "ExpansionTerm")
      .def_readonly("kind", &ExpansionTerm::kind)
      .def_readonly("k", &ExpansionTerm::k)
      .def_readonly("exponent", &ExpansionTerm::exponent)
      .def_property_readonly("coeff", [](const ExpansionTerm& t) { return t.coeff.coeffs; });
  py::class_<LateTimeExpansion>(m, "LateTimeExpansion")
      .def_readonly("terms", &LateTimeExpansion::terms)
      .def_readonly("error_exponent", &LateTimeExpansion::error_exponent)
      .def_readonly("min_gap", &LateTimeExpansion::min_gap);
  m.def("late_time_expansion", [](const ProblemSpec& s, int n) { return late_time_expansion(s, n); },
        py::arg("spec"), py::arg("N"));
  m.def("gen_binom", &gen_binom, py::arg("x"), py::arg("ell"));

  py::class_<Admissibility>(m, "Admissibility")
      .def_readonly("admissible", &Admissibility::admissible)
      .def_readonly("nearest_excluded", &Admissibility::nearest_excluded)
      .def_readonly("excluded_numerator", &Admissibility::excluded_numerator)
      .def_readonly("excluded_denominator", &Admissibility::excluded_denominator)
      .def_readonly("distance", &Admissibility::distance);
  m.def(
      "admissible_alpha",
      [](double alpha, int ell) {
        const FractionalOrder a(alpha);
        return admissible_alpha(a, ell, regime_of(a));
      },
      py::arg("alpha"), py::arg("ell"));

  py::class_<PeelResult>(m, "PeelResult")
      .def_readonly("coefficients", &PeelResult::coefficients)
      .def_readonly("trusted", &PeelResult::trusted)
      .def_readonly("condition_number", &PeelResult::condition_number)
      .def_readonly("residual", &PeelResult::residual);
  m.def(
      "peel_exponents",
      [](std::vector<double> t, std::vector<double> y, std::vector<double> p, double cutoff) {
        return peel_exponents(t, y, p, cutoff);
      },
      py::arg("t"), py::arg("y"), py::arg("exponents"),
      py::arg("cutoff") = std::numeric_limits<double>::infinity());

  py::class_<MomentFit>(m, "MomentFit")
      .def_readonly("coefficients", &MomentFit::coefficients)
      .def_readonly("condition_number", &MomentFit::condition_number)
      .def_readonly("residual", &MomentFit::residual);
  m.def(
      "invert_moment_sequence",
      [](std::vector<double> g, std::vector<double> powers, std::vector<double> lambdas) {
        return invert_moment_sequence(g, powers, lambdas);
      },
      py::arg("g"), py::arg("powers"), py::arg("lambdas"));

  py::class_<StageDiagnostic>(m, "StageDiagnostic")
      .def_readonly("stage", &StageDiagnostic::stage)
      .def_readonly("residual", &StageDiagnostic::residual)
      .def_readonly("condition_number", &StageDiagnostic::condition_number);
  py::class_<RecoveryReport>(m, "RecoveryReport")
      .def_readonly("alpha", &RecoveryReport::alpha)
      .def_readonly("K", &RecoveryReport::K)
      .def_readonly("ell0", &RecoveryReport::ell0)
      .def_property_readonly("a_hat", [](const RecoveryReport& r) { return r.a_hat.coeffs; })
      .def_property_readonly("b_hat", [](const RecoveryReport& r) { return r.b_hat.coeffs; })
      .def_property_readonly("f_hat", [](const RecoveryReport& r) { return r.f_hat.coeffs; })
      .def_readonly("mu_scale", &RecoveryReport::mu_scale)
      .def_readonly("stages", &RecoveryReport::stages);
  m.def(
      "reconstruct",
      [](const ObservationSet& obs, double alpha, const SpectralOperator& op, const SourceProfile& mu,
         int K, int M) { return reconstruct(obs, FractionalOrder(alpha), op, mu, K, M); },
      py::arg("obs"), py::arg("alpha"), py::arg("op"), py::arg("mu"), py::arg("K") = kDefaultTerms,
      py::arg("M"));

  py::class_<SimultaneousReport>(m, "SimultaneousReport")
      .def_readonly("ell1", &SimultaneousReport::ell1)
      .def_readonly("a_diff_norm", &SimultaneousReport::a_diff_norm)
      .def_readonly("b_diff_norm", &SimultaneousReport::b_diff_norm)
      .def_readonly("f_ratio", &SimultaneousReport::f_ratio)
      .def_readonly("mu_moment_relation", &SimultaneousReport::mu_moment_relation)
      .def_readonly("difference", &SimultaneousReport::difference)
      .def_readonly("first", &SimultaneousReport::first)
      .def_readonly("second", &SimultaneousReport::second);
  m.def(
      "simultaneous_reconstruct",
      [](const ObservationSet& o1, const ObservationSet& o2, double alpha, const SpectralOperator& op,
         const SourceProfile& mu, const SourceProfile& mu2, int K, int M) {
        return simultaneous_reconstruct(o1, o2, FractionalOrder(alpha), op, mu, mu2, K, M);
      },
      py::arg("obs"), py::arg("obs2"), py::arg("alpha"), py::arg("op"), py::arg("mu"), py::arg("mu2"),
      py::arg("K") = kDefaultTerms, py::arg("M"));

  py::enum_<WitnessOrder>(m, "WitnessOrder").value("One", WitnessOrder::One).value("Two", WitnessOrder::Two);
  py::class_<Witness>(m, "Witness")
      .def_readonly("order", &Witness::order)
      .def_readonly("parameter", &Witness::parameter)
      .def_readonly("T", &Witness::T)
      .def_readonly("a", &Witness::a)
      .def_readonly("b", &Witness::b)
      .def_readonly("f", &Witness::f);
  m.def("nonuniqueness_witness", &nonuniqueness_witness, py::arg("order"), py::arg("parameter"),
        py::arg("T"));
  m.def(
      "witness_solution",
      [](const Witness& w, double alpha, double t) { return witness_solution(w, FractionalOrder(alpha), t); },
      py::arg("witness"), py::arg("alpha"), py::arg("t"));

  m.def(
      "solve_scalar",
      [](double alpha, double lambda, double a, double b, const SourceProfile& mu, double t) {
        return solve_scalar(FractionalOrder(alpha), lambda, a, b, mu, t);
      },
      py::arg("alpha"), py::arg("lam"), py::arg("a"), py::arg("b"), py::arg("mu"), py::arg("t"));
  py::class_<ScalarRecovery>(m, "ScalarRecovery")
      .def_readonly("a_hat", &ScalarRecovery::a_hat)
      .def_readonly("b_hat", &ScalarRecovery::b_hat)
      .def_readonly("moments", &ScalarRecovery::moments)
      .def_readonly("verified_moments", &ScalarRecovery::verified_moments)
      .def_readonly("condition_number", &ScalarRecovery::condition_number)
      .def_readonly("residual", &ScalarRecovery::residual);
  m.def(
      "recover_scalar",
      [](std::vector<double> t, std::vector<double> y, double alpha, double lambda, double T, int L) {
        return recover_scalar(t, y, FractionalOrder(alpha), lambda, T, L);
      },
      py::arg("t"), py::arg("y"), py::arg("alpha"), py::arg("lam"), py::arg("T"),
      py::arg("moment_count") = kDefaultMomentCount);
  py::class_<PointRecovery>(m, "PointRecovery")
      .def_readonly("moments", &PointRecovery::moments)
      .def_readonly("weight_sum", &PointRecovery::weight_sum)
      .def_readonly("condition_number", &PointRecovery::condition_number)
      .def_readonly("residual", &PointRecovery::residual);
  m.def(
      "point_observation_recover",
      [](const ProblemSpec& spec, double x0, std::vector<double> t, std::vector<double> y, int L) {
        return point_observation_recover(spec, x0, t, y, L);
      },
      py::arg("spec"), py::arg("x0"), py::arg("t"), py::arg("y"), py::arg("moment_count") = kDefaultMomentCount);
}
