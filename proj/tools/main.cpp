#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "fdw/asymptotics.hpp"
#include "fdw/error.hpp"
#include "fdw/format.hpp"
#include "fdw/forward.hpp"
#include "fdw/inverse.hpp"
#include "fdw/ml_special.hpp"
#include "fdw/ode_lab.hpp"

namespace fs = std::filesystem;
using namespace fdw;
using namespace fdw::cli;

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
};

struct WitnessArgs {
  std::string order = "one";
  std::optional<double> lambda, r, alpha;
  double T = 1.0;
  int count = 100;
};

struct AdmissibleArgs {
  std::optional<double> alpha;
  std::optional<int> ell0;
};

struct MlArgs {
  std::optional<double> beta, gamma;
  std::vector<double> z;
};

std::string fmt(double v) { return format_double(v); }

std::ofstream open_out(const Common& c, const std::string& name) {
  fs::create_directories(c.out);
  std::ofstream f(fs::path(c.out) / name, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + (fs::path(c.out) / name).string());
  return f;
}

Json config_or_empty(const Common& c) {
  return c.config.empty() ? Json::object() : load_config(c.config);
}

Json require_config(const Common& c) {
  if (c.config.empty()) throw ValidationError("--config is required for this subcommand");
  return load_config(c.config);
}

double noise_of(const Common& c, const Json& j) { return c.noise ? *c.noise : get_double(j, "noise", 0.0); }

std::uint64_t seed_of(const Common& c, const Json& j) {
  if (c.seed) return *c.seed;
  return field("seed", [&] { return j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0; });
}

double rel_err(const SpatialField& hat, const SpatialField& ref) {
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < ref.modes(); ++n) {
    const double d = (n < hat.modes() ? hat.coeffs[n] : 0.0) - ref.coeffs[n];
    num += d * d;
    den += ref.coeffs[n] * ref.coeffs[n];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

int run_ml_eval(const Common& c, const MlArgs& args) {
  const Json j = config_or_empty(c);
  const Json ml = j.contains("ml") ? j.at("ml") : Json::object();
  const double beta = args.beta ? *args.beta : get_double(ml, "beta", 1.0);
  const double gamma = args.gamma ? *args.gamma : get_double(ml, "gamma", 1.0);
  std::vector<double> zs = args.z.empty() ? get_doubles(ml, "z") : args.z;
  if (zs.empty()) throw ValidationError("field 'ml.z': no evaluation points");
  field("ml", [&] {
    validate(MLOrderPair{beta, gamma});
    return 0;
  });
  auto out = open_out(c, "ml.csv");
  out << "beta,gamma,z,value,abs_error_bound,branch\n";
  for (double z : zs) {
    const MLEvaluation e = ml_eval({beta, gamma}, z);
    out << fmt(beta) << ',' << fmt(gamma) << ',' << fmt(z) << ',' << fmt(e.value) << ','
        << fmt(e.abs_error_bound) << ',' << to_string(e.branch) << '\n';
  }
  return 0;
}

ObservationSet make_observations(const Common& c, const Json& j, const ProblemSpec& spec) {
  const Interval omega = parse_omega(j, spec.op);
  const std::vector<double> times = parse_times(j, spec.horizon_T);
  return observe(spec, omega, times, noise_of(c, j), seed_of(c, j));
}

int run_forward(const Common& c) {
  const Json j = require_config(c);
  const ProblemSpec spec = parse_spec(j);
  const ObservationSet obs = make_observations(c, j, spec);
  auto csv = open_out(c, "observations.csv");
  write_csv(obs, csv);
  double umax = 0.0;
  for (double v : obs.values) umax = std::max(umax, std::abs(v));
  auto rep = open_out(c, "report.txt");
  rep << "alpha: " << spec.alpha.describe() << '\n'
      << "modes: " << spec.op.modes() << '\n'
      << "points: " << obs.points.size() << '\n'
      << "times: " << obs.times.size() << '\n'
      << "noise sigma: " << fmt(obs.noise_sigma) << '\n'
      << "seed: " << obs.seed << '\n'
      << "max |u|: " << fmt(umax) << '\n';
  return 0;
}

int run_expand(const Common& c) {
  const Json j = require_config(c);
  const ProblemSpec spec = parse_spec(j);
  const Json ex = j.contains("expand") ? j.at("expand") : Json::object();
  const int N = get_int(ex, "N", 3);
  const LateTimeExpansion e = late_time_expansion(spec, N);
  auto csv = open_out(c, "expansion.csv");
  write_csv(e, csv);
  auto rep = open_out(c, "report.txt");
  rep << "alpha: " << spec.alpha.describe() << '\n'
      << "N: " << N << '\n'
      << "terms: " << e.terms.size() << '\n'
      << "error exponent: " << fmt(e.error_exponent) << '\n'
      << "min gap: " << fmt(e.min_gap) << '\n';
  if (j.contains("times")) {
    const std::vector<double> times = parse_times(j, spec.horizon_T);
    const ForwardModel model(spec);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    rep << "t,coefficient error\n";
    for (double t : times) {
      const SpatialField u = model.solve(t);
      const SpatialField v = expansion_coefficients(e.terms, u.modes(), t);
      double err = 0.0;
      for (std::size_t n = 0; n < u.modes(); ++n) err += (u.coeffs[n] - v.coeffs[n]) * (u.coeffs[n] - v.coeffs[n]);
      err = std::sqrt(err);
      rep << fmt(t) << ',' << fmt(err) << '\n';
      const double x = std::log(t), y = std::log(err);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double n = static_cast<double>(times.size());
    rep << "fitted slope: " << fmt((n * sxy - sx * sy) / (n * sxx - sx * sx)) << '\n'
        << "predicted slope: " << fmt(-e.error_exponent) << '\n';
  }
  return 0;
}

int run_invert(const Common& c) {
  const Json j = require_config(c);
  const ProblemSpec spec = parse_spec(j);
  const Json inv = j.contains("invert") ? j.at("invert") : Json::object();
  const int K = get_int(j, "terms", kDefaultTerms);
  const int M = get_int(inv, "modes", spec.op.modes());
  std::optional<ProblemSpec> truth;
  ObservationSet obs;
  if (inv.contains("observations_csv")) {
    const std::string path = field("invert.observations_csv", [&] { return inv.at("observations_csv").get<std::string>(); });
    std::ifstream in(path);
    if (!in) throw ValidationError("field 'invert.observations_csv': cannot open " + path);
    obs = read_observations_csv(in);
  } else {
    obs = make_observations(c, j, spec);
    truth = spec;
    auto csv = open_out(c, "observations.csv");
    write_csv(obs, csv);
  }
  const RecoveryReport r = reconstruct(obs, spec.alpha, spec.op, spec.mu, K, M);
  auto csv = open_out(c, "recovery.csv");
  write_recovery_csv(r, csv, truth);
  auto rep = open_out(c, "report.txt");
  write_report(r, rep);
  if (truth) {
    rep << "relative error a: " << fmt(rel_err(r.a_hat, spec.a)) << '\n';
    if (spec.alpha.has_velocity()) rep << "relative error b: " << fmt(rel_err(r.b_hat, spec.b)) << '\n';
    rep << "relative error f: " << fmt(rel_err(r.f_hat, spec.f)) << '\n';
  }
  return 0;
}

int run_simul_invert(const Common& c) {
  const Json j = require_config(c);
  const ProblemSpec spec = parse_spec(j);
  Json j2 = j;
  field("second", [&] {
    require(j.contains("second"), "missing");
    for (const auto& [key, value] : j.at("second").items()) j2[key] = value;
    return 0;
  });
  const ProblemSpec spec2 = field("second", [&] { return parse_spec(j2); });
  const int K = get_int(j, "terms", kDefaultTerms);
  const ObservationSet obs = make_observations(c, j, spec);
  const ObservationSet obs2 = make_observations(c, j2, spec2);
  double gap = 0.0;
  for (std::size_t i = 0; i < obs.values.size(); ++i) gap = std::max(gap, std::abs(obs.values[i] - obs2.values[i]));
  const SimultaneousReport s =
      simultaneous_reconstruct(obs, obs2, spec.alpha, spec.op, spec.mu, spec2.mu, K, spec.op.modes());
  auto csv = open_out(c, "observations.csv");
  write_csv(obs, csv);
  auto rcsv = open_out(c, "recovery.csv");
  write_recovery_csv(s.difference, rcsv);
  auto rep = open_out(c, "report.txt");
  rep << "max |u - u2|: " << fmt(gap) << '\n'
      << "pair leading index: " << s.ell1 << '\n'
      << "a_diff_norm: " << fmt(s.a_diff_norm) << '\n';
  if (spec.alpha.has_velocity()) rep << "b_diff_norm: " << fmt(s.b_diff_norm) << '\n';
  rep << "f_ratio: " << fmt(s.f_ratio) << '\n';
  for (std::size_t m = 0; m < s.mu_moment_relation.size(); ++m) {
    rep << "relation residual m=" << m << ": " << fmt(s.mu_moment_relation[m]) << '\n';
  }
  return 0;
}

int run_ode_lab(const Common& c) {
  const Json j = require_config(c);
  const FractionalOrder alpha = field("alpha", [&] { return FractionalOrder(get_double(j, "alpha")); });
  const SourceProfile mu = field("mu", [&] {
    require(j.contains("mu"), "missing");
    return parse_profile(j.at("mu"));
  });
  const Json ode = field("ode", [&] {
    require(j.contains("ode"), "missing");
    return j.at("ode");
  });
  const int L = field("ode", [&] { return get_int(ode, "moment_count", kDefaultMomentCount); });
  const std::vector<double> times = parse_times(j, mu.horizon());
  const double sigma = noise_of(c, j);
  const std::uint64_t seed = seed_of(c, j);

  std::vector<double> y(times.size());
  double x0 = 0.0;
  std::optional<ProblemSpec> spec;
  double lambda = 0.0, a = 0.0, b = 0.0;
  if (ode.contains("x0")) {
    spec = parse_spec(j);
    x0 = field("ode.x0", [&] { return ode.at("x0").get<double>(); });
    const ForwardModel model(*spec);
    for (std::size_t i = 0; i < times.size(); ++i) y[i] = model.value(x0, times[i]);
  } else {
    lambda = field("ode.lambda", [&] { return get_double(ode, "lambda"); });
    a = field("ode", [&] { return get_double(ode, "a", 0.0); });
    b = field("ode", [&] { return get_double(ode, "b", 0.0); });
    field("ode.lambda", [&] {
      require(lambda > 0.0, "must be positive");
      return 0;
    });
    for (std::size_t i = 0; i < times.size(); ++i) y[i] = solve_scalar(alpha, lambda, a, b, mu, times[i]);
  }
  ObservationSet obs;
  obs.points = {x0};
  obs.times = times;
  obs.values = y;
  if (sigma > 0.0) {
    ObservationSet noisy = obs;
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    for (double& v : noisy.values) v += dist(gen);
    obs = noisy;
  }
  obs.noise_sigma = sigma;
  obs.seed = seed;
  auto csv = open_out(c, "observations.csv");
  write_csv(obs, csv);

  auto rcsv = open_out(c, "recovery.csv");
  auto rep = open_out(c, "report.txt");
  rcsv << "field,mode,true,recovered,abs_err\n";
  auto row = [&](const std::string& name, int mode, double truth, double hat) {
    rcsv << name << ',' << mode << ',' << fmt(truth) << ',' << fmt(hat) << ',' << fmt(std::abs(hat - truth)) << '\n';
  };
  if (spec) {
    const PointRecovery r = point_observation_recover(*spec, x0, obs.times, obs.values, L);
    for (int m = 0; m <= L; ++m) row("mu", m, mu.moment(m), r.moments[m]);
    rep << "x0: " << fmt(x0) << '\n'
        << "f(x0): " << fmt(r.weight_sum) << '\n'
        << "condition: " << fmt(r.condition_number) << '\n'
        << "residual: " << fmt(r.residual) << '\n';
  } else {
    const ScalarRecovery r = recover_scalar(obs.times, obs.values, alpha, lambda, mu.horizon(), L);
    row("a", 1, a, r.a_hat);
    if (alpha.has_velocity()) row("b", 1, b, r.b_hat);
    for (int m = 0; m <= L; ++m) row("mu", m, mu.moment(m), r.moments[m]);
    rep << "lambda: " << fmt(lambda) << '\n'
        << "condition: " << fmt(r.condition_number) << '\n'
        << "residual: " << fmt(r.residual) << '\n';
  }
  rep << "alpha: " << alpha.describe() << '\n' << "verified moments: " << L + 1 << '\n';
  return 0;
}

int run_witness(const Common& c, const WitnessArgs& w) {
  WitnessOrder order;
  double parameter;
  if (w.order == "one") {
    order = WitnessOrder::One;
    parameter = w.lambda.value_or(1.0);
  } else if (w.order == "two") {
    order = WitnessOrder::Two;
    parameter = w.r.value_or(1.0);
  } else {
    throw ValidationError("field 'order': expected one or two");
  }
  const Witness wit = nonuniqueness_witness(order, parameter, w.T);
  const FractionalOrder alpha(w.alpha.value_or(order == WitnessOrder::One ? 1.0 : 2.0));
  if (w.count < 1) throw ValidationError("field 'count': must be positive");
  ObservationSet obs;
  obs.points = {0.0};
  double umax = 0.0;
  for (int i = 1; i <= w.count; ++i) {
    const double t = w.T + 9.0 * w.T * i / w.count;
    obs.times.push_back(t);
    obs.values.push_back(witness_solution(wit, alpha, t));
    umax = std::max(umax, std::abs(obs.values.back()));
  }
  auto csv = open_out(c, "observations.csv");
  write_csv(obs, csv);
  auto rep = open_out(c, "report.txt");
  rep << "order: " << w.order << '\n'
      << "parameter: " << fmt(parameter) << '\n'
      << "T: " << fmt(w.T) << '\n'
      << "alpha: " << alpha.describe() << '\n'
      << "a: " << fmt(wit.a) << '\n';
  if (order == WitnessOrder::Two) rep << "b: " << fmt(wit.b) << '\n';
  rep << "f: " << fmt(wit.f) << '\n' << "max |u| on (T, 10T]: " << fmt(umax) << '\n';
  return 0;
}

int run_admissible(const Common& c, const AdmissibleArgs& args) {
  const Json j = config_or_empty(c);
  const double a = args.alpha ? *args.alpha : get_double(j, "alpha");
  const FractionalOrder alpha = field("alpha", [&] { return FractionalOrder(a); });
  int ell = 0;
  if (args.ell0) {
    ell = *args.ell0;
  } else if (j.contains("admissible") && j.at("admissible").contains("ell0")) {
    ell = get_int(j.at("admissible"), "ell0", 0);
  } else if (j.contains("mu")) {
    ell = leading_index(field("mu", [&] { return parse_profile(j.at("mu")); })).ell;
  }
  field("ell0", [&] {
    require(ell >= 0, "must be nonnegative");
    return 0;
  });
  std::string verdict;
  if (!alpha.fractional()) {
    verdict = "inadmissible, classical order " + fmt(alpha.value());
  } else {
    const Admissibility adm = admissible_alpha(alpha, ell, regime_of(alpha));
    if (adm.admissible) {
      verdict = "admissible, nearest excluded value " + std::to_string(adm.excluded_numerator) + "/" +
                std::to_string(adm.excluded_denominator) + " at distance " + fmt(adm.distance);
    } else {
      verdict = "inadmissible, excluded value " + std::to_string(adm.excluded_numerator) + "/" +
                std::to_string(adm.excluded_denominator);
    }
  }
  auto rep = open_out(c, "report.txt");
  rep << "alpha: " << fmt(alpha.value()) << '\n' << "ell0: " << ell << '\n' << verdict << '\n';
  std::cout << verdict << '\n';
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "experiment config (JSON)");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--seed", c.seed, "noise seed, overrides the config");
  sub->add_option("--noise", c.noise, "noise sigma, overrides the config");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-fractional diffusion-wave experiments"};
  app.require_subcommand(1);
  Common common;
  WitnessArgs wargs;
  AdmissibleArgs aargs;
  MlArgs margs;

  auto* ml = app.add_subcommand("ml-eval", "evaluate E_{beta,gamma}(z)");
  auto* forward = app.add_subcommand("forward", "series solution sampled on omega x times");
  auto* expand = app.add_subcommand("expand", "late-time expansion and its error");
  auto* invert = app.add_subcommand("invert", "recover (a, b, f) from late-time data");
  auto* simul = app.add_subcommand("simul-invert", "compare two (f, mu) pairs");
  auto* ode = app.add_subcommand("ode-lab", "scalar and point-observation recovery");
  auto* witness = app.add_subcommand("witness", "classical-order non-uniqueness witness");
  auto* admissible = app.add_subcommand("admissible", "test alpha against the excluded set");
  for (auto* sub : {ml, forward, expand, invert, simul, ode, witness, admissible}) add_common(sub, common);

  ml->add_option("--beta", margs.beta);
  ml->add_option("--gamma", margs.gamma);
  ml->add_option("--z", margs.z);
  witness->add_option("--order", wargs.order)->check(CLI::IsMember({"one", "two"}));
  witness->add_option("--lambda", wargs.lambda);
  witness->add_option("--r", wargs.r);
  witness->add_option("--T", wargs.T);
  witness->add_option("--alpha", wargs.alpha);
  witness->add_option("--count", wargs.count);
  admissible->add_option("--alpha", aargs.alpha);
  admissible->add_option("--ell0", aargs.ell0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "fdw: error kind=Validation " << e.what() << '\n';
    return 2;
  }

  try {
    if (ml->parsed()) return run_ml_eval(common, margs);
    if (forward->parsed()) return run_forward(common);
    if (expand->parsed()) return run_expand(common);
    if (invert->parsed()) return run_invert(common);
    if (simul->parsed()) return run_simul_invert(common);
    if (ode->parsed()) return run_ode_lab(common);
    if (witness->parsed()) return run_witness(common, wargs);
    if (admissible->parsed()) return run_admissible(common, aargs);
  } catch (const Error& e) {
    std::cerr << "fdw: error kind=" << to_string(e.kind()) << ' ' << e.what() << '\n';
    return e.kind() == ErrorKind::Validation ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "fdw: error kind=Internal " << e.what() << '\n';
    return 3;
  }
  return 0;
}
