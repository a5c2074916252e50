#include "config.hpp"

#include <fstream>

namespace fdw::cli {

Json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ValidationError(path + ": top level must be an object");
  field("schema_version", [&] {
    require(j.contains("schema_version"), "missing");
    const int v = j.at("schema_version").get<int>();
    require(v == kSchemaVersion, "unsupported version " + std::to_string(v));
    return v;
  });
  return j;
}

double get_double(const Json& j, const std::string& key) {
  return field(key, [&] {
    require(j.contains(key), "missing");
    return j.at(key).get<double>();
  });
}

double get_double(const Json& j, const std::string& key, double fallback) {
  return j.contains(key) ? get_double(j, key) : fallback;
}

int get_int(const Json& j, const std::string& key, int fallback) {
  return field(key, [&] { return j.contains(key) ? j.at(key).get<int>() : fallback; });
}

std::vector<double> get_doubles(const Json& j, const std::string& key) {
  return field(key, [&] {
    if (!j.contains(key)) return std::vector<double>{};
    return j.at(key).get<std::vector<double>>();
  });
}

SpectralOperator parse_operator(const Json& j) {
  return field("operator", [&] {
    require(j.contains("operator"), "missing");
    const Json& o = j.at("operator");
    const std::string kind = o.value("kind", std::string("dirichlet_laplacian_1d"));
    const double length = get_double(o, "length", 1.0);
    if (kind == "dirichlet_laplacian_1d") {
      const int modes = get_int(o, "modes", 0);
      return SpectralOperator::dirichlet_laplacian_1d(length, modes);
    }
    if (kind == "diagonal") {
      return SpectralOperator::diagonal(get_doubles(o, "eigenvalues"), length, get_int(o, "dim", 1));
    }
    throw ValidationError("unknown kind '" + kind + "'");
  });
}

SourceProfile parse_profile(const Json& m) {
  const double T = get_double(m, "T");
  std::vector<PolynomialPiece> pieces;
  field("pieces", [&] {
    if (!m.contains("pieces")) {
      pieces.push_back({0.0, T, {get_double(m, "value", 1.0)}});
      return 0;
    }
    for (const Json& p : m.at("pieces")) {
      pieces.push_back({p.at("t0").get<double>(), p.at("t1").get<double>(),
                        p.at("coeffs").get<std::vector<double>>()});
    }
    return 0;
  });
  return field("pieces", [&] { return SourceProfile(pieces, T); });
}

ProblemSpec parse_spec(const Json& j) {
  const double alpha = get_double(j, "alpha");
  const FractionalOrder order = field("alpha", [&] { return FractionalOrder(alpha); });
  SpectralOperator op = parse_operator(j);
  const SourceProfile mu = field("mu", [&] {
    require(j.contains("mu"), "missing");
    return parse_profile(j.at("mu"));
  });
  const std::size_t M = static_cast<std::size_t>(op.modes());
  auto coeffs = [&](const char* key, bool required) {
    std::vector<double> c = get_doubles(j, key);
    field(key, [&] {
      if (required || !c.empty()) require(c.size() == M, "expected " + std::to_string(M) + " coefficients");
      return 0;
    });
    return SpatialField{c};
  };
  SpatialField a = coeffs("a", true);
  SpatialField b = coeffs("b", false);
  SpatialField f = coeffs("f", true);
  field("b", [&] {
    require(order.has_velocity() || b.coeffs.empty(), "b is only used for alpha > 1");
    return 0;
  });
  return make_spec(order, op, a, b, f, mu);
}

Interval parse_omega(const Json& j, const SpectralOperator& op) {
  return field("omega", [&] {
    const std::vector<double> w = get_doubles(j, "omega");
    require(w.size() == 2, "expected [lo, hi]");
    require(0.0 <= w[0] && w[0] < w[1] && w[1] <= op.length(), "must satisfy 0 <= lo < hi <= length");
    return Interval{w[0], w[1]};
  });
}

std::vector<double> parse_times(const Json& j, double T) {
  return field("times", [&] {
    require(j.contains("times"), "missing");
    const Json& t = j.at("times");
    if (t.is_array()) return t.get<std::vector<double>>();
    const double lo = t.at("lo").get<double>(), hi = t.at("hi").get<double>();
    const int count = t.at("count").get<int>();
    require(lo > T, "lo must exceed the source horizon T");
    require(hi > lo && count >= 2, "need hi > lo and count >= 2");
    return log_spaced(lo, hi, count);
  });
}

}  // namespace fdw::cli
