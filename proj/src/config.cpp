#include "pauli2d/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pauli2d/error.hpp"

namespace pauli2d {

namespace {

void require_object(const Json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const Json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  require_object(j, where);
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double number(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": must be finite");
  return d;
}

double number_or(const Json& j, const char* key, double dflt, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : dflt;
}

long long integer(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const Json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<long long>();
}

long long integer_or(const Json& j, const char* key, long long dflt, const std::string& where) {
  return j.contains(key) ? integer(j, key, where) : dflt;
}

bool boolean_or(const Json& j, const char* key, bool dflt, const std::string& where) {
  if (!j.contains(key)) return dflt;
  if (!j.at(key).is_boolean()) throw ConfigError(where + "." + key + ": expected true/false");
  return j.at(key).get<bool>();
}

std::vector<double> numbers(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  const Json& v = j.at(key);
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(where + "." + key + ": expected numbers");
      out.push_back(e.get<double>());
    }
  } else {
    throw ConfigError(where + "." + key + ": expected a number or an array of numbers");
  }
  for (double d : out)
    if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": values must be finite");
  return out;
}

GridSpec grid_from_json(const Json& j, const std::string& where) {
  check_keys(j, {"L", "n"}, where);
  GridSpec g{number(j, "L", where), static_cast<int>(integer(j, "n", where))};
  if (integer(j, "n", where) > 8192) throw ConfigError(where + ".n: at most 8192");
  try {
    g.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return g;
}

std::vector<GridSpec> ladder_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a non-empty array");
  std::vector<GridSpec> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(grid_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  for (std::size_t k = 1; k < out.size(); ++k)
    if (!(out[k].L > out[k - 1].L))
      throw ConfigError(where + ": rungs must have increasing L");
  return out;
}

Json grid_to_json(const GridSpec& g) { return Json{{"L", g.L}, {"n", g.n}}; }

Json ladder_to_json(const std::vector<GridSpec>& l) {
  Json a = Json::array();
  for (const auto& g : l) a.push_back(grid_to_json(g));
  return a;
}

FieldDescriptor field_from_json_at(const Json& j, const std::string& where) {
  require_object(j, where);
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError(where + ": missing string 'kind'");
  FieldKind kind;
  try {
    kind = field_kind_from_string(j.at("kind").get<std::string>());
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  if (kind == FieldKind::linear_combination) {
    check_keys(j, {"kind", "terms"}, where);
    if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty())
      throw ConfigError(where + ": linear_combination needs a non-empty 'terms' array");
    std::vector<std::pair<double, FieldDescriptor>> terms;
    for (std::size_t k = 0; k < j.at("terms").size(); ++k) {
      std::string w = where + ".terms[" + std::to_string(k) + "]";
      const Json& t = j.at("terms")[k];
      check_keys(t, {"weight", "field"}, w);
      if (!t.contains("field")) throw ConfigError(w + ": missing 'field'");
      terms.emplace_back(number(t, "weight", w), field_from_json_at(t.at("field"), w + ".field"));
    }
    return FieldDescriptor::linear_combination(terms);
  }
  check_keys(j, {"kind", "params"}, where);
  if (!j.contains("params")) throw ConfigError(where + ": missing 'params'");
  const Json& p = j.at("params");
  const std::string pw = where + ".params";
  if (kind == FieldKind::angular_power_tail)
    check_keys(p, {"B0", "sigma", "delta", "m", "center", "holder_eps"}, pw);
  else
    check_keys(p, {"B0", "sigma", "delta", "center", "holder_eps"}, pw);
  FieldParams fp;
  fp.amplitude = number(p, "B0", pw);
  fp.sigma = number(p, "sigma", pw);
  bool needs_delta = kind == FieldKind::power_tail || kind == FieldKind::angular_power_tail;
  fp.delta = needs_delta ? number(p, "delta", pw) : number_or(p, "delta", 2.0, pw);
  if (kind == FieldKind::angular_power_tail) fp.m = static_cast<int>(integer(p, "m", pw));
  fp.holder_eps = number_or(p, "holder_eps", 1.0, pw);
  if (p.contains("center")) {
    const Json& c = p.at("center");
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
      throw ConfigError(pw + ".center: expected [x, y]");
    fp.center = {c[0].get<double>(), c[1].get<double>()};
  }
  try {
    return FieldDescriptor::make(kind, fp);
  } catch (const ConfigError& e) {
    throw ConfigError(pw + ": " + e.what());
  }
}

}  // namespace

FieldDescriptor field_from_json(const Json& j) { return field_from_json_at(j, "field"); }

Json field_to_json(const FieldDescriptor& f) {
  Json j;
  j["kind"] = to_string(f.kind());
  if (f.kind() == FieldKind::linear_combination) {
    Json terms = Json::array();
    for (const auto& t : f.terms())
      terms.push_back(Json{{"weight", t.weight}, {"field", field_to_json(*t.field)}});
    j["terms"] = terms;
    return j;
  }
  const auto& p = f.params();
  Json params;
  params["B0"] = p.amplitude;
  params["sigma"] = p.sigma;
  params["delta"] = p.delta;
  if (f.kind() == FieldKind::angular_power_tail) params["m"] = p.m;
  params["center"] = Json::array({p.center.x, p.center.y});
  params["holder_eps"] = p.holder_eps;
  j["params"] = params;
  return j;
}

ScenarioConfig parse_scenario(const Json& j) {
  check_keys(j, {"field", "grid", "physics", "eigen", "certify", "sweep", "asymptotics", "check",
                 "seed"},
             "config");
  ScenarioConfig c;
  if (!j.contains("field")) throw ConfigError("config: missing 'field'");
  c.field = field_from_json(j.at("field"));
  if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"), "grid");
  if (j.contains("seed")) {
    const Json& s = j.at("seed");
    if (!s.is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (j.contains("physics")) {
    const Json& p = j.at("physics");
    check_keys(p, {"g", "spin", "lambda"}, "physics");
    c.g = number_or(p, "g", c.g, "physics");
    if (c.g < 0.0) throw ConfigError("physics.g: must be >= 0");
    c.lambda = number_or(p, "lambda", c.lambda, "physics");
    if (p.contains("spin")) {
      if (!p.at("spin").is_string()) throw ConfigError("physics.spin: expected a string");
      try {
        c.spin = spin_from_string(p.at("spin").get<std::string>());
      } catch (const ConfigError& e) {
        throw ConfigError(std::string("physics.spin: ") + e.what());
      }
    }
  }
  if (j.contains("eigen")) {
    const Json& e = j.at("eigen");
    check_keys(e, {"k", "threshold", "tolerance", "max_iterations", "filter_degree", "ladder"},
               "eigen");
    c.eigen.k = static_cast<int>(integer_or(e, "k", c.eigen.k, "eigen"));
    c.eigen.count_threshold = number_or(e, "threshold", c.eigen.count_threshold, "eigen");
    c.eigen.tolerance = number_or(e, "tolerance", c.eigen.tolerance, "eigen");
    c.eigen.max_iterations =
        static_cast<int>(integer_or(e, "max_iterations", c.eigen.max_iterations, "eigen"));
    c.eigen.filter_degree =
        static_cast<int>(integer_or(e, "filter_degree", c.eigen.filter_degree, "eigen"));
    if (e.contains("ladder")) c.eigen_ladder = ladder_from_json(e.at("ladder"), "eigen.ladder");
  }
  c.eigen.seed = c.seed;
  c.eigen.validate();
  if (j.contains("certify")) {
    const Json& e = j.at("certify");
    check_keys(e, {"N", "rho", "epsilon_h", "h_radius", "search", "cross_check"}, "certify");
    c.certify.N = static_cast<int>(integer_or(e, "N", 0, "certify"));
    if (c.certify.N < 0) throw ConfigError("certify.N: must be >= 0");
    c.certify.rho = numbers(e, "rho", "certify");
    for (double r : c.certify.rho)
      if (!(r > 0.0)) throw ConfigError("certify.rho: values must be positive");
    c.certify.epsilon_h = number_or(e, "epsilon_h", 0.0, "certify");
    if (e.contains("h_radius")) c.certify.h_radius = number(e, "h_radius", "certify");
    c.certify.search = boolean_or(e, "search", !e.contains("epsilon_h"), "certify");
    c.certify.cross_check = boolean_or(e, "cross_check", false, "certify");
  }
  if (j.contains("sweep")) {
    const Json& e = j.at("sweep");
    check_keys(e, {"lambdas", "ladder", "c", "rung_tolerance"}, "sweep");
    c.sweep.lambdas = numbers(e, "lambdas", "sweep");
    if (!e.contains("ladder")) throw ConfigError("sweep: missing 'ladder'");
    c.sweep.ladder = ladder_from_json(e.at("ladder"), "sweep.ladder");
    c.sweep.c = number_or(e, "c", c.sweep.c, "sweep");
    if (!(c.sweep.c > 0.0 && c.sweep.c < 1.0)) throw ConfigError("sweep.c: must be in (0, 1)");
    c.sweep.rung_tolerance = number_or(e, "rung_tolerance", c.sweep.rung_tolerance, "sweep");
  }
  if (j.contains("asymptotics")) {
    const Json& e = j.at("asymptotics");
    check_keys(e, {"radii", "angles"}, "asymptotics");
    c.radii = numbers(e, "radii", "asymptotics");
    c.angles = static_cast<int>(integer_or(e, "angles", c.angles, "asymptotics"));
    if (c.angles < 1 || c.angles > 4096) throw ConfigError("asymptotics.angles: 1..4096");
  }
  if (j.contains("check")) {
    const Json& e = j.at("check");
    check_keys(e, {"samples"}, "check");
    c.check_samples = static_cast<int>(integer_or(e, "samples", c.check_samples, "check"));
    if (c.check_samples < 1 || c.check_samples > 1000) throw ConfigError("check.samples: 1..1000");
  }
  return c;
}

ScenarioConfig parse_scenario_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

Json scenario_to_json(const ScenarioConfig& c) {
  Json j;
  j["field"] = field_to_json(c.field);
  if (c.grid) j["grid"] = grid_to_json(*c.grid);
  j["physics"] = Json{{"g", c.g}, {"spin", to_string(c.spin)}, {"lambda", c.lambda}};
  Json e{{"k", c.eigen.k},
         {"threshold", c.eigen.count_threshold},
         {"tolerance", c.eigen.tolerance},
         {"max_iterations", c.eigen.max_iterations},
         {"filter_degree", c.eigen.filter_degree}};
  if (!c.eigen_ladder.empty()) e["ladder"] = ladder_to_json(c.eigen_ladder);
  j["eigen"] = e;
  if (!c.certify.rho.empty()) {
    Json ce{{"N", c.certify.N},
            {"rho", c.certify.rho},
            {"epsilon_h", c.certify.epsilon_h},
            {"search", c.certify.search},
            {"cross_check", c.certify.cross_check}};
    if (c.certify.h_radius) ce["h_radius"] = *c.certify.h_radius;
    j["certify"] = ce;
  }
  if (!c.sweep.ladder.empty())
    j["sweep"] = Json{{"lambdas", c.sweep.lambdas},
                      {"ladder", ladder_to_json(c.sweep.ladder)},
                      {"c", c.sweep.c},
                      {"rung_tolerance", c.sweep.rung_tolerance}};
  if (!c.radii.empty()) j["asymptotics"] = Json{{"radii", c.radii}, {"angles", c.angles}};
  j["check"] = Json{{"samples", c.check_samples}};
  j["seed"] = c.seed;
  return j;
}

}  // namespace pauli2d
