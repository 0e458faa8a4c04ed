#include "ofrac/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <map>

#include "ofrac/errors.hpp"

namespace ofrac::io {
namespace {

void expect_object(const nlohmann::json& j, const std::string& what) {
  if (!j.is_object()) throw SchemaError(what + " must be a JSON object");
}

void allow_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
                const std::string& what) {
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : keys) ok = ok || k == a;
    if (!ok) throw SchemaError(what + ": unknown field '" + k + "'");
  }
}

double real(const nlohmann::json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw SchemaError(what + ": missing field '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw SchemaError(what + ": field '" + key + "' must be a number");
  return v.get<double>();
}

double real_or(const nlohmann::json& j, const char* key, double fallback, const std::string& what) {
  return j.contains(key) ? real(j, key, what) : fallback;
}

std::string text(const nlohmann::json& j, const char* key, const std::string& what) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw SchemaError(what + ": field '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::map<std::string, double> params_of(const nlohmann::json& j, const std::string& what) {
  std::map<std::string, double> out;
  if (!j.contains("params")) return out;
  expect_object(j.at("params"), what + ".params");
  for (const auto& [k, v] : j.at("params").items()) {
    if (!v.is_number()) throw SchemaError(what + ".params." + k + " must be a number");
    out[k] = v.get<double>();
  }
  return out;
}

}  // namespace

YoungSpec young_from_json(const nlohmann::json& j) {
  expect_object(j, "young");
  allow_keys(j, {"family", "p", "q", "breakpoint"}, "young");
  const auto family = text(j, "family", "young");
  if (family == "power") return YoungSpec::power(real(j, "p", "young"));
  if (family == "power_log") return YoungSpec::power_log(real(j, "p", "young"));
  if (family == "piecewise_power")
    return YoungSpec::piecewise_power(real(j, "p", "young"), real(j, "q", "young"),
                                      real_or(j, "breakpoint", 1.0, "young"));
  throw SchemaError("young: unknown family '" + family + "'");
}

Json to_json(const YoungSpec& spec) {
  Json j;
  switch (spec.family) {
    case YoungFamily::Power: j["family"] = "power"; j["p"] = spec.p; break;
    case YoungFamily::PowerLog: j["family"] = "power_log"; j["p"] = spec.p; break;
    case YoungFamily::PiecewisePower:
      j["family"] = "piecewise_power";
      j["p"] = spec.p;
      j["q"] = spec.q;
      j["breakpoint"] = spec.breakpoint;
      break;
    case YoungFamily::UserDefined: j["family"] = "user_defined"; j["label"] = spec.label; break;
  }
  return j;
}

TailModel tail_from_json(const nlohmann::json& j) {
  expect_object(j, "tail");
  allow_keys(j, {"model", "c", "c_left", "alpha"}, "tail");
  const auto model = text(j, "model", "tail");
  if (model == "zero") return TailModel::zero();
  const double c = real_or(j, "c", 0.0, "tail");
  const double cl = real_or(j, "c_left", c, "tail");
  if (model == "constant") return TailModel::constant(c, cl);
  if (model == "decay") return TailModel::decay(c, cl, real(j, "alpha", "tail"));
  throw SchemaError("tail: unknown model '" + model + "'");
}

Json to_json(const TailModel& t) {
  Json j;
  j["model"] = to_string(t.kind);
  if (t.kind != TailModel::Kind::Zero) {
    j["c"] = t.c;
    j["c_left"] = t.c_left;
  }
  if (t.kind == TailModel::Kind::Decay) j["alpha"] = t.alpha;
  return j;
}

SampledFunction function_from_json(const nlohmann::json& j) {
  expect_object(j, "function");
  const auto kind = text(j, "kind", "function");
  if (kind == "grid") {
    allow_keys(j, {"kind", "L", "values", "tail", "lipschitz"}, "function");
    if (!j.contains("values") || !j.at("values").is_array())
      throw SchemaError("function.values must be an array");
    std::vector<double> values;
    for (const auto& v : j.at("values")) {
      if (!v.is_number()) throw SchemaError("function.values must hold numbers");
      values.push_back(v.get<double>());
    }
    const TailModel tail = j.contains("tail") ? tail_from_json(j.at("tail")) : TailModel::zero();
    std::optional<double> lip;
    if (j.contains("lipschitz")) lip = real(j, "lipschitz", "function");
    return SampledFunction::grid(real(j, "L", "function"), std::move(values), tail, lip);
  }
  if (kind != "closed_form") throw SchemaError("function: unknown kind '" + kind + "'");
  allow_keys(j, {"kind", "name", "params", "sample"}, "function");
  auto f = make_generator(text(j, "name", "function"), params_of(j, "function"));
  if (!j.contains("sample")) return f;
  const auto& smp = j.at("sample");
  expect_object(smp, "function.sample");
  allow_keys(smp, {"L", "n"}, "function.sample");
  const double L = real_or(smp, "L", f.core_half_width(), "function.sample");
  const double n = real(smp, "n", "function.sample");
  if (!(n >= 2.0) || n != std::floor(n)) throw SchemaError("function.sample.n must be an integer >= 2");
  return SampledFunction::sample(f, L, static_cast<std::size_t>(n), f.tail(), f.lipschitz_hint());
}

QuadratureConfig config_from_json(const nlohmann::json& j, QuadratureConfig c) {
  expect_object(j, "config");
  allow_keys(j, {"rho_split", "R_max", "inner_levels", "nodes_per_shell", "rho_reg", "tolerance",
                 "beta", "strict"},
             "config");
  c.rho_split = real_or(j, "rho_split", c.rho_split, "config");
  c.R_max = real_or(j, "R_max", c.R_max, "config");
  c.inner_levels = static_cast<int>(real_or(j, "inner_levels", c.inner_levels, "config"));
  c.nodes_per_shell = static_cast<int>(real_or(j, "nodes_per_shell", c.nodes_per_shell, "config"));
  c.rho_reg = real_or(j, "rho_reg", c.rho_reg, "config");
  c.tolerance = real_or(j, "tolerance", c.tolerance, "config");
  if (j.contains("beta")) c.beta = real(j, "beta", "config");
  if (j.contains("strict")) {
    if (!j.at("strict").is_boolean()) throw SchemaError("config.strict must be a boolean");
    c.strict = j.at("strict").get<bool>();
  }
  try {
    c.validate();
  } catch (const ValidationError& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }
  return c;
}

Domain1D domain_from_json(const nlohmann::json& j) {
  expect_object(j, "domain");
  allow_keys(j, {"a", "b", "order", "panels", "grading", "singular_points"}, "domain");
  Domain1D d;
  d.a = real(j, "a", "domain");
  d.b = real(j, "b", "domain");
  d.order = static_cast<int>(real_or(j, "order", d.order, "domain"));
  d.panels = static_cast<int>(real_or(j, "panels", d.panels, "domain"));
  d.grading = real_or(j, "grading", d.grading, "domain");
  if (j.contains("singular_points"))
    for (const auto& v : j.at("singular_points")) d.singular_points.push_back(v.get<double>());
  try {
    d.validate();
  } catch (const ValidationError& e) {
    throw SchemaError(std::string("domain: ") + e.what());
  }
  return d;
}

SourceFunction source_from_json(const nlohmann::json& j) {
  expect_object(j, "source");
  const auto kind = text(j, "kind", "source");
  if (kind == "constant") {
    allow_keys(j, {"kind", "c"}, "source");
    return SourceFunction::constant(real(j, "c", "source"));
  }
  if (kind == "linear_in_r") {
    allow_keys(j, {"kind", "a", "lambda", "r_cap"}, "source");
    if (!j.contains("a")) throw SchemaError("source: missing field 'a'");
    auto a = std::make_shared<SampledFunction>(function_from_json(j.at("a")));
    const double lambda = real(j, "lambda", "source");
    const double r_cap = j.contains("r_cap") ? real(j, "r_cap", "source") : 1.0;
    const double a_sup = a->sup_abs();
    if (!std::isfinite(a_sup)) throw SchemaError("source.a must be bounded");
    return SourceFunction::linear_in_r([a](double x) { return (*a)(x); }, lambda, a_sup,
                                       a->name() + "(x) - lambda r", r_cap);
  }
  throw SchemaError("source: unknown kind '" + kind + "'");
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const CheckReport& r) {
  Json samples = Json::array();
  for (double v : r.worst_sample) samples.push_back(number(v));
  Json j;
  j["name"] = r.name;
  j["passed"] = r.passed;
  j["worst_sample"] = samples;
  j["achieved_constant"] = number(r.achieved_constant);
  j["notes"] = r.notes;
  return j;
}

Json to_json(const PVResult& r) {
  Json j;
  j["value"] = number(r.value);
  j["inner_part"] = number(r.inner_part);
  j["outer_part"] = number(r.outer_part);
  j["tail_part"] = number(r.tail_part);
  j["error_estimate"] = number(r.error_estimate);
  return j;
}

Json to_json(const ProbeResult& r) {
  Json j;
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.rhos.size(); ++i)
    rows.push_back(Json::array({number(r.rhos[i]), number(r.magnitudes[i])}));
  j["rho_magnitude"] = rows;
  j["slope"] = number(r.slope);
  j["target"] = number(r.target);
  j["all_below_tolerance"] = r.all_below_tolerance;
  return j;
}

Json to_json(const NormResult& r) {
  Json j;
  j["lambda"] = number(r.lambda);
  j["modular_at_lambda"] = number(r.modular_at_lambda);
  j["modular"] = number(r.modular);
  return j;
}

Json to_json(const LgResult& r) {
  Json j;
  j["value"] = number(r.value);
  j["core"] = number(r.core);
  j["tail"] = number(r.tail);
  j["argument_exponent"] = number(r.argument_exponent);
  return j;
}

Json to_json(const WeakPair& r) {
  Json j;
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["lhs_support"] = number(r.lhs_support);
  j["lhs_exterior"] = number(r.lhs_exterior);
  return j;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      os << (i ? "," : "") << buf;
    }
    os << '\n';
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write " + path.string());
  os << j.dump(2) << '\n';
}

}  // namespace ofrac::io
