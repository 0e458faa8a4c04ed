#include "ofrac/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <set>

#include "ofrac/errors.hpp"
#include "ofrac/infconv.hpp"
#include "ofrac/orlicz.hpp"
#include "ofrac/parallel.hpp"
#include "ofrac/solutions.hpp"

namespace ofrac {

const char* library_version() noexcept { return OFRAC_VERSION_STRING; }

namespace {

using io::Json;
using nlohmann::json;

const std::map<std::string, std::set<std::string>>& op_fields() {
  static const std::map<std::string, std::set<std::string>> fields{
      {"caccioppoli", {"function", "source", "xi"}},
      {"compare", {"a", "b", "nodes", "lower", "upper", "tol"}},
      {"complementary_roundtrip", {"count", "lo", "hi", "tol"}},
      {"g_gradient", {"function", "x"}},
      {"inequality_suite", {"grid"}},
      {"infconv", {"function", "epsilons", "q", "nodes"}},
      {"lg_membership", {"function"}},
      {"luxemburg_sandwich", {"count", "nodes", "L", "kind", "tol"}},
      {"modular", {"function", "domain", "kind"}},
      {"norm", {"function", "domain", "kind", "tol"}},
      {"pv_eval", {"function", "x", "reference", "tol", "spread_tol"}},
      {"pv_probe", {"function", "x", "rhos", "beta", "slope_tol"}},
      {"solve", {"a", "b", "exterior", "source", "nodes", "save_as", "refinements"}},
      {"viscosity_check", {"function", "source", "points", "radius", "tol"}},
      {"weak_check", {"function", "source", "a", "b", "tol"}},
  };
  return fields;
}

void check_fields(const json& op, const std::string& name, std::size_t index) {
  const auto& allowed = op_fields().at(name);
  for (const auto& [k, v] : op.items())
    if (k != "op" && !allowed.count(k))
      throw SchemaError("operation " + std::to_string(index) + " (" + name +
                        "): unknown field '" + k + "'");
}

double num(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw SchemaError(std::string("missing or non-numeric field '") + key + "'");
  return j.at(key).get<double>();
}

double num_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? num(j, key) : fallback;
}

std::vector<double> numbers(const json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw SchemaError(std::string("field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw SchemaError(std::string("field '") + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

int count_field(const json& j, const char* key, int fallback) {
  const double v = num_or(j, key, fallback);
  if (!(v >= 1.0) || v != std::floor(v))
    throw SchemaError(std::string("field '") + key + "' must be a positive integer");
  return static_cast<int>(v);
}

std::vector<double> uniform(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return x;
}

class Runner {
 public:
  Runner(const Scenario& sc, const RunOptions& opt)
      : sc_(sc), opt_(opt), Y_(make_young(sc.young)) {}

  Json run() {
    Json report;
    report["version"] = library_version();
    report["schema_version"] = sc_.version;
    report["scenario"] = sc_.name;
    report["young"] = io::to_json(sc_.young);
    report["s"] = sc_.s;
    report["n"] = sc_.n;
    report["seed"] = sc_.seed;
    Json results = Json::array();
    for (std::size_t i = 0; i < sc_.operations.size(); ++i) {
      const auto& op = sc_.operations[i];
      const auto name = op.at("op").get<std::string>();
      if (!opt_.only.empty() &&
          std::find(opt_.only.begin(), opt_.only.end(), name) == opt_.only.end())
        continue;
      const auto t0 = std::chrono::steady_clock::now();
      index_ = i;
      checks_ = Json::array();
      Json entry;
      entry["index"] = i;
      entry["op"] = name;
      Json body = dispatch(name, op);
      for (auto& [k, v] : body.items()) entry[k] = v;
      entry["checks"] = checks_;
      results.push_back(entry);
      if (opt_.verbose) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "[" << i << "] " << name << ": " << checks_.size() << " checks, "
                  << secs << " s\n";
      }
    }
    report["results"] = results;
    report["passed"] = passed_;
    return report;
  }

  bool passed() const { return passed_; }

 private:
  Json dispatch(const std::string& name, const json& op) {
    if (name == "caccioppoli") return caccioppoli(op);
    if (name == "compare") return compare(op);
    if (name == "complementary_roundtrip") return roundtrip(op);
    if (name == "g_gradient") return g_gradient(op);
    if (name == "inequality_suite") return inequalities(op);
    if (name == "infconv") return infconv(op);
    if (name == "lg_membership") return lg(op);
    if (name == "luxemburg_sandwich") return sandwich(op);
    if (name == "modular") return modular(op);
    if (name == "norm") return norm(op);
    if (name == "pv_eval") return pv_eval(op);
    if (name == "pv_probe") return pv_probe(op);
    if (name == "solve") return solve(op);
    if (name == "viscosity_check") return viscosity(op);
    return weak(op);
  }

  double tol(const json& op, double fallback) const {
    if (opt_.tol) return *opt_.tol;
    return num_or(op, "tol", fallback);
  }

  void add_check(const CheckReport& r) {
    passed_ = passed_ && r.passed;
    checks_.push_back(io::to_json(r));
  }

  std::filesystem::path artifact(const std::string& stem, const char* ext) const {
    return opt_.out_dir / (std::to_string(index_) + "_" + stem + ext);
  }

  SampledFunction function(const json& op, const char* key = "function") {
    if (!op.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    const auto& ref = op.at(key);
    if (ref.is_string()) {
      const auto name = ref.get<std::string>();
      if (auto it = saved_.find(name); it != saved_.end()) return it->second;
      auto it = sc_.functions.find(name);
      if (it == sc_.functions.end()) throw SchemaError("unknown function '" + name + "'");
      return io::function_from_json(it->second);
    }
    return io::function_from_json(ref);
  }

  SourceFunction source(const json& op) {
    if (!op.contains("source")) return SourceFunction::constant(0.0);
    return io::source_from_json(op.at("source"));
  }

  Json pv_eval(const json& op) {
    const auto u = function(op);
    const auto xs = numbers(op, "x");
    std::vector<PVResult> res(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
      res[i] = eval_pv_glaplacian(u, xs[i], Y_, sc_.s, sc_.config);
    });
    Json table = Json::array();
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      Json e;
      e["x"] = xs[i];
      const Json parts = io::to_json(res[i]);
      for (auto& [k, v] : parts.items()) e[k] = v;
      table.push_back(e);
      rows.push_back({xs[i], res[i].value, res[i].inner_part, res[i].outer_part,
                      res[i].tail_part, res[i].error_estimate});
    }
    io::write_csv(artifact("pv_eval", ".csv"),
                  {"x", "value", "inner_part", "outer_part", "tail_part", "error_estimate"}, rows);
    if (op.contains("reference")) {
      const double ref = num(op, "reference");
      const double t = tol(op, 5e-3);
      CheckReport r{"pv_reference", true, {}, 0.0, "max relative deviation from the reference"};
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = std::abs(res[i].value - ref) / std::max(std::abs(ref), 1e-300);
        if (d > r.achieved_constant) {
          r.achieved_constant = d;
          r.worst_sample = {xs[i], res[i].value};
        }
      }
      r.passed = r.achieved_constant <= t;
      add_check(r);
    }
    if (op.contains("spread_tol") && !xs.empty()) {
      double lo = res[0].value, hi = res[0].value;
      for (const auto& r : res) {
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
      }
      const double mid = 0.5 * (lo + hi);
      const double spread = (hi - lo) / std::max(std::abs(mid), 1e-300);
      add_check({"pv_spread", spread <= num(op, "spread_tol"), {lo, hi}, spread,
                 "relative spread (max - min) / mean"});
    }
    Json out;
    out["pv"] = table;
    return out;
  }

  Json pv_probe(const json& op) {
    const auto u = function(op);
    const double x = num(op, "x");
    std::vector<double> rhos;
    if (op.contains("rhos")) {
      rhos = numbers(op, "rhos");
    } else {
      for (int k = 0; k <= 12; ++k) rhos.push_back(0.1 * std::pow(10.0, -k / 4.0));
    }
    std::optional<double> beta;
    if (op.contains("beta")) beta = num(op, "beta");
    const auto res = inner_decay_probe(u, x, Y_, sc_.s, rhos, beta, sc_.config);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.rhos.size(); ++i) rows.push_back({res.rhos[i], res.magnitudes[i]});
    io::write_csv(artifact("pv_probe", ".csv"), {"rho", "magnitude"}, rows);
    const double st = opt_.tol ? *opt_.tol : num_or(op, "slope_tol", 0.1);
    const double dev = std::abs(res.slope - res.target);
    add_check({"probe_slope", res.all_below_tolerance || dev <= st, {res.slope, res.target}, dev,
               "|fitted slope - predicted exponent|"});
    return io::to_json(res);
  }

  Json g_gradient(const json& op) {
    const auto u = function(op);
    const auto xs = numbers(op, "x");
    std::vector<PVResult> res(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) {
      res[i] = eval_g_gradient_parts(u, xs[i], Y_, sc_.s, sc_.config);
    });
    Json table = Json::array();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      Json e;
      e["x"] = xs[i];
      const Json parts = io::to_json(res[i]);
      for (auto& [k, v] : parts.items()) e[k] = v;
      table.push_back(e);
    }
    Json out;
    out["g_gradient"] = table;
    return out;
  }

  Json inequalities(const json& op) {
    SampleGrid grid;
    if (op.contains("grid")) {
      const auto& g = op.at("grid");
      grid.lo = num_or(g, "lo", grid.lo);
      grid.hi = num_or(g, "hi", grid.hi);
      grid.per_decade = count_field(g, "per_decade", grid.per_decade);
    }
    const auto Yg = make_young(sc_.young, grid);
    for (const auto& r : inequality_suite(Yg, grid)) add_check(r);
    Json out;
    out["p_minus"] = Yg.p_minus();
    out["p_plus"] = Yg.p_plus();
    return out;
  }

  Json roundtrip(const json& op) {
    const int n = count_field(op, "count", 100);
    const double lo = num_or(op, "lo", 1e-3), hi = num_or(op, "hi", 1e3);
    CheckReport r{"complementary_roundtrip", true, {}, 0.0,
                  "max |inverse(complementary(a)) - a| / a"};
    for (int i = 0; i < n; ++i) {
      const double a = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
      const double back = complementary_inverse(Y_, complementary(Y_, a).value);
      const double d = std::abs(back - a) / a;
      if (d > r.achieved_constant) {
        r.achieved_constant = d;
        r.worst_sample = {a, back};
      }
    }
    r.passed = r.achieved_constant < tol(op, 1e-8);
    add_check(r);
    return Json::object();
  }

  static NormKind norm_kind(const json& op) {
    const auto k = op.value("kind", std::string("LG"));
    if (k == "LG") return NormKind::LG;
    if (k == "seminorm") return NormKind::SeminormSG;
    throw SchemaError("norm kind must be 'LG' or 'seminorm'");
  }

  Json modular(const json& op) {
    const auto u = function(op);
    const auto dom = io::domain_from_json(op.at("domain"));
    const auto k = op.value("kind", std::string("G"));
    ModularResult m;
    if (k == "G") {
      m = modular_G(u, dom, Y_);
    } else if (k == "sG") {
      m = modular_sG(u, dom, Y_, sc_.s);
    } else {
      throw SchemaError("modular kind must be 'G' or 'sG'");
    }
    Json out;
    out["value"] = io::number(m.value);
    out["error"] = io::number(m.error);
    return out;
  }

  CheckReport sandwich_check(const NormResult& r, double t, const std::string& label) {
    const double lo = xi_minus(Y_, r.lambda), hi = xi_plus(Y_, r.lambda);
    const double unit = std::abs(r.modular_at_lambda - 1.0);
    const bool ok = unit <= t && r.modular >= lo * (1.0 - 1e-9) && r.modular <= hi * (1.0 + 1e-9);
    return {"luxemburg_sandwich", ok, {r.lambda, r.modular, lo, hi}, unit, label};
  }

  Json norm(const json& op) {
    const auto u = function(op);
    const auto dom = io::domain_from_json(op.at("domain"));
    const auto r = luxemburg_norm(u, dom, Y_, norm_kind(op), sc_.s);
    add_check(sandwich_check(r, tol(op, 1e-6), "|Phi(u/lambda) - 1| and xi-(lambda) <= Phi(u) <= xi+(lambda)"));
    return io::to_json(r);
  }

  // Random piecewise-linear grid functions from the scenario seed.
  Json sandwich(const json& op) {
    const int count = count_field(op, "count", 20);
    const int nodes = count_field(op, "nodes", 41);
    const double L = num_or(op, "L", 1.0);
    const auto kind = norm_kind(op);
    std::mt19937_64 rng(sc_.seed);
    std::uniform_real_distribution<double> amp(-3.0, 3.0);
    std::vector<SampledFunction> fns;
    for (int c = 0; c < count; ++c) {
      std::vector<double> v(static_cast<std::size_t>(nodes));
      for (auto& e : v) e = amp(rng);
      v.front() = v.back() = 0.0;
      fns.push_back(SampledFunction::grid(L, std::move(v), TailModel::zero()));
    }
    std::vector<NormResult> res(fns.size());
    Domain1D dom;
    dom.a = -L;
    dom.b = L;
    parallel_for(fns.size(), [&](std::size_t i) { res[i] = luxemburg_norm(fns[i], dom, Y_, kind, sc_.s); });
    const double t = tol(op, 1e-6);
    CheckReport all{"luxemburg_sandwich", true, {}, 0.0, "worst |Phi(u/lambda) - 1| over the sample"};
    Json lambdas = Json::array();
    for (std::size_t i = 0; i < res.size(); ++i) {
      const auto r = sandwich_check(res[i], t, "");
      lambdas.push_back(io::number(res[i].lambda));
      if (r.achieved_constant >= all.achieved_constant || !r.passed) {
        all.achieved_constant = std::max(all.achieved_constant, r.achieved_constant);
        if (!r.passed || all.worst_sample.empty()) all.worst_sample = r.worst_sample;
      }
      all.passed = all.passed && r.passed;
    }
    add_check(all);
    Json out;
    out["lambdas"] = lambdas;
    return out;
  }

  Json lg(const json& op) {
    const auto u = function(op);
    return io::to_json(lg_membership(u, Y_, sc_.s, sc_.n));
  }

  Json infconv(const json& op) {
    const auto u = function(op);
    auto eps = numbers(op, "epsilons");
    std::sort(eps.begin(), eps.end(), std::greater<>());
    const double q = op.contains("q") ? num(op, "q") : choose_q(Y_.p_minus(), sc_.s);
    std::vector<double> nodes;
    if (op.contains("nodes")) {
      const double L = u.core_half_width();
      nodes = uniform(-L, L, count_field(op, "nodes", 2001));
    }
    for (const auto& r : propinfconv_report(u, eps, q, nodes)) add_check(r);
    std::vector<InfConvResult> runs;
    for (double e : eps) runs.push_back(inf_convolve(u, make_infconv_params(u, e, q), nodes));
    std::vector<std::string> header{"x", "u"};
    for (double e : eps) header.push_back("u_eps_" + std::to_string(e));
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < runs.front().x.size(); ++i) {
      std::vector<double> row{runs.front().x[i], u(runs.front().x[i])};
      for (const auto& r : runs) row.push_back(r.values[i]);
      rows.push_back(std::move(row));
    }
    io::write_csv(artifact("infconv", ".csv"), header, rows);
    Json params = Json::array();
    for (const auto& r : runs) {
      Json p;
      p["epsilon"] = r.params.epsilon;
      p["window_radius"] = r.params.window_radius;
      p["semiconcavity_bound"] = r.semiconcavity_bound;
      p["window_clipped"] = r.window_clipped;
      params.push_back(p);
    }
    Json out;
    out["q"] = q;
    out["runs"] = params;
    return out;
  }

  struct Problem {
    SampledFunction ext;
    SourceFunction f;
  };

  Problem problem(const json& j) {
    if (!j.contains("exterior")) throw SchemaError("missing field 'exterior'");
    return {function(j, "exterior"), source(j)};
  }

  Json solve(const json& op) {
    const double a = num_or(op, "a", -1.0), b = num_or(op, "b", 1.0);
    auto pr = problem(op);
    DirichletOptions o;
    o.nodes = count_field(op, "nodes", o.nodes);
    DirichletSolver S(a, b, pr.ext, Y_, sc_.s, pr.f, o);
    const int sweeps = S.solve();
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < S.size(); ++i) rows.push_back({S.nodes()[i], S.values()[i]});
    io::write_csv(artifact("solve", ".csv"), {"x", "u"}, rows);
    if (op.contains("save_as")) saved_.insert_or_assign(op.at("save_as").get<std::string>(), S.solution());
    Json out;
    out["nodes"] = S.size();
    out["sweeps"] = sweeps;
    out["max_residual"] = io::number(S.max_residual());
    if (op.contains("refinements")) {
      // Convergence table at the midpoint against the finest grid.
      auto levels = numbers(op, "refinements");
      std::sort(levels.begin(), levels.end());
      std::vector<double> mids;
      for (double n : levels) {
        DirichletOptions ro = o;
        ro.nodes = static_cast<int>(n);
        mids.push_back(solve_dirichlet(a, b, pr.ext, Y_, sc_.s, pr.f, ro)(0.5 * (a + b)));
      }
      std::vector<std::vector<double>> table;
      for (std::size_t i = 0; i < levels.size(); ++i)
        table.push_back({levels[i], (b - a) / (levels[i] - 1.0), mids[i],
                         std::abs(mids[i] - mids.back())});
      io::write_csv(artifact("convergence", ".csv"), {"nodes", "h", "u_mid", "diff_to_finest"},
                    table);
      out["convergence_levels"] = levels.size();
    }
    return out;
  }

  Json compare(const json& op) {
    const double a = num_or(op, "a", -1.0), b = num_or(op, "b", 1.0);
    DirichletOptions o;
    o.nodes = count_field(op, "nodes", o.nodes);
    auto lo = problem(op.at("lower")), hi = problem(op.at("upper"));
    DirichletSolver L(a, b, lo.ext, Y_, sc_.s, lo.f, o), U(a, b, hi.ext, Y_, sc_.s, hi.f, o);
    L.solve();
    U.solve();
    add_check(comparison_report(L.values(), U.values(), tol(op, 1e-8)));
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < L.size(); ++i)
      rows.push_back({L.nodes()[i], L.values()[i], U.values()[i]});
    io::write_csv(artifact("compare", ".csv"), {"x", "lower", "upper"}, rows);
    Json out;
    out["nodes"] = L.size();
    return out;
  }

  Json weak(const json& op) {
    const auto u = function(op);
    const auto f = source(op);
    const double a = num_or(op, "a", -1.0), b = num_or(op, "b", 1.0);
    const auto basis = bump_basis(a, b);
    std::vector<WeakPair> res(basis.size());
    parallel_for(basis.size(), [&](std::size_t i) {
      res[i] = weak_form_pair(u, basis[i], Y_, sc_.s, f, sc_.config);
    });
    const double t = tol(op, 1e-3);
    CheckReport sup{"weak_supersolution", true, {}, 0.0, "min over the bump basis of lhs - rhs"};
    CheckReport sub{"weak_subsolution", true, {}, 0.0, "min over the bump basis of rhs - lhs"};
    sup.achieved_constant = sub.achieved_constant = std::numeric_limits<double>::infinity();
    Json pairs = Json::array();
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < res.size(); ++i) {
      const double m = res[i].lhs - res[i].rhs;
      if (m < sup.achieved_constant) {
        sup.achieved_constant = m;
        sup.worst_sample = {basis[i].center, basis[i].radius};
      }
      if (-m < sub.achieved_constant) {
        sub.achieved_constant = -m;
        sub.worst_sample = {basis[i].center, basis[i].radius};
      }
      Json e;
      e["center"] = basis[i].center;
      e["radius"] = basis[i].radius;
      const Json parts = io::to_json(res[i]);
      for (auto& [k, v] : parts.items()) e[k] = v;
      pairs.push_back(e);
      rows.push_back({basis[i].center, basis[i].radius, res[i].lhs, res[i].rhs});
    }
    sup.passed = sup.achieved_constant >= -t;
    sub.passed = sub.achieved_constant >= -t;
    add_check(sup);
    add_check(sub);
    io::write_csv(artifact("weak_check", ".csv"), {"center", "radius", "lhs", "rhs"}, rows);
    Json out;
    out["pairs"] = pairs;
    return out;
  }

  Json viscosity(const json& op) {
    const auto u = function(op);
    const auto f = source(op);
    const auto pts = numbers(op, "points");
    const double radius = num_or(op, "radius", 0.05);
    const double t = tol(op, 1e-3);
    std::vector<CheckReport> res(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      const auto touch = touch_from_below(u, pts[i], radius);
      res[i] = viscosity_point_check(u, pts[i], touch, Y_, sc_.s, f, sc_.config, t);
    });
    for (const auto& r : res) add_check(r);
    return Json::object();
  }

  Json caccioppoli(const json& op) {
    const auto u = function(op);
    const auto f = source(op);
    if (!op.contains("xi")) throw SchemaError("missing field 'xi'");
    const auto& x = op.at("xi");
    TestFunction xi{num(x, "center"), num(x, "radius"), num_or(x, "height", 1.0)};
    add_check(caccioppoli_report(u, xi, Y_, sc_.s, f, sc_.config));
    return Json::object();
  }

  const Scenario& sc_;
  const RunOptions& opt_;
  YoungFunction Y_;
  std::map<std::string, SampledFunction> saved_;
  Json checks_;
  std::size_t index_ = 0;
  bool passed_ = true;
};

}  // namespace

const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : op_fields()) v.push_back(k);
    return v;
  }();
  return names;
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw SchemaError("scenario must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    static const std::set<std::string> top{"version", "name",     "young", "s", "n",
                                           "seed",    "functions", "config", "operations"};
    if (!top.count(k)) throw SchemaError("unknown top-level field '" + k + "'");
  }
  Scenario sc;
  if (!j.contains("version") || !j.at("version").is_number_integer())
    throw SchemaError("scenario needs an integer 'version'");
  sc.version = j.at("version").get<int>();
  if (sc.version != kScenarioSchemaVersion)
    throw SchemaError("unsupported scenario version " + std::to_string(sc.version));
  sc.name = j.value("name", std::string("scenario"));
  if (!j.contains("young")) throw SchemaError("scenario needs 'young'");
  sc.young = io::young_from_json(j.at("young"));
  sc.s = num_or(j, "s", 0.5);
  if (!(sc.s > 0.0 && sc.s < 1.0)) throw SchemaError("s must lie in (0, 1)");
  const double n = num_or(j, "n", 1.0);
  if (!(n >= 1.0) || n != std::floor(n)) throw SchemaError("n must be an integer >= 1");
  if (n != 1.0) throw SchemaError("only dimension n = 1 is implemented");
  sc.n = 1;
  const double seed = num_or(j, "seed", 1.0);
  if (!(seed >= 0.0) || seed != std::floor(seed)) throw SchemaError("seed must be a nonnegative integer");
  sc.seed = static_cast<std::uint64_t>(seed);
  if (j.contains("config")) sc.config = io::config_from_json(j.at("config"));
  if (j.contains("functions")) {
    if (!j.at("functions").is_object()) throw SchemaError("'functions' must be an object");
    for (const auto& [k, v] : j.at("functions").items()) {
      io::function_from_json(v);  // validates references early
      sc.functions[k] = v;
    }
  }
  if (j.contains("operations")) {
    if (!j.at("operations").is_array()) throw SchemaError("'operations' must be an array");
    std::size_t i = 0;
    for (const auto& op : j.at("operations")) {
      if (!op.is_object() || !op.contains("op") || !op.at("op").is_string())
        throw SchemaError("operation " + std::to_string(i) + " needs a string 'op'");
      const auto name = op.at("op").get<std::string>();
      if (!op_fields().count(name)) throw SchemaError("unknown operation '" + name + "'");
      check_fields(op, name, i);
      sc.operations.push_back(op);
      ++i;
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw SchemaError("cannot read scenario " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ORLICZ_FRAC_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

ScenarioOutcome execute_scenario(const Scenario& scenario, const RunOptions& options) {
  set_thread_count(resolve_threads(options.threads));
  std::filesystem::create_directories(options.out_dir);
  Runner runner(scenario, options);
  ScenarioOutcome out;
  try {
    out.report = runner.run();
  } catch (const json::exception& e) {
    throw SchemaError(e.what());
  }
  out.passed = runner.passed();
  io::write_json(options.out_dir / "report.json", out.report);
  return out;
}

int run_scenario(const std::filesystem::path& path, const RunOptions& options) {
  try {
    const auto outcome = execute_scenario(load_scenario(path), options);
    return outcome.passed ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ofrac
