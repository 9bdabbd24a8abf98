#include <algorithm>
#include <cmath>
#include <set>

#include "internal.hpp"
#include "pwlab/cli.hpp"
#include "pwlab/equivariance.hpp"
#include "pwlab/error.hpp"
#include "pwlab/schrodinger.hpp"

namespace pwlab::cli {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ConfigInvalid, path + ": " + what);
}

const json& defaults() {
  static const json d = json::parse(R"({
    "seed": 1,
    "grid": {"points": [1024], "lo": [-20.0], "hi": [20.0]},
    "model": {"masses": null},
    "potential": {"terms": []},
    "state": {"type": "gaussian", "center": null, "momentum": null, "sigma": null,
              "k": null, "displacement": null},
    "evolution": {"t_final": 1.0, "dt": 0.001, "snapshot_stride": 10},
    "integration": {"dt": 0.001, "node_floor_rel": 1e-12},
    "starts": {"points": null, "count": 20, "scheme": "stratified"},
    "output": {"encoding": "csv", "plots": true, "svg_timestamp": true,
               "snapshots": true},
    "boost": {"velocity": null},
    "frame": {"angles": null, "translation": null},
    "accel": {"acceleration": null, "x0": null, "v0": null, "t_final": 2.0,
              "dt": 0.001, "mass_sets": null},
    "equivalence": {"v0_offset": null, "offset_check": 1.0},
    "second_order": {"v0": null},
    "continuity": {"t_index": null, "compare_mass_scale": 2.0},
    "ensemble": {"n": 10000, "scheme": "stratified"},
    "mass_audit": {"mass_scale": 2.0, "n": 10000},
    "tolerances": {
      "norm_drift": 1e-10,
      "analytic_error": 1e-8,
      "max_failures": 0,
      "boost_gap": 1e-4,
      "phase_shift": 1e-6,
      "frame_gap": 1e-6,
      "accel_trajectory_gap": 1e-10,
      "accel_force_gap": 1e-12,
      "equivalence_gap": 1e-4,
      "offset_gap_min": 1e-2,
      "continuity_residual": 1e-4,
      "continuity_mass_ratio_min": 100.0,
      "ks_max": 0.02,
      "mass_ratio_min": 5.0
    }
  })");
  return d;
}

// Keys of `raw` must exist in `base`; objects merge recursively.
void merge(json& base, const json& raw, const std::string& path) {
  if (!raw.is_object()) invalid(path.empty() ? "/" : path, "expected an object");
  for (auto it = raw.begin(); it != raw.end(); ++it) {
    const std::string here = path + "/" + it.key();
    if (!base.contains(it.key())) invalid(here, "unknown key");
    json& slot = base[it.key()];
    if (slot.is_object() && !it.value().is_null())
      merge(slot, it.value(), here);
    else
      slot = it.value();
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) invalid(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid(path, "must be finite");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) invalid(path, "must be positive");
  return v;
}

long long integer(const json& j, const std::string& path, long long min) {
  if (!j.is_number_integer()) invalid(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < min) invalid(path, "must be >= " + std::to_string(min));
  return v;
}

std::vector<double> vec(const json& j, const std::string& path, int dim) {
  if (!j.is_array()) invalid(path, "expected an array of numbers");
  if (dim > 0 && static_cast<int>(j.size()) != dim)
    invalid(path, "expected " + std::to_string(dim) + " entries");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "/" + std::to_string(i)));
  return out;
}

void fill(json& slot, const json& value) {
  if (slot.is_null()) slot = value;
}

void one_of(const json& j, const std::string& path, std::initializer_list<const char*> options) {
  if (!j.is_string()) invalid(path, "expected a string");
  for (const char* o : options)
    if (j == o) return;
  std::string list;
  for (const char* o : options) list += std::string(list.empty() ? "" : ", ") + o;
  invalid(path, "must be one of " + list);
}

void check_points(const json& j, const std::string& path, int dim) {
  if (!j.is_array() || j.empty()) invalid(path, "expected a non-empty array of points");
  for (std::size_t i = 0; i < j.size(); ++i) vec(j[i], path + "/" + std::to_string(i), dim);
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "evolve",       "trajectories",      "second-order",     "boost-audit",
      "frame-audit",  "accel-audit",       "equivalence-audit", "continuity-audit",
      "ensemble",     "mass-audit"};
  return names;
}

void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw Error(ErrorKind::ConfigInvalid, "override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw Error(ErrorKind::ConfigInvalid, "override key '" + key + "' is malformed");
    if (!node->is_object()) *node = json::object();
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

json resolve_config(const std::string& command, const json& raw) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end())
    throw Error(ErrorKind::ConfigInvalid, "unknown command '" + command + "'");
  json c = defaults();
  merge(c, raw.is_null() ? json::object() : raw, "");

  integer(c["seed"], "/seed", 0);

  // Grid first: every vector default depends on its dimension.
  auto& grid = c["grid"];
  if (!grid["points"].is_array() || grid["points"].empty() || grid["points"].size() > 3)
    invalid("/grid/points", "expected 1 to 3 axis sizes");
  const int d = static_cast<int>(grid["points"].size());
  for (int a = 0; a < d; ++a) integer(grid["points"][a], "/grid/points/" + std::to_string(a), 16);
  vec(grid["lo"], "/grid/lo", d);
  vec(grid["hi"], "/grid/hi", d);
  try {
    (void)detail::grid_of(c);
  } catch (const Error& e) {
    invalid("/grid", e.what());
  }
  const json zeros = std::vector<double>(d, 0.0);
  const json ones = std::vector<double>(d, 1.0);

  fill(c["model"]["masses"], ones);
  for (double m : vec(c["model"]["masses"], "/model/masses", d))
    if (!(m > 0.0)) invalid("/model/masses", "masses must be positive");

  auto& terms = c["potential"]["terms"];
  if (!terms.is_array()) invalid("/potential/terms", "expected an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string p = "/potential/terms/" + std::to_string(i);
    auto& t = terms[i];
    if (!t.is_object() || !t.contains("type")) invalid(p, "expected an object with a type");
    one_of(t["type"], p + "/type", {"harmonic", "gaussian_barrier", "uniform_gradient"});
    if (t["type"] == "harmonic") {
      fill(t["k"], ones);
      vec(t["k"], p + "/k", d);
    } else if (t["type"] == "gaussian_barrier") {
      number(t["height"], p + "/height");
      positive(t["width"], p + "/width");
      fill(t["center"], zeros);
      vec(t["center"], p + "/center", d);
    } else {
      vec(t["g"], p + "/g", d);
      fill(t["g_rate"], zeros);
      vec(t["g_rate"], p + "/g_rate", d);
    }
  }

  auto& s = c["state"];
  one_of(s["type"], "/state/type", {"gaussian", "plane_wave", "harmonic_ground", "coherent"});
  fill(s["center"], zeros);
  fill(s["momentum"], zeros);
  fill(s["sigma"], ones);
  fill(s["k"], ones);
  fill(s["displacement"], zeros);
  vec(s["center"], "/state/center", d);
  vec(s["momentum"], "/state/momentum", d);
  for (double v : vec(s["sigma"], "/state/sigma", d))
    if (!(v > 0.0)) invalid("/state/sigma", "widths must be positive");
  for (double v : vec(s["k"], "/state/k", d))
    if (!(v > 0.0)) invalid("/state/k", "spring constants must be positive");
  vec(s["displacement"], "/state/displacement", d);

  const double t_final = number(c["evolution"]["t_final"], "/evolution/t_final");
  if (t_final < 0.0) invalid("/evolution/t_final", "must be >= 0");
  positive(c["evolution"]["dt"], "/evolution/dt");
  integer(c["evolution"]["snapshot_stride"], "/evolution/snapshot_stride", 1);
  positive(c["integration"]["dt"], "/integration/dt");
  positive(c["integration"]["node_floor_rel"], "/integration/node_floor_rel");

  auto& st = c["starts"];
  if (!st["points"].is_null()) check_points(st["points"], "/starts/points", d);
  integer(st["count"], "/starts/count", 1);
  one_of(st["scheme"], "/starts/scheme", {"stratified", "iid", "quantile"});

  auto& out = c["output"];
  one_of(out["encoding"], "/output/encoding", {"csv", "binary"});
  for (const char* k : {"plots", "svg_timestamp", "snapshots"})
    if (!out[k].is_boolean()) invalid(std::string("/output/") + k, "expected a boolean");

  fill(c["boost"]["velocity"], zeros);
  vec(c["boost"]["velocity"], "/boost/velocity", d);

  const int planes = d == 1 ? 0 : d == 2 ? 1 : 3;
  fill(c["frame"]["angles"], std::vector<double>(planes, 0.0));
  vec(c["frame"]["angles"], "/frame/angles", planes);
  fill(c["frame"]["translation"], zeros);
  vec(c["frame"]["translation"], "/frame/translation", d);

  auto& ac = c["accel"];
  fill(ac["acceleration"], zeros);
  fill(ac["x0"], zeros);
  fill(ac["v0"], zeros);
  vec(ac["acceleration"], "/accel/acceleration", d);
  vec(ac["x0"], "/accel/x0", d);
  vec(ac["v0"], "/accel/v0", d);
  positive(ac["t_final"], "/accel/t_final");
  positive(ac["dt"], "/accel/dt");
  if (ac["mass_sets"].is_null()) {
    json scaled = json::array();
    for (std::size_t a = 0; a < c["model"]["masses"].size(); ++a)
      scaled.push_back(c["model"]["masses"][a].get<double>() * (a % 2 ? 0.4 : 2.5));
    ac["mass_sets"] = {c["model"]["masses"], scaled};
  }
  check_points(ac["mass_sets"], "/accel/mass_sets", d);
  for (const auto& set : ac["mass_sets"])
    for (const auto& m : set)
      if (!(m.get<double>() > 0.0)) invalid("/accel/mass_sets", "masses must be positive");

  fill(c["equivalence"]["v0_offset"], zeros);
  vec(c["equivalence"]["v0_offset"], "/equivalence/v0_offset", d);
  if (!c["equivalence"]["offset_check"].is_null())
    positive(c["equivalence"]["offset_check"], "/equivalence/offset_check");

  if (!c["second_order"]["v0"].is_null()) vec(c["second_order"]["v0"], "/second_order/v0", d);

  if (!c["continuity"]["t_index"].is_null())
    integer(c["continuity"]["t_index"], "/continuity/t_index", 1);
  if (!c["continuity"]["compare_mass_scale"].is_null())
    positive(c["continuity"]["compare_mass_scale"], "/continuity/compare_mass_scale");

  integer(c["ensemble"]["n"], "/ensemble/n", 1);
  one_of(c["ensemble"]["scheme"], "/ensemble/scheme", {"stratified", "iid"});

  const double scale = positive(c["mass_audit"]["mass_scale"], "/mass_audit/mass_scale");
  if (scale == 1.0) invalid("/mass_audit/mass_scale", "must differ from 1 (1 is the control)");
  integer(c["mass_audit"]["n"], "/mass_audit/n", 1);

  for (auto it = c["tolerances"].begin(); it != c["tolerances"].end(); ++it)
    if (it.key() == "max_failures")
      integer(it.value(), "/tolerances/max_failures", 0);
    else
      positive(it.value(), "/tolerances/" + it.key());

  return c;
}

namespace detail {

GridSpec grid_of(const json& c) {
  return GridSpec(c["grid"]["points"].get<std::vector<int>>(),
                  c["grid"]["lo"].get<std::vector<double>>(),
                  c["grid"]["hi"].get<std::vector<double>>());
}

ParticleModel model_of(const json& c) {
  ParticleModel m;
  m.masses = c["model"]["masses"].get<std::vector<double>>();
  return m;
}

Potential potential_of(const json& c) {
  Potential v = Potential::free();
  for (const auto& t : c["potential"]["terms"]) {
    Potential term;
    if (t["type"] == "harmonic")
      term = Potential::harmonic(t["k"].get<std::vector<double>>());
    else if (t["type"] == "gaussian_barrier")
      term = Potential::gaussian_barrier(t["height"].get<double>(), t["width"].get<double>(),
                                         t["center"].get<std::vector<double>>());
    else
      term = Potential::uniform_gradient(t["g"].get<std::vector<double>>(),
                                         t["g_rate"].get<std::vector<double>>());
    for (const auto& part : term.terms()) v.add(part);
  }
  return v;
}

namespace {
Point point_of(const json& j) {
  Point p{};
  for (std::size_t a = 0; a < j.size(); ++a) p[a] = j[a].get<double>();
  return p;
}
}  // namespace

WaveFunction state_of(const json& c, const GridSpec& grid, const ParticleModel& model) {
  const auto& s = c["state"];
  if (s["type"] == "gaussian")
    return gaussian_packet(grid, point_of(s["center"]), point_of(s["momentum"]),
                           point_of(s["sigma"]));
  if (s["type"] == "plane_wave") return plane_wave(grid, point_of(s["momentum"]));
  const auto k = s["k"].get<std::vector<double>>();
  if (s["type"] == "harmonic_ground") return harmonic_ground_state(grid, k, model);
  return harmonic_coherent_state(grid, k, model, point_of(s["displacement"]), 0.0);
}

std::vector<Point> starts_of(const json& c, const WaveFunction& psi0) {
  const auto& st = c["starts"];
  std::vector<Point> out;
  if (!st["points"].is_null()) {
    for (const auto& p : st["points"]) out.push_back(point_of(p));
    return out;
  }
  const auto n = st["count"].get<std::size_t>();
  const auto seed = c["seed"].get<std::uint64_t>();
  if (st["scheme"] == "quantile") {
    // Deterministic node-free starts: every point sits at a stratum midpoint.
    const DensityField rho = density(psi0);
    const auto dim = psi0.grid.dim();
    std::vector<double> cdf(rho.values.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < cdf.size(); ++i) cdf[i] = (acc += rho.values[i]);
    for (std::size_t i = 0; i < n; ++i) {
      const double target = acc * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      const auto idx = static_cast<std::size_t>(
          std::lower_bound(cdf.begin(), cdf.end(), target) - cdf.begin());
      const auto node = psi0.grid.node(idx);
      Point p{};
      for (int a = 0; a < dim; ++a) p[a] = node[a];
      out.push_back(p);
    }
    return out;
  }
  return sample_density(density(psi0), n, seed,
                        st["scheme"] == "iid" ? SamplingScheme::iid : SamplingScheme::stratified);
}

}  // namespace detail

}  // namespace pwlab::cli
