#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ohsolve/errors.hpp"
#include "ohsolve/harness.hpp"

namespace ohsolve {

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::None:
      return "none";
    case SweepAxis::Grid:
      return "grid";
    case SweepAxis::Epsilon:
      return "epsilon";
    case SweepAxis::Delta:
      return "delta";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view s) {
  if (s == "none") return SweepAxis::None;
  if (s == "grid") return SweepAxis::Grid;
  if (s == "epsilon") return SweepAxis::Epsilon;
  if (s == "delta") return SweepAxis::Delta;
  throw ConfigError("sweep: expected none, grid, epsilon or delta, got '" + std::string(s) + "'");
}

namespace {

const std::set<std::string> kTopKeys = {
    "t_end",        "N",            "L",           "gamma",          "epsilon",
    "delta",        "cfl",          "mode",        "flux_scheme",    "diffusion_scheme",
    "mean_correction", "flux",      "initial_data", "amplitude",     "riemann_left",
    "riemann_right", "riemann_width", "relax_mass", "perturbation",  "wavenumber",
    "sweep",        "sweep_values", "output_dir",  "seed",           "snapshot_levels",
    "threads",      "compare_scheme", "adjoint_epsilon", "moll_width", "tolerances"};

const std::set<std::string> kToleranceKeys = {
    "mass_density", "support",   "energy",             "linf",      "inequality",
    "quadrature",   "entropy_k", "divided_difference", "stability", "pmass_density"};

double get_number(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

long long get_integer(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) {
      return static_cast<long long>(v.get<double>());
    }
    throw ConfigError("config key '" + key + "' must be an integer");
  }
  return v.get<long long>();
}

std::string get_string(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

bool get_bool(const Json& j, const std::string& key) {
  const Json& v = j.at(key);
  if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
  return v.get<bool>();
}

void read_number(const Json& j, const char* key, double& out) {
  if (j.contains(key)) out = get_number(j, key);
}

Tolerances parse_tolerances(const Json& t) {
  if (!t.is_object()) throw ConfigError("config key 'tolerances' must be an object");
  for (const auto& [key, value] : t.items()) {
    if (!kToleranceKeys.count(key)) throw ConfigError("unknown tolerance key '" + key + "'");
  }
  Tolerances tol;
  read_number(t, "mass_density", tol.mass_density);
  read_number(t, "support", tol.support);
  read_number(t, "energy", tol.energy);
  read_number(t, "linf", tol.linf);
  read_number(t, "inequality", tol.inequality);
  read_number(t, "quadrature", tol.quadrature);
  read_number(t, "entropy_k", tol.entropy_k);
  read_number(t, "divided_difference", tol.divided_difference);
  read_number(t, "stability", tol.stability);
  read_number(t, "pmass_density", tol.pmass_density);
  return tol;
}

void check_plan(const ExperimentPlan& p) {
  validate(p.config);
  if (!(p.half_width > 0.0) || !std::isfinite(p.half_width)) throw ConfigError("L must be positive");
  if (p.cells < 4) throw ConfigError("N must be >= 4");
  make_flux(p.flux);
  static const std::set<std::string> kinds = {"hermite-bump", "zero", "riemann",
                                              "perturbed-bump"};
  if (!kinds.count(p.profile.kind)) {
    throw ConfigError("initial_data: expected hermite-bump, zero, riemann or perturbed-bump, got '" +
                      p.profile.kind + "'");
  }
  if (p.snapshot_levels < 0 || p.snapshot_levels > 30) {
    throw ConfigError("snapshot_levels must lie in [0, 30]");
  }
  if (p.threads < 0) throw ConfigError("threads must be >= 0");
  if (!p.compare_scheme.empty()) parse_flux_scheme(p.compare_scheme);

  if (p.axis == SweepAxis::None) {
    if (!p.sweep_values.empty()) throw ConfigError("sweep_values given but sweep = none");
    return;
  }
  const auto& v = p.sweep_values;
  if (v.size() < 2) throw ConfigError("sweep_values needs at least 2 values");
  const bool up = v[1] > v[0];
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (up ? !(v[k] > v[k - 1]) : !(v[k] < v[k - 1])) {
      throw ConfigError("sweep_values must be strictly monotone");
    }
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw ConfigError("sweep_values must be finite");
    if (p.axis == SweepAxis::Grid && (x < 4 || std::floor(x) != x)) {
      throw ConfigError("grid sweep values must be integers >= 4");
    }
    if (p.axis == SweepAxis::Epsilon && x < 0.0) {
      throw ConfigError("epsilon sweep values must be >= 0");
    }
    if (p.axis == SweepAxis::Delta && !(x > 0.0)) {
      throw ConfigError("delta sweep values must be > 0");
    }
  }
}

}  // namespace

ExperimentPlan parse_config_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kTopKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentPlan p;
  SolverConfig& c = p.config;
  read_number(j, "t_end", c.t_end);
  read_number(j, "gamma", c.gamma);
  read_number(j, "epsilon", c.epsilon);
  read_number(j, "delta", c.delta);
  read_number(j, "cfl", c.cfl);
  if (j.contains("mode")) c.mode = parse_mode(get_string(j, "mode"));
  if (j.contains("flux_scheme")) c.flux_scheme = parse_flux_scheme(get_string(j, "flux_scheme"));
  if (j.contains("diffusion_scheme")) {
    c.diffusion_scheme = parse_diffusion_scheme(get_string(j, "diffusion_scheme"));
  }
  if (j.contains("mean_correction")) c.mean_correction = get_bool(j, "mean_correction");
  if (j.contains("tolerances")) c.tolerances = parse_tolerances(j.at("tolerances"));

  read_number(j, "L", p.half_width);
  if (j.contains("N")) {
    const long long n = get_integer(j, "N");
    if (n < 4) throw ConfigError("N must be >= 4");
    p.cells = static_cast<std::size_t>(n);
  }
  if (j.contains("flux")) p.flux = get_string(j, "flux");
  if (j.contains("initial_data")) p.profile.kind = get_string(j, "initial_data");
  read_number(j, "amplitude", p.profile.amplitude);
  read_number(j, "riemann_left", p.profile.left);
  read_number(j, "riemann_right", p.profile.right);
  read_number(j, "riemann_width", p.profile.width);
  if (j.contains("relax_mass")) p.profile.relax_mass = get_bool(j, "relax_mass");
  read_number(j, "perturbation", p.profile.perturbation);
  read_number(j, "wavenumber", p.profile.wavenumber);
  if (j.contains("sweep")) p.axis = parse_sweep_axis(get_string(j, "sweep"));
  if (j.contains("sweep_values")) {
    const Json& v = j.at("sweep_values");
    if (!v.is_array()) throw ConfigError("config key 'sweep_values' must be an array");
    for (const Json& x : v) {
      if (!x.is_number()) throw ConfigError("config key 'sweep_values' must hold numbers");
      p.sweep_values.push_back(x.get<double>());
    }
  }
  if (j.contains("output_dir")) p.output_dir = get_string(j, "output_dir");
  if (j.contains("seed")) {
    const long long s = get_integer(j, "seed");
    if (s < 0) throw ConfigError("seed must be >= 0");
    p.seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("snapshot_levels")) {
    p.snapshot_levels = static_cast<int>(get_integer(j, "snapshot_levels"));
  }
  if (j.contains("threads")) p.threads = static_cast<int>(get_integer(j, "threads"));
  if (j.contains("compare_scheme")) p.compare_scheme = get_string(j, "compare_scheme");
  read_number(j, "adjoint_epsilon", p.adjoint_epsilon);
  read_number(j, "moll_width", p.moll_width);
  check_plan(p);
  return p;
}

ExperimentPlan parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t end = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n');
    throw ConfigError("config parse error at line " + std::to_string(line) + ": " + e.what());
  }
  return parse_config_json(j);
}

ExperimentPlan parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

Json plan_to_json(const ExperimentPlan& p) {
  const SolverConfig& c = p.config;
  const Tolerances& t = c.tolerances;
  Json j;
  j["t_end"] = c.t_end;
  j["N"] = p.cells;
  j["L"] = p.half_width;
  j["gamma"] = c.gamma;
  j["epsilon"] = c.epsilon;
  j["delta"] = c.delta;
  j["cfl"] = c.cfl;
  j["mode"] = std::string(to_string(c.mode));
  j["flux_scheme"] = std::string(to_string(c.flux_scheme));
  j["diffusion_scheme"] = std::string(to_string(c.diffusion_scheme));
  j["mean_correction"] = c.mean_correction;
  j["flux"] = p.flux;
  j["initial_data"] = p.profile.kind;
  j["amplitude"] = p.profile.amplitude;
  j["riemann_left"] = p.profile.left;
  j["riemann_right"] = p.profile.right;
  j["riemann_width"] = p.profile.width;
  j["relax_mass"] = p.profile.relax_mass;
  j["perturbation"] = p.profile.perturbation;
  j["wavenumber"] = p.profile.wavenumber;
  j["sweep"] = std::string(to_string(p.axis));
  j["sweep_values"] = p.sweep_values;
  j["output_dir"] = p.output_dir.string();
  j["seed"] = p.seed;
  j["snapshot_levels"] = p.snapshot_levels;
  j["threads"] = p.threads;
  j["compare_scheme"] = p.compare_scheme;
  j["adjoint_epsilon"] = p.adjoint_epsilon;
  j["moll_width"] = p.moll_width;
  j["tolerances"] = {{"mass_density", t.mass_density},
                     {"support", t.support},
                     {"energy", t.energy},
                     {"linf", t.linf},
                     {"inequality", t.inequality},
                     {"quadrature", t.quadrature},
                     {"entropy_k", t.entropy_k},
                     {"divided_difference", t.divided_difference},
                     {"stability", t.stability},
                     {"pmass_density", t.pmass_density}};
  return j;
}

FluxModel make_flux(const std::string& name) {
  if (name == "burgers") return FluxModel::burgers();
  if (name == "cosh") return FluxModel::cosh_minus_one();
  throw ConfigError("flux: expected burgers or cosh, got '" + name + "'");
}

InitialData make_initial_data(const ExperimentPlan& plan, const Grid1D& grid) {
  const ProfileSpec& s = plan.profile;
  std::ostringstream prov;
  Field u0(grid);
  if (s.kind == "zero") {
    prov << "zero";
  } else if (s.kind == "hermite-bump") {
    u0 = profiles::hermite_bump(grid, s.amplitude);
    prov << "hermite-bump(amplitude=" << s.amplitude << ")";
  } else if (s.kind == "perturbed-bump") {
    u0 = profiles::hermite_bump(grid, s.amplitude) +
         s.perturbation * profiles::zero_mean_wiggle(grid, s.wavenumber);
    prov << "perturbed-bump(amplitude=" << s.amplitude << ", perturbation=" << s.perturbation
         << ", wavenumber=" << s.wavenumber << ")";
  } else if (s.kind == "riemann") {
    const bool compensate = !s.relax_mass;
    u0 = profiles::riemann(grid, s.left, s.right, s.width, compensate);
    prov << "riemann(left=" << s.left << ", right=" << s.right << ", width=" << s.width
         << (compensate ? ", compensated" : "") << ")";
  } else {
    throw ConfigError("initial_data: unknown kind '" + s.kind + "'");
  }
  return validate_initial_data(u0, plan.config.tolerances, s.relax_mass, prov.str());
}

std::vector<ExperimentPlan> expand_sweep(const ExperimentPlan& plan) {
  if (plan.axis == SweepAxis::None) return {plan};
  std::vector<ExperimentPlan> out;
  for (double v : plan.sweep_values) {
    ExperimentPlan job = plan;
    job.axis = SweepAxis::None;
    job.sweep_values.clear();
    switch (plan.axis) {
      case SweepAxis::Grid:
        job.cells = static_cast<std::size_t>(v);
        break;
      case SweepAxis::Epsilon:
        job.config.epsilon = v;
        break;
      case SweepAxis::Delta:
        job.config.mode = Mode::DeltaElliptic;
        job.config.delta = v;
        break;
      case SweepAxis::None:
        break;
    }
    out.push_back(std::move(job));
  }
  return out;
}

}  // namespace ohsolve
