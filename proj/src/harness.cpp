#include "ohsolve/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "ohsolve/errors.hpp"
#include "ohsolve/flux.hpp"

namespace ohsolve {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "ohsolve 1.0.0";
constexpr double kUnbounded = std::numeric_limits<double>::infinity();

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<EntropyPair> monitored_entropies(const FluxModel& model, double dx) {
  return {quadratic_entropy(model), smoothed_kruzkov_entropy(model, 0.5, 2.0 * dx),
          smoothed_kruzkov_entropy(model, -0.5, 2.0 * dx)};
}

std::string label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const CheckResult& c) {
  Json j;
  j["name"] = c.name;
  j["measured"] = c.measured;
  j["tolerance"] = std::isfinite(c.tolerance) ? Json(c.tolerance) : Json("finite");
  j["pass"] = c.pass;
  j["anchor"] = c.anchor;
  return j;
}

bool JobOutcome::pass() const {
  return !error && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

bool ExperimentOutcome::pass() const {
  const bool jobs_ok =
      std::all_of(jobs.begin(), jobs.end(), [](const JobOutcome& j) { return j.pass(); });
  return jobs_ok && (!convergence || convergence->pass);
}

std::vector<CheckResult> evaluate_checks(const RunResult& run, const InitialData& init,
                                         const ExperimentPlan& plan) {
  const SolverConfig& c = plan.config;
  const Tolerances& tol = c.tolerances;
  const DiagnosticsReport& r = run.report;
  const double L = plan.half_width;
  const double dx = 2.0 * L / static_cast<double>(plan.cells);
  std::vector<CheckResult> out;

  out.push_back({"run_completed", run.completed() ? 1.0 : 0.0, 1.0, run.completed(),
                 "run reaches t_end without blow-up or boundary contamination"});

  if (!init.relaxed) {
    const double m = max_abs(r.mass);
    out.push_back({"mass_conservation", m, tol.tol_mass(L), m <= tol.tol_mass(L),
                   "zero mass is preserved"});
  } else {
    double drift = 0.0;
    for (double m : r.mass) drift = std::max(drift, std::abs(m - r.mass.front()));
    out.push_back({"mass_drift", drift, tol.tol_mass(L), drift <= tol.tol_mass(L),
                   "mass is preserved (relaxed initial data)"});
  }
  if (c.mean_correction) {
    const double pm = max_abs(r.p_mass);
    out.push_back({"p_mass_drift", pm, tol.tol_pmass(L), pm <= tol.tol_pmass(L),
                   "primitive keeps zero mean"});
  }

  if (c.mode == Mode::DirectPrimitive && !init.relaxed) {
    const LedgerCheck lc = energy_ledger_check(r, c);
    const double measured = std::max(lc.max_relative_excess, lc.max_step_increase);
    out.push_back({"energy_ledger_nonincreasing", measured, tol.energy, lc.pass,
                   "energy plus viscous dissipation does not grow"});
  }

  double maxP = 0.0, excess = -kUnbounded;
  for (std::size_t k = 0; k < r.rows(); ++k) {
    maxP = std::max(maxP, r.linf_P[k]);
    const double bound = r.linf_u.front() + std::abs(c.gamma) * r.t[k] * maxP;
    excess = std::max(excess, r.linf_u[k] - bound);
  }
  out.push_back({"linf_growth", excess, tol.linf, excess <= tol.linf,
                 "sup norm grows at most by |gamma| t max|P|"});

  const double maxP_all = max_abs(r.linf_P);
  const double maxL2P = max_abs(r.l2_P);
  out.push_back({"primitive_bounded", std::max(maxP_all, maxL2P), kUnbounded,
                 std::isfinite(maxP_all) && std::isfinite(maxL2P),
                 "primitive stays bounded in sup and L2 norms"});

  out.push_back({"oleinik_constant_finite", r.oleinik_C, kUnbounded, std::isfinite(r.oleinik_C),
                 "one-sided Lipschitz bound C (1/t + 1)"});

  for (const auto& [name, series] : r.entropy_residual_by_pair) {
    const double sigma = name == "quadratic" ? 0.0 : 2.0 * dx;
    const double m = max_abs(series);
    const double t_ent = tol.tol_entropy(dx, sigma);
    out.push_back({"entropy_residual[" + name + "]", m, t_ent, m <= t_ent,
                   "cell entropy inequality"});
  }

  const double max_shift = max_abs(r.linf_u) * 2.0 * (c.t_end / 64.0) + 3.0 * dx;
  const auto persistent = persistent_jumps(r.jump_events, r.jump_scan_times, 3, max_shift);
  const auto bad = std::count_if(persistent.begin(), persistent.end(), [](const JumpEvent& e) {
    return e.classification == JumpEvent::Kind::InadmissibleUp;
  });
  if (c.flux_scheme != FluxScheme::Roe) {
    out.push_back({"shock_admissibility", static_cast<double>(bad), 0.0, bad == 0,
                   "persistent jumps go down"});
  }
  return out;
}

void write_series_csv(const fs::path& path, const DiagnosticsReport& r) {
  std::ostringstream out;
  out << "t,mass,p_mass,l2_u,l2_P,linf_u,linf_P,energy_ledger,oleinik_sup,entropy_residual_max\n";
  for (std::size_t k = 0; k < r.rows(); ++k) {
    const double row[] = {r.t[k],      r.mass[k],   r.p_mass[k],        r.l2_u[k],
                          r.l2_P[k],   r.linf_u[k], r.linf_P[k],        r.energy_ledger[k],
                          r.oleinik_sup[k], r.entropy_residual_max[k]};
    for (std::size_t q = 0; q < std::size(row); ++q) {
      out << (q ? "," : "") << format_double(row[q]);
    }
    out << '\n';
  }
  write_text(path, out.str());
}

void write_snapshot_csv(const fs::path& path, const StepRecord& state) {
  std::ostringstream out;
  out << "x,u,P\n";
  for (std::size_t i = 0; i < state.u.size(); ++i) {
    out << format_double(state.u.grid().x(i)) << ',' << format_double(state.u[i]) << ','
        << format_double(state.P[i]) << '\n';
  }
  write_text(path, out.str());
}

namespace {

Json initial_data_json(const InitialData& init) {
  Json j;
  j["provenance"] = init.provenance;
  j["relaxed"] = init.relaxed;
  j["mass"] = init.mass;
  j["p_mass"] = init.p_mass;
  j["l2_u0"] = init.l2_u0;
  j["linf_u0"] = init.linf_u0;
  j["l2_P0"] = init.l2_P0;
  j["warnings"] = init.warnings;
  return j;
}

Json event_json(const JumpEvent& e) {
  return {{"t", e.t},
          {"x", e.x},
          {"u_left", e.u_left},
          {"u_right", e.u_right},
          {"classification", std::string(to_string(e.classification))}};
}

JobOutcome run_job(const ExperimentPlan& plan, const fs::path& dir) {
  JobOutcome job{plan, dir, {}, std::nullopt, std::nullopt};
  Json report;
  report["config"] = plan_to_json(plan);
  report["versions"] = {{"solver", kVersion}, {"compiler", __VERSION__}};
  try {
    fs::create_directories(dir);
    const FluxModel model = make_flux(plan.flux);
    const Grid1D grid(plan.half_width, plan.cells);
    const InitialData init = make_initial_data(plan, grid);

    RunOptions options;
    options.snapshot_times = geometric_snapshot_times(plan.config.t_end, plan.snapshot_levels);
    options.snapshot_times.insert(options.snapshot_times.begin(), 0.0);
    options.keep_snapshots = true;
    options.entropies = monitored_entropies(model, grid.dx());
    const RunResult run = run_to_time(init, plan.config, model, {}, options);

    write_series_csv(dir / "series.csv", run.report);
    for (const StepRecord& s : run.snapshots) {
      char name[64];
      std::snprintf(name, sizeof name, "snapshot_%.9g.csv", s.t);
      write_snapshot_csv(dir / name, s);
    }
    job.checks = evaluate_checks(run, init, plan);
    job.final_u = run.final_state.u;

    const DiagnosticsReport& r = run.report;
    report["status"] = run.completed() ? "completed" : "aborted";
    if (run.abort_reason) report["abort_reason"] = *run.abort_reason;
    report["steps"] = run.steps;
    report["initial_data"] = initial_data_json(init);
    report["fitted"] = {{"oleinik_C", r.oleinik_C}, {"stability_C", nullptr}};
    report["summary"] = {{"final_t", run.final_state.t},
                         {"max_abs_mass", max_abs(r.mass)},
                         {"max_abs_p_mass", max_abs(r.p_mass)},
                         {"max_linf_u", max_abs(r.linf_u)},
                         {"max_linf_P", max_abs(r.linf_P)},
                         {"max_l2_P", max_abs(r.l2_P)},
                         {"final_energy_ledger", r.energy_ledger.back()},
                         {"max_entropy_residual", max_abs(r.entropy_residual_max)}};
    Json events = Json::array();
    std::size_t inadmissible = 0;
    for (const JumpEvent& e : r.jump_events) {
      if (e.classification == JumpEvent::Kind::InadmissibleUp) ++inadmissible;
    }
    const double dx = grid.dx();
    const double max_shift = max_abs(r.linf_u) * 2.0 * (plan.config.t_end / 64.0) + 3.0 * dx;
    for (const JumpEvent& e : persistent_jumps(r.jump_events, r.jump_scan_times, 3, max_shift)) {
      events.push_back(event_json(e));
    }
    report["jump_events"] = {{"scans", r.jump_scan_times.size()},
                             {"detected", r.jump_events.size()},
                             {"inadmissible_detected", inadmissible},
                             {"persistent", events}};
    report["warnings"] = r.warnings;
  } catch (const Error& e) {
    job.error = e.what();
    report["status"] = "failed";
    report["error"] = e.what();
  }
  Json checks = Json::array();
  for (const auto& c : job.checks) checks.push_back(to_json(c));
  report["checks"] = checks;
  report["pass"] = job.pass();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!ec) write_text(dir / "report.json", report.dump(2) + "\n");
  return job;
}

std::string job_directory_name(const ExperimentPlan& plan, const ExperimentPlan& job) {
  switch (plan.axis) {
    case SweepAxis::Grid:
      return "grid_N" + std::to_string(job.cells);
    case SweepAxis::Epsilon:
      return "epsilon_" + label(job.config.epsilon);
    case SweepAxis::Delta:
      return "delta_" + label(job.config.delta);
    case SweepAxis::None:
      break;
  }
  return "run";
}

template <class Fn>
void parallel_for(std::size_t count, unsigned width, Fn&& fn) {
  if (width <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < width; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

unsigned effective_threads(const ExperimentPlan& plan, std::size_t jobs) {
  unsigned width = plan.threads > 0 ? static_cast<unsigned>(plan.threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OH_SOLVER_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) width = std::min(width, static_cast<unsigned>(cap));
  }
  return std::max(1u, std::min<unsigned>(width, static_cast<unsigned>(std::max<std::size_t>(1, jobs))));
}

ConvergenceSummary summarize_convergence(const ExperimentPlan& plan,
                                         const std::vector<JobOutcome>& jobs,
                                         const std::optional<Field>& direct_reference) {
  ConvergenceSummary s;
  std::vector<std::size_t> order(jobs.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  auto value = [&](std::size_t k) {
    switch (plan.axis) {
      case SweepAxis::Grid:
        return static_cast<double>(jobs[k].plan.cells);
      case SweepAxis::Epsilon:
        return jobs[k].plan.config.epsilon;
      case SweepAxis::Delta:
        return jobs[k].plan.config.delta;
      case SweepAxis::None:
        break;
    }
    return 0.0;
  };
  // Coarse to fine: increasing N, decreasing epsilon or delta.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return plan.axis == SweepAxis::Grid ? value(a) < value(b) : value(a) > value(b);
  });
  for (std::size_t k : order) s.values.push_back(value(k));
  for (std::size_t k : order) {
    if (!jobs[k].final_u) {
      s.criterion = "a sweep job failed";
      return s;
    }
  }

  auto on_grid = [](Field fine, const Grid1D& coarse) {
    while (fine.size() > coarse.size()) {
      if (fine.size() % 2 != 0) break;
      fine = restrict_to_coarse(fine);
    }
    if (!(fine.grid() == coarse)) {
      throw ConfigError("grid sweep values must differ by powers of two");
    }
    return fine;
  };

  if (plan.axis == SweepAxis::Delta) {
    if (!direct_reference) {
      s.criterion = "missing direct-primitive reference run";
      return s;
    }
    for (std::size_t k : order) s.l1_differences.push_back(l1_distance(*jobs[k].final_u, *direct_reference));
  } else {
    for (std::size_t q = 0; q + 1 < order.size(); ++q) {
      const Field& a = *jobs[order[q]].final_u;
      const Field& b = *jobs[order[q + 1]].final_u;
      s.l1_differences.push_back(plan.axis == SweepAxis::Grid ? l1_distance(a, on_grid(b, a.grid()))
                                                              : l1_distance(a, b));
    }
  }

  const auto& d = s.l1_differences;
  for (std::size_t q = 0; q + 1 < d.size(); ++q) {
    const double ratio = d[q] / d[q + 1];
    s.ratios.push_back(ratio);
    const double h0 = s.values[q], h1 = s.values[q + 1];
    const double scale = plan.axis == SweepAxis::Grid ? std::log(h1 / h0) : std::log(h0 / h1);
    s.orders.push_back(std::log(ratio) / scale);
  }

  switch (plan.axis) {
    case SweepAxis::Grid:
      s.criterion = "successive-difference ratio >= 1.5";
      s.pass = std::all_of(s.ratios.begin(), s.ratios.end(), [](double r) { return r >= 1.5; });
      break;
    case SweepAxis::Epsilon:
      s.criterion = "differences decreasing with fitted order in epsilon >= 0.5";
      s.pass = std::all_of(s.orders.begin(), s.orders.end(), [](double o) { return o >= 0.5; });
      break;
    case SweepAxis::Delta:
      s.criterion = "L1 gap to the direct-primitive run decreasing as delta decreases";
      s.pass = std::all_of(s.ratios.begin(), s.ratios.end(), [](double r) { return r > 1.0; });
      break;
    case SweepAxis::None:
      break;
  }
  if (s.ratios.empty()) s.criterion += " (not testable with this many levels)";
  return s;
}

Json to_json(const ConvergenceSummary& s) {
  Json j;
  j["values"] = s.values;
  j["l1_differences"] = s.l1_differences;
  j["ratios"] = s.ratios;
  j["orders"] = s.orders;
  j["criterion"] = s.criterion;
  j["pass"] = s.pass;
  return j;
}

ExperimentOutcome run_experiment(const ExperimentPlan& plan) {
  fs::create_directories(plan.output_dir);
  std::vector<ExperimentPlan> plans = expand_sweep(plan);
  std::vector<std::string> names;
  for (const auto& p : plans) names.push_back(job_directory_name(plan, p));
  if (plan.axis == SweepAxis::Delta) {
    ExperimentPlan direct = plans.front();
    direct.config.mode = Mode::DirectPrimitive;
    direct.config.delta = 0.0;
    plans.push_back(direct);
    names.push_back("direct");
  }

  std::vector<std::optional<JobOutcome>> slots(plans.size());
  parallel_for(plans.size(), effective_threads(plan, plans.size()), [&](std::size_t k) {
    slots[k] = run_job(plans[k], plan.output_dir / names[k]);
  });

  ExperimentOutcome outcome;
  std::optional<Field> direct;
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (plan.axis == SweepAxis::Delta && k + 1 == slots.size()) {
      direct = slots[k]->final_u;
      if (slots[k]->error) outcome.jobs.push_back(std::move(*slots[k]));
      continue;
    }
    outcome.jobs.push_back(std::move(*slots[k]));
  }

  if (plan.axis != SweepAxis::None) {
    std::vector<JobOutcome> sweep_jobs(outcome.jobs.begin(),
                                       outcome.jobs.begin() + static_cast<std::ptrdiff_t>(plan.sweep_values.size()));
    outcome.convergence = summarize_convergence(plan, sweep_jobs, direct);
    Json j;
    j["sweep"] = std::string(to_string(plan.axis));
    j["reference"] = plan.axis == SweepAxis::Delta ? "direct-primitive run" : "successive levels";
    j["convergence"] = to_json(*outcome.convergence);
    write_text(plan.output_dir / "convergence.json", j.dump(2) + "\n");
  }

  std::ostringstream status;
  const bool any_error = std::any_of(outcome.jobs.begin(), outcome.jobs.end(),
                                     [](const JobOutcome& j) { return j.error.has_value(); });
  status << (any_error ? "partial" : "complete") << '\n';
  for (std::size_t k = 0; k < slots.size(); ++k) {
    const JobOutcome& j = *slots[k];
    status << names[k] << ' '
           << (j.error ? "failed: " + *j.error : (j.pass() ? "pass" : "check-failure")) << '\n';
  }
  write_text(plan.output_dir / "status", status.str());
  return outcome;
}

Json to_json(const DualityReport& r) {
  Json j;
  j["direct"] = r.direct;
  j["exact_pairing"] = r.exact_pairing;
  j["viscosity"] = r.viscosity;
  j["mollification"] = r.mollification;
  j["source_approximation"] = r.source_approximation;
  j["ledger_sum"] = r.ledger_sum;
  j["closure_defect"] = r.closure_defect;
  j["support_times_eps"] = r.support_times_eps;
  j["pass"] = r.pass;
  return j;
}

AdjointCheckOutcome run_adjoint_check(const ExperimentPlan& plan) {
  const FluxModel model = make_flux(plan.flux);
  const Grid1D grid(plan.half_width, plan.cells);
  const InitialData init = make_initial_data(plan, grid);
  const SolverConfig& c = plan.config;

  RunOptions options;
  options.snapshot_times = uniform_snapshot_times(c.t_end, 64);
  options.keep_snapshots = true;
  const RunResult ru = run_to_time(init, c, model, {}, options);
  if (!ru.completed()) throw BlowUpError("adjoint-check: run aborted: " + *ru.abort_reason, 0.0, 0);

  AdjointCheckOutcome out;
  SpaceTimeField U = SpaceTimeField::from_snapshots(ru.snapshots);
  std::optional<SpaceTimeField> V;
  out.identical_runs = plan.compare_scheme.empty() ||
                       parse_flux_scheme(plan.compare_scheme) == c.flux_scheme;
  if (out.identical_runs) {
    V = U;
  } else {
    SolverConfig other = c;
    other.flux_scheme = parse_flux_scheme(plan.compare_scheme);
    const RunResult rv = run_to_time(init, other, model, {}, options);
    if (!rv.completed()) {
      throw BlowUpError("adjoint-check: comparison run aborted: " + *rv.abort_reason, 0.0, 0);
    }
    V = SpaceTimeField::from_snapshots(rv.snapshots);
  }

  const SpaceTimeField b = divided_difference_b(U, *V, model, c.tolerances.divided_difference);
  const double eps_adj = plan.adjoint_epsilon >= 0.0 ? plan.adjoint_epsilon
                                                     : std::max(c.epsilon, grid.dx());
  const double moll = plan.moll_width >= 0.0 ? plan.moll_width : 2.0 * grid.dx();
  out.pass = true;
  Json reports = Json::array();
  for (const TensorBump& psi : default_psi_family(c.t_end)) {
    AdjointProblem problem{b,           psi,   psi.t_lo(), psi.t_hi(), psi.x_center - psi.x_radius,
                           psi.x_center + psi.x_radius, c.t_end, eps_adj, moll, c.gamma, c.cfl};
    const AdjointSolution adj = adjoint_solve_backward(problem);
    DualityReport r = duality_residual(U, *V, psi, adj, b, c.gamma, eps_adj,
                                       c.tolerances.quadrature);
    if (out.identical_runs) r.pass = r.pass && r.direct == 0.0;
    out.pass = out.pass && r.pass;
    Json j = to_json(r);
    j["psi"] = {{"t_center", psi.t_center},
                {"t_radius", psi.t_radius},
                {"x_center", psi.x_center},
                {"x_radius", psi.x_radius}};
    reports.push_back(j);
    out.reports.push_back(r);
  }

  fs::create_directories(plan.output_dir);
  Json j;
  j["config"] = plan_to_json(plan);
  j["versions"] = {{"solver", kVersion}, {"compiler", __VERSION__}};
  j["identical_runs"] = out.identical_runs;
  j["epsilon_adj"] = eps_adj;
  j["moll_width"] = moll;
  j["pairings"] = reports;
  j["pass"] = out.pass;
  write_text(plan.output_dir / "adjoint.json", j.dump(2) + "\n");
  return out;
}

}  // namespace ohsolve
