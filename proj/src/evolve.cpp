#include "ohsolve/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ohsolve/errors.hpp"
#include "ohsolve/flux.hpp"
#include "ohsolve/nonlocal.hpp"
#include "ohsolve/tridiagonal.hpp"

namespace ohsolve {

double cfl_dt(const Field& u, const SolverConfig& config, const FluxModel& model, double t) {
  const double dx = u.dx();
  double rate = max_wave_speed(u, model) / dx;
  if (config.diffusion_scheme == DiffusionScheme::Explicit) {
    rate += 2.0 * config.epsilon / (dx * dx);
  }
  double dt = std::numeric_limits<double>::infinity();
  if (rate > 0.0) dt = config.cfl / rate;
  dt = std::min(dt, config.cfl / (std::abs(config.gamma) + 1.0));
  return std::min(dt, config.t_end - t);
}

Field source_primitive(const Field& u, const SolverConfig& config) {
  Field P = config.mode == Mode::DeltaElliptic ? elliptic_solve_delta(u, config.delta).P
                                               : centered_primitive(u);
  if (config.mean_correction) P = zero_mean_project(P);
  return P;
}

namespace {

void check_finite(const Field& v, double t, const char* what) {
  const std::size_t bad = v.first_non_finite();
  if (bad == v.size()) return;
  std::ostringstream msg;
  msg << what << " is not finite at t = " << t << ", cell " << bad;
  throw BlowUpError(msg.str(), t, bad);
}

bool explicit_diffusion(const SolverConfig& config) {
  return config.epsilon > 0.0 && config.diffusion_scheme == DiffusionScheme::Explicit;
}

// Advection, source and (explicit) diffusion for a known source primitive.
Field assemble_rhs(const Field& u, const Field& P, double alpha, const SolverConfig& config,
                   const FluxModel& model) {
  const std::size_t n = u.size();
  const double dx = u.dx();
  std::vector<double> F(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    F[i] = numerical_flux(u[i - 1], u[i], model, config.flux_scheme, alpha);
  }
  Field rhs(u.grid());
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = -(F[i + 1] - F[i]) / dx + config.gamma * P[i];
  }
  if (explicit_diffusion(config)) {
    const double c = config.epsilon / (dx * dx);
    for (std::size_t i = 0; i < n; ++i) {
      const double left = i > 0 ? u[i - 1] - u[i] : 0.0;
      const double right = i + 1 < n ? u[i + 1] - u[i] : 0.0;
      rhs[i] += c * (left + right);
    }
  }
  return rhs;
}

// Crank-Nicolson half of the diffusion split with no-flux outer faces.
Field crank_nicolson(const Field& u, double dt, double epsilon) {
  const std::size_t n = u.size();
  const double r = 0.5 * dt * epsilon / (u.dx() * u.dx());
  std::vector<double> sub(n, -r), diag(n, 1.0 + 2.0 * r), super(n, -r), rhs(n);
  diag[0] = diag[n - 1] = 1.0 + r;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? u[i - 1] - u[i] : 0.0;
    const double right = i + 1 < n ? u[i + 1] - u[i] : 0.0;
    rhs[i] = u[i] + r * (left + right);
  }
  return Field(u.grid(), solve_tridiagonal(sub, diag, super, rhs));
}

}  // namespace

RhsEvaluation evaluate_rhs(const Field& u, const SolverConfig& config, const FluxModel& model,
                           double t) {
  check_finite(u, t, "state");
  Field P = source_primitive(u, config);
  const double alpha =
      config.flux_scheme == FluxScheme::LaxFriedrichs ? max_wave_speed(u, model) : 0.0;
  Field rhs = assemble_rhs(u, P, alpha, config, model);
  check_finite(rhs, t, "right-hand side");
  return {std::move(rhs), std::move(P), alpha};
}

Field semidiscrete_rhs(const Field& u, const SolverConfig& config, const FluxModel& model) {
  return evaluate_rhs(u, config, model).rhs;
}

StepRecord make_initial_record(const Field& u0, const SolverConfig& config) {
  return StepRecord{0.0, 0.0, u0, source_primitive(u0, config), 0.0};
}

StepDetail step_ssprk2_detail(const StepRecord& state, double dt, const SolverConfig& config,
                              const FluxModel& model) {
  const Field& u = state.u;
  const RhsEvaluation first = evaluate_rhs(u, config, model, state.t);
  Field stage = u;
  for (std::size_t i = 0; i < u.size(); ++i) stage[i] += dt * first.rhs[i];

  RhsEvaluation second = evaluate_rhs(stage, config, model, state.t + dt);
  Field next(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    next[i] = 0.5 * (u[i] + stage[i] + dt * second.rhs[i]);
  }
  std::optional<Field> pre_diffusion;
  if (config.epsilon > 0.0 && config.diffusion_scheme == DiffusionScheme::Implicit) {
    pre_diffusion = next;
    next = crank_nicolson(next, dt, config.epsilon);
  }
  check_finite(next, state.t + dt, "state");

  const double a = max_wave_speed(u, model);
  StepDetail detail{StepRecord{state.t + dt, dt, next, source_primitive(next, config),
                               dt * a / u.dx()},
                    std::move(stage), std::move(second.P), first.alpha, second.alpha,
                    std::move(pre_diffusion)};
  return detail;
}

StepRecord step_ssprk2(const StepRecord& state, const SolverConfig& config,
                       const FluxModel& model) {
  const double dt = cfl_dt(state.u, config, model, state.t);
  return step_ssprk2_detail(state, dt, config, model).next;
}

std::vector<double> geometric_snapshot_times(double t_end, int levels) {
  std::vector<double> out;
  for (int k = 0; k <= levels; ++k) out.push_back(std::ldexp(t_end, k - levels));
  return out;
}

std::vector<double> uniform_snapshot_times(double t_end, int count) {
  std::vector<double> out;
  for (int k = 0; k <= count; ++k) out.push_back(t_end * k / count);
  return out;
}

namespace {

// Largest |u| over the outer 5% of cells on either side.
double outer_band_max(const Field& u) {
  const std::size_t band = std::max<std::size_t>(1, u.size() / 20);
  double m = 0.0;
  for (std::size_t i = 0; i < band; ++i) {
    m = std::max({m, std::abs(u[i]), std::abs(u[u.size() - 1 - i])});
  }
  return m;
}

}  // namespace

RunResult run_to_time(const InitialData& init, const SolverConfig& config,
                      const FluxModel& model, std::span<Observer* const> observers,
                      const RunOptions& options) {
  validate(config);
  std::vector<double> snaps = options.snapshot_times.empty()
                                  ? geometric_snapshot_times(config.t_end, 6)
                                  : options.snapshot_times;
  std::sort(snaps.begin(), snaps.end());

  CollectorOptions copts;
  copts.entropies = options.entropies;
  if (copts.entropies.empty()) copts.entropies.push_back(quadratic_entropy(model));
  copts.scheme = config.flux_scheme;
  copts.gamma = config.gamma;
  copts.epsilon = config.epsilon;
  copts.diffusion = config.diffusion_scheme;
  copts.jump_threshold = options.jump_threshold;
  copts.scan_interval =
      options.jump_scan_interval < 0.0 ? config.t_end / 64.0 : options.jump_scan_interval;
  DiagnosticsCollector collector(model, std::move(copts));

  std::vector<Observer*> all{&collector};
  all.insert(all.end(), observers.begin(), observers.end());

  StepRecord state = make_initial_record(init.u0, config);
  RunResult result{state, {}, {}, std::nullopt, 0};
  for (Observer* o : all) o->on_start(state);

  const double t_tol = 1e-12 * config.t_end;
  std::size_t next_snap = 0;
  auto emit_snapshots = [&](const StepRecord& s) {
    while (next_snap < snaps.size() && snaps[next_snap] <= s.t + t_tol) {
      for (Observer* o : all) o->on_snapshot(s);
      if (options.keep_snapshots) result.snapshots.push_back(s);
      ++next_snap;
    }
  };
  emit_snapshots(state);

  const double contamination = 10.0 * config.tolerances.support;
  double dt0 = -1.0;
  try {
    while (state.t < config.t_end - t_tol) {
      double dt = cfl_dt(state.u, config, model, state.t);
      if (next_snap < snaps.size()) dt = std::min(dt, snaps[next_snap] - state.t);
      if (dt <= 0.0) throw InternalError("run_to_time: nonpositive time step");
      if (dt0 < 0.0) dt0 = dt;

      StepDetail detail = step_ssprk2_detail(state, dt, config, model);
      if (next_snap < snaps.size() && std::abs(detail.next.t - snaps[next_snap]) <= t_tol) {
        detail.next.t = snaps[next_snap];
      }
      const StepView view{state, detail.next, detail.u_stage, detail.P_stage,
                          detail.alpha_prev, detail.alpha_stage,
                          detail.u_pre_diffusion ? &*detail.u_pre_diffusion : nullptr};
      for (Observer* o : all) o->on_step(view);
      state = std::move(detail.next);
      ++result.steps;
      emit_snapshots(state);

      if (options.abort_on_contamination && outer_band_max(state.u) > contamination) {
        std::ostringstream msg;
        msg << "boundary contamination at t = " << state.t << ": |u| = "
            << outer_band_max(state.u) << " in the outer 5% of cells exceeds " << contamination;
        result.abort_reason = msg.str();
        break;
      }
    }
  } catch (const BlowUpError& e) {
    result.abort_reason = e.what();
  }

  result.report = collector.take_report();
  const double fit_start = options.oleinik_fit_start >= 0.0 ? options.oleinik_fit_start
                                                            : 5.0 * std::max(dt0, 0.0);
  std::vector<double> ts, sups;
  for (std::size_t k = 0; k < result.report.rows(); ++k) {
    const double t = result.report.t[k];
    if (t > 0.0 && t >= fit_start) {
      ts.push_back(t);
      sups.push_back(result.report.oleinik_sup[k]);
    }
  }
  if (!ts.empty()) result.report.oleinik_C = fit_oleinik_constant(ts, sups);
  result.report.warnings.insert(result.report.warnings.begin(), init.warnings.begin(),
                                init.warnings.end());
  if (result.abort_reason) result.report.warnings.push_back(*result.abort_reason);
  result.final_state = std::move(state);
  return result;
}

StabilityReport stability_compare(const InitialData& a, const InitialData& b,
                                  const SolverConfig& config, const FluxModel& model) {
  require_same_grid(a.u0, b.u0, "stability_compare");
  const double d0 = l2_distance(a.u0, b.u0);
  if (d0 == 0.0) {
    throw DegenerateComparisonError("stability_compare: identical initial states (d(0) = 0)");
  }
  RunOptions options;
  options.snapshot_times = uniform_snapshot_times(config.t_end, 50);
  options.keep_snapshots = true;
  const RunResult ra = run_to_time(a, config, model, {}, options);
  const RunResult rb = run_to_time(b, config, model, {}, options);
  if (!ra.completed() || !rb.completed()) {
    throw BlowUpError("stability_compare: run aborted: " +
                          ra.abort_reason.value_or(rb.abort_reason.value_or("")),
                      0.0, 0);
  }

  StabilityReport report;
  const std::size_t n = std::min(ra.snapshots.size(), rb.snapshots.size());
  report.fitted_C = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = ra.snapshots[k].t;
    const double d = l2_distance(ra.snapshots[k].u, rb.snapshots[k].u);
    report.t.push_back(t);
    report.distance.push_back(d);
    if (t > 0.0) report.fitted_C = std::max(report.fitted_C, std::log(d / d0) / t);
  }
  report.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < report.t.size(); ++k) {
    const double bound = d0 * std::exp(report.fitted_C * report.t[k]);
    report.max_excess = std::max(report.max_excess, report.distance[k] / bound - 1.0);
  }
  report.pass = std::isfinite(report.fitted_C) &&
                report.max_excess <= config.tolerances.stability;
  return report;
}

}  // namespace ohsolve
