#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ohsolve/config.hpp"
#include "ohsolve/diagnostics.hpp"
#include "ohsolve/flux_model.hpp"
#include "ohsolve/initial_data.hpp"
#include "ohsolve/step.hpp"

namespace ohsolve {

/// Stable time step.
///
/// dt = min(cfl / (a/dx + 2 eps/dx^2), cfl / (|gamma| + 1), t_end - t), where a
/// is the wave speed bound and the diffusion term is dropped for implicit
/// diffusion.
double cfl_dt(const Field& u, const SolverConfig& config, const FluxModel& model, double t = 0.0);

/// The primitive fed to the source term: the cell-centered cumulative primitive
/// (direct mode) or the delta-elliptic solve, minus its mean when enabled.
Field source_primitive(const Field& u, const SolverConfig& config);

struct RhsEvaluation {
  Field rhs;
  Field P;
  double alpha = 0.0;
};

/// Right-hand side plus the source primitive and LF coefficient it used.
/// Throws BlowUpError on a non-finite entry.
RhsEvaluation evaluate_rhs(const Field& u, const SolverConfig& config, const FluxModel& model,
                           double t = 0.0);

/// -(F_{i+1/2} - F_{i-1/2})/dx + gamma P_i [+ eps D2 u].
///
/// The outer faces carry the far-field flux f(0) = 0 and no diffusive flux,
/// so sum_i rhs_i dx is exactly gamma times the source mass.
Field semidiscrete_rhs(const Field& u, const SolverConfig& config, const FluxModel& model);

struct StepDetail {
  StepRecord next;
  Field u_stage;
  Field P_stage;
  double alpha_prev = 0.0;
  double alpha_stage = 0.0;
  std::optional<Field> u_pre_diffusion;  ///< set in implicit diffusion mode
};

/// Heun step; implicit diffusion mode follows it with a Crank-Nicolson solve.
StepDetail step_ssprk2_detail(const StepRecord& state, double dt, const SolverConfig& config,
                              const FluxModel& model);
StepRecord step_ssprk2(const StepRecord& state, const SolverConfig& config,
                       const FluxModel& model);

/// State record at t = 0 (computes the source primitive).
StepRecord make_initial_record(const Field& u0, const SolverConfig& config);

/// t_k = t_end 2^(k - levels), k = 0..levels.
std::vector<double> geometric_snapshot_times(double t_end, int levels);
/// t_k = k t_end / count, k = 0..count.
std::vector<double> uniform_snapshot_times(double t_end, int count);

struct RunOptions {
  std::vector<double> snapshot_times;  ///< empty: geometric schedule with 6 levels
  bool keep_snapshots = false;
  std::vector<EntropyPair> entropies;  ///< empty: quadratic entropy only
  double jump_threshold = 0.0;
  bool abort_on_contamination = true;
  double oleinik_fit_start = -1.0;     ///< < 0: 5 dt_0
  double jump_scan_interval = -1.0;    ///< < 0: t_end / 64
};

struct RunResult {
  StepRecord final_state;
  DiagnosticsReport report;
  std::vector<StepRecord> snapshots;
  std::optional<std::string> abort_reason;
  std::size_t steps = 0;

  bool completed() const { return !abort_reason.has_value(); }
};

/// Advances from t = 0 to t_end. A blow-up or boundary contamination ends the
/// run early with abort_reason set and the partial report kept.
RunResult run_to_time(const InitialData& init, const SolverConfig& config,
                      const FluxModel& model, std::span<Observer* const> observers = {},
                      const RunOptions& options = {});

struct StabilityReport {
  std::vector<double> t;
  std::vector<double> distance;  ///< |u - v|_{L2}
  double fitted_C = 0.0;         ///< max_t log(d(t)/d(0)) / t
  double max_excess = 0.0;       ///< max_t d(t)/(d(0) e^{C t}) - 1
  bool pass = false;
};

/// Runs both initial states with the same config and fits an exponential
/// growth rate to their L2 distance. Throws DegenerateComparisonError when
/// d(0) = 0.
StabilityReport stability_compare(const InitialData& a, const InitialData& b,
                                  const SolverConfig& config, const FluxModel& model);

}  // namespace ohsolve
