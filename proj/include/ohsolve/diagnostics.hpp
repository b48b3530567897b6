#pragma once

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ohsolve/config.hpp"
#include "ohsolve/flux.hpp"
#include "ohsolve/step.hpp"

namespace ohsolve {

struct JumpEvent {
  enum class Kind { AdmissibleDown, InadmissibleUp };

  double t = 0.0;
  double x = 0.0;
  double u_left = 0.0;
  double u_right = 0.0;
  Kind classification = Kind::AdmissibleDown;
};

std::string_view to_string(JumpEvent::Kind k);

/// Per-step time series of every monitored functional.
struct DiagnosticsReport {
  std::vector<double> t;
  std::vector<double> mass;
  std::vector<double> p_mass;
  std::vector<double> l2_u;
  std::vector<double> l2_P;
  std::vector<double> linf_u;
  std::vector<double> linf_P;
  std::vector<double> energy_ledger;
  std::vector<double> oleinik_sup;
  /// Positive part of the cell entropy residual for the first monitored pair.
  std::vector<double> entropy_residual_max;
  /// Same quantity for every monitored pair, keyed by pair name.
  std::map<std::string, std::vector<double>> entropy_residual_by_pair;
  std::vector<double> jump_scan_times;
  std::vector<JumpEvent> jump_events;
  double oleinik_C = std::numeric_limits<double>::quiet_NaN();
  double stability_C = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> warnings;

  std::size_t rows() const { return t.size(); }
};

/// sup_i (u_{i+1} - u_i) / dx.
double oleinik_quotient(const Field& u);

/// max_k sup_k / (1/t_k + 1). Throws Error on an empty series or t_k <= 0.
double fit_oleinik_constant(std::span<const double> times, std::span<const double> sups);

/// Cell entropy residual with both fluxes and the source frozen at u_prev.
///
/// R_i = (eta(u_next) - eta(u_prev))/dt + (Q_{i+1/2} - Q_{i-1/2})/dx
///       - gamma eta'(u_prev) P_i.
Field entropy_residual(const Field& u_prev, const Field& u_next, const Field& P, double dt,
                       const EntropyPair& pair, const FluxModel& model, FluxScheme scheme,
                       double gamma, double alpha = 0.0);

/// Residual for an SSP-RK2 step: entropy fluxes and source are averaged over
/// the two stages, matching the convex combination the step performs.
///
/// With epsilon > 0 the viscous entropy flux epsilon D2[eta(u)] (no-flux outer
/// faces) is subtracted as well. Convexity gives eta'(u_i) D2u_i <= D2[eta(u)]_i,
/// so the scheme's own diffusion never counts as entropy production. Explicit
/// diffusion averages it over the stages like the other terms. Implicit
/// diffusion splits the step: the Heun part is measured up to the state before
/// the Crank-Nicolson solve, and the solve itself against D2[eta(m)] at its
/// midpoint m.
Field entropy_residual_ssprk2(const StepView& step, const EntropyPair& pair,
                              const FluxModel& model, FluxScheme scheme, double gamma,
                              double epsilon = 0.0,
                              DiffusionScheme diffusion = DiffusionScheme::Explicit);

double positive_part_max(const Field& r);

/// 0.25 (max u - min u), floored at 20 dx * slope.
double default_jump_threshold(const Field& u, double oleinik_slope);

/// Steep monotone fronts carrying at least `threshold` across three cells.
/// Each monotone run yields at most one event.
std::vector<JumpEvent> detect_jumps(const Field& u, double jump_threshold, double t = 0.0);

/// Events that reappear in at least `min_scans` consecutive scans within
/// `max_shift` of the previous position. The last event of each chain is
/// returned.
std::vector<JumpEvent> persistent_jumps(std::span<const JumpEvent> events,
                                        std::span<const double> scan_times, int min_scans,
                                        double max_shift);

struct LedgerCheck {
  bool pass = true;
  double final_relative_change = 0.0;  ///< ledger(T)/ledger(0) - 1
  double max_relative_excess = 0.0;    ///< max_t ledger(t)/ledger(0) - 1
  double max_step_increase = 0.0;      ///< max relative increase between steps
  double dissipation_gap = 0.0;        ///< ledger(0) - ledger(T)
};

/// ledger(t) <= ledger(0)(1 + tol_energy) for every t, and each step
/// increases the ledger by at most tol_energy relative to ledger(0).
LedgerCheck energy_ledger_check(const DiagnosticsReport& report, const SolverConfig& config);

struct CollectorOptions {
  std::vector<EntropyPair> entropies;
  FluxScheme scheme = FluxScheme::Godunov;
  double gamma = 0.0;
  double epsilon = 0.0;
  DiffusionScheme diffusion = DiffusionScheme::Explicit;
  double jump_threshold = 0.0;  ///< 0 selects default_jump_threshold per scan
  double scan_interval = 0.0;   ///< jump scans every this much time; 0 scans at snapshots only
};

/// Observer that assembles a DiagnosticsReport over one run.
class DiagnosticsCollector : public Observer {
 public:
  DiagnosticsCollector(const FluxModel& model, CollectorOptions options);

  void on_start(const StepRecord& initial) override;
  void on_step(const StepView& step) override;
  void on_snapshot(const StepRecord& state) override;

  const DiagnosticsReport& report() const { return report_; }
  DiagnosticsReport take_report() { return std::move(report_); }

 private:
  void record_state(const StepRecord& state);

  const FluxModel& model_;
  CollectorOptions options_;
  DiagnosticsReport report_;
  double dissipated_ = 0.0;
  double next_scan_ = 0.0;
};

}  // namespace ohsolve
