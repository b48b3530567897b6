#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ohsolve/adjoint.hpp"
#include "ohsolve/config.hpp"
#include "ohsolve/evolve.hpp"
#include "ohsolve/flux_model.hpp"
#include "ohsolve/initial_data.hpp"

namespace ohsolve {

using Json = nlohmann::ordered_json;

enum class SweepAxis { None, Grid, Epsilon, Delta };

std::string_view to_string(SweepAxis a);
SweepAxis parse_sweep_axis(std::string_view s);

/// Initial data descriptor.
///
/// kinds: "hermite-bump", "zero", "riemann", "perturbed-bump" (hermite bump
/// plus `perturbation` times the zero-mean wiggle).
struct ProfileSpec {
  std::string kind = "hermite-bump";
  double amplitude = 1.0;
  double left = -1.0;
  double right = 1.0;
  double width = 1.0;
  bool relax_mass = false;
  double perturbation = 1e-3;
  double wavenumber = 4.0;
};

struct ExperimentPlan {
  SolverConfig config;
  double half_width = 8.0;
  std::size_t cells = 1024;
  std::string flux = "burgers";
  SweepAxis axis = SweepAxis::None;
  std::vector<double> sweep_values;
  ProfileSpec profile;
  std::filesystem::path output_dir = "ohsolve-out";
  std::uint64_t seed = 0;
  int snapshot_levels = 6;
  int threads = 0;  ///< 0: hardware concurrency, capped by OH_SOLVER_THREADS
  /// Scheme of the second run in adjoint-check; empty pairs the run with itself.
  std::string compare_scheme;
  double adjoint_epsilon = -1.0;  ///< < 0: max(epsilon, dx)
  double moll_width = -1.0;       ///< < 0: 2 dx
};

/// Throws ConfigError naming the offending key, line or invariant.
ExperimentPlan parse_config_json(const Json& j);
ExperimentPlan parse_config_text(const std::string& text);
ExperimentPlan parse_config(const std::filesystem::path& path);

/// Every field with its resolved value; round-trips through parse_config_json.
Json plan_to_json(const ExperimentPlan& plan);

FluxModel make_flux(const std::string& name);

/// Builds and validates the initial data of a plan on the given grid.
InitialData make_initial_data(const ExperimentPlan& plan, const Grid1D& grid);

/// Plans for each sweep value (the plan itself when there is no sweep).
std::vector<ExperimentPlan> expand_sweep(const ExperimentPlan& plan);

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string anchor;
};

Json to_json(const CheckResult& c);

/// Checks applicable to one finished run.
std::vector<CheckResult> evaluate_checks(const RunResult& run, const InitialData& init,
                                         const ExperimentPlan& plan);

struct JobOutcome {
  ExperimentPlan plan;
  std::filesystem::path directory;
  std::vector<CheckResult> checks;
  std::optional<std::string> error;
  std::optional<Field> final_u;
  bool pass() const;
};

struct ConvergenceSummary {
  std::vector<double> values;
  std::vector<double> l1_differences;  ///< between successive levels
  std::vector<double> ratios;          ///< d_k / d_{k+1}
  std::vector<double> orders;          ///< log(d_k/d_{k+1}) / log(h_k/h_{k+1})
  bool pass = false;
  std::string criterion;
};

/// Grid sweeps restrict finer solutions onto the coarser grid before
/// differencing. Pass rules: grid ratio >= 1.5, epsilon order >= 0.5, delta
/// differences to the direct-primitive run monotone decreasing.
ConvergenceSummary summarize_convergence(const ExperimentPlan& plan,
                                         const std::vector<JobOutcome>& jobs,
                                         const std::optional<Field>& direct_reference);

Json to_json(const ConvergenceSummary& s);

struct ExperimentOutcome {
  std::vector<JobOutcome> jobs;
  std::optional<ConvergenceSummary> convergence;
  bool pass() const;
};

/// Runs every sweep job (in parallel when allowed), writes one subdirectory per
/// job plus convergence.json and a status file.
ExperimentOutcome run_experiment(const ExperimentPlan& plan);

/// Writes series.csv with a fixed header and 17 significant digits.
void write_series_csv(const std::filesystem::path& path, const DiagnosticsReport& report);
void write_snapshot_csv(const std::filesystem::path& path, const StepRecord& state);
std::string format_double(double v);

struct AdjointCheckOutcome {
  std::vector<DualityReport> reports;
  bool identical_runs = false;
  bool pass = false;
};

Json to_json(const DualityReport& r);

/// Runs the plan with its flux scheme and with `compare_scheme`, then pairs the
/// two runs against the default test-source family.
AdjointCheckOutcome run_adjoint_check(const ExperimentPlan& plan);

/// Parallel width: plan.threads (or hardware concurrency) capped by OH_SOLVER_THREADS.
unsigned effective_threads(const ExperimentPlan& plan, std::size_t jobs);

}  // namespace ohsolve
