#pragma once

#include "ohsolve/grid.hpp"

namespace ohsolve {

/// Solver state at one time level. P is the primitive the source term
/// actually uses (cell-centered, mean-corrected when enabled).
struct StepRecord {
  double t = 0.0;
  double dt = 0.0;
  Field u;
  Field P;
  double cfl_used = 0.0;
};

/// One completed SSP-RK2 step as seen by observers.
struct StepView {
  const StepRecord& prev;
  const StepRecord& next;
  const Field& u_stage;  ///< Euler predictor u*
  const Field& P_stage;
  double alpha_prev = 0.0;  ///< Lax-Friedrichs coefficient used at u^n
  double alpha_stage = 0.0;
  /// Heun result before the implicit diffusion solve; null with explicit diffusion.
  const Field* u_pre_diffusion = nullptr;
};

/// Observers receive immutable snapshots only.
class Observer {
 public:
  virtual ~Observer() = default;
  virtual void on_start(const StepRecord& /*initial*/) {}
  virtual void on_step(const StepView& /*step*/) {}
  virtual void on_snapshot(const StepRecord& /*state*/) {}
};

}  // namespace ohsolve
