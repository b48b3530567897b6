#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ohsolve/flux_model.hpp"
#include "ohsolve/grid.hpp"
#include "ohsolve/step.hpp"

namespace ohsolve {

/// Cell values at a list of increasing times, stored row-major.
class SpaceTimeField {
 public:
  SpaceTimeField(const Grid1D& grid, std::vector<double> times, double fill = 0.0);

  static SpaceTimeField from_snapshots(std::span<const StepRecord> snapshots);

  const Grid1D& grid() const { return grid_; }
  std::span<const double> times() const { return times_; }
  std::size_t time_count() const { return times_.size(); }
  std::size_t cell_count() const { return grid_.size(); }

  std::span<double> row(std::size_t k);
  std::span<const double> row(std::size_t k) const;
  double& at(std::size_t k, std::size_t i) { return data_[k * grid_.size() + i]; }
  double at(std::size_t k, std::size_t i) const { return data_[k * grid_.size() + i]; }

  Field field(std::size_t k) const;
  void set_row(std::size_t k, const Field& f);
  /// Linear interpolation in time, constant extrapolation outside the range.
  Field interpolate(double t) const;

  double linf() const;
  bool same_layout(const SpaceTimeField& other) const;

 private:
  Grid1D grid_;
  std::vector<double> times_;
  std::vector<double> data_;
};

using SpaceTimeSource = std::function<double(double t, double x)>;

/// amplitude * B((t - t_center)/t_radius) * B((x - x_center)/x_radius) with the
/// C^2 bump B(r) = (1 - r^2)^3 on |r| < 1.
struct TensorBump {
  double t_center = 0.5;
  double t_radius = 0.25;
  double x_center = 0.0;
  double x_radius = 1.0;
  double amplitude = 1.0;

  double operator()(double t, double x) const;
  double t_lo() const { return t_center - t_radius; }
  double t_hi() const { return t_center + t_radius; }
};

/// Normalized C^2 bump (1 - r^2)^3.
double c2_bump(double r);

/// Three test sources with different centres and widths, all supported in
/// (0.2 t_end, 0.8 t_end).
std::vector<TensorBump> default_psi_family(double t_end);

/// b = (f(u) - f(v)) / (u - v), or f'((u + v)/2) when |u - v| < tol (1 + |u| + |v|).
SpaceTimeField divided_difference_b(const SpaceTimeField& u, const SpaceTimeField& v,
                                    const FluxModel& model, double tol = 1e-12);

/// Separable convolution in x and t with the normalized C^2 bump of radius
/// `moll_width`. Weights are renormalized where the kernel leaves the domain.
SpaceTimeField mollify_b(const SpaceTimeField& b, double moll_width);

struct AdjointProblem {
  SpaceTimeField b;         ///< raw coefficient at the forward snapshot times
  SpaceTimeSource psi;
  double psi_t_lo = 0.0;    ///< supp psi in time is inside [psi_t_lo, psi_t_hi]
  double psi_t_hi = 0.0;
  double psi_x_lo = 0.0;    ///< supp psi in space is inside [psi_x_lo, psi_x_hi]
  double psi_x_hi = 0.0;
  double tau = 0.0;
  double epsilon_adj = 0.0;
  double moll_width = 0.0;  ///< 0 disables mollification
  double gamma = 0.0;
  double cfl = 0.4;
};

/// Throws ConfigError when the support, terminal time or widths are invalid.
void validate(const AdjointProblem& problem);

struct AdjointSolution {
  SpaceTimeField phi;
  SpaceTimeField Phi;
  SpaceTimeField b_eps;
  std::size_t steps = 0;
};

/// Terminal value problem
///   phi_t + b_eps phi_x = psi - gamma Phi - eps phi_xx,  Phi_x = -phi,
///   phi(tau) = 0,
/// solved in reversed time w(s) = phi(tau - s) with upwinded transport and
/// SSP-RK2. Output rows match the coefficient times; rows with t >= tau are 0.
AdjointSolution adjoint_solve_backward(const AdjointProblem& problem);

/// Phi_i = int_{x_i}^{L} phi, trapezoid at cell centers, so
/// (Phi_{i+1} - Phi_i)/dx = -(phi_i + phi_{i+1})/2 exactly.
Field tail_primitive(const Field& phi);

struct DualityReport {
  double direct = 0.0;               ///< int int w psi
  double exact_pairing = 0.0;        ///< int int w (phi_t + b phi_x + gamma Phi)
  double viscosity = 0.0;            ///< eps int int w phi_xx
  double mollification = 0.0;       ///< int int w (b_eps - b) phi_x
  double source_approximation = 0.0; ///< int int w (psi - psi_eps)
  double ledger_sum = 0.0;           ///< sum of the absolute values above
  double closure_defect = 0.0;       ///< |direct - (signed sum of the four terms)|
  double support_times_eps = 0.0;    ///< eps_adj * |supp phi|
  bool pass = false;
};

/// Pairs w = u - v against psi and against the regularized adjoint solution.
DualityReport duality_residual(const SpaceTimeField& u, const SpaceTimeField& v,
                               const SpaceTimeSource& psi, const AdjointSolution& adj,
                               const SpaceTimeField& b, double gamma, double epsilon_adj,
                               double tol = 1e-12);

}  // namespace ohsolve
