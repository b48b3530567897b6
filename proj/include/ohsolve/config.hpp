#pragma once

#include <string>
#include <string_view>

namespace ohsolve {

enum class Mode { DirectPrimitive, DeltaElliptic };
enum class FluxScheme {
  Godunov,
  LaxFriedrichs,
  /// Roe upwinding without entropy fix. Admits expansion shocks; only used to
  /// build non-entropic counterexamples.
  Roe,
};
enum class DiffusionScheme { Explicit, Implicit };

std::string_view to_string(Mode m);
std::string_view to_string(FluxScheme s);
std::string_view to_string(DiffusionScheme s);
Mode parse_mode(std::string_view s);
FluxScheme parse_flux_scheme(std::string_view s);
DiffusionScheme parse_diffusion_scheme(std::string_view s);

/// Named tolerances. Every report echoes these.
struct Tolerances {
  double mass_density = 1e-10;   ///< tol_mass = mass_density * 2L
  double support = 1e-3;         ///< |u0| bound on the outer 10% of cells
  double energy = 1e-6;          ///< relative slack on the energy ledger
  double linf = 1e-6;            ///< additive slack on the L-infinity growth bound
  double inequality = 1e-2;      ///< relative slack on elliptic inequalities
  double quadrature = 1e-10;     ///< entropy-flux quadrature and Phi consistency
  double entropy_k = 4.0;        ///< K in tol_entropy = K (dx + sigma)
  double divided_difference = 1e-12;
  double stability = 1e-6;       ///< relative slack in the exponential-growth fit
  double pmass_density = 1e-10;  ///< tol_pmass = pmass_density * 2L

  double tol_mass(double half_width) const { return mass_density * 2.0 * half_width; }
  double tol_pmass(double half_width) const { return pmass_density * 2.0 * half_width; }
  double tol_entropy(double dx, double sigma) const { return entropy_k * (dx + sigma); }
};

struct SolverConfig {
  double gamma = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  double cfl = 0.4;
  double t_end = 1.0;
  Mode mode = Mode::DirectPrimitive;
  FluxScheme flux_scheme = FluxScheme::Godunov;
  DiffusionScheme diffusion_scheme = DiffusionScheme::Explicit;
  bool mean_correction = true;
  Tolerances tolerances{};
};

/// Throws ConfigError naming the first violated invariant.
void validate(const SolverConfig& config);

}  // namespace ohsolve
