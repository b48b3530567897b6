#pragma once

#include <functional>
#include <string>

#include "ohsolve/config.hpp"
#include "ohsolve/flux_model.hpp"
#include "ohsolve/grid.hpp"

namespace ohsolve {

/// Exact Riemann flux for a convex flux.
double godunov_flux(double u_left, double u_right, const FluxModel& model);

/// Lax-Friedrichs flux with global viscosity coefficient alpha.
double lax_friedrichs_flux(double u_left, double u_right, double alpha, const FluxModel& model);

/// Upwinding by the Roe speed, with no entropy fix.
double roe_flux(double u_left, double u_right, const FluxModel& model);

/// State at x/t = 0 in the exact Riemann solution; godunov_flux = f(state).
double riemann_interface_state(double u_left, double u_right, const FluxModel& model);

/// max |f'(u_i)| over the field and the zero far-field state.
double max_wave_speed(const Field& u, const FluxModel& model);

/// Throws ConfigError when alpha is below the sampled wave speed on [lo, hi].
void check_lax_friedrichs_alpha(double alpha, double lo, double hi, const FluxModel& model,
                                int samples = 64);

/// Convex entropy eta with entropy flux q, q' = f' eta', q(0) = 0.
struct EntropyPair {
  std::string name;
  std::function<double(double)> eta;
  std::function<double(double)> eta_prime;
  std::function<double(double)> eta_second;
  std::function<double(double)> q;
  double sigma = 0.0;  ///< smoothing width (0 for exact entropies)
};

/// eta = u^2 / 2.
EntropyPair quadratic_entropy(const FluxModel& model);

/// C^2 spline smoothing of |u - k| over the band |u - k| < sigma.
EntropyPair smoothed_kruzkov_entropy(const FluxModel& model, double k, double sigma);

/// int_0^u f'(xi) eta'(xi) dxi by composite Gauss-Legendre quadrature with
/// breakpoints at the given kinks.
double entropy_flux_quadrature(const FluxModel& model,
                               const std::function<double(double)>& eta_prime, double u,
                               double kink_lo, double kink_hi);

/// Numerical entropy flux consistent with the chosen scheme.
///
/// Lax-Friedrichs: (q_l + q_r)/2 - alpha/2 (eta_r - eta_l).
/// Godunov and Roe: q evaluated at the state the scheme places on the face.
double numerical_entropy_flux(double u_left, double u_right, const EntropyPair& pair,
                              const FluxModel& model, FluxScheme scheme, double alpha = 0.0);

/// Numerical flux dispatch for the chosen scheme.
double numerical_flux(double u_left, double u_right, const FluxModel& model, FluxScheme scheme,
                      double alpha);

}  // namespace ohsolve
