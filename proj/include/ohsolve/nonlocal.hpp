#pragma once

#include "ohsolve/grid.hpp"

namespace ohsolve {

/// Cumulative primitive P_i = sum_{j<=i} u_j dx.
///
/// P_i is the integral of u up to the right face of cell i, so the forward
/// difference P_i - P_{i-1} equals u_i dx exactly.
Field compute_primitive(const Field& u);

/// Primitive sampled at cell centers: (P_{i-1} + P_i) / 2 = P_i - u_i dx / 2.
Field centered_primitive(const Field& u);

/// Second primitive F = int_{-L}^x P, same cumulative rule as compute_primitive.
Field second_primitive(const Field& P);

/// v minus its mean over [-L, L].
Field zero_mean_project(const Field& v);

struct EllipticSolveStats {
  double delta = 0.0;
  /// |delta^2 |P''|^2 + |P'|^2 - |u|^2| / |u|^2 with face-difference P'.
  double identity_residual = 0.0;
  /// max(|P(+L)|, |P'(-L)|), the far-field conditions not imposed by the solve.
  double max_boundary_value = 0.0;
  /// delta < dx^2: the centered stencil no longer resolves the boundary layer.
  bool under_resolved = false;
};

struct EllipticSolution {
  Field P;
  EllipticSolveStats stats;
};

/// Solves -delta P'' + P' = u at cell centers with P(-L) = 0 and P'(L) = 0.
EllipticSolution elliptic_solve_delta(const Field& u, double delta);

/// Centered first derivative at cells, using the elliptic ghost rules.
Field elliptic_first_derivative(const Field& P);
/// Second derivative at cells, using the elliptic ghost rules.
Field elliptic_second_derivative(const Field& P);

}  // namespace ohsolve
