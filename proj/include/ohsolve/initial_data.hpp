#pragma once

#include <string>
#include <vector>

#include "ohsolve/config.hpp"
#include "ohsolve/grid.hpp"

namespace ohsolve {

/// Validated initial state together with its cumulative primitive.
struct InitialData {
  Field u0;
  Field P0;
  std::string provenance;
  bool relaxed = false;  ///< zero-mean check overridden
  double mass = 0.0;     ///< int u0
  double p_mass = 0.0;   ///< int P0
  double l2_u0 = 0.0;
  double linf_u0 = 0.0;
  double l2_P0 = 0.0;
  std::vector<std::string> warnings;
};

/// Builds P0 and checks both zero-mean constraints against tol_mass.
///
/// With `relax` set, a violation is recorded in the provenance instead of
/// raising RejectedInitialDataError. Non-finite input is always rejected.
InitialData validate_initial_data(const Field& u0, const Tolerances& tol = {},
                                  bool relax = false, std::string provenance = "field");

namespace profiles {

/// (4x^2 - 2) exp(-x^2), the second derivative of a Gaussian.
Field hermite_bump(const Grid1D& grid, double amplitude = 1.0);

/// Second derivative of cos(k x) exp(-x^2), scaled to unit amplitude at x = 0.
/// Zero mass and zero first moment, so its primitive also has zero mean.
Field zero_mean_wiggle(const Grid1D& grid, double wavenumber = 4.0);

/// Plateaus `left` on [-width, 0) and `right` on [0, width), zero elsewhere.
///
/// With `compensate` set, a two-plateau block centred at x = -(width + 3)
/// cancels the mass and first moment so the profile passes the zero-mean
/// checks. The compensating block must fit inside the grid.
Field riemann(const Grid1D& grid, double left, double right, double width = 1.0,
              bool compensate = true);

}  // namespace profiles
}  // namespace ohsolve
