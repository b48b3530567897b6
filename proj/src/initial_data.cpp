#include "ohsolve/initial_data.hpp"

#include <cmath>
#include <sstream>

#include "ohsolve/errors.hpp"
#include "ohsolve/nonlocal.hpp"

namespace ohsolve {

InitialData validate_initial_data(const Field& u0, const Tolerances& tol, bool relax,
                                  std::string provenance) {
  if (const std::size_t bad = u0.first_non_finite(); bad != u0.size()) {
    throw RejectedInitialDataError("initial data: non-finite value at cell " + std::to_string(bad),
                                   std::nan(""), std::nan(""));
  }
  InitialData out{u0, compute_primitive(u0), std::move(provenance), false, 0.0, 0.0, 0.0, 0.0, 0.0, {}};
  out.mass = integral(out.u0);
  out.p_mass = integral(out.P0);
  out.l2_u0 = l2_norm(out.u0);
  out.linf_u0 = linf_norm(out.u0);
  out.l2_P0 = l2_norm(out.P0);

  const Grid1D& g = u0.grid();
  const double tol_mass = tol.tol_mass(g.half_width());
  const bool ok = std::abs(out.mass) <= tol_mass && std::abs(out.p_mass) <= tol_mass;
  if (!ok) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "initial data violates the zero-mean constraints: int u0 = " << out.mass
        << ", int P0 = " << out.p_mass << ", tol_mass = " << tol_mass;
    if (!relax) throw RejectedInitialDataError(msg.str(), out.mass, out.p_mass);
    out.relaxed = true;
    out.provenance += " [relaxed: " + msg.str() + "]";
    out.warnings.push_back(msg.str());
  }

  // Outer 10% of cells on each side should carry no mass.
  const std::size_t band = std::max<std::size_t>(1, g.size() / 10);
  double outer = 0.0;
  for (std::size_t i = 0; i < band; ++i) {
    outer = std::max({outer, std::abs(u0[i]), std::abs(u0[g.size() - 1 - i])});
  }
  if (outer >= tol.support) {
    std::ostringstream msg;
    msg << "initial data reaches the outer 10% of the domain: max |u0| = " << outer
        << " >= tol_support = " << tol.support;
    out.warnings.push_back(msg.str());
  }
  return out;
}

namespace profiles {

Field hermite_bump(const Grid1D& grid, double amplitude) {
  return Field::from_function(grid, [amplitude](double x) {
    return amplitude * (4.0 * x * x - 2.0) * std::exp(-x * x);
  });
}

Field zero_mean_wiggle(const Grid1D& grid, double k) {
  const double scale = 1.0 / (2.0 + k * k);
  return Field::from_function(grid, [k, scale](double x) {
    const double g2 =
        ((4.0 * x * x - 2.0 - k * k) * std::cos(k * x) + 4.0 * k * x * std::sin(k * x)) *
        std::exp(-x * x);
    return -scale * g2;
  });
}

Field riemann(const Grid1D& grid, double left, double right, double width, bool compensate) {
  Field u(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    if (x >= -width && x < 0.0) u[i] = left;
    if (x >= 0.0 && x < width) u[i] = right;
  }
  if (!compensate) return u;

  // Two plateaus on [c - 1, c) and [c, c + 1) cancel the mass and first moment
  // of the central block, using the same midpoint sums the validation uses.
  const double c = -(width + 3.0);
  if (c - 1.0 < -grid.half_width()) {
    throw ConfigError("riemann profile: compensating block does not fit in [-L, L]");
  }
  double mass = 0.0, moment = 0.0, a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
  const double dx = grid.dx();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    mass += u[i] * dx;
    moment += x * u[i] * dx;
    if (x >= c - 1.0 && x < c) {
      a1 += dx;
      b1 += x * dx;
    } else if (x >= c && x < c + 1.0) {
      a2 += dx;
      b2 += x * dx;
    }
  }
  const double det = a1 * b2 - a2 * b1;
  if (std::abs(det) < 1e-300) throw InternalError("riemann profile: singular compensation");
  const double c1 = (-mass * b2 + moment * a2) / det;
  const double c2 = (-moment * a1 + mass * b1) / det;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    if (x >= c - 1.0 && x < c) u[i] = c1;
    if (x >= c && x < c + 1.0) u[i] = c2;
  }
  return u;
}

}  // namespace profiles
}  // namespace ohsolve
