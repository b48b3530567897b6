#include "ohsolve/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ohsolve/errors.hpp"
#include "ohsolve/tridiagonal.hpp"

namespace ohsolve {

Field compute_primitive(const Field& u) {
  Field P(u.grid());
  const double dx = u.dx();
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += u[i] * dx;
    P[i] = acc;
  }
  return P;
}

Field centered_primitive(const Field& u) {
  Field P = compute_primitive(u);
  const double half_dx = 0.5 * u.dx();
  for (std::size_t i = 0; i < u.size(); ++i) P[i] -= u[i] * half_dx;
  return P;
}

Field second_primitive(const Field& P) { return compute_primitive(P); }

Field zero_mean_project(const Field& v) {
  const double mean = integral(v) / v.grid().length();
  Field out = v;
  for (double& x : out.values()) x -= mean;
  return out;
}

// Ghost rules for the elliptic problem: P(-L) = 0 reflects -P_0 to the left,
// P'(L) = 0 reflects P_{N-1} to the right. The outflow boundary layer then sits
// at +L where the Neumann condition absorbs it; the opposite pairing leaves the
// e^{x/delta} mode controlled from the wrong end.
namespace {

double left_ghost(const Field& P) { return -P[0]; }
double right_ghost(const Field& P) { return P[P.size() - 1]; }

double at(const Field& P, std::ptrdiff_t i) {
  if (i < 0) return left_ghost(P);
  if (i >= static_cast<std::ptrdiff_t>(P.size())) return right_ghost(P);
  return P[static_cast<std::size_t>(i)];
}

}  // namespace

Field elliptic_first_derivative(const Field& P) {
  Field d(P.grid());
  const double inv = 1.0 / (2.0 * P.dx());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    d[i] = (at(P, k + 1) - at(P, k - 1)) * inv;
  }
  return d;
}

Field elliptic_second_derivative(const Field& P) {
  Field d(P.grid());
  const double inv = 1.0 / (P.dx() * P.dx());
  for (std::size_t i = 0; i < P.size(); ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    d[i] = (at(P, k + 1) - 2.0 * P[i] + at(P, k - 1)) * inv;
  }
  return d;
}

EllipticSolution elliptic_solve_delta(const Field& u, double delta) {
  if (!(delta > 0.0)) throw ConfigError("elliptic_solve_delta: delta must be positive");
  const std::size_t n = u.size();
  const double dx = u.dx();
  const double diff = delta / (dx * dx);
  const double conv = 1.0 / (2.0 * dx);
  const double lower = -diff - conv;
  const double upper = -diff + conv;

  std::vector<double> sub(n, lower), diag(n, 2.0 * diff), super(n, upper);
  diag[0] -= lower;       // P_{-1} = -P_0
  diag[n - 1] += upper;   // P_N = P_{N-1}
  std::vector<double> sol = solve_tridiagonal(sub, diag, super, u.data());

  EllipticSolution out{Field(u.grid(), std::move(sol)), {}};
  const Field& P = out.P;
  out.stats.delta = delta;
  out.stats.under_resolved = delta < dx * dx;

  // Face-difference H1 seminorm, including both boundary faces.
  double grad_sq = 0.0;
  for (std::ptrdiff_t k = -1; k < static_cast<std::ptrdiff_t>(n); ++k) {
    const double d = (at(P, k + 1) - at(P, k)) / dx;
    grad_sq += d * d * dx;
  }
  const double curv_sq = l2_norm_squared(elliptic_second_derivative(P));
  const double u_sq = l2_norm_squared(u);
  const double defect = std::abs(delta * delta * curv_sq + grad_sq - u_sq);
  out.stats.identity_residual = u_sq > 0.0 ? defect / u_sq : defect;
  const double slope_left = (P[0] - left_ghost(P)) / dx;
  out.stats.max_boundary_value = std::max(std::abs(P[n - 1]), std::abs(slope_left));
  return out;
}

}  // namespace ohsolve
