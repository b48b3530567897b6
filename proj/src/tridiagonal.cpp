#include "ohsolve/tridiagonal.hpp"

#include <cmath>

#include "ohsolve/errors.hpp"

namespace ohsolve {

std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> super,
                                      std::span<const double> rhs) {
  const std::size_t n = diag.size();
  if (sub.size() != n || super.size() != n || rhs.size() != n || n == 0) {
    throw InternalError("solve_tridiagonal: inconsistent band sizes");
  }
  std::vector<double> c_star(n), d_star(n), x(n);
  if (diag[0] == 0.0) throw InternalError("solve_tridiagonal: zero pivot in row 0");
  c_star[0] = super[0] / diag[0];
  d_star[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = diag[i] - sub[i] * c_star[i - 1];
    if (m == 0.0 || !std::isfinite(m)) {
      throw InternalError("solve_tridiagonal: zero pivot in row " + std::to_string(i));
    }
    c_star[i] = (i + 1 < n) ? super[i] / m : 0.0;
    d_star[i] = (rhs[i] - sub[i] * d_star[i - 1]) / m;
  }
  x[n - 1] = d_star[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d_star[i] - c_star[i] * x[i + 1];
  return x;
}

}  // namespace ohsolve
