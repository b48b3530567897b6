#pragma once

#include <span>
#include <vector>

namespace ohsolve {

/// Thomas algorithm for sub[i] x[i-1] + diag[i] x[i] + super[i] x[i+1] = rhs[i].
/// sub[0] and super[n-1] are ignored. Throws InternalError on a zero pivot.
std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> super,
                                      std::span<const double> rhs);

}  // namespace ohsolve
