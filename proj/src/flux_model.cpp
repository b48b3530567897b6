#include "ohsolve/flux_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "ohsolve/errors.hpp"

namespace ohsolve {
namespace {

// Bisection on f' (strictly increasing) to 1e-12; nullopt when f' keeps one
// sign over the range.
std::optional<double> locate_sonic_point(const FluxModel::Fn& f_prime, Interval range) {
  double lo = range.lo;
  double hi = range.hi;
  double flo = f_prime(lo);
  double fhi = f_prime(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (!(flo < 0.0 && fhi > 0.0)) return std::nullopt;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f_prime(mid);
    if (fm == 0.0) return mid;
    if (fm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FluxModel::FluxModel(std::string name, Fn f, Fn f_prime, Fn f_second, double convexity_floor,
                     double growth_constant, Interval range)
    : name_(std::move(name)),
      f_(std::move(f)),
      f_prime_(std::move(f_prime)),
      f_second_(std::move(f_second)),
      convexity_floor_(convexity_floor),
      growth_constant_(growth_constant),
      range_(range) {
  sonic_point_ = locate_sonic_point(f_prime_, range_);
}

FluxModel FluxModel::burgers() {
  return FluxModel(
      "burgers", [](double u) { return 0.5 * u * u; }, [](double u) { return u; },
      [](double) { return 1.0; }, 1.0, 1.0);
}

FluxModel FluxModel::quartic() {
  return FluxModel(
      "quartic", [](double u) { return u * u * u * u; },
      [](double u) { return 4.0 * u * u * u; }, [](double u) { return 12.0 * u * u; }, 1.0,
      4.0, {-1.0, 1.0});
}

FluxModel FluxModel::cosh_minus_one() {
  // Constants valid on [-1, 1]: f'' = cosh >= 1, sinh(u)/u <= sinh(1).
  return FluxModel(
      "cosh-minus-one", [](double u) { return std::cosh(u) - 1.0; },
      [](double u) { return std::sinh(u); }, [](double u) { return std::cosh(u); }, 1.0,
      std::sinh(1.0), {-1.0, 1.0});
}

FluxModel FluxModel::linear(double speed) {
  return FluxModel(
      "linear", [speed](double u) { return speed * u; }, [speed](double) { return speed; },
      [](double) { return 0.0; }, 0.0, std::abs(speed));
}

FluxModel FluxModel::frozen() {
  return FluxModel(
      "frozen", [](double) { return 0.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; }, 0.0, 0.0);
}

FluxValidation validate_flux(const FluxModel& model, Interval range, int samples, double tol) {
  if (samples < 16) throw ConfigError("validate_flux: at least 16 samples required");
  if (!range.contains(0.0)) throw ConfigError("validate_flux: range must contain 0");

  std::vector<double> us;
  us.reserve(static_cast<std::size_t>(samples) + 1);
  for (int k = 0; k < samples; ++k) {
    us.push_back(range.lo + (range.hi - range.lo) * k / (samples - 1));
  }
  us.push_back(0.0);
  std::sort(us.begin(), us.end());

  FluxValidation out;
  out.c_measured = std::numeric_limits<double>::infinity();
  out.f_prime_increasing = true;
  double prev_fp = -std::numeric_limits<double>::infinity();
  double prev_u = -std::numeric_limits<double>::infinity();
  for (double u : us) {
    const double f = model.f(u);
    const double fp = model.f_prime(u);
    const double fpp = model.f_second(u);
    if (!std::isfinite(f) || !std::isfinite(fp) || !std::isfinite(fpp)) {
      std::ostringstream msg;
      msg << "validate_flux: non-finite flux value at u = " << u;
      throw InvalidFluxError(msg.str());
    }
    out.c_measured = std::min(out.c_measured, fpp);
    if (u != 0.0) out.C1_measured = std::max(out.C1_measured, std::abs(fp) / std::abs(u));
    if (u > prev_u && !(fp > prev_fp)) out.f_prime_increasing = false;
    prev_fp = fp;
    prev_u = u;
  }
  out.f_prime_at_zero = model.f_prime(0.0);
  out.f_at_zero = model.f(0.0);

  const double c = model.convexity_floor();
  const double C1 = model.growth_constant();
  std::ostringstream msg;
  if (!(c > 0.0)) msg << "declared convexity floor is not positive; ";
  if (out.c_measured < c * (1.0 - tol)) {
    msg << "min f'' = " << out.c_measured << " below floor " << c << "; ";
  }
  if (out.C1_measured > C1 * (1.0 + tol) + tol) {
    msg << "max |f'(u)/u| = " << out.C1_measured << " above " << C1 << "; ";
  }
  if (std::abs(out.f_at_zero) > tol) msg << "f(0) = " << out.f_at_zero << " != 0; ";
  if (std::abs(out.f_prime_at_zero) > tol) msg << "f'(0) = " << out.f_prime_at_zero << " != 0; ";
  out.message = msg.str();
  out.pass = out.message.empty();
  if (out.pass) out.message = "ok";
  return out;
}

}  // namespace ohsolve
