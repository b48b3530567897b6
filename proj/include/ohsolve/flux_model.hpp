#pragma once

#include <functional>
#include <optional>
#include <string>

namespace ohsolve {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Convex flux f with its first two derivatives.
///
/// The convexity floor c and growth constant C1 are the two constants of the
/// standing flux assumption (f'' >= c, |f'(u)| <= C1 |u|), kept distinct.
/// The sonic point (f' = 0) is located once on `range` and cached.
class FluxModel {
 public:
  using Fn = std::function<double(double)>;

  FluxModel(std::string name, Fn f, Fn f_prime, Fn f_second, double convexity_floor,
            double growth_constant, Interval range = {-8.0, 8.0});

  static FluxModel burgers();
  /// f(u) = u^4; fails the convexity floor at u = 0.
  static FluxModel quartic();
  /// f(u) = cosh(u) - 1.
  static FluxModel cosh_minus_one();
  /// f(u) = a u. Not strictly convex; used only as a transport surrogate.
  static FluxModel linear(double speed);
  /// f = 0. Disables advection so the source term can be tested alone.
  static FluxModel frozen();

  const std::string& name() const { return name_; }
  double f(double u) const { return f_(u); }
  double f_prime(double u) const { return f_prime_(u); }
  double f_second(double u) const { return f_second_(u); }
  double convexity_floor() const { return convexity_floor_; }
  double growth_constant() const { return growth_constant_; }
  const Interval& range() const { return range_; }
  const std::optional<double>& sonic_point() const { return sonic_point_; }

 private:
  std::string name_;
  Fn f_;
  Fn f_prime_;
  Fn f_second_;
  double convexity_floor_;
  double growth_constant_;
  Interval range_;
  std::optional<double> sonic_point_;
};

struct FluxValidation {
  double c_measured = 0.0;      ///< min sampled f''
  double C1_measured = 0.0;     ///< max sampled |f'(u)|/|u|, u != 0
  double f_prime_at_zero = 0.0;
  double f_at_zero = 0.0;
  bool f_prime_increasing = false;
  bool pass = false;
  std::string message;
};

/// Samples the flux on `range` (always including u = 0) and checks the
/// convexity floor, the growth bound and the normalization f(0) = f'(0) = 0.
/// Throws InvalidFluxError on a non-finite sample.
FluxValidation validate_flux(const FluxModel& model, Interval range, int samples,
                             double tol = 1e-12);

}  // namespace ohsolve
