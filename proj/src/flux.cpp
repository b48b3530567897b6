#include "ohsolve/flux.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "ohsolve/errors.hpp"

namespace ohsolve {

double godunov_flux(double ul, double ur, const FluxModel& model) {
  if (ul <= ur) {
    const auto& sonic = model.sonic_point();
    if (sonic && ul <= *sonic && *sonic <= ur) return model.f(*sonic);
    return std::min(model.f(ul), model.f(ur));
  }
  return std::max(model.f(ul), model.f(ur));
}

double lax_friedrichs_flux(double ul, double ur, double alpha, const FluxModel& model) {
  return 0.5 * (model.f(ul) + model.f(ur)) - 0.5 * alpha * (ur - ul);
}

namespace {

double roe_speed(double ul, double ur, const FluxModel& model) {
  if (ul == ur) return model.f_prime(ul);
  return (model.f(ur) - model.f(ul)) / (ur - ul);
}

}  // namespace

double roe_flux(double ul, double ur, const FluxModel& model) {
  return roe_speed(ul, ur, model) >= 0.0 ? model.f(ul) : model.f(ur);
}

double riemann_interface_state(double ul, double ur, const FluxModel& model) {
  if (ul <= ur) {
    if (model.f_prime(ul) >= 0.0) return ul;
    if (model.f_prime(ur) <= 0.0) return ur;
    const auto& sonic = model.sonic_point();
    return sonic ? *sonic : 0.5 * (ul + ur);
  }
  return roe_speed(ul, ur, model) >= 0.0 ? ul : ur;
}

double max_wave_speed(const Field& u, const FluxModel& model) {
  double a = std::abs(model.f_prime(0.0));
  for (double v : u.values()) a = std::max(a, std::abs(model.f_prime(v)));
  return a;
}

void check_lax_friedrichs_alpha(double alpha, double lo, double hi, const FluxModel& model,
                                int samples) {
  double a = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double u = lo + (hi - lo) * k / std::max(1, samples - 1);
    a = std::max(a, std::abs(model.f_prime(u)));
  }
  if (alpha < a) {
    std::ostringstream msg;
    msg << "lax-friedrichs: alpha = " << alpha << " below the wave speed bound " << a;
    throw ConfigError(msg.str());
  }
}

double numerical_flux(double ul, double ur, const FluxModel& model, FluxScheme scheme,
                      double alpha) {
  switch (scheme) {
    case FluxScheme::Godunov:
      return godunov_flux(ul, ur, model);
    case FluxScheme::LaxFriedrichs:
      return lax_friedrichs_flux(ul, ur, alpha, model);
    case FluxScheme::Roe:
      return roe_flux(ul, ur, model);
  }
  return 0.0;
}

double entropy_flux_quadrature(const FluxModel& model,
                               const std::function<double(double)>& eta_prime, double u,
                               double kink_lo, double kink_hi) {
  // 5-point Gauss-Legendre on panels no wider than 1, split at the kinks.
  static constexpr std::array<double, 5> nodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                                  0.5384693101056831, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {0.2369268850561891, 0.4786286704993665,
                                                    0.5688888888888889, 0.4786286704993665,
                                                    0.2369268850561891};
  const double a = std::min(0.0, u);
  const double b = std::max(0.0, u);
  std::vector<double> cuts = {a, b};
  for (double k : {kink_lo, kink_hi}) {
    if (k > a && k < b) cuts.push_back(k);
  }
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s];
    const double hi = cuts[s + 1];
    const int panels = std::max(1, static_cast<int>(std::ceil(hi - lo)));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * h;
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double xi = mid + 0.5 * h * nodes[q];
        total += 0.5 * h * weights[q] * model.f_prime(xi) * eta_prime(xi);
      }
    }
  }
  return u >= 0.0 ? total : -total;
}

EntropyPair quadratic_entropy(const FluxModel& model) {
  EntropyPair pair;
  pair.name = "quadratic";
  pair.eta = [](double u) { return 0.5 * u * u; };
  pair.eta_prime = [](double u) { return u; };
  pair.eta_second = [](double) { return 1.0; };
  if (model.name() == "burgers") {
    pair.q = [](double u) { return u * u * u / 3.0; };
  } else {
    pair.q = [model, ep = pair.eta_prime](double u) {
      return entropy_flux_quadrature(model, ep, u, 0.0, 0.0);
    };
  }
  return pair;
}

EntropyPair smoothed_kruzkov_entropy(const FluxModel& model, double k, double sigma) {
  if (sigma < 0.0) throw ConfigError("kruzkov entropy: sigma must be >= 0");
  EntropyPair pair;
  std::ostringstream name;
  name << "kruzkov(k=" << k << ")";
  pair.name = name.str();
  pair.sigma = sigma;
  pair.eta = [k, sigma](double u) {
    const double d = u - k;
    if (std::abs(d) >= sigma) return std::abs(d);
    const double r = d / sigma;
    return sigma * (0.375 + 0.75 * r * r - 0.125 * r * r * r * r);
  };
  pair.eta_prime = [k, sigma](double u) {
    const double d = u - k;
    if (std::abs(d) >= sigma) return d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
    const double r = d / sigma;
    return 0.5 * r * (3.0 - r * r);
  };
  pair.eta_second = [k, sigma](double u) {
    const double d = u - k;
    if (std::abs(d) >= sigma) return 0.0;
    const double r = d / sigma;
    return 1.5 * (1.0 - r * r) / sigma;
  };
  pair.q = [model, ep = pair.eta_prime, k, sigma](double u) {
    return entropy_flux_quadrature(model, ep, u, k - sigma, k + sigma);
  };
  return pair;
}

double numerical_entropy_flux(double ul, double ur, const EntropyPair& pair,
                              const FluxModel& model, FluxScheme scheme, double alpha) {
  switch (scheme) {
    case FluxScheme::LaxFriedrichs:
      return 0.5 * (pair.q(ul) + pair.q(ur)) - 0.5 * alpha * (pair.eta(ur) - pair.eta(ul));
    case FluxScheme::Godunov:
      return pair.q(riemann_interface_state(ul, ur, model));
    case FluxScheme::Roe:
      return roe_speed(ul, ur, model) >= 0.0 ? pair.q(ul) : pair.q(ur);
  }
  return 0.0;
}

}  // namespace ohsolve
