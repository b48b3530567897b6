#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ohsolve/errors.hpp"
#include "ohsolve/flux.hpp"

using namespace ohsolve;

namespace {

const FluxModel& burgers() {
  static const FluxModel m = FluxModel::burgers();
  return m;
}

std::vector<double> lattice() {
  std::vector<double> v;
  for (int k = 0; k <= 40; ++k) v.push_back(-2.0 + 0.1 * k);
  return v;
}

}  // namespace

TEST_CASE("godunov flux examples") {
  for (double a : {-1.5, -0.2, 0.0, 0.7, 2.0}) CHECK(godunov_flux(a, a, burgers()) == doctest::Approx(0.5 * a * a));
  CHECK(godunov_flux(1.0, -1.0, burgers()) == 0.5);
  CHECK(godunov_flux(-1.0, 1.0, burgers()) == 0.0);
  CHECK(godunov_flux(1.0, 2.0, burgers()) == 0.5);
  CHECK(godunov_flux(-2.0, -1.0, burgers()) == 0.5);
}

TEST_CASE("godunov flux for cosh uses the cached sonic point") {
  const FluxModel m = FluxModel::cosh_minus_one();
  REQUIRE(m.sonic_point().has_value());
  CHECK(std::abs(*m.sonic_point()) <= 1e-12);
  CHECK(godunov_flux(-1.0, 1.0, m) == doctest::Approx(0.0));
  CHECK(godunov_flux(1.0, -1.0, m) == doctest::Approx(std::cosh(1.0) - 1.0));
}

TEST_CASE("lax-friedrichs flux examples") {
  for (double a : {-1.0, 0.0, 1.3}) CHECK(lax_friedrichs_flux(a, a, 2.0, burgers()) == doctest::Approx(0.5 * a * a));
  CHECK(lax_friedrichs_flux(1.0, -1.0, 1.0, burgers()) == doctest::Approx(1.5));
  CHECK(lax_friedrichs_flux(0.0, 0.0, 1.0, burgers()) == 0.0);
}

TEST_CASE("lax-friedrichs alpha below the wave speed is a configuration error") {
  CHECK_THROWS_AS(check_lax_friedrichs_alpha(0.5, -1.0, 1.0, burgers()), ConfigError);
  CHECK_NOTHROW(check_lax_friedrichs_alpha(1.0, -1.0, 1.0, burgers()));
}

TEST_CASE("godunov flux is monotone") {
  const auto us = lattice();
  for (std::size_t i = 0; i + 1 < us.size(); ++i) {
    for (double b : us) {
      CHECK(godunov_flux(us[i + 1], b, burgers()) >= godunov_flux(us[i], b, burgers()));
      CHECK(godunov_flux(b, us[i + 1], burgers()) <= godunov_flux(b, us[i], burgers()));
    }
  }
}

TEST_CASE("godunov flux lies below lax-friedrichs on shocks") {
  const auto us = lattice();
  for (double a : us) {
    for (double b : us) {
      if (a < b) continue;
      const double alpha = std::max(std::abs(a), std::abs(b));
      CHECK(godunov_flux(a, b, burgers()) <= lax_friedrichs_flux(a, b, alpha, burgers()) + 1e-14);
    }
  }
}

TEST_CASE("roe flux upwinds without an entropy fix") {
  // The expansion shock (-1, 1) has zero Roe speed and keeps f(-1).
  CHECK(roe_flux(-1.0, 1.0, burgers()) == doctest::Approx(0.5));
  CHECK(roe_flux(2.0, 1.0, burgers()) == doctest::Approx(2.0));
  CHECK(roe_flux(-2.0, -1.0, burgers()) == doctest::Approx(0.5));
}

TEST_CASE("riemann interface state and wave speed") {
  CHECK(riemann_interface_state(-1.0, 1.0, burgers()) == 0.0);
  CHECK(riemann_interface_state(2.0, 1.0, burgers()) == 2.0);
  CHECK(riemann_interface_state(-2.0, -1.0, burgers()) == -1.0);
  const Grid1D g(1.0, 4);
  CHECK(max_wave_speed(Field(g, std::vector<double>{0.5, -1.5, 0.2, 1.0}), burgers()) == 1.5);
  CHECK(max_wave_speed(Field(g, 0.0), burgers()) == 0.0);
}

TEST_CASE("numerical entropy flux is consistent") {
  const EntropyPair quad = quadratic_entropy(burgers());
  const EntropyPair kr = smoothed_kruzkov_entropy(burgers(), 0.3, 0.05);
  for (FluxScheme s : {FluxScheme::Godunov, FluxScheme::LaxFriedrichs, FluxScheme::Roe}) {
    for (double a : {-1.2, 0.0, 0.31, 1.7}) {
      CHECK(numerical_entropy_flux(a, a, quad, burgers(), s, 2.0) == doctest::Approx(quad.q(a)).epsilon(1e-10));
      CHECK(numerical_entropy_flux(a, a, kr, burgers(), s, 2.0) == doctest::Approx(kr.q(a)).epsilon(1e-10));
    }
  }
}

TEST_CASE("quadratic entropy flux for burgers is u^3/3") {
  const EntropyPair quad = quadratic_entropy(burgers());
  for (double u : {-2.0, -0.5, 0.0, 1.0, 3.0}) CHECK(quad.q(u) == doctest::Approx(u * u * u / 3.0));
  CHECK(numerical_entropy_flux(1.0, -1.0, quad, burgers(), FluxScheme::LaxFriedrichs, 1.0) ==
        doctest::Approx(0.0));
  // cosh flux takes the quadrature path: q(u) = u cosh u - sinh u.
  const FluxModel m = FluxModel::cosh_minus_one();
  const EntropyPair qc = quadratic_entropy(m);
  for (double u : {-1.5, 0.4, 2.0}) {
    CHECK(qc.q(u) == doctest::Approx(u * std::cosh(u) - std::sinh(u)).epsilon(1e-10));
  }
}

TEST_CASE("sharp kruzkov flux limit") {
  const EntropyPair kr = smoothed_kruzkov_entropy(burgers(), 0.0, 1e-8);
  // int_0^2 f'(xi) sign(xi) dxi = f(2) - f(0)
  CHECK(kr.q(2.0) == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(kr.q(-2.0) == doctest::Approx(-2.0).epsilon(1e-7));
  CHECK(kr.eta(2.0) == doctest::Approx(2.0));
}

TEST_CASE("smoothed kruzkov pairs are convex and satisfy q' = f' eta'") {
  for (double k : {-0.5, 0.0, 0.5}) {
    const EntropyPair p = smoothed_kruzkov_entropy(burgers(), k, 0.1);
    for (int j = 0; j <= 400; ++j) {
      const double u = -2.0 + 0.01 * j;
      CHECK(p.eta_second(u) >= 0.0);
      const double h = 1e-5;
      const double dq = (p.q(u + h) - p.q(u - h)) / (2.0 * h);
      CHECK(dq == doctest::Approx(burgers().f_prime(u) * p.eta_prime(u)).epsilon(1e-6).scale(1.0));
    }
    // Exactly |u - k| outside the smoothing band.
    CHECK(p.eta(k + 0.3) == doctest::Approx(0.3));
    CHECK(p.eta(k - 0.3) == doctest::Approx(0.3));
  }
}

TEST_CASE("entropy flux quadrature handles kinks exactly") {
  // eta' = sign(xi - 0.25), f' = xi: q(1) = int_0^1 xi sign(xi - 1/4) = 1/2 - 2 (1/32)
  const auto eta_prime = [](double xi) { return xi < 0.25 ? -1.0 : 1.0; };
  CHECK(entropy_flux_quadrature(burgers(), eta_prime, 1.0, 0.25, 0.25) ==
        doctest::Approx(0.5 - 1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("numerical flux dispatch") {
  CHECK(numerical_flux(1.0, -1.0, burgers(), FluxScheme::Godunov, 1.0) == 0.5);
  CHECK(numerical_flux(1.0, -1.0, burgers(), FluxScheme::LaxFriedrichs, 1.0) == doctest::Approx(1.5));
  CHECK(numerical_flux(-1.0, 1.0, burgers(), FluxScheme::Roe, 1.0) == doctest::Approx(0.5));
}
