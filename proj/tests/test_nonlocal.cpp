#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ohsolve/config.hpp"
#include "ohsolve/errors.hpp"
#include "ohsolve/initial_data.hpp"
#include "ohsolve/nonlocal.hpp"

using namespace ohsolve;

namespace {

double gauss(double x) { return std::exp(-x * x); }
double gauss_d1(double x) { return -2.0 * x * gauss(x); }
double gauss_d2(double x) { return (4.0 * x * x - 2.0) * gauss(x); }

// Max error of P_i against g evaluated at the right face of cell i.
template <class G>
double face_error(const Field& P, G g) {
  double e = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    e = std::max(e, std::abs(P[i] - g(P.grid().right_face(i))));
  }
  return e;
}

Field manufactured_rhs(const Grid1D& g, double delta) {
  return Field::from_function(g, [delta](double x) { return -delta * gauss_d2(x) + gauss_d1(x); });
}

}  // namespace

TEST_CASE("primitive of zero is zero") {
  const Field P = compute_primitive(Field(Grid1D(8.0, 64)));
  CHECK(linf_norm(P) == 0.0);
}

TEST_CASE("primitive of an indicator is a ramp") {
  const Grid1D g(2.0, 400);
  const Field u = Field::from_function(g, [](double x) { return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0; });
  const Field P = compute_primitive(u);
  const double err = face_error(P, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(err <= g.dx());
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(P[i] - P[i - 1] == doctest::Approx(u[i] * g.dx()));
}

TEST_CASE("primitive of the gaussian derivative") {
  const Grid1D g(8.0, 2048);
  const Field u = Field::from_function(g, gauss_d1);
  CHECK(face_error(compute_primitive(u), gauss) <= 5e-4);
  CHECK(linf_norm(centered_primitive(u) - Field::from_function(g, gauss)) <= 5e-4);
}

TEST_CASE("primitive is linear") {
  const Grid1D g(8.0, 512);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  Field u(g), v(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    u[i] = nd(rng);
    v[i] = nd(rng);
  }
  const double a = 0.7, b = -2.3;
  const Field lhs = compute_primitive(a * u + b * v);
  const Field rhs = a * compute_primitive(u) + b * compute_primitive(v);
  CHECK(linf_norm(lhs - rhs) <= 1e-12 * (1.0 + linf_norm(lhs)));
}

TEST_CASE("primitive of zero-mass data vanishes at the right end") {
  const Grid1D g(8.0, 1024);
  const Field P = compute_primitive(profiles::hermite_bump(g));
  CHECK(std::abs(P[g.size() - 1]) <= Tolerances{}.tol_mass(8.0));
}

TEST_CASE("second primitive") {
  const Grid1D g(8.0, 2048);
  CHECK(linf_norm(second_primitive(Field(g))) == 0.0);
  const Field P = Field::from_function(g, gauss_d1);
  CHECK(face_error(second_primitive(P), gauss) <= 5e-4);
  const Grid1D h(2.0, 400);
  const Field ind = Field::from_function(h, [](double x) { return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0; });
  CHECK(face_error(second_primitive(ind), [](double x) { return std::clamp(x, 0.0, 1.0); }) <= h.dx());
}

TEST_CASE("zero-mean projection") {
  const Grid1D g(4.0, 128);
  CHECK(linf_norm(zero_mean_project(Field(g, 3.0))) <= 1e-15);
  const Field odd = Field::from_function(g, gauss_d1);
  CHECK(linf_norm(zero_mean_project(odd) - odd) <= 1e-15);
  const Field shifted = zero_mean_project(Field::from_function(g, [](double x) { return x + 1.0; }));
  CHECK(linf_norm(shifted - Field::from_function(g, [](double x) { return x; })) <= 1e-14);
}

TEST_CASE("elliptic solve of zero data") {
  const auto s = elliptic_solve_delta(Field(Grid1D(8.0, 256)), 0.1);
  CHECK(linf_norm(s.P) == 0.0);
  CHECK(s.stats.identity_residual == 0.0);
  CHECK_THROWS_AS(elliptic_solve_delta(Field(Grid1D(8.0, 256)), 0.0), ConfigError);
}

TEST_CASE("elliptic manufactured solution converges at second order") {
  const double delta = 0.1;
  std::vector<double> errors, residuals;
  for (std::size_t n : {512u, 1024u, 2048u}) {
    const Grid1D g(8.0, n);
    const auto s = elliptic_solve_delta(manufactured_rhs(g, delta), delta);
    errors.push_back(linf_norm(s.P - Field::from_function(g, gauss)));
    residuals.push_back(s.stats.identity_residual);
    CHECK(s.stats.max_boundary_value <= 1e-10);
    CHECK_FALSE(s.stats.under_resolved);
  }
  CHECK(errors.back() <= 1e-4);
  CHECK(residuals.back() <= 1e-3);
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    CHECK(std::log2(errors[k] / errors[k + 1]) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(residuals[k + 1] < residuals[k]);
  }
}

TEST_CASE("elliptic inequalities on random zero-mean fields") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  const Grid1D g(8.0, 512);
  for (double delta : {0.5, 0.05, 5e-3}) {
    for (int rep = 0; rep < 5; ++rep) {
      Field u(g);
      for (double& v : u.values()) v = nd(rng);
      u = zero_mean_project(u);
      const auto s = elliptic_solve_delta(u, delta);
      const double lhs = std::sqrt(delta) * linf_norm(elliptic_first_derivative(s.P));
      CHECK(lhs <= l2_norm(u) * 1.01);
      CHECK(inner_product(u, s.P) <= l2_norm_squared(u) * 1.01);
    }
  }
}

TEST_CASE("elliptic solve approaches the primitive as delta shrinks") {
  const Grid1D g(8.0, 4096);
  const Field u = profiles::hermite_bump(g);
  const Field P0 = centered_primitive(u);
  double prev = 1e300;
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    const double gap = linf_norm(elliptic_solve_delta(u, delta).P - P0);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("elliptic solve flags an unresolved delta") {
  const Grid1D g(8.0, 64);
  const auto s = elliptic_solve_delta(profiles::hermite_bump(g), 1e-4);
  CHECK(s.stats.under_resolved);
}
