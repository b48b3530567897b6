#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ohsolve/adjoint.hpp"
#include "ohsolve/errors.hpp"
#include "ohsolve/evolve.hpp"

using namespace ohsolve;

namespace {

const FluxModel& burgers() {
  static const FluxModel m = FluxModel::burgers();
  return m;
}

SpaceTimeField constant_b(const Grid1D& g, double value, int rows = 64) {
  return SpaceTimeField(g, uniform_snapshot_times(1.0, rows), value);
}

AdjointProblem problem_for(SpaceTimeField b, SpaceTimeSource psi, double t_lo, double t_hi,
                           double x_lo, double x_hi, double eps, double gamma = 0.0,
                           double moll = 0.0) {
  return AdjointProblem{std::move(b), std::move(psi), t_lo, t_hi, x_lo, x_hi, 1.0, eps, moll, gamma, 0.4};
}

AdjointProblem bump_problem(SpaceTimeField b, const TensorBump& psi, double eps, double gamma,
                            double moll) {
  return problem_for(std::move(b), psi, psi.t_lo(), psi.t_hi(), psi.x_center - psi.x_radius,
                     psi.x_center + psi.x_radius, eps, gamma, moll);
}

struct RunPair {
  SpaceTimeField u;
  SpaceTimeField v;
};

RunPair run_pair(std::size_t n, FluxScheme second) {
  const Grid1D g(8.0, n);
  const auto init = validate_initial_data(profiles::hermite_bump(g));
  SolverConfig c;
  c.gamma = 1.0;
  RunOptions o;
  o.snapshot_times = uniform_snapshot_times(1.0, 64);
  o.keep_snapshots = true;
  const RunResult ru = run_to_time(init, c, burgers(), {}, o);
  c.flux_scheme = second;
  const RunResult rv = run_to_time(init, c, burgers(), {}, o);
  return {SpaceTimeField::from_snapshots(ru.snapshots), SpaceTimeField::from_snapshots(rv.snapshots)};
}

}  // namespace

TEST_CASE("divided difference examples") {
  const Grid1D g(1.0, 4);
  SpaceTimeField u(g, {0.0}), v(g, {0.0});
  const double us[] = {0.3, 1.0, 2.0, -0.7};
  const double vs[] = {0.3, -1.0, 1.0, -0.7 + 1e-14};
  for (std::size_t i = 0; i < 4; ++i) {
    u.at(0, i) = us[i];
    v.at(0, i) = vs[i];
  }
  const SpaceTimeField b = divided_difference_b(u, v, burgers());
  CHECK(b.at(0, 0) == doctest::Approx(0.3));
  CHECK(b.at(0, 1) == doctest::Approx(0.0));
  CHECK(b.at(0, 2) == doctest::Approx(1.5));
  CHECK(b.at(0, 3) == doctest::Approx(-0.7));
  // For quadratic flux the divided difference is the midpoint.
  for (std::size_t i = 0; i < 4; ++i) CHECK(b.at(0, i) == doctest::Approx(0.5 * (us[i] + vs[i])));
}

TEST_CASE("mollification examples") {
  const Grid1D g(4.0, 256);
  const double w = 4.0 * g.dx();
  const SpaceTimeField c = constant_b(g, 0.7);
  const SpaceTimeField mc = mollify_b(c, w);
  for (std::size_t k = 0; k < c.time_count(); ++k) {
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(mc.at(k, i) == doctest::Approx(0.7).epsilon(1e-14));
  }

  SpaceTimeField step = constant_b(g, 0.0, 8);
  SpaceTimeField lin = constant_b(g, 0.0, 8);
  for (std::size_t k = 0; k < step.time_count(); ++k) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      step.at(k, i) = g.x(i) < 0.0 ? 2.0 : -1.0;
      lin.at(k, i) = g.x(i);
    }
  }
  const SpaceTimeField ms = mollify_b(step, w);
  CHECK(ms.linf() <= step.linf());
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    CHECK(ms.at(3, i + 1) <= ms.at(3, i));
    if (std::abs(g.x(i)) > w + g.dx()) CHECK(ms.at(3, i) == doctest::Approx(step.at(3, i)));
  }
  const SpaceTimeField ml = mollify_b(lin, w);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(g.x(i)) < 4.0 - w - g.dx()) CHECK(ml.at(5, i) == doctest::Approx(g.x(i)).epsilon(1e-12).scale(1.0));
  }
  CHECK_THROWS_AS(mollify_b(lin, 0.5 * g.dx()), ConfigError);
}

TEST_CASE("zero source gives the zero adjoint") {
  const Grid1D g(8.0, 256);
  const auto p = problem_for(constant_b(g, 0.3), [](double, double) { return 0.0; }, 0.2, 0.8, -1.0, 1.0, g.dx(), 1.0);
  const AdjointSolution s = adjoint_solve_backward(p);
  CHECK(s.phi.linf() == 0.0);
  CHECK(s.Phi.linf() == 0.0);
}

TEST_CASE("pure time integration with b = 0") {
  const Grid1D g(8.0, 256);
  const double t0 = 0.3, t1 = 0.6;
  auto shape = [](double x) { return std::exp(-x * x); };
  const auto p = problem_for(constant_b(g, 0.0), [&](double t, double x) {
    return (t > t0 && t < t1) ? shape(x) : 0.0;
  }, t0, t1, -6.0, 6.0, 1e-12);
  const AdjointSolution s = adjoint_solve_backward(p);
  const auto times = s.phi.times();
  const double dt = times[1] - times[0];
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    const double factor = t < t1 ? -(t1 - std::max(t, t0)) : 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(s.phi.at(k, i) - factor * shape(g.x(i))) <= dt * shape(g.x(i)) + 1e-12);
    }
  }
}

TEST_CASE("transport along characteristics with b = 1") {
  const TensorBump psi{0.5, 0.2, 0.0, 1.0, 1.0};
  auto characteristic = [&](double t, double x) {
    // -int_t^1 psi(s, x + s - t) ds by composite Simpson.
    const int m = 2000;
    const double h = (1.0 - t) / m;
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
      const double s = t + j * h;
      const double w = (j == 0 || j == m) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      acc += w * psi(s, x + s - t);
    }
    return -acc * h / 3.0;
  };
  std::vector<double> errors;
  for (std::size_t n : {512u, 1024u, 2048u}) {
    const Grid1D g(8.0, n);
    const AdjointSolution s = adjoint_solve_backward(bump_problem(constant_b(g, 1.0), psi, 1e-12, 0.0, 0.0));
    double err = 0.0;
    for (std::size_t k = 0; k < s.phi.time_count(); ++k) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        err = std::max(err, std::abs(s.phi.at(k, i) - characteristic(s.phi.times()[k], g.x(i))));
      }
    }
    errors.push_back(err);
  }
  CHECK(errors[0] <= 0.05);
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);
  CHECK(errors[0] / errors[2] >= 3.0);
}

TEST_CASE("adjoint solution structure") {
  const RunPair r = run_pair(512, FluxScheme::LaxFriedrichs);
  const SpaceTimeField b = divided_difference_b(r.u, r.v, burgers());
  const double dx = r.u.grid().dx();
  const auto family = default_psi_family(1.0);
  REQUIRE(family.size() >= 3);

  const TensorBump& p1 = family[1];
  const TensorBump& p2 = family[2];
  const AdjointSolution s1 = adjoint_solve_backward(bump_problem(b, p1, dx, 1.0, 2.0 * dx));
  const AdjointSolution s2 = adjoint_solve_backward(bump_problem(b, p2, dx, 1.0, 2.0 * dx));
  auto sum = problem_for(b, [&](double t, double x) { return p1(t, x) + p2(t, x); },
                         std::min(p1.t_lo(), p2.t_lo()), std::max(p1.t_hi(), p2.t_hi()),
                         std::min(p1.x_center - p1.x_radius, p2.x_center - p2.x_radius),
                         std::max(p1.x_center + p1.x_radius, p2.x_center + p2.x_radius), dx, 1.0, 2.0 * dx);
  const AdjointSolution s12 = adjoint_solve_backward(sum);

  double lin = 0.0, consistency = 0.0;
  const std::size_t last = s12.phi.time_count() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    for (std::size_t i = 0; i < r.u.cell_count(); ++i) {
      lin = std::max(lin, std::abs(s12.phi.at(k, i) - s1.phi.at(k, i) - s2.phi.at(k, i)));
      if (i + 1 < r.u.cell_count()) {
        const double d = (s12.Phi.at(k, i + 1) - s12.Phi.at(k, i)) / dx +
                         0.5 * (s12.phi.at(k, i) + s12.phi.at(k, i + 1));
        consistency = std::max(consistency, std::abs(d));
      }
    }
    CHECK(s12.Phi.at(k, r.u.cell_count() - 1) == doctest::Approx(0.5 * dx * s12.phi.at(k, r.u.cell_count() - 1)));
  }
  CHECK(lin <= 1e-12 * (1.0 + s12.phi.linf()));
  CHECK(consistency <= 1e-10);
  for (std::size_t i = 0; i < r.u.cell_count(); ++i) CHECK(s12.phi.at(last, i) == 0.0);
  CHECK(s12.phi.linf() > 0.0);
}

TEST_CASE("adjoint problem validation") {
  const Grid1D g(8.0, 128);
  const TensorBump psi{0.5, 0.25, 0.0, 1.0, 1.0};
  auto p = bump_problem(constant_b(g, 0.0), psi, g.dx(), 0.0, 0.0);
  CHECK_NOTHROW(validate(p));
  p.psi_t_hi = 1.0;
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = bump_problem(constant_b(g, 0.0), psi, 0.0, 0.0, 0.0);
  CHECK_THROWS_AS(validate(p), ConfigError);
  p = bump_problem(constant_b(g, 0.0), psi, g.dx(), 0.0, 0.0);
  p.psi_x_hi = 9.0;
  CHECK_THROWS_AS(validate(p), ConfigError);
}

TEST_CASE("identical runs pair to exactly zero") {
  const RunPair r = run_pair(256, FluxScheme::Godunov);
  const SpaceTimeField b = divided_difference_b(r.u, r.u, burgers());
  const double dx = r.u.grid().dx();
  for (const TensorBump& psi : default_psi_family(1.0)) {
    const AdjointSolution s = adjoint_solve_backward(bump_problem(b, psi, dx, 1.0, 2.0 * dx));
    const DualityReport rep = duality_residual(r.u, r.u, psi, s, b, 1.0, dx);
    CHECK(rep.direct == 0.0);
    CHECK(rep.ledger_sum == 0.0);
    CHECK(rep.pass);
  }
}

TEST_CASE("godunov and lax-friedrichs pairings close the ledger") {
  const RunPair r = run_pair(512, FluxScheme::LaxFriedrichs);
  const SpaceTimeField b = divided_difference_b(r.u, r.v, burgers());
  const double dx = r.u.grid().dx();
  for (const TensorBump& psi : default_psi_family(1.0)) {
    const AdjointSolution s = adjoint_solve_backward(bump_problem(b, psi, dx, 1.0, 2.0 * dx));
    const DualityReport rep = duality_residual(r.u, r.v, psi, s, b, 1.0, dx);
    CHECK(rep.pass);
    CHECK(rep.direct != 0.0);
    CHECK(rep.closure_defect <= 1e-9 * (std::abs(rep.direct) + rep.ledger_sum) + 1e-12);
    CHECK(rep.support_times_eps > 0.0);
  }
}

TEST_CASE("a non-entropic run keeps a finite pairing under refinement") {
  const TensorBump psi{0.5, 0.25, 0.5, 0.5, 1.0};
  std::vector<double> pairings;
  for (std::size_t n : {512u, 1024u}) {
    const Grid1D g(8.0, n);
    const auto init = validate_initial_data(profiles::riemann(g, -1.0, 1.0));
    SolverConfig c;
    RunOptions o;
    o.snapshot_times = uniform_snapshot_times(1.0, 64);
    o.keep_snapshots = true;
    const RunResult ru = run_to_time(init, c, burgers(), {}, o);
    c.flux_scheme = FluxScheme::Roe;
    const RunResult rv = run_to_time(init, c, burgers(), {}, o);
    const SpaceTimeField U = SpaceTimeField::from_snapshots(ru.snapshots);
    const SpaceTimeField V = SpaceTimeField::from_snapshots(rv.snapshots);
    const SpaceTimeField b = divided_difference_b(U, V, burgers());
    const AdjointSolution s = adjoint_solve_backward(bump_problem(b, psi, g.dx(), 0.0, 2.0 * g.dx()));
    pairings.push_back(std::abs(duality_residual(U, V, psi, s, b, 0.0, g.dx()).direct));
  }
  CHECK(pairings[0] >= 5e-3);
  CHECK(pairings[1] >= 5e-3);
  CHECK(pairings[0] / pairings[1] < 1.5);
}
