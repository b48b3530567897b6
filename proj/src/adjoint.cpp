#include "ohsolve/adjoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ohsolve/errors.hpp"

namespace ohsolve {

SpaceTimeField::SpaceTimeField(const Grid1D& grid, std::vector<double> times, double fill)
    : grid_(grid), times_(std::move(times)), data_(times_.size() * grid.size(), fill) {
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) {
      throw ConfigError("space-time field: times must be strictly increasing");
    }
  }
}

SpaceTimeField SpaceTimeField::from_snapshots(std::span<const StepRecord> snapshots) {
  if (snapshots.empty()) throw ConfigError("space-time field: no snapshots");
  std::vector<double> times;
  for (const auto& s : snapshots) times.push_back(s.t);
  SpaceTimeField out(snapshots.front().u.grid(), std::move(times));
  for (std::size_t k = 0; k < snapshots.size(); ++k) out.set_row(k, snapshots[k].u);
  return out;
}

std::span<double> SpaceTimeField::row(std::size_t k) {
  return {data_.data() + k * grid_.size(), grid_.size()};
}

std::span<const double> SpaceTimeField::row(std::size_t k) const {
  return {data_.data() + k * grid_.size(), grid_.size()};
}

Field SpaceTimeField::field(std::size_t k) const {
  const auto r = row(k);
  return Field(grid_, std::vector<double>(r.begin(), r.end()));
}

void SpaceTimeField::set_row(std::size_t k, const Field& f) {
  if (!(f.grid() == grid_)) throw GridMismatchError("space-time field: row on a different grid");
  std::copy(f.values().begin(), f.values().end(), row(k).begin());
}

Field SpaceTimeField::interpolate(double t) const {
  if (times_.empty()) throw InternalError("space-time field: interpolate on an empty field");
  if (t <= times_.front()) return field(0);
  if (t >= times_.back()) return field(times_.size() - 1);
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t k1 = static_cast<std::size_t>(it - times_.begin());
  const std::size_t k0 = k1 - 1;
  const double theta = (t - times_[k0]) / (times_[k1] - times_[k0]);
  Field out(grid_);
  const auto a = row(k0);
  const auto b = row(k1);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - theta) * a[i] + theta * b[i];
  return out;
}

double SpaceTimeField::linf() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool SpaceTimeField::same_layout(const SpaceTimeField& other) const {
  return grid_ == other.grid_ && times_ == other.times_;
}

double c2_bump(double r) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double s = 1.0 - r * r;
  return s * s * s;
}

double TensorBump::operator()(double t, double x) const {
  return amplitude * c2_bump((t - t_center) / t_radius) * c2_bump((x - x_center) / x_radius);
}

std::vector<TensorBump> default_psi_family(double t_end) {
  return {
      {0.5 * t_end, 0.25 * t_end, 0.0, 1.5, 1.0},
      {0.4 * t_end, 0.15 * t_end, -1.0, 1.0, 1.0},
      {0.6 * t_end, 0.15 * t_end, 1.0, 0.75, 1.0},
  };
}

SpaceTimeField divided_difference_b(const SpaceTimeField& u, const SpaceTimeField& v,
                                    const FluxModel& model, double tol) {
  if (!u.same_layout(v)) throw GridMismatchError("divided_difference_b: layouts differ");
  SpaceTimeField b(u.grid(), {u.times().begin(), u.times().end()});
  for (std::size_t k = 0; k < u.time_count(); ++k) {
    for (std::size_t i = 0; i < u.cell_count(); ++i) {
      const double a = u.at(k, i);
      const double c = v.at(k, i);
      b.at(k, i) = std::abs(a - c) < tol * (1.0 + std::abs(a) + std::abs(c))
                       ? model.f_prime(0.5 * (a + c))
                       : (model.f(a) - model.f(c)) / (a - c);
    }
  }
  return b;
}

SpaceTimeField mollify_b(const SpaceTimeField& b, double moll_width) {
  const double dx = b.grid().dx();
  if (moll_width < dx) {
    std::ostringstream msg;
    msg << "mollify_b: moll_width = " << moll_width << " is below dx = " << dx;
    throw ConfigError(msg.str());
  }
  const std::size_t n = b.cell_count();
  const std::size_t m = b.time_count();
  const auto reach = static_cast<std::ptrdiff_t>(std::floor(moll_width / dx));
  std::vector<double> kx(static_cast<std::size_t>(2 * reach + 1));
  for (std::ptrdiff_t j = -reach; j <= reach; ++j) {
    kx[static_cast<std::size_t>(j + reach)] = c2_bump(j * dx / moll_width);
  }

  SpaceTimeField xs(b.grid(), {b.times().begin(), b.times().end()});
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0, mass = 0.0;
      for (std::ptrdiff_t j = -reach; j <= reach; ++j) {
        const std::ptrdiff_t p = static_cast<std::ptrdiff_t>(i) + j;
        if (p < 0 || p >= static_cast<std::ptrdiff_t>(n)) continue;
        const double w = kx[static_cast<std::size_t>(j + reach)];
        acc += w * b.at(k, static_cast<std::size_t>(p));
        mass += w;
      }
      xs.at(k, i) = acc / mass;
    }
  }

  // Time direction: kernel samples weighted by the local time spacing.
  const auto t = b.times();
  std::vector<double> spacing(m, 1.0);
  if (m > 1) {
    for (std::size_t k = 0; k < m; ++k) {
      const double lo = t[k > 0 ? k - 1 : k];
      const double hi = t[k + 1 < m ? k + 1 : k];
      spacing[k] = 0.5 * (hi - lo);
    }
  }
  SpaceTimeField out(b.grid(), {t.begin(), t.end()});
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<std::pair<std::size_t, double>> weights;
    double mass = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      const double w = c2_bump((t[q] - t[k]) / moll_width) * spacing[q];
      if (w > 0.0) {
        weights.emplace_back(q, w);
        mass += w;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (const auto& [q, w] : weights) acc += w * xs.at(q, i);
      out.at(k, i) = acc / mass;
    }
  }
  return out;
}

void validate(const AdjointProblem& p) {
  const double L = p.b.grid().half_width();
  auto fail = [](const std::string& what) { throw ConfigError("adjoint problem: " + what); };
  if (p.b.time_count() == 0) fail("coefficient b has no time rows");
  if (!p.psi) fail("psi is not set");
  if (!(p.tau > 0.0) || p.tau > p.b.times().back() + 1e-12 * p.tau) {
    fail("tau must lie in (0, last coefficient time]");
  }
  if (!(0.0 < p.psi_t_lo && p.psi_t_lo < p.psi_t_hi && p.psi_t_hi < p.tau)) {
    fail("psi support must lie strictly inside (0, tau)");
  }
  if (!(-L < p.psi_x_lo && p.psi_x_lo < p.psi_x_hi && p.psi_x_hi < L)) {
    fail("psi support must lie strictly inside (-L, L)");
  }
  if (!(p.epsilon_adj > 0.0)) fail("epsilon_adj must be > 0");
  if (p.moll_width < 0.0) fail("moll_width must be >= 0");
  if (!(p.cfl > 0.0 && p.cfl <= 1.0)) fail("cfl must lie in (0, 1]");
  for (std::size_t k = 0; k < p.b.time_count(); ++k) {
    for (double v : p.b.row(k)) {
      if (!std::isfinite(v)) fail("coefficient b is not finite");
    }
  }
}

Field tail_primitive(const Field& phi) {
  Field Phi(phi.grid());
  const std::size_t n = phi.size();
  const double dx = phi.dx();
  Phi[n - 1] = 0.5 * dx * phi[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) Phi[i] = Phi[i + 1] + 0.5 * dx * (phi[i] + phi[i + 1]);
  return Phi;
}

namespace {

// Reversed-time right-hand side: w_s = beta w_x - psi(tau - s) + gamma Phi(w) + eps w_xx,
// with zero ghost cells and upwinding on the sign of beta.
Field reversed_rhs(const Field& w, const Field& beta, double t, const AdjointProblem& p) {
  const std::size_t n = w.size();
  const double dx = w.dx();
  auto at = [&](std::ptrdiff_t i) {
    return i < 0 || i >= static_cast<std::ptrdiff_t>(n) ? 0.0 : w[static_cast<std::size_t>(i)];
  };
  const Field Q = tail_primitive(w);
  const bool active = t >= p.psi_t_lo && t <= p.psi_t_hi;
  Field rhs(w.grid());
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::ptrdiff_t>(i);
    const double transport = beta[i] >= 0.0 ? beta[i] * (at(k + 1) - w[i]) / dx
                                             : beta[i] * (w[i] - at(k - 1)) / dx;
    const double diffusion = p.epsilon_adj * (at(k + 1) - 2.0 * w[i] + at(k - 1)) / (dx * dx);
    const double source = active ? p.psi(t, w.grid().x(i)) : 0.0;
    rhs[i] = transport + diffusion - source + p.gamma * Q[i];
  }
  const std::size_t bad = rhs.first_non_finite();
  if (bad != n) throw BlowUpError("adjoint solve: non-finite right-hand side", t, bad);
  return rhs;
}

}  // namespace

AdjointSolution adjoint_solve_backward(const AdjointProblem& p) {
  validate(p);
  const Grid1D& grid = p.b.grid();
  const std::vector<double> times(p.b.times().begin(), p.b.times().end());
  AdjointSolution sol{SpaceTimeField(grid, times), SpaceTimeField(grid, times),
                      p.moll_width > 0.0 ? mollify_b(p.b, p.moll_width) : p.b, 0};
  const double bmax = sol.b_eps.linf();
  const double dx = grid.dx();
  const double dt_max =
      p.cfl / (bmax / dx + 2.0 * p.epsilon_adj / (dx * dx) + std::abs(p.gamma) * p.b.grid().length());

  // Output rows in decreasing t, i.e. increasing reversed time s = tau - t.
  std::vector<std::size_t> rows;
  for (std::size_t k = times.size(); k-- > 0;) {
    if (times[k] < p.tau) rows.push_back(k);
  }

  Field w(grid);
  double s = 0.0;
  const double s_tol = 1e-12 * p.tau;
  for (std::size_t k : rows) {
    const double s_target = p.tau - times[k];
    while (s < s_target - s_tol) {
      const double dt = std::min(dt_max, s_target - s);
      const Field beta0 = sol.b_eps.interpolate(p.tau - s);
      const Field beta1 = sol.b_eps.interpolate(p.tau - s - dt);
      const Field r0 = reversed_rhs(w, beta0, p.tau - s, p);
      Field stage = w;
      for (std::size_t i = 0; i < w.size(); ++i) stage[i] += dt * r0[i];
      const Field r1 = reversed_rhs(stage, beta1, p.tau - s - dt, p);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.5 * (w[i] + stage[i] + dt * r1[i]);
      s = (s_target - (s + dt) <= s_tol) ? s_target : s + dt;
      ++sol.steps;
    }
    sol.phi.set_row(k, w);
    sol.Phi.set_row(k, tail_primitive(w));
  }
  return sol;
}

DualityReport duality_residual(const SpaceTimeField& u, const SpaceTimeField& v,
                               const SpaceTimeSource& psi, const AdjointSolution& adj,
                               const SpaceTimeField& b, double gamma, double epsilon_adj,
                               double tol) {
  if (!u.same_layout(v) || !u.same_layout(adj.phi) || !u.same_layout(b) ||
      !u.same_layout(adj.b_eps)) {
    throw GridMismatchError("duality_residual: space-time layouts differ");
  }
  const std::size_t n = u.cell_count();
  const std::size_t m = u.time_count();
  const auto t = u.times();
  const double dx = u.grid().dx();
  const auto& phi = adj.phi;

  DualityReport r;
  double phi_max = phi.linf();
  double support = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double wt = 0.0;  // trapezoid weight in time
    if (m > 1) {
      if (k > 0) wt += 0.5 * (t[k] - t[k - 1]);
      if (k + 1 < m) wt += 0.5 * (t[k + 1] - t[k]);
    }
    const std::size_t k0 = k > 0 ? k - 1 : k;
    const std::size_t k1 = k + 1 < m ? k + 1 : k;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = phi.at(k, i);
      const double pl = i > 0 ? phi.at(k, i - 1) : 0.0;
      const double pr = i + 1 < n ? phi.at(k, i + 1) : 0.0;
      const double phi_t = k1 > k0 ? (phi.at(k1, i) - phi.at(k0, i)) / (t[k1] - t[k0]) : 0.0;
      const double phi_x = (pr - pl) / (2.0 * dx);
      const double phi_xx = (pr - 2.0 * p + pl) / (dx * dx);
      const double bb = b.at(k, i);
      const double be = adj.b_eps.at(k, i);
      const double Phi = adj.Phi.at(k, i);
      const double w = u.at(k, i) - v.at(k, i);
      const double weight = wt * dx;
      const double psi_exact = psi(t[k], u.grid().x(i));
      const double psi_eps = phi_t + be * phi_x + gamma * Phi + epsilon_adj * phi_xx;

      r.direct += weight * w * psi_exact;
      r.exact_pairing += weight * w * (phi_t + bb * phi_x + gamma * Phi);
      r.mollification += weight * w * (be - bb) * phi_x;
      r.viscosity += weight * w * epsilon_adj * phi_xx;
      r.source_approximation += weight * w * (psi_exact - psi_eps);
      if (phi_max > 0.0 && std::abs(p) > 1e-12 * phi_max) support += weight;
    }
  }
  const double signed_sum =
      r.exact_pairing + r.mollification + r.viscosity + r.source_approximation;
  r.ledger_sum = std::abs(r.exact_pairing) + std::abs(r.mollification) + std::abs(r.viscosity) +
                 std::abs(r.source_approximation);
  r.closure_defect = std::abs(r.direct - signed_sum);
  r.support_times_eps = epsilon_adj * support;
  r.pass = std::isfinite(r.ledger_sum) && std::abs(r.direct) <= r.ledger_sum + tol &&
           r.closure_defect <= 1e-9 * (std::abs(r.direct) + r.ledger_sum) + tol;
  return r;
}

}  // namespace ohsolve
