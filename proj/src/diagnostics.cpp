#include "ohsolve/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "ohsolve/errors.hpp"

namespace ohsolve {

std::string_view to_string(JumpEvent::Kind k) {
  return k == JumpEvent::Kind::AdmissibleDown ? "admissible-down" : "inadmissible-up";
}

double oleinik_quotient(const Field& u) {
  double sup = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < u.size(); ++i) sup = std::max(sup, u[i + 1] - u[i]);
  return sup / u.dx();
}

double fit_oleinik_constant(std::span<const double> times, std::span<const double> sups) {
  if (times.empty() || times.size() != sups.size()) {
    throw Error("fit_oleinik_constant: empty or mismatched series");
  }
  double c = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] > 0.0)) throw Error("fit_oleinik_constant: times must be positive");
    c = std::max(c, sups[k] / (1.0 / times[k] + 1.0));
  }
  return c;
}

namespace {

// Entropy flux differences (Q_{i+1/2} - Q_{i-1/2}) / dx with q(0) = 0 on the
// outer faces, matching the zero far-field flux of the solver.
std::vector<double> entropy_flux_divergence(const Field& u, const EntropyPair& pair,
                                            const FluxModel& model, FluxScheme scheme,
                                            double alpha) {
  const std::size_t n = u.size();
  std::vector<double> Q(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    Q[i] = numerical_entropy_flux(u[i - 1], u[i], pair, model, scheme, alpha);
  }
  std::vector<double> div(n);
  for (std::size_t i = 0; i < n; ++i) div[i] = (Q[i + 1] - Q[i]) / u.dx();
  return div;
}

// D2[eta(u)] with no-flux outer faces, the discrete diffusion the solver uses.
std::vector<double> entropy_laplacian(const Field& u, const EntropyPair& pair) {
  const std::size_t n = u.size();
  std::vector<double> e(n), lap(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = pair.eta(u[i]);
  const double inv = 1.0 / (u.dx() * u.dx());
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? e[i - 1] - e[i] : 0.0;
    const double right = i + 1 < n ? e[i + 1] - e[i] : 0.0;
    lap[i] = (left + right) * inv;
  }
  return lap;
}

}  // namespace

Field entropy_residual(const Field& u_prev, const Field& u_next, const Field& P, double dt,
                       const EntropyPair& pair, const FluxModel& model, FluxScheme scheme,
                       double gamma, double alpha) {
  require_same_grid(u_prev, u_next, "entropy_residual");
  const auto div = entropy_flux_divergence(u_prev, pair, model, scheme, alpha);
  Field r(u_prev.grid());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = (pair.eta(u_next[i]) - pair.eta(u_prev[i])) / dt + div[i] -
           gamma * pair.eta_prime(u_prev[i]) * P[i];
  }
  return r;
}

Field entropy_residual_ssprk2(const StepView& step, const EntropyPair& pair,
                              const FluxModel& model, FluxScheme scheme, double gamma,
                              double epsilon, DiffusionScheme diffusion) {
  const Field& u = step.prev.u;
  const Field& w = step.u_stage;
  const auto div_u = entropy_flux_divergence(u, pair, model, scheme, step.alpha_prev);
  const auto div_w = entropy_flux_divergence(w, pair, model, scheme, step.alpha_stage);
  const double dt = step.next.dt;
  const bool split = epsilon > 0.0 && diffusion == DiffusionScheme::Implicit;
  if (split && step.u_pre_diffusion == nullptr) {
    throw Error("entropy_residual_ssprk2: implicit diffusion needs the pre-diffusion state");
  }
  Field r(u.grid());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double source = pair.eta_prime(u[i]) * step.prev.P[i] +
                          pair.eta_prime(w[i]) * step.P_stage[i];
    r[i] = (pair.eta(step.next.u[i]) - pair.eta(u[i])) / dt + 0.5 * (div_u[i] + div_w[i]) -
           0.5 * gamma * source;
  }
  if (split) {
    const Field mid = 0.5 * (*step.u_pre_diffusion + step.next.u);
    const auto lap = entropy_laplacian(mid, pair);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= epsilon * lap[i];
  } else if (epsilon > 0.0) {
    const auto lap_a = entropy_laplacian(u, pair);
    const auto lap_b = entropy_laplacian(w, pair);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= 0.5 * epsilon * (lap_a[i] + lap_b[i]);
  }
  return r;
}

double positive_part_max(const Field& r) {
  double m = 0.0;
  for (double v : r.values()) m = std::max(m, v);
  return m;
}

double default_jump_threshold(const Field& u, double oleinik_slope) {
  const auto [lo, hi] = std::minmax_element(u.values().begin(), u.values().end());
  return std::max(0.25 * (*hi - *lo), 20.0 * u.dx() * std::max(0.0, oleinik_slope));
}

std::vector<JumpEvent> detect_jumps(const Field& u, double jump_threshold, double t) {
  constexpr std::size_t window = 3;
  std::vector<JumpEvent> events;
  const std::size_t n = u.size();
  auto sign = [&](std::size_t i) {
    const double d = u[i + 1] - u[i];
    return d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
  };

  std::size_t start = 0;
  while (start + 1 < n) {
    const int s = sign(start);
    std::size_t end = start + 1;  // run covers cells [start, end]
    while (end + 1 < n && s != 0 && sign(end) == s) ++end;
    if (s != 0) {
      double best = 0.0;
      std::size_t best_i = start;
      for (std::size_t i = start; i < end; ++i) {
        const std::size_t j = std::min(i + window, end);
        const double change = std::abs(u[j] - u[i]);
        if (change > best) {
          best = change;
          best_i = i;
        }
        if (j == end) break;
      }
      if (best >= jump_threshold && best > 0.0) {
        const std::size_t j = std::min(best_i + window, end);
        std::size_t steep = best_i;
        for (std::size_t i = best_i; i < j; ++i) {
          if (std::abs(u[i + 1] - u[i]) > std::abs(u[steep + 1] - u[steep])) steep = i;
        }
        JumpEvent e;
        e.t = t;
        e.x = u.grid().right_face(steep);
        e.u_left = u[best_i];
        e.u_right = u[j];
        e.classification =
            e.u_left > e.u_right ? JumpEvent::Kind::AdmissibleDown : JumpEvent::Kind::InadmissibleUp;
        events.push_back(e);
      }
    }
    start = end;
  }
  return events;
}

std::vector<JumpEvent> persistent_jumps(std::span<const JumpEvent> events,
                                        std::span<const double> scan_times, int min_scans,
                                        double max_shift) {
  struct Node {
    const JumpEvent* event;
    int length;
    bool continued;
  };
  std::vector<std::vector<Node>> scans(scan_times.size());
  for (const JumpEvent& e : events) {
    const auto it = std::lower_bound(scan_times.begin(), scan_times.end(), e.t);
    if (it == scan_times.end() || *it != e.t) continue;
    scans[static_cast<std::size_t>(it - scan_times.begin())].push_back({&e, 1, false});
  }
  for (std::size_t k = 1; k < scans.size(); ++k) {
    for (Node& node : scans[k]) {
      Node* pred = nullptr;
      for (Node& p : scans[k - 1]) {
        if (p.event->classification != node.event->classification) continue;
        const double shift = std::abs(p.event->x - node.event->x);
        if (shift > max_shift) continue;
        if (!pred || shift < std::abs(pred->event->x - node.event->x)) pred = &p;
      }
      if (pred) {
        node.length = pred->length + 1;
        pred->continued = true;
      }
    }
  }
  std::vector<JumpEvent> out;
  for (const auto& scan : scans) {
    for (const Node& node : scan) {
      if (!node.continued && node.length >= min_scans) out.push_back(*node.event);
    }
  }
  return out;
}

LedgerCheck energy_ledger_check(const DiagnosticsReport& report, const SolverConfig& config) {
  LedgerCheck check;
  if (report.energy_ledger.empty()) return check;
  const auto& e = report.energy_ledger;
  const double tol = config.tolerances.energy;
  const double scale = e.front() > 0.0 ? e.front() : 1.0;
  check.final_relative_change = (e.back() - e.front()) / scale;
  check.dissipation_gap = e.front() - e.back();
  check.max_relative_excess = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    check.max_relative_excess = std::max(check.max_relative_excess, (e[k] - e.front()) / scale);
    if (k > 0) {
      check.max_step_increase = std::max(check.max_step_increase, (e[k] - e[k - 1]) / scale);
    }
  }
  check.pass = check.max_relative_excess <= tol && check.max_step_increase <= tol;
  return check;
}

DiagnosticsCollector::DiagnosticsCollector(const FluxModel& model, CollectorOptions options)
    : model_(model), options_(std::move(options)) {
  for (const auto& pair : options_.entropies) report_.entropy_residual_by_pair[pair.name];
}

void DiagnosticsCollector::record_state(const StepRecord& state) {
  report_.t.push_back(state.t);
  report_.mass.push_back(integral(state.u));
  report_.p_mass.push_back(integral(state.P));
  report_.l2_u.push_back(l2_norm(state.u));
  report_.l2_P.push_back(l2_norm(state.P));
  report_.linf_u.push_back(linf_norm(state.u));
  report_.linf_P.push_back(linf_norm(state.P));
  report_.energy_ledger.push_back(l2_norm_squared(state.u) +
                                  2.0 * options_.epsilon * dissipated_);
  report_.oleinik_sup.push_back(oleinik_quotient(state.u));
}

void DiagnosticsCollector::on_start(const StepRecord& initial) {
  record_state(initial);
  report_.entropy_residual_max.push_back(0.0);
  for (auto& [name, series] : report_.entropy_residual_by_pair) series.push_back(0.0);
  next_scan_ = initial.t;
}

void DiagnosticsCollector::on_step(const StepView& step) {
  const Field& a = step.prev.u;
  const Field& b = step.next.u;
  double grad = 0.0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const double d = 0.5 * ((a[i + 1] + b[i + 1]) - (a[i] + b[i])) / a.dx();
    grad += d * d * a.dx();
  }
  dissipated_ += step.next.dt * grad;
  record_state(step.next);

  for (std::size_t k = 0; k < options_.entropies.size(); ++k) {
    const auto& pair = options_.entropies[k];
    const double r = positive_part_max(
        entropy_residual_ssprk2(step, pair, model_, options_.scheme, options_.gamma,
                                options_.epsilon, options_.diffusion));
    report_.entropy_residual_by_pair[pair.name].push_back(r);
    if (k == 0) report_.entropy_residual_max.push_back(r);
  }
  if (options_.entropies.empty()) report_.entropy_residual_max.push_back(0.0);

  if (options_.scan_interval > 0.0 && step.next.t >= next_scan_) on_snapshot(step.next);
}

void DiagnosticsCollector::on_snapshot(const StepRecord& state) {
  if (!report_.jump_scan_times.empty() && report_.jump_scan_times.back() == state.t) return;
  // Slope floor uses the unit-constant Oleinik envelope 1/t + 1.
  const double slope = state.t > 0.0 ? 1.0 / state.t + 1.0 : 0.0;
  const double threshold = options_.jump_threshold > 0.0
                               ? options_.jump_threshold
                               : default_jump_threshold(state.u, slope);
  report_.jump_scan_times.push_back(state.t);
  if (threshold > 0.0) {
    for (const JumpEvent& e : detect_jumps(state.u, threshold, state.t)) {
      report_.jump_events.push_back(e);
    }
  }
  if (options_.scan_interval > 0.0) {
    while (next_scan_ <= state.t) next_scan_ += options_.scan_interval;
  }
}

}  // namespace ohsolve
