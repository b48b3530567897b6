// Command-line front end: runs experiments from JSON configs and prints a
// pass/fail summary. Exit codes: 0 pass, 1 failed check or rejected data,
// 2 configuration error.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ohsolve/errors.hpp"
#include "ohsolve/harness.hpp"

using namespace ohsolve;

namespace {

struct Globals {
  bool quiet = false;
  bool json = false;
};

struct Overrides {
  std::string output;
  int threads = -1;
};

ExperimentPlan load(const std::string& path, const Overrides& o) {
  ExperimentPlan plan = path.empty() ? parse_config_json(Json::object()) : parse_config(path);
  if (!o.output.empty()) plan.output_dir = o.output;
  if (o.threads >= 0) plan.threads = o.threads;
  return plan;
}

void print_checks(const JobOutcome& job) {
  std::printf("[%s] %s\n", job.pass() ? "PASS" : "FAIL", job.directory.string().c_str());
  if (job.error) std::printf("  error: %s\n", job.error->c_str());
  for (const CheckResult& c : job.checks) {
    std::printf("  %-4s %-36s measured=%.6g tol=%.6g\n", c.pass ? "ok" : "FAIL", c.name.c_str(),
                c.measured, c.tolerance);
  }
}

Json outcome_json(const ExperimentOutcome& out) {
  Json j;
  Json jobs = Json::array();
  for (const JobOutcome& job : out.jobs) {
    Json checks = Json::array();
    for (const auto& c : job.checks) checks.push_back(to_json(c));
    Json e = {{"directory", job.directory.string()}, {"pass", job.pass()}, {"checks", checks}};
    if (job.error) e["error"] = *job.error;
    jobs.push_back(e);
  }
  j["jobs"] = jobs;
  if (out.convergence) j["convergence"] = to_json(*out.convergence);
  j["pass"] = out.pass();
  return j;
}

int report_experiment(const ExperimentOutcome& out, const Globals& g) {
  if (g.json) {
    std::cout << outcome_json(out).dump(2) << '\n';
  } else if (!g.quiet) {
    for (const JobOutcome& job : out.jobs) print_checks(job);
    if (out.convergence) {
      const ConvergenceSummary& s = *out.convergence;
      std::printf("[%s] convergence: %s\n", s.pass ? "PASS" : "FAIL", s.criterion.c_str());
      for (std::size_t k = 0; k < s.l1_differences.size(); ++k) {
        std::printf("  L1 difference %zu: %.6g\n", k, s.l1_differences[k]);
      }
      for (std::size_t k = 0; k < s.ratios.size(); ++k) {
        std::printf("  ratio %.4g  order %.4g\n", s.ratios[k], s.orders[k]);
      }
    }
  }
  return out.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ostrovsky-Hunter finite-volume solver and verification harness"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_flag("--quiet,-q", g.quiet, "Print nothing; use the exit code");
  app.add_flag("--json", g.json, "Print a machine-readable summary");

  std::string config;
  Overrides o;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("config,--config,-c", config, "JSON experiment config");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--output,-o", o.output, "Output directory (overrides output_dir)");
    sub->add_option("--threads", o.threads, "Parallel jobs (0: all cores)")->check(CLI::NonNegativeNumber);
  };

  auto* run = app.add_subcommand("run", "Run one experiment (every job of its sweep)");
  add_common(run, true);

  auto* conv = app.add_subcommand("convergence", "Run a sweep and report convergence");
  add_common(conv, true);
  std::string sweep;
  std::vector<double> values;
  conv->add_option("--sweep", sweep, "Sweep axis: grid, epsilon or delta");
  conv->add_option("--values", values, "Sweep values");

  auto* adj = app.add_subcommand("adjoint-check", "Pair two runs against the adjoint ledger");
  add_common(adj, true);
  std::string compare;
  adj->add_option("--compare", compare, "Flux scheme of the second run");

  auto* vic = app.add_subcommand("validate-ic", "Validate the initial data of a config");
  vic->add_option("config,--config,-c", config, "JSON experiment config")
      ->required()
      ->check(CLI::ExistingFile);

  auto* rp = app.add_subcommand("riemann", "Riemann problem for the Burgers flux");
  double left = 0.0, right = 0.0, t_end = 1.0, gamma = 0.0;
  std::size_t cells = 2048;
  std::string scheme = "godunov";
  bool relax = false;
  rp->add_option("--left", left, "Left state")->required();
  rp->add_option("--right", right, "Right state")->required();
  rp->add_flag("--relax-mass", relax, "Use the bare profile without mass compensation");
  rp->add_option("--N", cells, "Cell count")->capture_default_str();
  rp->add_option("--t-end", t_end, "Final time")->capture_default_str();
  rp->add_option("--gamma", gamma, "Rotation coefficient")->capture_default_str();
  rp->add_option("--scheme", scheme, "godunov or lax-friedrichs")->capture_default_str();
  rp->add_option("--output,-o", o.output, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      return report_experiment(run_experiment(load(config, o)), g);
    }
    if (conv->parsed()) {
      ExperimentPlan plan = load(config, o);
      if (!sweep.empty() || !values.empty()) {
        Json j = plan_to_json(plan);
        if (!sweep.empty()) j["sweep"] = sweep;
        if (!values.empty()) j["sweep_values"] = values;
        plan = parse_config_json(j);
      }
      if (plan.axis == SweepAxis::None) throw ConfigError("convergence: config has no sweep axis");
      return report_experiment(run_experiment(plan), g);
    }
    if (adj->parsed()) {
      ExperimentPlan plan = load(config, o);
      if (!compare.empty()) {
        Json j = plan_to_json(plan);
        j["compare_scheme"] = compare;
        plan = parse_config_json(j);
      }
      const AdjointCheckOutcome out = run_adjoint_check(plan);
      if (g.json) {
        Json j;
        Json reports = Json::array();
        for (const auto& r : out.reports) reports.push_back(to_json(r));
        j["identical_runs"] = out.identical_runs;
        j["pairings"] = reports;
        j["pass"] = out.pass;
        std::cout << j.dump(2) << '\n';
      } else if (!g.quiet) {
        for (const DualityReport& r : out.reports) {
          std::printf("[%s] direct=%.6g ledger=%.6g closure=%.3g\n", r.pass ? "PASS" : "FAIL",
                      r.direct, r.ledger_sum, r.closure_defect);
        }
      }
      return out.pass ? 0 : 1;
    }
    if (vic->parsed()) {
      const ExperimentPlan plan = load(config, o);
      const InitialData init = make_initial_data(plan, Grid1D(plan.half_width, plan.cells));
      const double l2 = init.l2_P0;
      if (g.json) {
        std::cout << Json{{"provenance", init.provenance}, {"mass", init.mass},
                          {"p_mass", init.p_mass},         {"l2_P0", l2},
                          {"relaxed", init.relaxed},       {"warnings", init.warnings},
                          {"pass", true}}
                         .dump(2)
                  << '\n';
      } else if (!g.quiet) {
        std::printf("%s\n  int u0 = %.6g\n  int P0 = %.6g\n  |P0|_L2 = %.6g\n",
                    init.provenance.c_str(), init.mass, init.p_mass, l2);
        for (const auto& w : init.warnings) std::printf("  warning: %s\n", w.c_str());
      }
      return 0;
    }
    if (rp->parsed()) {
      Json j = Json::object();
      j["N"] = cells;
      j["t_end"] = t_end;
      j["gamma"] = gamma;
      j["flux_scheme"] = scheme;
      j["initial_data"] = "riemann";
      j["riemann_left"] = left;
      j["riemann_right"] = right;
      j["relax_mass"] = relax;
      j["output_dir"] = o.output.empty() ? std::string("ohsolve-riemann") : o.output;
      const ExperimentOutcome out = run_experiment(parse_config_json(j));
      const int code = report_experiment(out, g);
      if (left < right && !g.quiet && !g.json) {
        const bool clean = !out.jobs.empty() && std::any_of(out.jobs[0].checks.begin(), out.jobs[0].checks.end(),
                                                            [](const CheckResult& c) {
                                                              return c.name == "shock_admissibility" && c.pass;
                                                            });
        std::printf("note: the initial up-jump is inadmissible; the solution opens into a rarefaction%s\n",
                    clean ? " and no persistent up-jump was detected" : "");
      }
      return code;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const RejectedInitialDataError& e) {
    std::fprintf(stderr, "rejected initial data: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
