#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "ohsolve/errors.hpp"
#include "ohsolve/harness.hpp"

using namespace ohsolve;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ohsolve_test_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string config_error(const std::string& text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

int cli(const std::string& args) {
  const std::string cmd = std::string(OHSOLVE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("minimal config takes the defaults") {
  const ExperimentPlan p = parse_config_text(R"({"t_end": 1.0, "N": 1024, "L": 8.0, "gamma": 1.0})");
  CHECK(p.config.epsilon == 0.0);
  CHECK(p.config.mode == Mode::DirectPrimitive);
  CHECK(p.config.flux_scheme == FluxScheme::Godunov);
  CHECK(p.config.cfl == 0.4);
  CHECK(p.config.mean_correction);
  CHECK(p.flux == "burgers");
  CHECK(p.profile.kind == "hermite-bump");
  CHECK(p.axis == SweepAxis::None);
}

TEST_CASE("config errors name the problem") {
  CHECK(config_error(R"({"mode": "delta-elliptic", "delta": 0})").find("delta") != std::string::npos);
  CHECK(config_error(R"({"epsilonn": 0.1})").find("epsilonn") != std::string::npos);
  CHECK(config_error("{\n\"N\": 64,\n\"L\" 8\n}").find("line 3") != std::string::npos);
  CHECK(config_error(R"({"flux_scheme": "roe"})").find("flux_scheme") != std::string::npos);
  CHECK(config_error(R"({"N": 2})").find("N") != std::string::npos);
  CHECK(config_error(R"({"sweep": "grid", "sweep_values": [256, 256]})").find("monotone") != std::string::npos);
  CHECK(config_error(R"({"tolerances": {"mass": 1}})").find("mass") != std::string::npos);
  CHECK_FALSE(config_error(R"({"cfl": 1.5})").empty());
}

TEST_CASE("plan json round-trips") {
  const ExperimentPlan p = parse_config_text(
      R"({"N": 512, "gamma": -0.5, "epsilon": 1e-3, "flux_scheme": "lax-friedrichs",
          "initial_data": "riemann", "riemann_left": 0.5, "riemann_right": -0.25,
          "sweep": "epsilon", "sweep_values": [1e-2, 1e-3], "tolerances": {"energy": 1e-5}})");
  const Json j = plan_to_json(p);
  CHECK(plan_to_json(parse_config_json(j)) == j);
  CHECK(j.at("tolerances").at("energy") == 1e-5);
  CHECK(expand_sweep(p).size() == 2);
  CHECK(expand_sweep(p)[1].config.epsilon == 1e-3);
}

TEST_CASE("zero initial data passes every check") {
  const fs::path dir = scratch("zero");
  ExperimentPlan p = parse_config_text(R"({"N": 128, "initial_data": "zero", "gamma": 1.0})");
  p.output_dir = dir;
  const ExperimentOutcome out = run_experiment(p);
  REQUIRE(out.jobs.size() == 1);
  CHECK(out.pass());
  for (const CheckResult& c : out.jobs[0].checks) {
    INFO(c.name);
    CHECK(c.pass);
  }
  CHECK(fs::exists(dir / "run" / "series.csv"));
  CHECK(slurp(dir / "status").rfind("complete", 0) == 0);
}

TEST_CASE("outputs are byte-identical across runs") {
  const std::string text = R"({"N": 256, "t_end": 0.5, "gamma": 1.0, "epsilon": 1e-3})";
  ExperimentPlan a = parse_config_text(text), b = a;
  a.output_dir = scratch("det_a");
  b.output_dir = scratch("det_b");
  run_experiment(a);
  run_experiment(b);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a.output_dir / "run")) {
    const fs::path other = b.output_dir / "run" / entry.path().filename();
    REQUIRE(fs::exists(other));
    std::string x = slurp(entry.path()), y = slurp(other);
    if (entry.path().filename() == "report.json") {
      // The output directory is part of the recorded config.
      const Json jx = Json::parse(x), jy = Json::parse(y);
      Json cx = jx, cy = jy;
      cx["config"].erase("output_dir");
      cy["config"].erase("output_dir");
      CHECK(cx.dump() == cy.dump());
    } else {
      CHECK(x == y);
    }
    ++compared;
  }
  CHECK(compared >= 3);
}

TEST_CASE("series csv header and precision") {
  DiagnosticsReport r;
  r.t = {0.0};
  r.mass = {1.0 / 3.0};
  r.p_mass = {0.0};
  r.l2_u = {0.0};
  r.l2_P = {0.0};
  r.linf_u = {0.0};
  r.linf_P = {0.0};
  r.energy_ledger = {0.0};
  r.oleinik_sup = {0.0};
  r.entropy_residual_max = {0.0};
  const fs::path dir = scratch("csv");
  write_series_csv(dir / "s.csv", r);
  const std::string s = slurp(dir / "s.csv");
  CHECK(s.rfind("t,mass,p_mass,l2_u,l2_P,linf_u,linf_P,energy_ledger,oleinik_sup,entropy_residual_max\n", 0) == 0);
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("grid convergence sweep") {
  ExperimentPlan p = parse_config_text(
      R"({"sweep": "grid", "sweep_values": [256, 512, 1024], "gamma": 1.0, "flux_scheme": "lax-friedrichs"})");
  p.output_dir = scratch("grid");
  const ExperimentOutcome out = run_experiment(p);
  REQUIRE(out.convergence.has_value());
  CHECK(out.convergence->ratios.size() == 1);
  CHECK(out.convergence->ratios[0] >= 1.5);
  CHECK(out.pass());
  CHECK(fs::exists(p.output_dir / "convergence.json"));
  CHECK(fs::exists(p.output_dir / "grid_N1024" / "report.json"));
}

TEST_CASE("thread cap from the environment") {
  ExperimentPlan p;
  p.threads = 8;
  ::setenv("OH_SOLVER_THREADS", "2", 1);
  CHECK(effective_threads(p, 10) == 2);
  CHECK(effective_threads(p, 1) == 1);
  ::unsetenv("OH_SOLVER_THREADS");
  CHECK(effective_threads(p, 10) == 8);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch("cli");
  const std::string out = " -o " + (dir / "out").string();
  const fs::path good = write_config(dir, "good.json", R"({"N": 256, "t_end": 0.25, "gamma": 1.0})");
  const fs::path typo = write_config(dir, "typo.json", R"({"epsilonn": 0.1})");
  const fs::path broken = write_config(dir, "broken.json", "{\"N\": ");
  const fs::path bare = write_config(dir, "bare.json", R"({"initial_data": "riemann"})");

  CHECK(cli("run " + good.string() + out + " -q") == 0);
  CHECK(cli("run -c " + good.string() + out) == 0);
  CHECK(cli("run " + typo.string() + out) == 2);
  CHECK(cli("run " + broken.string() + out) == 2);
  CHECK(cli("run " + (dir / "missing.json").string()) == 2);
  CHECK(cli("validate-ic " + good.string()) == 0);
  CHECK(cli("--json validate-ic " + good.string()) == 0);
  CHECK(cli("riemann --left 1 --right -1 --N 256 --t-end 0.25" + out) == 0);
  CHECK(cli("riemann --left -1 --right 1 --N 256 --t-end 0.25 --scheme roe" + out) == 2);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("") == 2);
  CHECK(cli("validate-ic " + bare.string()) == 0);
  // The compensating block no longer fits inside the domain.
  const fs::path wide = write_config(dir, "wide.json", R"({"initial_data": "riemann", "riemann_width": 100})");
  CHECK(cli("validate-ic " + wide.string()) == 2);
  // A truncated bump carries mass: the data is rejected, not misconfigured.
  const fs::path truncated = write_config(dir, "truncated.json", R"({"L": 1.5, "N": 256})");
  CHECK(cli("validate-ic " + truncated.string()) == 1);
  CHECK(cli("run " + truncated.string() + out) == 1);
}
