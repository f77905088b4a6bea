#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "nozzleflow/config.hpp"
#include "nozzleflow/entropy.hpp"
#include "nozzleflow/errors.hpp"
#include "nozzleflow/harness.hpp"

namespace fs = std::filesystem;
using namespace nozzleflow;

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw ConfigError("cannot write " + p.string());
  return out;
}

void print_verdicts(std::ostream& os, const std::vector<VerdictLine>& v) {
  for (const auto& l : v)
    os << (l.pass ? "PASS " : "FAIL ") << l.name << " value=" << l.value << " (" << l.detail << ")\n";
}

int cmd_run(const std::string& path) {
  const RunConfig cfg = load_config(path);
  const NozzleProfile profile = profile_for(cfg);
  const ViscositySchedule sched = schedule_for(cfg, profile);
  RunSetup s = setup_run(cfg, sched, cfg.eps);
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);

  const Solver solver(s.gas, s.profile, s.eps, s.bc, s.grid, SolverOptions{cfg.cfl, {}});
  const RunResult res = solver.run(s.initial, cfg.t_end, s.options);

  const SnapshotMeta meta{s.gas.gamma(), s.gas.kappa(), s.gas.delta(), s.eps, cfg.cfl, s.bc.mode};
  for (std::size_t k = 0; k < res.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%03zu.csv", k);
    auto out = open_out(dir / name);
    write_snapshot(out, res.snapshots[k], solver.coefficients(), meta);
  }
  {
    auto out = open_out(dir / "report.csv");
    res.report.write_csv(out);
  }
  const auto verdicts = evaluate_run(cfg, s, res);
  bool ok = true;
  for (const auto& v : verdicts) ok = ok && v.pass;
  auto out = open_out(dir / "verdict.txt");
  for (std::ostream* os : {static_cast<std::ostream*>(&out), static_cast<std::ostream*>(&std::cout)}) {
    *os << "run eps=" << s.eps << " delta=" << s.delta << " [" << s.grid.a << ", " << s.grid.b << "] N=" << s.grid.cells
        << " steps=" << res.report.steps << " undershoots=" << res.report.undershoots << '\n';
    print_verdicts(*os, verdicts);
    *os << (ok ? "VERDICT PASS" : "VERDICT FAIL") << '\n';
  }
  return ok ? 0 : 1;
}

int cmd_sweep(const std::string& path) {
  const RunConfig cfg = load_config(path);
  const SweepResult res = sweep(cfg);
  const fs::path dir = cfg.output_dir;
  fs::create_directories(dir);
  {
    auto out = open_out(dir / "sweep.txt");
    out << res.summary();
  }
  for (const auto& r : res.runs) {
    if (!r.ok) continue;
    std::ostringstream name;
    name << "report_eps_" << std::setprecision(6) << r.eps << ".csv";
    auto out = open_out(dir / name.str());
    r.report.write_csv(out);
  }
  std::cout << res.summary();
  const bool ok = res.converging_rho && res.converging_m;
  std::cout << (ok ? "VERDICT PASS" : "VERDICT FAIL") << '\n';
  return ok ? 0 : 1;
}

int cmd_check(const std::string& path, bool with_run) {
  const RunConfig cfg = load_config(path);
  const NozzleProfile profile = profile_for(cfg);
  const ViscositySchedule sched = schedule_for(cfg, profile);
  const CertificateReport rep = certify(sched, profile, GasLaw(cfg.gamma, 0.0, cfg.kappa));
  std::cout << rep.text();
  bool ok = rep.passed();
  if (with_run) {
    RunSetup s = setup_run(cfg, sched, cfg.eps);
    const Solver solver(s.gas, s.profile, s.eps, s.bc, s.grid, SolverOptions{cfg.cfl, {}});
    const RunResult res = solver.run(s.initial, cfg.t_end, s.options);
    const auto verdicts = evaluate_run(cfg, s, res);
    print_verdicts(std::cout, verdicts);
    for (const auto& v : verdicts) ok = ok && v.pass;
  }
  std::cout << (ok ? "VERDICT PASS" : "VERDICT FAIL") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nozzleflow: vanishing-viscosity nozzle and spherical flow solver"};
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "single run at eps from the config");
  run->add_option("config", config, "config file")->required();
  auto* sw = app.add_subcommand("sweep", "eps-ladder sweep with Cauchy distances");
  sw->add_option("config", config, "config file")->required();
  bool with_run = false;
  auto* check = app.add_subcommand("check", "certify the schedule (and optionally the run inequalities)");
  check->add_option("config", config, "config file")->required();
  check->add_flag("--run", with_run, "also run at eps and check the enabled inequalities");

  double gamma = 2.0, rho_max = 2.0, u_min = -1.0, u_max = 1.0;
  int n_rho = 21, n_u = 21;
  std::string generator = "half_square", out_path;
  auto* table = app.add_subcommand("entropy-table", "tabulate a kernel entropy pair");
  table->add_option("--gamma", gamma, "adiabatic exponent")->required();
  table->add_option("--generator", generator, "one|linear|half_square|quartic|signed_square:u|smoothed_abs:c:w|spline:c:w")
      ->required();
  table->add_option("--rho-max", rho_max);
  table->add_option("--u-min", u_min);
  table->add_option("--u-max", u_max);
  table->add_option("--n-rho", n_rho);
  table->add_option("--n-u", n_u);
  table->add_option("-o,--output", out_path, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config);
    if (*sw) return cmd_sweep(config);
    if (*check) return cmd_check(config, with_run);
    if (*table) {
      const EntropyKernel kernel{GasLaw(gamma)};
      const EntropyGenerator gen = EntropyGenerator::from_name(generator);
      if (out_path.empty()) {
        write_entropy_table(std::cout, kernel, gen, rho_max, u_min, u_max, n_rho, n_u);
      } else {
        auto out = open_out(out_path);
        write_entropy_table(out, kernel, gen, rho_max, u_min, u_max, n_rho, n_u);
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
