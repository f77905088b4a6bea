#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nozzleflow {

/// Flat run/sweep configuration. Every key of the config file maps to one field.
struct RunConfig {
  // gas law
  double gamma = 2.0;
  std::optional<double> kappa;
  std::optional<double> delta;  // unset: delta = eps^q from the schedule

  // geometry
  std::string profile = "constant";
  std::vector<double> profile_params;
  std::string profile_table;

  // boundary and initial data
  std::string bc = "dirichlet_nozzle";  // dirichlet_nozzle | dirichlet_spherical | neumann_spherical
  double rho_left = 1.0, u_left = 0.0, rho_right = 1.0, u_right = 0.0;
  double rho_bar = 0.0;                 // spherical; 0 picks eps^(n/gamma)
  std::string initial = "riemann";      // riemann | constant | gaussian_bump | bump_collapse
  double x_jump = 0.0;
  double bump_amp = 0.5, bump_center = 0.0, bump_width = 0.5, bump_speed = 0.0;
  double mollify = -1.0;  // < 0: mollifier width eps
  double blend = 0.0;     // 0: default blend width

  // schedule
  double eps = 0.05;  // single-run viscosity
  double eps0 = 0.1;
  int n_eps = 4;
  std::vector<double> eps_list;  // overrides eps0 / n_eps
  double beta = 4.0;
  double q = 0.0;  // 0: chosen by make_default
  double L0 = 2.0;
  double M_budget = 10.0;
  std::optional<double> a, b;  // override the schedule's domain rule
  bool force = false;          // sweep even if the certificate fails

  // grid and time
  double dx = 0.01;
  int cells = 0;  // > 0 overrides dx for single runs
  double cfl = 0.4;
  double t_end = 0.5;
  int snapshots = 32;

  // comparison window and norms
  double k_lo = -1.0, k_hi = 1.0;
  double p = 1.0, q_m = 1.0;

  // diagnostics
  bool diag_energy = true;
  bool diag_riemann = true;
  bool diag_integrability = true;
  bool diag_weak = true;
  bool diag_quartic = false;
  double rho_tilde = 0.0;
  double energy_M = 10.0;     // Gronwall constant for nozzle runs
  double energy_tol = 1e-3;   // sharp inequality tolerance for spherical Dirichlet runs
  double entropy_tol = 1e-2;  // entropy residual per unit ||phi||

  int threads = 0;  // 0: hardware concurrency
  std::string output_dir = "out";
  unsigned seed = 0;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace nozzleflow
