#pragma once

#include <span>
#include <string>
#include <vector>

#include "nozzleflow/config.hpp"
#include "nozzleflow/diagnostics.hpp"
#include "nozzleflow/schedule.hpp"
#include "nozzleflow/solver.hpp"

namespace nozzleflow {

enum class Component { Density, Momentum };

NozzleProfile profile_for(const RunConfig& cfg);
/// Schedule from the config: eps ladder, domain rule of the profile kind, q
/// from the config or the smallest certifying q in {1+beta, ..., 12}.
ViscositySchedule schedule_for(const RunConfig& cfg, const NozzleProfile& profile);

/// Everything needed to start one run at a given eps.
struct RunSetup {
  GasLaw gas{2.0};
  NozzleProfile profile = NozzleProfile::constant();
  BoundarySpec bc;
  Grid grid;
  double eps = 0.0;
  double delta = 0.0;
  FluidField initial;
  ReferenceState reference = ReferenceState::constant(1.0, 0.0);
  RunOptions options;
};

/// With align = true the domain ends are snapped outward to multiples of dx
/// (inward at a spherical origin) so that runs of a sweep share their nodes.
RunSetup setup_run(const RunConfig& cfg, const ViscositySchedule& sched, double eps, bool align = false);

/// Space-time L^p distance over K x [0, T] of one component, trapezoidal in
/// both variables after interpolation onto the finer of the two grids.
double lp_distance(std::span<const FluidField> a, std::span<const FluidField> b, double k_lo, double k_hi, double p,
                   Component c = Component::Density);

/// true iff at most `allowed` consecutive ratios d_{k+1}/d_k reach `ratio`.
/// All-zero sequences count as converged.
bool converging(std::span<const double> d, double ratio = 0.9, int allowed = 1);

struct SweepRun {
  double eps = 0.0, delta = 0.0, a = 0.0, b = 0.0;
  int cells = 0;
  bool ok = false;
  std::string error;
  std::vector<FluidField> window;  // snapshots restricted to a padded neighbourhood of K
  DiagnosticsReport report;
  double tv_final = 0.0;
};

struct SweepResult {
  CertificateReport certificate;
  std::vector<SweepRun> runs;
  std::vector<double> d_rho, d_m;  // between consecutive successful runs
  bool converging_rho = false, converging_m = false;
  bool tv_monotone = false;  // heuristic: TV(T) non-increasing in eps

  [[nodiscard]] std::vector<double> ratios(Component c) const;
  [[nodiscard]] std::string summary() const;
};

/// Runs the eps ladder in a worker pool and compares the runs on K.
SweepResult sweep(const RunConfig& cfg);

struct VerdictLine {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string detail;
};

/// Checks every enabled inequality of a finished run.
std::vector<VerdictLine> evaluate_run(const RunConfig& cfg, const RunSetup& setup, const RunResult& result);

}  // namespace nozzleflow
