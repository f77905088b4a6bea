#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "nozzleflow/diagnostics.hpp"
#include "nozzleflow/field.hpp"

namespace nozzleflow {

struct SolverOptions {
  double cfl = 0.4;
  /// Extra source (S_rho, S_m)(t, x) added to the right-hand side; used for manufactured solutions.
  std::function<std::array<double, 2>(double, double)> forcing;
};

/// Boundary bookkeeping of one step: time-integrated A-weighted mass flux
/// entering through the first face and leaving through the last one.
struct StepInfo {
  double mass_in_left = 0.0;
  double mass_out_right = 0.0;
  int undershoots = 0;
};

struct RunOptions {
  int snapshots = 32;  // uniformly spaced intervals; 0 keeps none
  bool keep_snapshots = true;
  bool energy = true;
  bool riemann = true;
  bool quartic = false;        // sum eta^{s^4} A dx per snapshot
  double rho_tilde = 0.0;      // > 0 records the vacuum functional per snapshot
  double L0 = 2.0;             // reference blend half-width when no reference is given
  std::optional<ReferenceState> reference;
  double max_dt = std::numeric_limits<double>::infinity();
  std::function<void(const FluidField&)> on_snapshot;
  std::function<void(const FluidField&, double)> on_step;
};

struct RunResult {
  FluidField field;
  DiagnosticsReport report;
  std::vector<FluidField> snapshots;
};

/// IMEX solver for the viscous system on a fixed grid.
///
/// Explicit part (SSP-RK2): MUSCL reconstruction of (rho, m) with the van
/// Leer limiter, local Lax-Friedrichs flux, A-weighted conservative mass
/// update and the geometric momentum source. Implicit part (backward Euler):
/// eps (A rho_x)_x / A and eps (m_x + g m)_x, one tridiagonal solve each.
class Solver {
 public:
  Solver(GasLaw gas, NozzleProfile profile, double eps, BoundarySpec bc, Grid grid, SolverOptions opt = {});

  [[nodiscard]] const GasLaw& gas() const noexcept { return gas_; }
  [[nodiscard]] const NozzleProfile& profile() const noexcept { return profile_; }
  [[nodiscard]] const BoundarySpec& boundary() const noexcept { return bc_; }
  [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
  [[nodiscard]] const GridCoefficients& coefficients() const noexcept { return coeff_; }
  [[nodiscard]] double eps() const noexcept { return eps_; }
  [[nodiscard]] double cfl() const noexcept { return opt_.cfl; }

  /// cfl * dx / max(|u| + sqrt(p_delta')).
  [[nodiscard]] double stable_dt(const FluidField& f) const;
  /// Advances f by dt in place.
  StepInfo step(FluidField& f, double dt) const;
  [[nodiscard]] RunResult run(FluidField f, double t_end, const RunOptions& opt = {}) const;

  /// sum of A rho dx over the nodes that evolve (a Neumann end node counts half).
  [[nodiscard]] double evolving_mass(const FluidField& f) const;
  [[nodiscard]] ReferenceState default_reference(double L0) const;

 private:
  void explicit_rate(const FluidField& f, double t, std::vector<double>& drho, std::vector<double>& dm,
                     double& flux_left, double& flux_right) const;
  void apply_boundary(FluidField& f, double t) const;
  int lift(FluidField& f) const;
  void diffuse(FluidField& f, double dt, double& flux_left, double& flux_right) const;

  GasLaw gas_;
  NozzleProfile profile_;
  double eps_;
  BoundarySpec bc_;
  Grid grid_;
  SolverOptions opt_;
  GridCoefficients coeff_;
};

/// Single step of the free-function form; builds a Solver internally.
FluidField step(const FluidField& field, const GasLaw& gas, const NozzleProfile& profile, double eps,
                const BoundarySpec& bc, double dt);

}  // namespace nozzleflow
