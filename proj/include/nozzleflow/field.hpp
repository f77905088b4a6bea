#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "nozzleflow/geometry.hpp"
#include "nozzleflow/thermo.hpp"

namespace nozzleflow {

/// Uniform node-centred grid on [a, b] with cells + 1 nodes.
struct Grid {
  double a = 0.0;
  double b = 1.0;
  int cells = 1;

  [[nodiscard]] int nodes() const noexcept { return cells + 1; }
  [[nodiscard]] double dx() const noexcept { return (b - a) / cells; }
  [[nodiscard]] double x(int i) const noexcept { return i == cells ? b : a + i * dx(); }
  /// Grid on [a, b] whose spacing is as close as possible to dx without exceeding it.
  static Grid with_spacing(double a, double b, double dx);
};

struct FluidField {
  Grid grid;
  std::vector<double> rho;
  std::vector<double> m;
  double t = 0.0;

  FluidField() = default;
  FluidField(const Grid& g, double rho0, double m0, double t0 = 0.0)
      : grid(g), rho(g.nodes(), rho0), m(g.nodes(), m0), t(t0) {}

  [[nodiscard]] double u(int i) const { return GasLaw::velocity(rho[i], m[i]); }
  /// Throws CavitationError / NonFiniteError if the field is invalid.
  void validate() const;
};

enum class BoundaryMode { DirichletNozzle, DirichletSpherical, NeumannSpherical };

std::string_view to_string(BoundaryMode mode);

struct BoundaryState {
  double rho_left, m_left, rho_right, m_right;
};

/// Boundary construction. Spherical modes require a Spherical profile and
/// take (rho_bar, 0) at the Dirichlet ends.
struct BoundarySpec {
  BoundaryMode mode = BoundaryMode::DirichletNozzle;
  BoundaryState state{1.0, 0.0, 1.0, 0.0};
  /// Optional time-dependent Dirichlet data, overriding `state` (nozzle mode only).
  std::function<BoundaryState(double)> time_dependent;

  static BoundarySpec dirichlet_nozzle(double rho_left, double m_left, double rho_right, double m_right);
  static BoundarySpec dirichlet_spherical(double rho_bar);
  static BoundarySpec neumann_spherical(double rho_bar);

  [[nodiscard]] bool spherical() const noexcept { return mode != BoundaryMode::DirichletNozzle; }
  [[nodiscard]] bool neumann_left() const noexcept { return mode == BoundaryMode::NeumannSpherical; }
  [[nodiscard]] BoundaryState at(double t) const { return time_dependent ? time_dependent(t) : state; }
};

/// Geometric coefficients sampled on a grid: A and g = A'/A at nodes and
/// faces, and g' at nodes. Spherical boundary modes use the closed forms
/// x^(n-1), (n-1)/x, -(n-1)/x^2; otherwise the profile is evaluated.
struct GridCoefficients {
  std::vector<double> area;       // nodes
  std::vector<double> area_face;  // face i+1/2, size cells
  std::vector<double> g;          // nodes
  std::vector<double> g_face;     // faces
  std::vector<double> g_prime;    // nodes

  static GridCoefficients build(const Grid& grid, const NozzleProfile& profile, bool spherical_closed_form);
};

/// Raw initial data and the regularisation applied by prepare_initial_data.
struct InitialData {
  std::function<double(double)> rho;
  std::function<double(double)> m;
  double mollify_width = 0.0;  // h; 0 disables mollification
  double blend_width = 0.0;    // l; 0 picks min(1, (b - a)/8)
  double rho_lift = 1e-6;      // floor lift of the mollified density
};

/// Mollified, floor-lifted, boundary-blended field on `grid`.
FluidField prepare_initial_data(const InitialData& raw, const BoundarySpec& bc, const GasLaw& gas,
                                const NozzleProfile& profile, const Grid& grid);

/// Snapshot CSV: '#' metadata lines, then x,rho,m,u,A.
struct SnapshotMeta {
  double gamma = 0.0, kappa = 0.0, delta = 0.0, eps = 0.0, cfl = 0.0;
  BoundaryMode mode = BoundaryMode::DirichletNozzle;
};
void write_snapshot(std::ostream& out, const FluidField& field, const GridCoefficients& coeff,
                    const SnapshotMeta& meta);

/// Linear interpolation of node data at x inside the grid.
double interpolate(const Grid& grid, const std::vector<double>& values, double x);

}  // namespace nozzleflow
