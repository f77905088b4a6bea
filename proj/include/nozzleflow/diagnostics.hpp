#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "nozzleflow/entropy.hpp"
#include "nozzleflow/field.hpp"

namespace nozzleflow {

struct EnergySample {
  double t = 0.0;
  double E = 0.0;    // relative energy
  double D = 0.0;    // cumulative eps-dissipation
  double llf = 0.0;  // cumulative artificial dissipation estimate of the convection scheme
};

struct RiemannSample {
  double t = 0.0;
  double max_w = 0.0;
  double min_z = 0.0;
  double corr_w = 0.0;  // int ||u sqrt(p') g - eps g' u||_inf
  double corr_z = 0.0;  // int ||u sqrt(p') g + eps g' u||_inf
  [[nodiscard]] double w_tilde() const { return max_w - corr_w; }
  [[nodiscard]] double z_tilde() const { return min_z + corr_z; }
};

struct VacuumSample {
  double t = 0.0;
  double functional = 0.0;
  double min_rho = 0.0;
};

struct IntegrabilityRecord {
  double rho_gamma1 = 0.0;       // int int rho^(gamma+1)
  double delta_rho3 = 0.0;       // int int delta rho^3
  double rho_u3 = 0.0;           // int int rho |u|^3
  double rho_gamma_theta = 0.0;  // int int rho^(gamma+theta)
  double eps_rho3_area = 0.0;    // eps int int rho^3 A
};

/// Space-time bump phi(t, x) = b((t - t0)/rt) b((x - x0)/rx), b(s) = exp(-1/(1 - s^2)).
struct TestFunction {
  double t0, rt, x0, rx;
  [[nodiscard]] double value(double t, double x) const;
  [[nodiscard]] double dt(double t, double x) const;
  [[nodiscard]] double dx(double t, double x) const;
  /// W^{1,1} norm int int |phi| + |phi_t| + |phi_x| (separable, closed form up to int b).
  [[nodiscard]] double norm_w11() const;
};

/// 4 x 8 lattice of bumps supported in K x [0, T].
std::vector<TestFunction> test_lattice(double k_lo, double k_hi, double T, int nt = 4, int nx = 8);

/// Default convex generator family: 1/2 s^2, smoothed |s - c| for c in {-1, 0, 1}, splines at c = +-0.5.
std::vector<EntropyGenerator> default_generator_family();

struct EntropyResidual {
  std::string generator;
  int test_index = 0;
  double pairing = 0.0;  // expected <= 0
  double norm = 0.0;     // ||phi||_{W^{1,1}}
};

struct WeakResidualRecord {
  std::vector<double> mass;      // per test function
  std::vector<double> momentum;  // per test function
  std::vector<double> norms;     // ||phi||_{W^{1,1}}
  std::vector<EntropyResidual> entropy;
  /// max over pairs of max(pairing, 0) / ||phi||.
  [[nodiscard]] double max_entropy_violation() const;
  [[nodiscard]] double max_mass() const;
  [[nodiscard]] double max_momentum() const;
};

struct DiagnosticsReport {
  std::vector<EnergySample> energy_series;
  std::vector<RiemannSample> riemann_series;
  std::vector<VacuumSample> vacuum_series;
  std::optional<IntegrabilityRecord> integrability;
  std::optional<WeakResidualRecord> weak_residuals;
  std::vector<std::pair<double, double>> quartic_series;  // (t, sum eta^{s^4} x^(n-1) dx)
  double llf_dissipation = 0.0;
  long steps = 0;
  long undershoots = 0;

  [[nodiscard]] bool empty() const noexcept { return steps == 0 && energy_series.empty() && riemann_series.empty(); }
  void write_csv(std::ostream& out) const;
};

struct EnergyBudget {
  double E = 0.0;            // sum of relative energy * A * trapezoid weights
  double hessian = 0.0;      // eps int (h'' rho_x^2 + rho u_x^2) A
  double geometric = 0.0;    // eps int |(A'/A)' rho u (u - ubar)| A
  double llf = 0.0;          // artificial dissipation rate estimate
  [[nodiscard]] double dissipation() const { return hessian + geometric; }
};

EnergyBudget energy_budget(const FluidField& f, const GasLaw& gas, const GridCoefficients& c,
                           const ReferenceState& ref, double eps);
EnergyBudget energy_budget(const FluidField& f, const GasLaw& gas, const NozzleProfile& profile,
                           const ReferenceState& ref, double eps);

/// E(t) + D(t) <= M (E0 + 1) at every sample.
bool gronwall_check(std::span<const EnergySample> series, double M);
/// E(t) + D(t) <= E0 (1 + tol) at every sample.
bool sharp_energy_check(std::span<const EnergySample> series, double tol);

/// Accumulates the corrected Riemann-invariant extrema step by step.
class RiemannMonitor {
 public:
  RiemannMonitor(const GasLaw& gas, const GridCoefficients& c, double eps) : gas_(gas), c_(c), eps_(eps) {}
  /// Records f; dt is the step that led to f (0 for the first call).
  RiemannSample record(const FluidField& f, double dt);
  [[nodiscard]] const std::vector<RiemannSample>& series() const noexcept { return series_; }

 private:
  struct Rates {
    double w, z;
  };
  Rates rates(const FluidField& f) const;
  GasLaw gas_;
  GridCoefficients c_;
  double eps_;
  Rates last_{0.0, 0.0};
  std::vector<RiemannSample> series_;
};

RiemannSample riemann_extrema(const FluidField& f, const GasLaw& gas);

/// Worst excess of w~(t) over min_{s<=t}(w~(s) + rate (t - s)), and the
/// symmetric quantity for z~. Nonpositive means the monitor is satisfied.
double max_principle_excess(std::span<const RiemannSample> series, double rate);

IntegrabilityRecord integrability_window(std::span<const FluidField> history, const GasLaw& gas,
                                         const GridCoefficients& c, double eps, double k_lo, double k_hi,
                                         double t1, double t2);

/// int phi(rho) dx with phi(rho) = 1/rho - 1/rt + (rho - rt)/rt^2 for rho < rt, else 0.
double vacuum_functional(const FluidField& f, double rho_tilde);

/// Weak-form residuals over snapshots. Pressure excludes the delta term.
WeakResidualRecord weak_residual(std::span<const FluidField> history, const GasLaw& gas, const GridCoefficients& c,
                                 const EntropyKernel& kernel, std::span<const TestFunction> tests,
                                 std::span<const EntropyGenerator> gens);

/// sum eta^{s^4}(rho, m) x^(n-1) dx by trapezoid (A supplied by the coefficients).
double quartic_energy(const FluidField& f, const EntropyKernel& kernel, const GridCoefficients& c);

/// Total variation of rho plus that of m.
double total_variation(const FluidField& f);

}  // namespace nozzleflow
