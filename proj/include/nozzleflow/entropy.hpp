#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nozzleflow/quadrature.hpp"
#include "nozzleflow/thermo.hpp"

namespace nozzleflow {

enum class GeneratorKind {
  One,
  Linear,
  HalfSquare,
  Quartic,
  HalfSignedSquareShifted,
  SmoothedConvex,
  ConvexSpline,
  Custom,
};

/// Scalar generator psi of a weak entropy pair, with psi' and psi''.
///
/// Breakpoints are the points where psi'' is discontinuous; the kernel
/// quadrature splits its integration interval there.
class EntropyGenerator {
 public:
  using Fn = std::function<double(double)>;

  static EntropyGenerator one();
  static EntropyGenerator linear();
  static EntropyGenerator half_square();
  static EntropyGenerator quartic();
  /// psi(s) = 1/2 (s - u_minus) |s - u_minus|.
  static EntropyGenerator half_signed_square_shifted(double u_minus);
  /// Huber-type smoothing of |s - c|: quadratic on |s - c| < w, linear outside.
  static EntropyGenerator smoothed_convex(double center, double width);
  /// Convex C^2 spline whose psi'' is a compact bump on [c - w, c + w]; linear tails.
  static EntropyGenerator convex_spline(double center, double width);
  static EntropyGenerator custom(std::string name, Fn psi, Fn dpsi, Fn d2psi,
                                 std::vector<double> breakpoints = {}, bool convex = false);
  /// Parses names such as "half_square", "signed_square:0.5", "smoothed_abs:0:0.25", "spline:0:0.5".
  static EntropyGenerator from_name(std::string_view name);

  [[nodiscard]] GeneratorKind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  [[nodiscard]] bool is_convex() const noexcept { return convex_; }

  [[nodiscard]] double value(double s) const;
  [[nodiscard]] double d1(double s) const;
  [[nodiscard]] double d2(double s) const;

 private:
  EntropyGenerator() = default;

  GeneratorKind kind_ = GeneratorKind::One;
  std::string name_;
  double c_ = 0.0;
  double w_ = 1.0;
  bool convex_ = false;
  std::vector<double> breakpoints_;
  std::shared_ptr<const Fn> psi_, dpsi_, d2psi_;
};

struct EntropyPair {
  double eta = 0.0;
  double q = 0.0;
};

/// Entropy, flux and the gradient / Hessian of the entropy in (rho, m).
struct EntropyJet {
  double eta = 0.0;
  double q = 0.0;
  double eta_rho = 0.0;
  double eta_m = 0.0;
  double eta_rr = 0.0;
  double eta_rm = 0.0;
  double eta_mm = 0.0;
};

/// Weak entropy pairs of the polytropic system p = kappa rho^gamma by kernel quadrature:
///   eta = rho * int psi(u + k rho^theta s) (1 - s^2)^lambda ds,
///   q   = rho * int (u + theta k rho^theta s) psi(u + k rho^theta s) (1 - s^2)^lambda ds,
/// with k = sqrt(kappa gamma) / theta (k = 1 under the default kappa).
///
/// Each value is computed with a base node count and certified against the
/// doubled count; the count keeps doubling up to max_nodes before a
/// QuadratureError is raised. delta does not enter the kernel.
class EntropyKernel {
 public:
  explicit EntropyKernel(const GasLaw& gas, int base_nodes = 64, int max_nodes = 512,
                         double tolerance = 1e-10);

  [[nodiscard]] const GasLaw& gas() const noexcept { return gas_; }
  /// int (1 - s^2)^lambda ds = sqrt(pi) Gamma(lambda+1) / Gamma(lambda+3/2).
  [[nodiscard]] double c_lambda() const noexcept { return c_lambda_; }
  [[nodiscard]] int base_nodes() const noexcept { return levels_.front().n; }

  [[nodiscard]] EntropyPair pair(const EntropyGenerator& gen, double rho, double m) const;
  [[nodiscard]] EntropyJet jet(const EntropyGenerator& gen, double rho, double m) const;

 private:
  struct Level {
    int n;
    QuadratureRule both;   // (1-x)^lambda (1+x)^lambda
    QuadratureRule right;  // (1-x)^lambda
    QuadratureRule left;   // (1+x)^lambda
    QuadratureRule plain;  // Legendre
  };
  template <bool WithDerivatives>
  void evaluate(const EntropyGenerator& gen, double rho, double m, double* out) const;
  template <bool WithDerivatives>
  void accumulate(const Level& level, const EntropyGenerator& gen, double rho, double u,
                  std::span<const double> cuts, double* out, double* mag) const;

  GasLaw gas_;
  double tolerance_;
  double c_lambda_;
  std::vector<Level> levels_;
};

/// Mechanical energy eta* = m^2/(2 rho) + kappa rho^gamma/(gamma-1) and its flux.
EntropyPair mechanical_energy(const GasLaw& gas, double rho, double m);

/// Smooth monotone reference profile joining (rho-, u-) at x <= -L0 to (rho+, u+) at x >= L0.
class ReferenceState {
 public:
  ReferenceState(double rho_minus, double u_minus, double rho_plus, double u_plus, double L0 = 2.0);
  static ReferenceState constant(double rho, double u = 0.0);

  [[nodiscard]] double rho(double x) const;
  [[nodiscard]] double u(double x) const;
  [[nodiscard]] double m(double x) const { return rho(x) * u(x); }
  [[nodiscard]] double rho_minus() const noexcept { return rho_minus_; }
  [[nodiscard]] double rho_plus() const noexcept { return rho_plus_; }
  [[nodiscard]] double u_minus() const noexcept { return u_minus_; }
  [[nodiscard]] double u_plus() const noexcept { return u_plus_; }
  [[nodiscard]] double L0() const noexcept { return L0_; }

 private:
  [[nodiscard]] double blend(double x) const;
  double rho_minus_, u_minus_, rho_plus_, u_plus_, L0_;
};

/// 1/2 rho (u - ubar)^2 + h_delta(rho) - h_delta(rhobar) - h_delta'(rhobar)(rho - rhobar).
double relative_energy_density(const GasLaw& gas, const ReferenceState& ref, double x, double rho, double m);

/// Terms of the shifted signed-square pair and the residual of each of its
/// listed bounds for a given constant M (nonnegative residual = bound holds).
struct SpecialPairReport {
  double eta_check = 0.0;
  double q_check = 0.0;
  double eta_tilde = 0.0;
  double q_tilde = 0.0;
  double eta_tilde_m = 0.0;
  double q_tilde_at_minus = 0.0;
  double eta_bound_residual = 0.0;     // M(rho|u-u-|^2 + rho(R-R-)^2) - |eta~|
  double growth_residual = 0.0;        // q~ - [(1/M)(rho|u-u-|^3 + rho^(g+th)) - M(rho + rho|u-u-|^2 + rho^g)]
  double flux_bound_residual = 0.0;    // M q~ + M - |-q^ + m eta^_rho + m^2/rho eta^_m|
  double m_eta_m_residual = 0.0;       // M(rho(u-u-)^2 + rho(R-R-)^2 + rho) - |m eta~_m|
  double eta_m_bound_residual = 0.0;   // M(|u-u-| + |R-R-|) - |eta~_m|
};

/// Shifted signed-square pair relative to the left end state of `ref`.
/// Uses the pressure without the delta term.
class SpecialPair {
 public:
  SpecialPair(const EntropyKernel& kernel, const ReferenceState& ref);

  [[nodiscard]] SpecialPairReport check(double rho, double m, double M) const;
  [[nodiscard]] double q_tilde_at_minus() const noexcept { return q_tilde_minus_; }

 private:
  const EntropyKernel& kernel_;
  double rho_minus_, u_minus_;
  EntropyGenerator gen_;
  double grad_rho_ = 0.0, grad_m_ = 0.0;
  double q_tilde_minus_ = 0.0;
};

/// Smallest constants M making each bound hold on the supplied (rho, u) samples.
struct SpecialPairConstants {
  double eta_bound = 0.0;
  double growth = 0.0;
  double flux_bound = 0.0;
  double m_eta_m = 0.0;
  double eta_m_bound = 0.0;
};

SpecialPairConstants fit_special_pair_constants(const SpecialPair& pair, const GasLaw& gas,
                                                double rho_minus, double u_minus,
                                                std::span<const std::pair<double, double>> samples);

/// eta^psi for psi(s) = s^4.
double quartic_entropy(const EntropyKernel& kernel, double rho, double m);

/// |xi^T H(eta^psi) xi| / xi^T H(eta*) xi at (rho, m).
double hessian_domination_ratio(const EntropyKernel& kernel, const EntropyGenerator& gen, double rho,
                                double m, double xi_rho, double xi_m);

/// Writes a CSV of (rho, u, eta, q) on a uniform rho x u grid.
void write_entropy_table(std::ostream& out, const EntropyKernel& kernel, const EntropyGenerator& gen,
                         double rho_max, double u_min, double u_max, int n_rho, int n_u);

}  // namespace nozzleflow
