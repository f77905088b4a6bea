#pragma once

#include <memory>
#include <optional>
#include <utility>

namespace nozzleflow {

/// Density below which a state is treated as vacuum (velocity taken as 0).
inline constexpr double kRhoFloor = 1e-12;

struct RiemannPair {
  double w = 0.0;  // u + R(rho)
  double z = 0.0;  // u - R(rho)
};

class RiemannTable;

/// Polytropic gas law with the quadratic cavitation guard:
///   p_delta(rho) = kappa rho^gamma + delta rho^2.
///
/// kappa defaults to (gamma-1)^2 / (4 gamma), the normalisation under which
/// the Riemann invariant reduces to rho^theta and the kernel entropies take
/// their simplest form.
class GasLaw {
 public:
  explicit GasLaw(double gamma, double delta = 0.0, std::optional<double> kappa = std::nullopt);

  [[nodiscard]] double gamma() const noexcept { return gamma_; }
  [[nodiscard]] double kappa() const noexcept { return kappa_; }
  [[nodiscard]] double delta() const noexcept { return delta_; }
  /// theta = (gamma - 1) / 2.
  [[nodiscard]] double theta() const noexcept { return theta_; }
  /// Kernel exponent (3 - gamma) / (2 (gamma - 1)); always > -1/2.
  [[nodiscard]] double lambda_exp() const noexcept { return lambda_; }
  /// sqrt(kappa gamma) / theta; 1 under the default kappa.
  [[nodiscard]] double kernel_scale() const noexcept { return kernel_scale_; }
  [[nodiscard]] static double default_kappa(double gamma) { return (gamma - 1.0) * (gamma - 1.0) / (4.0 * gamma); }

  /// Same law with a different delta (kappa kept).
  [[nodiscard]] GasLaw with_delta(double delta) const { return GasLaw(gamma_, delta, kappa_); }

  [[nodiscard]] double pressure(double rho) const;
  /// p_delta'(rho).
  [[nodiscard]] double dpressure(double rho) const;
  /// sqrt(p_delta'(rho)).
  [[nodiscard]] double sound_speed(double rho) const;
  /// p_delta(rho) and sqrt(p_delta'(rho)) from a single power evaluation.
  [[nodiscard]] std::pair<double, double> pressure_and_speed(double rho) const;

  /// h_delta(rho) = rho * int_0^rho p_delta(s)/s^2 ds = kappa rho^gamma/(gamma-1) + delta rho^2.
  [[nodiscard]] double h_delta(double rho) const;
  [[nodiscard]] double dh_delta(double rho) const;
  /// h_delta''(rho) = p_delta'(rho) / rho.
  [[nodiscard]] double d2h_delta(double rho) const;
  /// e_delta(rho) = h_delta(rho) / rho for rho > 0.
  [[nodiscard]] double e_delta(double rho) const;

  /// R(rho) = int_0^rho sqrt(p_delta'(s)) / s ds.
  [[nodiscard]] double riemann_R(double rho) const;
  /// R(rho) by direct adaptive quadrature, bypassing the cached table.
  [[nodiscard]] double riemann_R_direct(double rho) const;
  [[nodiscard]] RiemannPair riemann_invariants(double rho, double u) const;

  /// m / rho, or 0 when rho is at or below the vacuum floor.
  [[nodiscard]] static double velocity(double rho, double m) noexcept {
    return rho > kRhoFloor ? m / rho : 0.0;
  }

 private:
  double gamma_;
  double kappa_;
  double delta_;
  double theta_;
  double lambda_;
  double kernel_scale_;
  std::shared_ptr<const RiemannTable> table_;
};

}  // namespace nozzleflow
