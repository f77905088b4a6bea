#include "nozzleflow/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

namespace {

void require_nonnegative(double rho, const char* what) {
  if (!(rho >= 0.0)) {
    std::ostringstream os;
    os << what << ": density must be nonnegative, got " << rho;
    throw DomainError(os.str());
  }
}

struct PressureParams {
  double gamma, kappa, delta;
  [[nodiscard]] double dp(double s) const {
    return kappa * gamma * std::pow(s, gamma - 1.0) + 2.0 * delta * s;
  }
};

// R increment over [lo, hi] in the log variable, where the integrand
// sqrt(p'(e^xi)) is smooth.
double log_segment(const PressureParams& p, double lo, double hi) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double xi) { return std::sqrt(p.dp(std::exp(xi))); };
  return gauss_kronrod<double, 31>::integrate(f, std::log(lo), std::log(hi), 8, 1e-15);
}

// Fixed 10-point Gauss over one table cell; the cells are short enough in
// log(rho) that this matches the adaptive rule (checked at cell midpoints).
template <unsigned N = 10>
double log_cell(const PressureParams& p, double lo, double hi) {
  auto f = [&](double xi) { return std::sqrt(p.dp(std::exp(xi))); };
  return boost::math::quadrature::gauss<double, N>::integrate(f, std::log(lo), std::log(hi));
}

// R(rho) from zero; the integrand behaves like s^(-1/2) or s^(theta-1) at 0.
double from_zero(const PressureParams& p, double rho) {
  if (rho == 0.0) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double s) { return s > 0.0 ? std::sqrt(p.dp(s)) / s : 0.0; };
  return integrator.integrate(f, 0.0, rho, 1e-14);
}

}  // namespace

/// Cumulative table of R on a log-spaced grid, interpolated by cubic Hermite
/// polynomials in log(rho) with exact slopes dR/dlog(rho) = sqrt(p').
class RiemannTable {
 public:
  RiemannTable(PressureParams p, double lo, double hi) : p_(p) { build(lo, hi, 200); }

  [[nodiscard]] double eval(double rho) const {
    if (rho < lo_) return from_zero(p_, rho);
    if (rho > hi_) return r_.back() + log_segment(p_, hi_, rho);
    const double xi = std::log(rho);
    std::size_t i = static_cast<std::size_t>((xi - xi0_) / dxi_);
    i = std::min(i, r_.size() - 2);
    const double t = (xi - (xi0_ + i * dxi_)) / dxi_;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * r_[i] + h10 * dxi_ * s_[i] + h01 * r_[i + 1] + h11 * dxi_ * s_[i + 1];
  }

 private:
  void build(double lo, double hi, int per_decade) {
    // Refine until every cell midpoint agrees with direct quadrature to 1e-10.
    for (; per_decade <= 3200; per_decade *= 2) {
      lo_ = lo;
      hi_ = hi;
      xi0_ = std::log(lo);
      const int cells = static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade));
      dxi_ = (std::log(hi) - xi0_) / cells;
      r_.assign(cells + 1, 0.0);
      s_.assign(cells + 1, 0.0);
      r_[0] = from_zero(p_, lo);
      for (int i = 0; i <= cells; ++i) {
        const double rho = std::exp(xi0_ + i * dxi_);
        s_[i] = std::sqrt(p_.dp(rho));
        if (i > 0) r_[i] = r_[i - 1] + log_cell(p_, std::exp(xi0_ + (i - 1) * dxi_), rho);
      }
      bool ok = true;
      for (int i = 0; i < cells && ok; i += std::max(1, cells / 400)) {
        const double mid = std::exp(xi0_ + (i + 0.5) * dxi_);
        const double exact = r_[i] + log_cell<30>(p_, std::exp(xi0_ + i * dxi_), mid);
        ok = std::abs(eval(mid) - exact) <= 1e-10 * std::max(1.0, exact);
      }
      if (ok) return;
    }
    throw Error("RiemannTable: interpolation failed to reach tolerance");
  }

  PressureParams p_;
  double lo_ = 0.0, hi_ = 0.0, xi0_ = 0.0, dxi_ = 0.0;
  std::vector<double> r_, s_;
};

GasLaw::GasLaw(double gamma, double delta, std::optional<double> kappa)
    : gamma_(gamma), kappa_(kappa.value_or(default_kappa(gamma))), delta_(delta) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw ConfigError("GasLaw: gamma must exceed 1");
  if (!(kappa_ > 0.0) || !std::isfinite(kappa_)) throw ConfigError("GasLaw: kappa must be positive");
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ConfigError("GasLaw: delta must be nonnegative");
  theta_ = (gamma - 1.0) / 2.0;
  lambda_ = (3.0 - gamma) / (2.0 * (gamma - 1.0));
  kernel_scale_ = std::sqrt(kappa_ * gamma) / theta_;
  if (delta_ > 0.0) {
    table_ = std::make_shared<const RiemannTable>(PressureParams{gamma_, kappa_, delta_}, 1e-10, 1e6);
  }
}

double GasLaw::pressure(double rho) const {
  require_nonnegative(rho, "pressure");
  return kappa_ * std::pow(rho, gamma_) + delta_ * rho * rho;
}

double GasLaw::dpressure(double rho) const {
  require_nonnegative(rho, "dpressure");
  return kappa_ * gamma_ * std::pow(rho, gamma_ - 1.0) + 2.0 * delta_ * rho;
}

double GasLaw::sound_speed(double rho) const { return std::sqrt(dpressure(rho)); }

std::pair<double, double> GasLaw::pressure_and_speed(double rho) const {
  require_nonnegative(rho, "pressure");
  const double pg = kappa_ * std::pow(rho, gamma_ - 1.0);
  return {pg * rho + delta_ * rho * rho, std::sqrt(gamma_ * pg + 2.0 * delta_ * rho)};
}

double GasLaw::h_delta(double rho) const {
  require_nonnegative(rho, "h_delta");
  return kappa_ * std::pow(rho, gamma_) / (gamma_ - 1.0) + delta_ * rho * rho;
}

double GasLaw::dh_delta(double rho) const {
  require_nonnegative(rho, "dh_delta");
  return kappa_ * gamma_ * std::pow(rho, gamma_ - 1.0) / (gamma_ - 1.0) + 2.0 * delta_ * rho;
}

double GasLaw::d2h_delta(double rho) const {
  require_nonnegative(rho, "d2h_delta");
  // Guarded at the floor so gamma < 2 stays finite at vacuum.
  const double r = std::max(rho, kRhoFloor);
  return kappa_ * gamma_ * std::pow(r, gamma_ - 2.0) + 2.0 * delta_;
}

double GasLaw::e_delta(double rho) const {
  require_nonnegative(rho, "e_delta");
  if (rho == 0.0) return 0.0;
  return kappa_ * std::pow(rho, gamma_ - 1.0) / (gamma_ - 1.0) + delta_ * rho;
}

double GasLaw::riemann_R(double rho) const {
  require_nonnegative(rho, "riemann_R");
  if (delta_ == 0.0) return kernel_scale_ * std::pow(rho, theta_);
  return table_->eval(rho);
}

double GasLaw::riemann_R_direct(double rho) const {
  require_nonnegative(rho, "riemann_R_direct");
  if (delta_ == 0.0) return kernel_scale_ * std::pow(rho, theta_);
  return from_zero(PressureParams{gamma_, kappa_, delta_}, rho);
}

RiemannPair GasLaw::riemann_invariants(double rho, double u) const {
  if (!(rho > 0.0)) throw DomainError("riemann_invariants: density must be positive");
  const double r = riemann_R(rho);
  return {u + r, u - r};
}

}  // namespace nozzleflow
