#pragma once

#include <string>
#include <vector>

#include "nozzleflow/geometry.hpp"
#include "nozzleflow/thermo.hpp"

namespace nozzleflow {

/// How the computational interval grows as eps -> 0.
enum class DomainRule {
  Reciprocal,   // a = -1/eps, b = 1/eps
  Logarithmic,  // |a|, b = L0 + log(1/eps) / (2 |rate|); for exponentially growing areas
  Spherical,    // a = eps, b = 1/eps
};

std::string_view to_string(DomainRule rule);

/// Coupled vanishing-viscosity parameters (eps, delta, a, b).
struct ViscositySchedule {
  std::vector<double> eps_list;  // strictly decreasing
  double q = 5.0;                // delta = eps^q
  double beta = 4.0;             // working exponent of the |a|^beta bullet; > 2
  double M_budget = 10.0;
  double L0 = 2.0;
  DomainRule domain = DomainRule::Reciprocal;
  double log_rate = 1.0;  // |rate| for the logarithmic rule
  int dimension = 0;      // spherical n

  [[nodiscard]] double delta(double eps) const;
  [[nodiscard]] double a(double eps) const;
  [[nodiscard]] double b(double eps) const;
  /// Spherical boundary density rho_bar = eps^(n/gamma), so that rho_bar^gamma b^n = 1.
  [[nodiscard]] double rho_bar(double eps, double gamma) const;
};

struct CertificateEntry {
  std::string name;
  std::vector<double> values;  // one per eps
  double max = 0.0;
  bool applicable = true;
  bool pass = true;
  std::string note;
};

struct CertificateReport {
  double M_budget = 0.0;
  std::vector<double> eps;
  std::vector<CertificateEntry> entries;  // the six bullets, then curvature_window, spherical relation, domain
  [[nodiscard]] bool passed() const;
  [[nodiscard]] const CertificateEntry& entry(std::string_view name) const;
  [[nodiscard]] std::string text() const;
};

/// Evaluates every constraint at each eps by sampling [a, b] (10^4 points plus endpoints).
/// Non-spherical schedules are held to the six bullets and
/// (1 + |(A'/A)'|) eps |b - a| <= M; spherical ones to eps |b - a| and
/// rho_bar^gamma b^n + (delta/eps) b^n <= M.
CertificateReport certify(const ViscositySchedule& s, const NozzleProfile& profile, const GasLaw& gas);

/// eps_k = 0.1 * 2^-k, default rules, smallest q in {1+beta, 2+beta, ..., 12} that certifies.
ViscositySchedule make_default(const NozzleProfile& profile, double gamma, int n_eps, double M_budget = 10.0);

}  // namespace nozzleflow
