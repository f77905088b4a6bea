#include "nozzleflow/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

std::string_view to_string(DomainRule rule) {
  switch (rule) {
    case DomainRule::Reciprocal: return "reciprocal";
    case DomainRule::Logarithmic: return "logarithmic";
    case DomainRule::Spherical: return "spherical";
  }
  return "unknown";
}

double ViscositySchedule::delta(double eps) const { return std::pow(eps, q); }

double ViscositySchedule::a(double eps) const {
  switch (domain) {
    case DomainRule::Reciprocal: return -1.0 / eps;
    case DomainRule::Logarithmic: return -(L0 + std::log(1.0 / eps) / (2.0 * log_rate));
    case DomainRule::Spherical: return eps;
  }
  return 0.0;
}

double ViscositySchedule::b(double eps) const {
  switch (domain) {
    case DomainRule::Reciprocal: return 1.0 / eps;
    case DomainRule::Logarithmic: return L0 + std::log(1.0 / eps) / (2.0 * log_rate);
    case DomainRule::Spherical: return 1.0 / eps;
  }
  return 0.0;
}

double ViscositySchedule::rho_bar(double eps, double gamma) const {
  return std::pow(eps, static_cast<double>(dimension) / gamma);
}

bool CertificateReport::passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const CertificateEntry& e) { return !e.applicable || e.pass; });
}

const CertificateEntry& CertificateReport::entry(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw ConfigError("certificate: no entry " + std::string(name));
}

std::string CertificateReport::text() const {
  std::ostringstream os;
  os << "# schedule certificate, M_budget=" << M_budget << "\n# eps:";
  for (double e : eps) os << ' ' << e;
  os << '\n';
  for (const auto& e : entries) {
    os << "# " << e.name << ": ";
    if (!e.applicable) {
      os << "n/a";
    } else {
      os << "max=" << e.max << (e.pass ? " pass" : " FAIL");
    }
    if (!e.note.empty()) os << " (" << e.note << ")";
    os << '\n';
  }
  os << "# certificate: " << (passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

namespace {

struct Sup {
  double A = 0.0, Amin = 0.0, d2A = 0.0, dlogp = 0.0;
};

// Suprema over [a, b]: the grid samples and endpoints of validate_conditions.
Sup sample(const NozzleProfile& p, double a, double b) {
  const ConditionReport r = validate_conditions(p, a, b);
  return {r.area_max, r.area_min, r.d2A_sup, r.dlogA_prime_sup};
}

// sup of A^e over [Amin, Amax]: monotone in A.
double power_sup(const Sup& s, double e) { return std::max(std::pow(s.A, e), std::pow(s.Amin, e)); }

}  // namespace

CertificateReport certify(const ViscositySchedule& s, const NozzleProfile& profile, const GasLaw& gas) {
  if (s.eps_list.empty()) throw ConfigError("certify: empty eps list");
  for (std::size_t k = 0; k < s.eps_list.size(); ++k) {
    if (!(s.eps_list[k] > 0.0)) throw ConfigError("certify: eps must be positive");
    if (k > 0 && !(s.eps_list[k] < s.eps_list[k - 1])) throw ConfigError("certify: eps list must be strictly decreasing");
  }
  const double gamma = gas.gamma();
  const bool spherical = s.domain == DomainRule::Spherical;
  const bool gamma2 = std::abs(gamma - 2.0) < 1e-12;

  CertificateReport rep;
  rep.M_budget = s.M_budget;
  rep.eps = s.eps_list;
  const char* names[] = {"eps|b-a|",
                         "eps|(A'/A)'||A||b-a|",
                         "eps|A''|",
                         "delta/eps|A||a|^beta|A^((g-3)/(g-1))|",
                         "delta/eps|A||a|",
                         "delta|A||a|^2|A^(-4/(2g-4))|",
                         "curvature_window",
                         "spherical",
                         "domain"};
  rep.entries.resize(9);
  for (int i = 0; i < 9; ++i) rep.entries[i].name = names[i];
  auto& E = rep.entries;

  for (double eps : s.eps_list) {
    const double a = s.a(eps), b = s.b(eps), delta = s.delta(eps);
    const double len = std::abs(b - a);
    const Sup sup = sample(profile, a, b);
    const double aa = std::abs(a);
    E[0].values.push_back(eps * len);
    E[1].values.push_back(eps * sup.dlogp * sup.A * len);
    E[2].values.push_back(eps * sup.d2A);
    E[3].values.push_back(delta / eps * sup.A * std::pow(aa, s.beta) * power_sup(sup, (gamma - 3.0) / (gamma - 1.0)));
    E[4].values.push_back(delta / eps * sup.A * aa);
    E[5].values.push_back(gamma2 ? 0.0 : delta * sup.A * aa * aa * power_sup(sup, -4.0 / (2.0 * gamma - 4.0)));
    E[6].values.push_back((1.0 + sup.dlogp) * eps * len);
    if (spherical) {
      const double bn = std::pow(b, s.dimension);
      E[7].values.push_back(std::pow(s.rho_bar(eps, gamma), gamma) * bn + delta / eps * bn);
    } else {
      E[7].values.push_back(0.0);
    }
    // Domain invariant: both ends beyond L0 (spherical: b beyond L0, a inside (0, 1)).
    const bool ok = spherical ? (b > s.L0 && a > 0.0 && a < 1.0) : (aa > s.L0 && b > s.L0);
    E[8].values.push_back(ok ? 0.0 : 1.0);
  }
  for (auto& e : E) e.max = *std::max_element(e.values.begin(), e.values.end());

  if (spherical) {
    for (int i = 1; i < 7; ++i) {
      E[i].applicable = false;
      E[i].note = "spherical schedules use the rho_bar relation";
    }
  } else {
    E[7].applicable = false;
  }
  if (gamma2 && !spherical) {
    E[5].applicable = false;
    E[5].note = "exponent singular at gamma=2";
  }
  // a few ulps of slack: the bullets are products of powers
  for (int i = 0; i < 8; ++i) E[i].pass = E[i].max <= s.M_budget * (1.0 + 1e-12);
  E[8].pass = E[8].max == 0.0;
  if (!E[8].pass) E[8].note = "|a|, b must exceed L0";

  // Monotonicity of the domain along the ladder.
  for (std::size_t k = 1; k < s.eps_list.size(); ++k) {
    const double e0 = s.eps_list[k - 1], e1 = s.eps_list[k];
    // a decreases in both modes: towards -inf, or towards 0 for spherical.
    if (!(s.a(e1) < s.a(e0) && s.b(e1) > s.b(e0))) {
      E[8].pass = false;
      E[8].note = "domain must grow along the ladder";
    }
  }
  return rep;
}

ViscositySchedule make_default(const NozzleProfile& profile, double gamma, int n_eps, double M_budget) {
  if (n_eps < 2) throw ConfigError("make_default: need at least two eps values");
  ViscositySchedule s;
  s.M_budget = M_budget;
  for (int k = 0; k < n_eps; ++k) s.eps_list.push_back(0.1 * std::ldexp(1.0, -k));
  switch (profile.kind()) {
    case ProfileKind::UserTabulated:
      throw ConfigError("make_default: tabulated profiles have a bounded domain; give a, b explicitly");
    case ProfileKind::Spherical:
      s.domain = DomainRule::Spherical;
      s.dimension = profile.dimension();
      break;
    case ProfileKind::Exponential:
      s.domain = DomainRule::Logarithmic;
      s.log_rate = std::abs(profile.params().at(0));
      if (s.log_rate == 0.0) s.domain = DomainRule::Reciprocal;
      break;
    default:
      break;
  }
  const GasLaw gas(gamma);
  for (double q = 1.0 + s.beta; q <= 12.0; q += 1.0) {
    s.q = q;
    if (certify(s, profile, gas).passed()) return s;
  }
  throw ConfigError("make_default: no q <= 12 certifies profile " + profile.describe());
}

}  // namespace nozzleflow
