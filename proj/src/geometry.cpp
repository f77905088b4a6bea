#include "nozzleflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

std::string_view to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Constant: return "constant";
    case ProfileKind::GaussianBump: return "gaussian_bump";
    case ProfileKind::PowerLawClosing: return "power_law_closing";
    case ProfileKind::Exponential: return "exponential";
    case ProfileKind::Spherical: return "spherical";
    case ProfileKind::UserTabulated: return "tabulated";
  }
  return "unknown";
}

double unit_sphere_area(int n) {
  if (n < 1) throw DomainError("unit_sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

NozzleProfile NozzleProfile::constant(double level) {
  if (!(level > 0.0)) throw ConfigError("constant profile: level must be positive");
  NozzleProfile p;
  p.kind_ = ProfileKind::Constant;
  p.params_ = {level};
  return p;
}

NozzleProfile NozzleProfile::gaussian_bump(double amplitude, double width) {
  if (!(amplitude > -1.0)) throw ConfigError("gaussian_bump: amplitude must exceed -1");
  if (!(width > 0.0)) throw ConfigError("gaussian_bump: width must be positive");
  NozzleProfile p;
  p.kind_ = ProfileKind::GaussianBump;
  p.params_ = {amplitude, width};
  return p;
}

NozzleProfile NozzleProfile::power_law_closing(double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("power_law_closing: alpha must be positive");
  NozzleProfile p;
  p.kind_ = ProfileKind::PowerLawClosing;
  p.params_ = {alpha};
  return p;
}

NozzleProfile NozzleProfile::exponential(double rate) {
  if (!std::isfinite(rate)) throw ConfigError("exponential: rate must be finite");
  NozzleProfile p;
  p.kind_ = ProfileKind::Exponential;
  p.params_ = {rate};
  return p;
}

NozzleProfile NozzleProfile::spherical(int dimension, double omega) {
  if (dimension < 2) throw ConfigError("spherical: dimension must be >= 2");
  if (omega < 0.0) throw ConfigError("spherical: omega must be positive");
  NozzleProfile p;
  p.kind_ = ProfileKind::Spherical;
  p.dimension_ = dimension;
  p.omega_ = omega > 0.0 ? omega : unit_sphere_area(dimension);
  p.params_ = {static_cast<double>(dimension), p.omega_};
  p.lo_ = 0.0;
  return p;
}

NozzleProfile NozzleProfile::tabulated(std::vector<double> x, std::vector<double> area) {
  const std::size_t n = x.size();
  if (n < 4 || area.size() != n) {
    throw ConfigError("tabulated profile: need at least 4 matching (x, A) samples");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(area[i] > 0.0)) throw ConfigError("tabulated profile: A must be positive");
    if (i > 0 && !(x[i] > x[i - 1])) throw ConfigError("tabulated profile: x must increase strictly");
  }
  // Natural cubic spline, second derivatives by the standard tridiagonal solve.
  std::vector<double> m(n, 0.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x[i] - x[i - 1];
    const double h1 = x[i + 1] - x[i];
    const double diag = 2.0 * (h0 + h1);
    const double rhs = 6.0 * ((area[i + 1] - area[i]) / h1 - (area[i] - area[i - 1]) / h0);
    const double denom = diag - h0 * c[i - 1];
    c[i] = h1 / denom;
    d[i] = (rhs - h0 * d[i - 1]) / denom;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m[i] = d[i] - c[i] * m[i + 1];
  }
  NozzleProfile p;
  p.kind_ = ProfileKind::UserTabulated;
  p.lo_ = x.front();
  p.hi_ = x.back();
  p.spline_ = Spline{std::move(x), std::move(area), std::move(m)};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    // Positivity between knots is checked on a fine sub-grid.
    for (int k = 1; k < 16; ++k) {
      const double xs = p.spline_.x[i] + (p.spline_.x[i + 1] - p.spline_.x[i]) * k / 16.0;
      if (!(p.jet(xs).a > 0.0)) throw ConfigError("tabulated profile: spline interpolant is not positive");
    }
  }
  return p;
}

NozzleProfile NozzleProfile::load_tabulated(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open area table: " + path.string());
  std::vector<double> xs, as;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x = 0.0, a = 0.0;
    if (!(ls >> x)) continue;
    if (!(ls >> a)) throw ConfigError("area table: expected two columns in line '" + line + "'");
    xs.push_back(x);
    as.push_back(a);
  }
  return tabulated(std::move(xs), std::move(as));
}

NozzleProfile NozzleProfile::from_spec(std::string_view kind, const std::vector<double>& params,
                                       const std::string& table_path) {
  auto param = [&](std::size_t i, double fallback) { return i < params.size() ? params[i] : fallback; };
  if (kind == "constant") return constant(param(0, 1.0));
  if (kind == "gaussian_bump") return gaussian_bump(param(0, 1.0), param(1, 1.0));
  if (kind == "power_law_closing") return power_law_closing(param(0, 1.0));
  if (kind == "exponential") return exponential(param(0, 1.0));
  if (kind == "spherical") return spherical(static_cast<int>(param(0, 3.0)), param(1, 0.0));
  if (kind == "tabulated") {
    if (table_path.empty()) throw ConfigError("tabulated profile requires profile_file");
    return load_tabulated(table_path);
  }
  throw ConfigError("unknown profile kind: " + std::string(kind));
}

std::string NozzleProfile::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  if (!params_.empty()) {
    os << '(';
    for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
    os << ')';
  }
  return os.str();
}

bool NozzleProfile::contains(double x) const noexcept {
  if (kind_ == ProfileKind::Spherical) return x > 0.0 && std::isfinite(x);
  return x >= lo_ && x <= hi_;
}

AreaJet NozzleProfile::jet(double x) const {
  if (!contains(x)) {
    std::ostringstream os;
    os << "x = " << x << " outside the domain of profile " << describe();
    throw DomainError(os.str());
  }
  switch (kind_) {
    case ProfileKind::Constant:
      return {params_[0], 0.0, 0.0};
    case ProfileKind::GaussianBump: {
      const double amp = params_[0];
      const double w = params_[1];
      const double y = x / w;
      const double e = std::exp(-y * y);
      return {1.0 + amp * e, amp * e * (-2.0 * y / w), amp * e * (4.0 * y * y - 2.0) / (w * w)};
    }
    case ProfileKind::PowerLawClosing: {
      const double al = params_[0];
      const double s = 1.0 + x * x;
      const double a = std::pow(s, -al);
      const double da = -2.0 * al * x * a / s;
      const double d2a = a * (4.0 * al * (al + 1.0) * x * x / (s * s) - 2.0 * al / s);
      return {a, da, d2a};
    }
    case ProfileKind::Exponential: {
      const double k = params_[0];
      const double a = std::exp(k * x);
      return {a, k * a, k * k * a};
    }
    case ProfileKind::Spherical: {
      const int n = dimension_;
      const double a = omega_ * std::pow(x, n - 1);
      const double da = omega_ * (n - 1) * std::pow(x, n - 2);
      const double d2a = n >= 3 ? omega_ * (n - 1) * (n - 2) * std::pow(x, n - 3) : 0.0;
      return {a, da, d2a};
    }
    case ProfileKind::UserTabulated: {
      const auto& s = spline_;
      auto it = std::upper_bound(s.x.begin(), s.x.end(), x);
      std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - s.x.begin() - 1, 0));
      i = std::min(i, s.x.size() - 2);
      const double h = s.x[i + 1] - s.x[i];
      const double t0 = s.x[i + 1] - x;
      const double t1 = x - s.x[i];
      const double a = s.m[i] * t0 * t0 * t0 / (6.0 * h) + s.m[i + 1] * t1 * t1 * t1 / (6.0 * h) +
                       (s.a[i] / h - s.m[i] * h / 6.0) * t0 + (s.a[i + 1] / h - s.m[i + 1] * h / 6.0) * t1;
      const double da = -s.m[i] * t0 * t0 / (2.0 * h) + s.m[i + 1] * t1 * t1 / (2.0 * h) -
                        (s.a[i] / h - s.m[i] * h / 6.0) + (s.a[i + 1] / h - s.m[i + 1] * h / 6.0);
      const double d2a = s.m[i] * t0 / h + s.m[i + 1] * t1 / h;
      return {a, da, d2a};
    }
  }
  return {};
}

double NozzleProfile::dlogA(double x) const {
  if (kind_ == ProfileKind::Spherical) {
    if (!contains(x)) (void)jet(x);
    return (dimension_ - 1) / x;
  }
  const AreaJet j = jet(x);
  return j.da / j.a;
}

double NozzleProfile::dlogA_prime(double x) const {
  if (kind_ == ProfileKind::Spherical) {
    if (!contains(x)) (void)jet(x);
    return -(dimension_ - 1) / (x * x);
  }
  const AreaJet j = jet(x);
  const double g = j.da / j.a;
  return j.d2a / j.a - g * g;
}

namespace {

// Global tail class of the builtin kinds: {A'/A bounded, A' in L1 left, A' in L1 right}.
struct TailClass {
  bool bounded_log_derivative;
  bool l1_left;
  bool l1_right;
};

TailClass tail_class(const NozzleProfile& p, const ConditionReport& local) {
  switch (p.kind()) {
    case ProfileKind::Constant:
    case ProfileKind::GaussianBump:
    case ProfileKind::PowerLawClosing:
      return {true, true, true};
    case ProfileKind::Exponential: {
      const double k = p.params()[0];
      return {true, k >= 0.0, k <= 0.0};
    }
    case ProfileKind::Spherical:
      return {false, false, false};
    case ProfileKind::UserTabulated:
      // The table is the whole domain, so the local estimates are global.
      return {std::isfinite(local.dlogA_sup), std::isfinite(local.dA_l1_left),
              std::isfinite(local.dA_l1_right)};
  }
  return {false, false, false};
}

}  // namespace

ConditionReport validate_conditions(const NozzleProfile& profile, double a, double b, int samples) {
  if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("validate_conditions: need a finite interval with a < b");
  }
  if (!profile.contains(a) || !profile.contains(b)) {
    throw DomainError("validate_conditions: interval leaves the profile domain");
  }
  if (samples < 2) throw DomainError("validate_conditions: need at least 2 samples");

  ConditionReport r;
  r.a = a;
  r.b = b;
  r.samples = samples;
  r.area_min = std::numeric_limits<double>::infinity();
  double sup_a = 0.0, sup_da = 0.0;
  const double h = (b - a) / samples;
  double prev_x = a;
  double prev_abs_da = std::abs(profile.darea(a));
  for (int i = 0; i <= samples; ++i) {
    const double x = i == samples ? b : a + i * h;
    const AreaJet j = profile.jet(x);
    r.area_min = std::min(r.area_min, j.a);
    r.area_max = std::max(r.area_max, j.a);
    sup_a = std::max(sup_a, std::abs(j.a));
    sup_da = std::max(sup_da, std::abs(j.da));
    r.d2A_sup = std::max(r.d2A_sup, std::abs(j.d2a));
    r.dlogA_sup = std::max(r.dlogA_sup, std::abs(profile.dlogA(x)));
    r.dlogA_prime_sup = std::max(r.dlogA_prime_sup, std::abs(profile.dlogA_prime(x)));
    if (i > 0) {
      // Trapezoid on |A'|, split at x = 0 so each half-line gets its own share.
      const double abs_da = std::abs(j.da);
      if (x <= 0.0) {
        r.dA_l1_left += 0.5 * (x - prev_x) * (abs_da + prev_abs_da);
      } else if (prev_x >= 0.0) {
        r.dA_l1_right += 0.5 * (x - prev_x) * (abs_da + prev_abs_da);
      } else {
        const double da0 = std::abs(profile.darea(0.0));
        r.dA_l1_left += 0.5 * (0.0 - prev_x) * (da0 + prev_abs_da);
        r.dA_l1_right += 0.5 * (x - 0.0) * (abs_da + da0);
      }
      prev_abs_da = abs_da;
    }
    prev_x = x;
  }
  r.c2_norm = sup_a + sup_da + r.d2A_sup;

  const TailClass tails = tail_class(profile, r);
  r.satisfies_13a = tails.bounded_log_derivative && tails.l1_left;
  r.satisfies_13b = tails.bounded_log_derivative && tails.l1_right;
  r.satisfies_14_15 = r.area_min > 0.0 && std::isfinite(r.area_max) && std::isfinite(r.c2_norm) &&
                      std::isfinite(r.dA_l1_left + r.dA_l1_right);
  return r;
}

}  // namespace nozzleflow
