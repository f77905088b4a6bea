#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nozzleflow {

enum class ProfileKind { Constant, GaussianBump, PowerLawClosing, Exponential, Spherical, UserTabulated };

std::string_view to_string(ProfileKind kind);

/// Value and first two derivatives of the area function at a point.
struct AreaJet {
  double a = 0.0;
  double da = 0.0;
  double d2a = 0.0;
};

/// Cross-sectional area A(x) of a duct, or the spherical weight omega_n x^(n-1).
///
/// Immutable once built. Every query checks that x lies inside the profile
/// domain and throws DomainError otherwise.
class NozzleProfile {
 public:
  static NozzleProfile constant(double level = 1.0);
  /// A(x) = 1 + amplitude * exp(-(x/width)^2). amplitude > -1 keeps A positive.
  static NozzleProfile gaussian_bump(double amplitude = 1.0, double width = 1.0);
  /// A(x) = (1 + x^2)^(-alpha), closing at both ends.
  static NozzleProfile power_law_closing(double alpha);
  /// A(x) = exp(rate * x), unbounded on one side.
  static NozzleProfile exponential(double rate);
  /// A(x) = omega_n x^(n-1) on x > 0. omega defaults to the unit-sphere surface area.
  static NozzleProfile spherical(int dimension, double omega = 0.0);
  /// Natural cubic spline through (x, A) samples; derivatives are those of the spline.
  static NozzleProfile tabulated(std::vector<double> x, std::vector<double> area);
  /// Reads a two-column (x, A) text file; '#' starts a comment.
  static NozzleProfile load_tabulated(const std::filesystem::path& path);
  /// Builds a profile from a config kind name and parameter list.
  static NozzleProfile from_spec(std::string_view kind, const std::vector<double>& params,
                                 const std::string& table_path = {});

  [[nodiscard]] ProfileKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::string describe() const;

  [[nodiscard]] double domain_lo() const noexcept { return lo_; }
  [[nodiscard]] double domain_hi() const noexcept { return hi_; }
  [[nodiscard]] bool contains(double x) const noexcept;

  [[nodiscard]] AreaJet jet(double x) const;
  [[nodiscard]] double area(double x) const { return jet(x).a; }
  [[nodiscard]] double darea(double x) const { return jet(x).da; }
  [[nodiscard]] double d2area(double x) const { return jet(x).d2a; }
  /// A'(x) / A(x).
  [[nodiscard]] double dlogA(double x) const;
  /// (A'/A)'(x) = A''/A - (A'/A)^2.
  [[nodiscard]] double dlogA_prime(double x) const;

  /// Spherical dimension n; 0 for non-spherical profiles.
  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  /// Surface constant omega_n; 0 for non-spherical profiles.
  [[nodiscard]] double omega() const noexcept { return omega_; }
  /// Profile parameters as passed at construction.
  [[nodiscard]] const std::vector<double>& params() const noexcept { return params_; }

 private:
  struct Spline {
    std::vector<double> x, a, m;  // m: second derivatives at knots
  };

  NozzleProfile() = default;

  ProfileKind kind_ = ProfileKind::Constant;
  std::vector<double> params_;
  double lo_ = -1e300;
  double hi_ = 1e300;
  int dimension_ = 0;
  double omega_ = 0.0;
  Spline spline_;
};

/// Surface area of the unit sphere in R^n.
double unit_sphere_area(int n);

/// Numerically estimated admissibility data of a profile on [a, b].
struct ConditionReport {
  double a = 0.0;
  double b = 0.0;
  int samples = 0;
  double dlogA_sup = 0.0;       // sup |A'/A|
  double dlogA_prime_sup = 0.0; // sup |(A'/A)'|
  double dA_l1_left = 0.0;      // int |A'| over [a, min(b, 0)]
  double dA_l1_right = 0.0;     // int |A'| over [max(a, 0), b]
  double area_min = 0.0;        // A0
  double area_max = 0.0;        // A1
  double d2A_sup = 0.0;
  double c2_norm = 0.0;         // sup|A| + sup|A'| + sup|A''|
  bool satisfies_13a = false;   // global: A'/A bounded and A' in L1(-inf, 0)
  bool satisfies_13b = false;   // global: A'/A bounded and A' in L1(0, inf)
  bool satisfies_14_15 = false; // on [a, b]: 0 < A0 <= A <= A1, finite C2 + L1 norms
};

inline constexpr int kDefaultConditionSamples = 10000;

ConditionReport validate_conditions(const NozzleProfile& profile, double a, double b,
                                    int samples = kDefaultConditionSamples);

}  // namespace nozzleflow
