#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "nozzleflow/errors.hpp"
#include "nozzleflow/geometry.hpp"

using namespace nozzleflow;
using doctest::Approx;

TEST_CASE("area evaluation") {
  CHECK(NozzleProfile::constant().area(3.7) == 1.0);
  CHECK(NozzleProfile::spherical(3).area(2.0) == Approx(4.0 * M_PI * 4.0).epsilon(1e-14));
  CHECK(NozzleProfile::spherical(3).area(2.0) == Approx(50.2655).epsilon(1e-6));
  CHECK(NozzleProfile::gaussian_bump(1.0, 1.0).area(0.0) == 2.0);
  CHECK(NozzleProfile::power_law_closing(1.0).area(1.0) == Approx(0.5));
  CHECK(NozzleProfile::exponential(0.3).area(2.0) == Approx(std::exp(0.6)));
}

TEST_CASE("log-derivative") {
  CHECK(NozzleProfile::constant().dlogA(-5.0) == 0.0);
  CHECK(NozzleProfile::spherical(3).dlogA(0.5) == Approx(4.0));
  const double e = std::exp(-1.0);
  CHECK(NozzleProfile::gaussian_bump(1.0, 1.0).dlogA(1.0) == Approx(-2.0 * e / (1.0 + e)).epsilon(1e-14));
  CHECK(NozzleProfile::exponential(0.3).dlogA(7.0) == Approx(0.3));
}

TEST_CASE("derivatives match finite differences") {
  const double h = 1e-5;
  for (const auto& p : {NozzleProfile::gaussian_bump(0.7, 1.3), NozzleProfile::power_law_closing(0.5),
                        NozzleProfile::exponential(-0.4), NozzleProfile::spherical(4)}) {
    for (double x : {0.3, 0.9, 1.7}) {
      const AreaJet j = p.jet(x);
      CHECK(j.da == Approx((p.area(x + h) - p.area(x - h)) / (2 * h)).epsilon(1e-7));
      CHECK(j.d2a == Approx((p.darea(x + h) - p.darea(x - h)) / (2 * h)).epsilon(1e-6));
      CHECK(p.dlogA_prime(x) == Approx((p.dlogA(x + h) - p.dlogA(x - h)) / (2 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("domain checks") {
  const auto s = NozzleProfile::spherical(3);
  CHECK_THROWS_AS(s.area(0.0), DomainError);
  CHECK_THROWS_AS(s.area(-1.0), DomainError);
  CHECK_THROWS_AS(NozzleProfile::gaussian_bump(-1.5, 1.0), ConfigError);
  CHECK_THROWS_AS(NozzleProfile::spherical(1), ConfigError);
  CHECK(unit_sphere_area(2) == Approx(2 * M_PI));
  CHECK(unit_sphere_area(3) == Approx(4 * M_PI));
  CHECK(unit_sphere_area(4) == Approx(2 * M_PI * M_PI));
}

TEST_CASE("condition report") {
  const auto c = validate_conditions(NozzleProfile::constant(), -10, 10);
  CHECK(c.satisfies_13a);
  CHECK(c.satisfies_13b);
  CHECK(c.satisfies_14_15);
  CHECK(c.dlogA_sup == 0.0);

  const auto s = validate_conditions(NozzleProfile::spherical(3), 0.1, 10);
  CHECK(s.satisfies_14_15);
  CHECK_FALSE(s.satisfies_13a);
  CHECK_FALSE(s.satisfies_13b);

  // sup |2 alpha x / (1 + x^2)| = alpha, reached at x = 1
  const auto p = validate_conditions(NozzleProfile::power_law_closing(1.0), -50, 50);
  CHECK(p.dlogA_sup == Approx(1.0).epsilon(1e-6));
  CHECK(p.dlogA_sup <= 2.0);
  CHECK(p.satisfies_13a);

  const auto e = validate_conditions(NozzleProfile::exponential(0.5), -5, 5);
  CHECK(e.satisfies_13a);
  CHECK_FALSE(e.satisfies_13b);
}

TEST_CASE("tabulated spline") {
  std::vector<double> x, a;
  for (int i = 0; i <= 40; ++i) {
    x.push_back(-2.0 + 0.1 * i);
    a.push_back(1.0 + std::exp(-x.back() * x.back()));
  }
  const auto t = NozzleProfile::tabulated(x, a);
  const auto g = NozzleProfile::gaussian_bump(1.0, 1.0);
  for (double xi : {-1.55, -0.3, 0.0, 0.77}) {
    CHECK(t.area(xi) == Approx(g.area(xi)).epsilon(1e-4));
    CHECK(t.darea(xi) == Approx(g.darea(xi)).epsilon(2e-3));
  }
  CHECK(t.area(x[7]) == Approx(a[7]).epsilon(1e-15));
  CHECK_THROWS_AS(t.area(2.5), DomainError);

  const auto path = std::filesystem::temp_directory_path() / "nozzleflow_table.txt";
  {
    std::ofstream out(path);
    out.precision(17);
    out << "# x A\n";
    for (std::size_t i = 0; i < x.size(); ++i) out << x[i] << ' ' << a[i] << '\n';
  }
  const auto l = NozzleProfile::load_tabulated(path);
  CHECK(l.area(0.33) == Approx(t.area(0.33)).epsilon(1e-12));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(NozzleProfile::tabulated({0.0, 1.0}, {1.0, -1.0}), ConfigError);
}

TEST_CASE("from_spec names") {
  CHECK(NozzleProfile::from_spec("spherical", {3}).dimension() == 3);
  CHECK(NozzleProfile::from_spec("gaussian_bump", {1, 1}).kind() == ProfileKind::GaussianBump);
  CHECK_THROWS_AS(NozzleProfile::from_spec("trumpet", {}), ConfigError);
}
