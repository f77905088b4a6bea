#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nozzleflow/entropy.hpp"
#include "nozzleflow/errors.hpp"
#include "nozzleflow/field.hpp"

using namespace nozzleflow;
using doctest::Approx;

TEST_CASE("grid") {
  const Grid g = Grid::with_spacing(-1.0, 2.0, 0.07);
  CHECK(g.dx() <= 0.07);
  CHECK(g.cells == 43);
  CHECK(g.x(g.cells) == 2.0);
  CHECK(g.nodes() == 44);
}

TEST_CASE("constant data matching the ends is a fixed point") {
  const GasLaw gas(2.0);
  const Grid g{-5.0, 5.0, 200};
  const auto bc = BoundarySpec::dirichlet_nozzle(0.7, 0.0, 0.7, 0.0);
  InitialData raw{[](double) { return 0.7; }, [](double) { return 0.0; }, 0.1};
  const FluidField f = prepare_initial_data(raw, bc, gas, NozzleProfile::gaussian_bump(), g);
  for (int i = 0; i < g.nodes(); ++i) {
    CHECK(f.rho[i] == 0.7);
    CHECK(f.m[i] == 0.0);
  }
}

TEST_CASE("Riemann data: monotone, smooth, exact ends") {
  const GasLaw gas(1.4);
  const Grid g{-4.0, 4.0, 800};
  const auto bc = BoundarySpec::dirichlet_nozzle(1.0, 0.0, 0.125, 0.0);
  InitialData raw{[](double x) { return x < 0 ? 1.0 : 0.125; }, [](double) { return 0.0; }, 0.1};
  const FluidField f = prepare_initial_data(raw, bc, gas, NozzleProfile::constant(), g);
  CHECK(f.rho.front() == 1.0);
  CHECK(f.rho.back() == 0.125);
  double max_jump = 0;
  for (int i = 1; i < g.nodes(); ++i) {
    CHECK(f.rho[i] <= f.rho[i - 1] + 1e-15);
    max_jump = std::max(max_jump, f.rho[i - 1] - f.rho[i]);
  }
  // mollified over 2h = 0.2, i.e. at least 20 nodes
  CHECK(max_jump < 0.875 / 10);
  CHECK(interpolate(g, f.rho, 0.0) == Approx(0.5625).epsilon(1e-3));
}

TEST_CASE("mollification keeps the relative energy of a bump") {
  const GasLaw gas(2.0);
  const Grid g{-6.0, 6.0, 1200};
  const auto bc = BoundarySpec::dirichlet_nozzle(1.0, 0.0, 1.0, 0.0);
  auto rho0 = [](double x) { return 1.0 + 0.5 * std::exp(-x * x / 0.25); };
  InitialData raw{rho0, [](double) { return 0.0; }, 0.05};
  const FluidField f = prepare_initial_data(raw, bc, gas, NozzleProfile::constant(), g);
  const auto ref = ReferenceState::constant(1.0);
  double e_out = 0, e_raw = 0;
  for (int i = 0; i < g.nodes(); ++i) {
    const double w = (i == 0 || i == g.cells) ? 0.5 : 1.0;
    e_out += w * relative_energy_density(gas, ref, g.x(i), f.rho[i], f.m[i]);
    e_raw += w * relative_energy_density(gas, ref, g.x(i), rho0(g.x(i)), 0.0);
  }
  CHECK(e_out / e_raw >= 0.95);
  CHECK(e_out / e_raw <= 1.05);
}

TEST_CASE("floor lift") {
  const GasLaw gas(2.0);
  const Grid g{-1.0, 1.0, 100};
  const auto bc = BoundarySpec::dirichlet_nozzle(1.0, 0.0, 1.0, 0.0);
  InitialData raw{[](double x) { return std::abs(x) < 0.5 ? 0.0 : 1.0; }, [](double) { return 0.0; }, 0.0};
  const FluidField f = prepare_initial_data(raw, bc, gas, NozzleProfile::constant(), g);
  CHECK(f.rho[50] == 1e-6);
}

TEST_CASE("spherical modes need a spherical profile") {
  const GasLaw gas(2.0);
  InitialData raw{[](double) { return 1.0; }, [](double) { return 0.0; }};
  CHECK_THROWS_AS(prepare_initial_data(raw, BoundarySpec::dirichlet_spherical(1.0), gas, NozzleProfile::constant(),
                                       Grid{0.1, 2.0, 10}),
                  ConfigError);
  const FluidField f = prepare_initial_data(raw, BoundarySpec::neumann_spherical(1.0), gas,
                                            NozzleProfile::spherical(3), Grid{0.1, 2.0, 40});
  CHECK(f.m[0] == 0.0);
}

TEST_CASE("validation") {
  FluidField f(Grid{0, 1, 4}, 1.0, 0.0);
  CHECK_NOTHROW(f.validate());
  f.rho[2] = -1.0;
  CHECK_THROWS_AS(f.validate(), CavitationError);
  f.rho[2] = 1.0;
  f.m[1] = std::nan("");
  CHECK_THROWS_AS(f.validate(), NonFiniteError);
}

TEST_CASE("grid coefficients") {
  const Grid g{1.0, 2.0, 10};
  const auto c = GridCoefficients::build(g, NozzleProfile::spherical(3), true);
  CHECK(c.area[0] == Approx(1.0));
  CHECK(c.g[10] == Approx(1.0));
  CHECK(c.g_prime[0] == Approx(-2.0));
  CHECK(c.area_face.size() == 10);
  const auto p = GridCoefficients::build(g, NozzleProfile::spherical(3), false);
  CHECK(p.area[10] == Approx(16 * M_PI));
  CHECK(p.g[5] == Approx(c.g[5]).epsilon(1e-14));
}

TEST_CASE("snapshot csv") {
  const Grid g{0.0, 1.0, 4};
  FluidField f(g, 2.0, 1.0, 0.25);
  std::ostringstream os;
  write_snapshot(os, f, GridCoefficients::build(g, NozzleProfile::constant(), false), SnapshotMeta{2, 0.125, 0, 0.1, 0.4});
  const std::string s = os.str();
  CHECK(s.find("x,rho,m,u,A") != std::string::npos);
  CHECK(s.find("0.5,2,1,0.5,1") != std::string::npos);
}
