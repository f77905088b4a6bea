#include <doctest.h>

#include <cmath>

#include "nozzleflow/errors.hpp"
#include "nozzleflow/solver.hpp"

using namespace nozzleflow;
using doctest::Approx;

namespace {

double max_drift(const FluidField& f, double rho, double m) {
  double d = 0;
  for (int i = 0; i < f.grid.nodes(); ++i) d = std::max({d, std::abs(f.rho[i] - rho), std::abs(f.m[i] - m)});
  return d;
}

FluidField bump_field(const Grid& g, double rho_bar, double center, double amp, double speed) {
  FluidField f(g, rho_bar, 0.0);
  for (int i = 0; i < g.nodes(); ++i) {
    const double x = g.x(i);
    const double w = std::abs(x - center) < 0.5 ? std::exp(1.0 - 1.0 / (1.0 - 4.0 * (x - center) * (x - center))) : 0.0;
    f.rho[i] = rho_bar + amp * w;
    f.m[i] = -f.rho[i] * speed * w;
  }
  f.m.front() = f.m.back() = 0.0;
  f.rho.front() = f.rho.back() = rho_bar;
  return f;
}

}  // namespace

TEST_CASE("constant state is a steady solution") {
  const GasLaw gas(1.4, 1e-4);
  const std::pair<NozzleProfile, Grid> cases[] = {
      {NozzleProfile::constant(), Grid{-3, 3, 120}},
      {NozzleProfile::gaussian_bump(1, 1), Grid{-3, 3, 120}},
      {NozzleProfile::power_law_closing(0.5), Grid{-3, 3, 120}},
      {NozzleProfile::exponential(0.3), Grid{-3, 3, 120}},
      {NozzleProfile::spherical(3), Grid{0.5, 3, 100}},
  };
  for (const auto& [p, g] : cases) {
    const Solver s(gas, p, 0.05, BoundarySpec::dirichlet_nozzle(0.8, 0.0, 0.8, 0.0), g);
    FluidField f(g, 0.8, 0.0);
    const double dt = s.stable_dt(f);
    for (int n = 0; n < 2000; ++n) s.step(f, dt);
    CHECK(max_drift(f, 0.8, 0.0) < 1e-10);
  }
  const Solver sn(gas, NozzleProfile::spherical(2), 0.05, BoundarySpec::neumann_spherical(0.8), Grid{0.05, 3, 100});
  FluidField f(sn.grid(), 0.8, 0.0);
  const RunResult r = sn.run(f, 1.0, RunOptions{.snapshots = 0});
  CHECK(max_drift(r.field, 0.8, 0.0) < 1e-10);
}

TEST_CASE("run to the current time is the identity") {
  const Solver s(GasLaw(2.0), NozzleProfile::constant(), 0.1, BoundarySpec::dirichlet_nozzle(1, 0, 0.5, 0),
                 Grid{-2, 2, 40});
  FluidField f(s.grid(), 1.0, 0.0, 0.3);
  f.rho[30] = 0.7;
  const RunResult r = s.run(f, 0.3);
  CHECK(r.field.rho == f.rho);
  CHECK(r.field.m == f.m);
  CHECK(r.report.empty());
}

TEST_CASE("long constant run") {
  const Solver s(GasLaw(2.0), NozzleProfile::gaussian_bump(0.5, 1), 0.1, BoundarySpec::dirichlet_nozzle(1, 0, 1, 0),
                 Grid{-4, 4, 80});
  const RunResult r = s.run(FluidField(s.grid(), 1.0, 0.0), 10.0, RunOptions{.snapshots = 4});
  CHECK(r.field.t == 10.0);
  CHECK(max_drift(r.field, 1.0, 0.0) < 1e-10);
}

TEST_CASE("mass ledger closes to rounding") {
  const GasLaw gas(1.4, 1e-3);
  for (const auto& p : {NozzleProfile::constant(), NozzleProfile::gaussian_bump(1, 1)}) {
    const Solver s(gas, p, 0.05, BoundarySpec::dirichlet_nozzle(1.0, 0.2, 0.125, 0.0), Grid{-1, 1, 200});
    FluidField f(s.grid(), 1.0, 0.2);
    for (int i = 0; i < f.grid.nodes(); ++i)
      if (f.grid.x(i) > 0.0) f.rho[i] = 0.125, f.m[i] = 0.0;
    const double before = s.evolving_mass(f);
    const StepInfo info = s.step(f, s.stable_dt(f));
    const double after = s.evolving_mass(f);
    CHECK(std::abs(after - before - info.mass_in_left + info.mass_out_right) < 1e-12 * before);
  }
  const Solver sp(gas, NozzleProfile::spherical(3), 0.05, BoundarySpec::neumann_spherical(0.5), Grid{0.05, 2, 195});
  FluidField f = bump_field(sp.grid(), 0.5, 1.0, 0.4, 0.3);
  const double before = sp.evolving_mass(f);
  const StepInfo info = sp.step(f, sp.stable_dt(f));
  CHECK(info.mass_in_left == 0.0);
  CHECK(std::abs(sp.evolving_mass(f) - before + info.mass_out_right) < 1e-12 * before);
}

TEST_CASE("time step guard") {
  const Solver s(GasLaw(2.0), NozzleProfile::constant(), 0.1, BoundarySpec::dirichlet_nozzle(1, 0, 1, 0),
                 Grid{-1, 1, 20});
  FluidField f(s.grid(), 1.0, 0.0);
  CHECK_THROWS_AS(s.step(f, 1.01 * s.stable_dt(f) / s.cfl()), StabilityError);
  CHECK_THROWS_AS(Solver(GasLaw(2.0), NozzleProfile::constant(), 0.0, BoundarySpec{}, Grid{-1, 1, 20}), ConfigError);
}

TEST_CASE("reflection symmetry") {
  // rho even, m odd under x -> -x for symmetric data on a symmetric duct
  const Solver s(GasLaw(2.0), NozzleProfile::gaussian_bump(0.5, 1), 0.05, BoundarySpec::dirichlet_nozzle(1, 0, 1, 0),
                 Grid{-2, 2, 200});
  FluidField f(s.grid(), 1.0, 0.0);
  for (int i = 0; i < f.grid.nodes(); ++i) {
    const double x = f.grid.x(i);
    f.rho[i] = 1.0 + 0.5 * std::exp(-8 * x * x);
    f.m[i] = 0.3 * x * std::exp(-8 * x * x);
  }
  const RunResult r = s.run(f, 0.3, RunOptions{.snapshots = 0});
  double err = 0;
  const int n = f.grid.cells;
  for (int i = 0; i <= n; ++i) {
    err = std::max(err, std::abs(r.field.rho[i] - r.field.rho[n - i]));
    err = std::max(err, std::abs(r.field.m[i] + r.field.m[n - i]));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("free-function step matches the solver") {
  const GasLaw gas(1.4);
  const auto bc = BoundarySpec::dirichlet_nozzle(1, 0, 0.5, 0);
  const Grid g{-1, 1, 50};
  FluidField f(g, 1.0, 0.0);
  for (int i = 25; i <= 50; ++i) f.rho[i] = 0.5;
  const Solver s(gas, NozzleProfile::constant(), 0.1, bc, g);
  FluidField a = f;
  s.step(a, 1e-3);
  const FluidField b = step(f, gas, NozzleProfile::constant(), 0.1, bc, 1e-3);
  CHECK(a.rho == b.rho);
  CHECK(b.t == Approx(1e-3));
}

TEST_CASE("spherical Dirichlet bump satisfies the energy inequality") {
  const GasLaw gas(2.0);
  const Solver s(gas, NozzleProfile::spherical(3), 0.05, BoundarySpec::dirichlet_spherical(1.0), Grid{0.1, 2.1, 400});
  RunOptions opt;
  opt.snapshots = 8;
  opt.reference = ReferenceState::constant(1.0);
  const RunResult r = s.run(bump_field(s.grid(), 1.0, 1.1, 0.5, 0.5), 0.5, opt);
  CHECK(sharp_energy_check(r.report.energy_series, 1e-3));
  CHECK(r.report.energy_series.back().D > 0.0);
  CHECK(r.snapshots.size() == 9);
}
