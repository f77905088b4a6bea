#include <doctest.h>

#include <cmath>
#include <random>

#include "nozzleflow/errors.hpp"
#include "nozzleflow/harness.hpp"

using namespace nozzleflow;
using doctest::Approx;

namespace {

std::vector<FluidField> history(const Grid& g, int n, double T, const std::function<double(double, double)>& rho) {
  std::vector<FluidField> h;
  for (int k = 0; k <= n; ++k) {
    FluidField f(g, 0.0, 0.0, T * k / n);
    for (int i = 0; i < g.nodes(); ++i) f.rho[i] = rho(f.t, g.x(i)), f.m[i] = -0.5 * f.rho[i];
    h.push_back(f);
  }
  return h;
}

RunConfig quick_config() {
  RunConfig c;
  c.gamma = 2.0;
  c.rho_left = 1.0;
  c.rho_right = 0.125;
  c.eps_list = {0.1, 0.05, 0.025};
  c.dx = 0.01;
  c.t_end = 0.5;
  c.snapshots = 16;
  c.diag_weak = false;
  c.threads = 2;
  return c;
}

}  // namespace

TEST_CASE("lp distance closed forms") {
  const Grid g{-2, 2, 80};
  const auto a = history(g, 10, 0.5, [](double t, double x) { return 1.0 + t * x * x; });
  CHECK(lp_distance(a, a, -1, 1, 1.0) == 0.0);
  const auto b = history(g, 10, 0.5, [](double t, double x) { return 1.3 + t * x * x; });
  CHECK(lp_distance(a, b, -1, 1, 1.0) == Approx(0.3 * 2 * 0.5).epsilon(1e-12));
  CHECK(lp_distance(a, b, -1, 1, 2.0) == Approx(0.3 * std::sqrt(2 * 0.5)).epsilon(1e-12));
  CHECK(lp_distance(a, b, -1, 1, 2.0, Component::Momentum) == Approx(0.15 * std::sqrt(2 * 0.5)).epsilon(1e-12));
  // different grids, linear fields: interpolation is exact
  const auto c = history(Grid{-3, 3, 37}, 10, 0.5, [](double t, double x) { return 2.0 + t * x; });
  const auto d = history(Grid{-2, 2, 80}, 10, 0.5, [](double t, double x) { return 1.75 + t * x; });
  CHECK(lp_distance(c, d, -0.9, 1.3, 1.5) == Approx(0.25 * std::pow(2.2 * 0.5, 1 / 1.5)).epsilon(1e-12));
}

TEST_CASE("lp distance against direct summation") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  const Grid g{-3, 3, 60};  // K = [-1, 1] is node-aligned
  std::vector<FluidField> a, b;
  const double times[] = {0.0, 0.1, 0.15, 0.4, 0.5};
  for (double t : times) {
    FluidField fa(g, 0, 0, t), fb(g, 0, 0, t);
    for (int i = 0; i < g.nodes(); ++i) fa.rho[i] = u(rng), fb.rho[i] = u(rng);
    a.push_back(fa);
    b.push_back(fb);
  }
  for (double p : {1.0, 1.7, 2.5}) {
    long double total = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double wt = 0.5 * ((k > 0 ? times[k] - times[k - 1] : 0) + (k + 1 < a.size() ? times[k + 1] - times[k] : 0));
      long double s = 0;
      for (int i = 20; i <= 40; ++i) {
        const double w = (i == 20 || i == 40) ? 0.05 : 0.1;
        s += w * std::pow(std::abs(a[k].rho[i] - b[k].rho[i]), p);
      }
      total += wt * s;
    }
    CHECK(lp_distance(a, b, -1, 1, p) == Approx(std::pow(static_cast<double>(total), 1 / p)).epsilon(1e-12));
  }
  a.pop_back();
  CHECK_THROWS_AS(lp_distance(a, b, -1, 1, 1.0), ConfigError);
}

TEST_CASE("convergence verdict") {
  const std::vector<double> down{1.0, 0.5, 0.3, 0.1};
  CHECK(converging(down));
  const std::vector<double> one_bump{1.0, 0.5, 0.6, 0.2};
  CHECK(converging(one_bump));
  const std::vector<double> two{1.0, 1.1, 1.2, 0.2};
  CHECK_FALSE(converging(two));
  CHECK(converging(std::vector<double>{0.0, 0.0, 0.0}));
  CHECK_FALSE(converging(std::vector<double>{1.0, 0.95, 0.93}, 0.9, 1));
  CHECK(converging(std::vector<double>{1.0, 0.95, 0.93}, 1.0, 0));
}

TEST_CASE("setup") {
  RunConfig c = quick_config();
  const auto prof = profile_for(c);
  const auto sched = schedule_for(c, prof);
  CHECK(sched.q == 5.0);
  const RunSetup s = setup_run(c, sched, 0.05, true);
  CHECK(s.grid.a == Approx(-20.0));
  CHECK(s.grid.b == Approx(20.0));
  CHECK(s.grid.dx() == Approx(0.01));
  CHECK(s.delta == Approx(std::pow(0.05, 5)));
  CHECK(s.initial.rho.front() == 1.0);
  CHECK(s.initial.rho.back() == 0.125);

  c.bc = "dirichlet_spherical";
  c.profile = "spherical";
  c.profile_params = {3};
  c.initial = "bump_collapse";
  c.bump_center = 1.0;
  c.bump_speed = 0.5;
  const auto sp = profile_for(c);
  const RunSetup t = setup_run(c, schedule_for(c, sp), 0.1, true);
  CHECK(t.grid.a == Approx(0.1));
  CHECK(t.bc.state.rho_left == Approx(std::pow(0.1, 1.5)));
  double mmin = 0;
  for (double m : t.initial.m) mmin = std::min(mmin, m);
  CHECK(mmin < 0.0);  // inward

  c.initial = "shock_tube";
  CHECK_THROWS_AS(setup_run(c, schedule_for(c, sp), 0.1), ConfigError);
}

TEST_CASE("sweep of a constant state") {
  RunConfig c = quick_config();
  c.initial = "constant";
  c.rho_right = 1.0;
  c.eps_list = {0.2, 0.1, 0.05};
  c.dx = 0.05;
  c.t_end = 0.2;
  const SweepResult r = sweep(c);
  REQUIRE(r.d_rho.size() == 2);
  for (double d : r.d_rho) CHECK(d == 0.0);
  for (double d : r.d_m) CHECK(d == 0.0);
  CHECK(r.converging_rho);
  CHECK(r.converging_m);
  for (const auto& run : r.runs) CHECK(run.report.integrability->rho_gamma1 == Approx(2 * 0.2).epsilon(1e-12));
}

TEST_CASE("sweep guards") {
  RunConfig c = quick_config();
  c.p = 3.0;  // = gamma + 1
  CHECK_THROWS_AS(sweep(c), ConfigError);
  c.p = 1.0;
  c.q_m = 1.5;  // = 3(gamma+1)/(gamma+3) at gamma = 2 is 1.8; 1.5 is fine
  c.eps_list = {0.1};
  CHECK_THROWS_AS(sweep(c), ConfigError);
  c = quick_config();
  c.q = 2.0;  // certificate fails
  CHECK_THROWS_AS(sweep(c), ConfigError);
  c.q_m = 2.0;
  c.q = 0.0;
  CHECK_THROWS_AS(sweep(c), ConfigError);
}

TEST_CASE("Riemann sweep: Cauchy distances decrease") {
  const SweepResult r = sweep(quick_config());
  MESSAGE(r.summary());
  REQUIRE(r.d_rho.size() == 2);
  CHECK(r.d_rho[1] < r.d_rho[0]);
  CHECK(r.d_m[1] < r.d_m[0]);
  CHECK(r.certificate.passed());
  for (const auto& run : r.runs) {
    CHECK(run.ok);
    CHECK(run.window.front().grid.a <= -1.0);
    CHECK(run.window.front().grid.b >= 1.0);
  }
}

TEST_CASE("verdicts of a single run") {
  RunConfig c = quick_config();
  c.profile = "gaussian_bump";
  c.profile_params = {1, 1};
  c.gamma = 1.4;
  c.eps = 0.1;
  c.t_end = 0.3;
  const auto prof = profile_for(c);
  const RunSetup s = setup_run(c, schedule_for(c, prof), c.eps);
  const Solver solver(s.gas, s.profile, s.eps, s.bc, s.grid, SolverOptions{c.cfl, {}});
  const RunResult res = solver.run(s.initial, c.t_end, s.options);
  const auto v = evaluate_run(c, s, res);
  std::vector<std::string> names;
  for (const auto& l : v) {
    names.push_back(l.name);
    CHECK_MESSAGE(l.pass, l.name << " " << l.value << " " << l.detail);
  }
  CHECK(std::find(names.begin(), names.end(), "energy_gronwall") != names.end());
  CHECK(std::find(names.begin(), names.end(), "max_principle") != names.end());
}
