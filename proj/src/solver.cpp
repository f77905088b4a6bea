#include "nozzleflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

namespace {

double van_leer(double a, double b) { return a * b > 0.0 ? 2.0 * a * b / (a + b) : 0.0; }

// Solves the tridiagonal system lo[i] x[i-1] + di[i] x[i] + up[i] x[i+1] = rhs[i] in place.
void thomas(std::vector<double>& lo, std::vector<double>& di, std::vector<double>& up, std::vector<double>& rhs) {
  const std::size_t n = di.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= di[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

std::string at_time(double t) {
  std::ostringstream os;
  os << " (t=" << t << ")";
  return os.str();
}

}  // namespace

Solver::Solver(GasLaw gas, NozzleProfile profile, double eps, BoundarySpec bc, Grid grid, SolverOptions opt)
    : gas_(std::move(gas)),
      profile_(std::move(profile)),
      eps_(eps),
      bc_(std::move(bc)),
      grid_(grid),
      opt_(std::move(opt)),
      coeff_(GridCoefficients::build(grid_, profile_, bc_.spherical())) {
  if (!(eps > 0.0)) throw ConfigError("solver: eps must be positive");
  if (grid_.cells < 3) throw ConfigError("solver: need at least 3 cells");
  if (!(opt_.cfl > 0.0) || opt_.cfl > 1.0) throw ConfigError("solver: cfl must lie in (0, 1]");
  if (bc_.spherical() && bc_.time_dependent) throw ConfigError("solver: time-dependent data only for nozzle mode");
}

double Solver::stable_dt(const FluidField& f) const {
  double s = 0.0;
  for (int i = 0; i < f.grid.nodes(); ++i) s = std::max(s, std::abs(f.u(i)) + gas_.sound_speed(f.rho[i]));
  return s > 0.0 ? opt_.cfl * grid_.dx() / s : std::numeric_limits<double>::infinity();
}

void Solver::apply_boundary(FluidField& f, double t) const {
  const BoundaryState s = bc_.at(t);
  const int n = grid_.cells;
  if (!bc_.neumann_left()) f.rho[0] = s.rho_left;
  f.m[0] = s.m_left;
  f.rho[n] = s.rho_right;
  f.m[n] = s.m_right;
}

int Solver::lift(FluidField& f) const {
  int count = 0;
  for (int i = 0; i < grid_.nodes(); ++i) {
    if (!std::isfinite(f.rho[i]) || !std::isfinite(f.m[i])) {
      throw NonFiniteError("solver: non-finite state at x=" + std::to_string(grid_.x(i)) + at_time(f.t));
    }
    if (f.rho[i] <= 0.0) {
      throw CavitationError("solver: density " + std::to_string(f.rho[i]) + " at x=" + std::to_string(grid_.x(i)) +
                            at_time(f.t));
    }
    if (f.rho[i] < kRhoFloor) {
      f.rho[i] = kRhoFloor;
      ++count;
    }
  }
  return count;
}

void Solver::explicit_rate(const FluidField& f, double t, std::vector<double>& drho, std::vector<double>& dm,
                           double& flux_left, double& flux_right) const {
  const int n = grid_.cells;
  const double dx = grid_.dx();
  const auto& A = coeff_.area;
  const auto& Af = coeff_.area_face;

  std::vector<double> sr(n + 1), sm(n + 1);
  for (int i = 1; i < n; ++i) {
    sr[i] = van_leer(f.rho[i] - f.rho[i - 1], f.rho[i + 1] - f.rho[i]);
    sm[i] = van_leer(f.m[i] - f.m[i - 1], f.m[i + 1] - f.m[i]);
  }
  if (bc_.neumann_left()) {
    // Mirror ghost: rho even, m odd about x = a.
    sr[0] = 0.0;
    sm[0] = van_leer(f.m[0] + f.m[1], f.m[1] - f.m[0]);
  } else {
    sr[0] = f.rho[1] - f.rho[0];
    sm[0] = f.m[1] - f.m[0];
  }
  sr[n] = f.rho[n] - f.rho[n - 1];
  sm[n] = f.m[n] - f.m[n - 1];

  std::vector<double> F1(n), F2(n);
  for (int j = 0; j < n; ++j) {
    const double rl = f.rho[j] + 0.5 * sr[j], ml = f.m[j] + 0.5 * sm[j];
    const double rr = f.rho[j + 1] - 0.5 * sr[j + 1], mr = f.m[j + 1] - 0.5 * sm[j + 1];
    const double ul = GasLaw::velocity(rl, ml), ur = GasLaw::velocity(rr, mr);
    const auto [pl, cl] = gas_.pressure_and_speed(std::max(rl, 0.0));
    const auto [pr, cr] = gas_.pressure_and_speed(std::max(rr, 0.0));
    const double alpha = std::max(std::abs(ul) + cl, std::abs(ur) + cr);
    F1[j] = 0.5 * (ml + mr) - 0.5 * alpha * (rr - rl);
    F2[j] = 0.5 * (ml * ul + pl + mr * ur + pr) - 0.5 * alpha * (mr - ml);
  }

  std::fill(drho.begin(), drho.end(), 0.0);
  std::fill(dm.begin(), dm.end(), 0.0);
  for (int i = 1; i < n; ++i) {
    drho[i] = -(Af[i] * F1[i] - Af[i - 1] * F1[i - 1]) / (A[i] * dx);
    dm[i] = -(F2[i] - F2[i - 1]) / dx - coeff_.g[i] * f.m[i] * f.u(i);
  }
  if (bc_.neumann_left()) {
    drho[0] = -Af[0] * F1[0] / (0.5 * A[0] * dx);
    flux_left = 0.0;
  } else {
    flux_left = Af[0] * F1[0];
  }
  flux_right = Af[n - 1] * F1[n - 1];

  if (opt_.forcing) {
    const int first = bc_.neumann_left() ? 0 : 1;
    for (int i = first; i < n; ++i) {
      const auto s = opt_.forcing(t, grid_.x(i));
      drho[i] += s[0];
      if (i > 0) dm[i] += s[1];
    }
  }
}

void Solver::diffuse(FluidField& f, double dt, double& flux_left, double& flux_right) const {
  const int n = grid_.cells;
  const int nn = n + 1;
  const double dx = grid_.dx();
  const double c = dt * eps_ / (dx * dx);
  const auto& A = coeff_.area;
  const auto& Af = coeff_.area_face;
  const auto& gf = coeff_.g_face;

  // Increment form: (I - dt L) d = dt L u*, so that L u* = 0 leaves u* untouched exactly.
  std::vector<double> lo(nn, 0.0), di(nn, 1.0), up(nn, 0.0), rhs(nn, 0.0);
  for (int i = 1; i < n; ++i) {
    const double a = c * Af[i - 1] / A[i];
    const double b = c * Af[i] / A[i];
    lo[i] = -a;
    up[i] = -b;
    di[i] = 1.0 + a + b;
    rhs[i] = b * (f.rho[i + 1] - f.rho[i]) - a * (f.rho[i] - f.rho[i - 1]);
  }
  if (bc_.neumann_left()) {
    const double b = 2.0 * c * Af[0] / A[0];
    up[0] = -b;
    di[0] = 1.0 + b;
    rhs[0] = b * (f.rho[1] - f.rho[0]);
  }
  thomas(lo, di, up, rhs);
  for (int i = 0; i < nn; ++i) f.rho[i] += rhs[i];
  flux_left = bc_.neumann_left() ? 0.0 : -dt * eps_ * Af[0] * (f.rho[1] - f.rho[0]) / dx;
  flux_right = -dt * eps_ * Af[n - 1] * (f.rho[n] - f.rho[n - 1]) / dx;

  std::fill(lo.begin(), lo.end(), 0.0);
  std::fill(up.begin(), up.end(), 0.0);
  std::fill(di.begin(), di.end(), 1.0);
  std::fill(rhs.begin(), rhs.end(), 0.0);
  const double k = dt * eps_ / dx;
  for (int i = 1; i < n; ++i) {
    const double gp = gf[i], gm = gf[i - 1];
    lo[i] = -k * (1.0 / dx - 0.5 * gm);
    up[i] = -k * (1.0 / dx + 0.5 * gp);
    di[i] = 1.0 + k * (2.0 / dx - 0.5 * (gp - gm));
    const double Gp = (f.m[i + 1] - f.m[i]) / dx + 0.5 * gp * (f.m[i] + f.m[i + 1]);
    const double Gm = (f.m[i] - f.m[i - 1]) / dx + 0.5 * gm * (f.m[i - 1] + f.m[i]);
    rhs[i] = k * (Gp - Gm);
  }
  thomas(lo, di, up, rhs);
  for (int i = 0; i < nn; ++i) f.m[i] += rhs[i];
}

StepInfo Solver::step(FluidField& f, double dt) const {
  if (f.grid.cells != grid_.cells || f.grid.a != grid_.a || f.grid.b != grid_.b) {
    throw ConfigError("solver: field grid does not match the solver grid");
  }
  const double bound = stable_dt(f);
  if (!(dt > 0.0) || dt > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "solver: dt=" << dt << " exceeds the stability bound " << bound << at_time(f.t);
    throw StabilityError(os.str());
  }
  StepInfo info;
  const int nn = grid_.nodes();
  const double t0 = f.t;
  std::vector<double> dr(nn), dmv(nn);
  double fl0 = 0.0, fr0 = 0.0, fl1 = 0.0, fr1 = 0.0;

  explicit_rate(f, t0, dr, dmv, fl0, fr0);
  FluidField s1 = f;
  for (int i = 0; i < nn; ++i) {
    s1.rho[i] += dt * dr[i];
    s1.m[i] += dt * dmv[i];
  }
  s1.t = t0 + dt;
  apply_boundary(s1, t0 + dt);
  info.undershoots += lift(s1);

  explicit_rate(s1, t0 + dt, dr, dmv, fl1, fr1);
  for (int i = 0; i < nn; ++i) {
    f.rho[i] = 0.5 * (f.rho[i] + s1.rho[i] + dt * dr[i]);
    f.m[i] = 0.5 * (f.m[i] + s1.m[i] + dt * dmv[i]);
  }
  f.t = t0 + dt;
  apply_boundary(f, f.t);
  info.undershoots += lift(f);
  info.mass_in_left = 0.5 * dt * (fl0 + fl1);
  info.mass_out_right = 0.5 * dt * (fr0 + fr1);

  double dl = 0.0, drt = 0.0;
  diffuse(f, dt, dl, drt);
  apply_boundary(f, f.t);
  info.mass_in_left += dl;
  info.mass_out_right += drt;
  info.undershoots += lift(f);
  return info;
}

double Solver::evolving_mass(const FluidField& f) const {
  const double dx = grid_.dx();
  double acc = 0.0;
  for (int i = 1; i < grid_.cells; ++i) acc += coeff_.area[i] * f.rho[i] * dx;
  if (bc_.neumann_left()) acc += 0.5 * coeff_.area[0] * f.rho[0] * dx;
  return acc;
}

ReferenceState Solver::default_reference(double L0) const {
  const BoundaryState s = bc_.at(0.0);
  if (bc_.spherical()) return ReferenceState::constant(s.rho_right, 0.0);
  return ReferenceState(s.rho_left, s.m_left / s.rho_left, s.rho_right, s.m_right / s.rho_right, L0);
}

RunResult Solver::run(FluidField f, double t_end, const RunOptions& opt) const {
  if (t_end < f.t) throw ConfigError("run: t_end precedes the field time");
  RunResult res;
  if (t_end == f.t) {
    res.field = std::move(f);
    return res;
  }
  const ReferenceState ref = opt.reference ? *opt.reference : default_reference(opt.L0);
  std::optional<EntropyKernel> kernel;
  if (opt.quartic) kernel.emplace(gas_.with_delta(0.0));
  RiemannMonitor monitor(gas_, coeff_, eps_);

  const double t0 = f.t;
  const int nsnap = std::max(opt.snapshots, 0);
  auto snapshot = [&](const FluidField& s) {
    if (opt.keep_snapshots) res.snapshots.push_back(s);
    if (opt.rho_tilde > 0.0) {
      const double mr = *std::min_element(s.rho.begin(), s.rho.end());
      res.report.vacuum_series.push_back({s.t, vacuum_functional(s, opt.rho_tilde), mr});
    }
    if (kernel) res.report.quartic_series.emplace_back(s.t, quartic_energy(s, *kernel, coeff_));
    if (opt.on_snapshot) opt.on_snapshot(s);
  };

  EnergyBudget last{};
  double D = 0.0, llf = 0.0;
  if (opt.energy) {
    last = energy_budget(f, gas_, coeff_, ref, eps_);
    res.report.energy_series.push_back({f.t, last.E, 0.0, 0.0});
  }
  if (opt.riemann) monitor.record(f, 0.0);
  if (nsnap > 0) snapshot(f);

  int next = 1;
  while (f.t < t_end) {
    double target = t_end;
    if (nsnap > 0) target = t0 + (t_end - t0) * next / nsnap;
    double dt = std::min({stable_dt(f), opt.max_dt, target - f.t});
    const bool lands = dt >= target - f.t;
    const StepInfo info = step(f, dt);
    if (lands) f.t = target;
    res.report.steps += 1;
    res.report.undershoots += info.undershoots;
    if (opt.energy) {
      const EnergyBudget now = energy_budget(f, gas_, coeff_, ref, eps_);
      D += 0.5 * dt * (last.dissipation() + now.dissipation());
      llf += 0.5 * dt * (last.llf + now.llf);
      last = now;
      res.report.energy_series.push_back({f.t, now.E, D, llf});
    }
    if (opt.riemann) monitor.record(f, dt);
    if (opt.on_step) opt.on_step(f, dt);
    if (nsnap > 0 && lands) {
      snapshot(f);
      ++next;
    }
  }
  res.report.llf_dissipation = llf;
  if (opt.riemann) res.report.riemann_series = monitor.series();
  res.field = std::move(f);
  return res;
}

FluidField step(const FluidField& field, const GasLaw& gas, const NozzleProfile& profile, double eps,
                const BoundarySpec& bc, double dt) {
  Solver s(gas, profile, eps, bc, field.grid);
  FluidField out = field;
  s.step(out, dt);
  return out;
}

}  // namespace nozzleflow
