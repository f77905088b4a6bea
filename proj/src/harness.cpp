#include "nozzleflow/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

namespace {

// Peak-normalised C-infinity bump on |s| < 1.
double unit_bump(double s) { return std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0; }

BoundaryMode parse_mode(const std::string& s) {
  if (s == "dirichlet_nozzle") return BoundaryMode::DirichletNozzle;
  if (s == "dirichlet_spherical") return BoundaryMode::DirichletSpherical;
  if (s == "neumann_spherical") return BoundaryMode::NeumannSpherical;
  throw ConfigError("config: unknown bc '" + s + "'");
}

const std::vector<double>& values_of(const FluidField& f, Component c) {
  return c == Component::Density ? f.rho : f.m;
}

// Nodes of g inside [lo, hi] plus the two ends.
std::vector<double> window_points(const Grid& g, double lo, double hi) {
  std::vector<double> xs{lo};
  for (int i = 0; i < g.nodes(); ++i) {
    const double x = g.x(i);
    if (x > lo + 1e-12 * g.dx() && x < hi - 1e-12 * g.dx()) xs.push_back(x);
  }
  xs.push_back(hi);
  return xs;
}

FluidField restrict_to(const FluidField& f, int i0, int cells) {
  const double dx = f.grid.dx();
  FluidField w(Grid{f.grid.a + i0 * dx, f.grid.a + (i0 + cells) * dx, cells}, 0.0, 0.0, f.t);
  std::copy_n(f.rho.begin() + i0, cells + 1, w.rho.begin());
  std::copy_n(f.m.begin() + i0, cells + 1, w.m.begin());
  return w;
}

}  // namespace

NozzleProfile profile_for(const RunConfig& cfg) {
  return NozzleProfile::from_spec(cfg.profile, cfg.profile_params, cfg.profile_table);
}

ViscositySchedule schedule_for(const RunConfig& cfg, const NozzleProfile& profile) {
  ViscositySchedule s;
  s.beta = cfg.beta;
  s.M_budget = cfg.M_budget;
  s.L0 = cfg.L0;
  if (!cfg.eps_list.empty()) {
    s.eps_list = cfg.eps_list;
  } else {
    if (cfg.n_eps < 1) throw ConfigError("config: n_eps must be positive");
    for (int k = 0; k < cfg.n_eps; ++k) s.eps_list.push_back(cfg.eps0 * std::ldexp(1.0, -k));
  }
  if (profile.kind() == ProfileKind::Spherical) {
    s.domain = DomainRule::Spherical;
    s.dimension = profile.dimension();
  } else if (profile.kind() == ProfileKind::Exponential && profile.params().at(0) != 0.0) {
    s.domain = DomainRule::Logarithmic;
    s.log_rate = std::abs(profile.params().at(0));
  }
  if (cfg.q > 0.0) {
    s.q = cfg.q;
    return s;
  }
  s.q = 1.0 + s.beta;
  // Tabulated profiles live on a bounded domain; the schedule rules cannot be certified there.
  if (profile.kind() == ProfileKind::UserTabulated) return s;
  const GasLaw gas(cfg.gamma, 0.0, cfg.kappa);
  for (double q = 1.0 + s.beta; q <= 12.0; q += 1.0) {
    s.q = q;
    if (certify(s, profile, gas).passed()) return s;
  }
  s.q = 1.0 + s.beta;
  return s;
}

RunSetup setup_run(const RunConfig& cfg, const ViscositySchedule& sched, double eps, bool align) {
  if (!(eps > 0.0)) throw ConfigError("run: eps must be positive");
  RunSetup r;
  r.eps = eps;
  r.delta = cfg.delta ? *cfg.delta : sched.delta(eps);
  r.gas = GasLaw(cfg.gamma, r.delta, cfg.kappa);
  r.profile = profile_for(cfg);

  const BoundaryMode mode = parse_mode(cfg.bc);
  const bool spherical = mode != BoundaryMode::DirichletNozzle;
  double a = cfg.a ? *cfg.a : sched.a(eps);
  double b = cfg.b ? *cfg.b : sched.b(eps);
  if (spherical && sched.domain != DomainRule::Spherical && !(cfg.a && cfg.b)) {
    a = eps;
    b = 1.0 / eps;
  }
  if (!(b > a)) throw ConfigError("run: need b > a");
  if (align) {
    const double dx = cfg.dx;
    a = (spherical ? std::ceil(a / dx - 1e-9) : std::floor(a / dx + 1e-9)) * dx;
    b = std::ceil(b / dx - 1e-9) * dx;
    r.grid = Grid{a, b, static_cast<int>(std::lround((b - a) / dx))};
  } else if (cfg.cells > 0) {
    r.grid = Grid{a, b, cfg.cells};
  } else {
    r.grid = Grid::with_spacing(a, b, cfg.dx);
  }

  const double rho_bar = cfg.rho_bar > 0.0 ? cfg.rho_bar : sched.rho_bar(eps, cfg.gamma);
  switch (mode) {
    case BoundaryMode::DirichletNozzle:
      r.bc = BoundarySpec::dirichlet_nozzle(cfg.rho_left, cfg.rho_left * cfg.u_left, cfg.rho_right,
                                            cfg.rho_right * cfg.u_right);
      r.reference = ReferenceState(cfg.rho_left, cfg.u_left, cfg.rho_right, cfg.u_right, cfg.L0);
      break;
    case BoundaryMode::DirichletSpherical:
      r.bc = BoundarySpec::dirichlet_spherical(rho_bar);
      r.reference = ReferenceState::constant(rho_bar, 0.0);
      break;
    case BoundaryMode::NeumannSpherical:
      r.bc = BoundarySpec::neumann_spherical(rho_bar);
      r.reference = ReferenceState::constant(rho_bar, 0.0);
      break;
  }

  InitialData init;
  init.mollify_width = cfg.mollify < 0.0 ? eps : cfg.mollify;
  init.blend_width = cfg.blend;
  const RunConfig c = cfg;
  if (cfg.initial == "riemann") {
    init.rho = [c](double x) { return x < c.x_jump ? c.rho_left : c.rho_right; };
    init.m = [c](double x) { return x < c.x_jump ? c.rho_left * c.u_left : c.rho_right * c.u_right; };
  } else if (cfg.initial == "constant") {
    init.rho = [c](double) { return c.rho_left; };
    init.m = [c](double) { return c.rho_left * c.u_left; };
  } else if (cfg.initial == "gaussian_bump") {
    const double base = spherical ? rho_bar : cfg.rho_right;
    init.rho = [c, base](double x) {
      const double s = (x - c.bump_center) / c.bump_width;
      return base + c.bump_amp * std::exp(-s * s);
    };
    const double u = spherical ? 0.0 : cfg.u_right;
    init.m = [c, base, u](double x) {
      const double s = (x - c.bump_center) / c.bump_width;
      return (base + c.bump_amp * std::exp(-s * s)) * u;
    };
  } else if (cfg.initial == "bump_collapse") {
    const double base = spherical ? rho_bar : cfg.rho_right;
    init.rho = [c, base](double x) { return base + c.bump_amp * unit_bump((x - c.bump_center) / c.bump_width); };
    init.m = [c, base](double x) {
      const double w = unit_bump((x - c.bump_center) / c.bump_width);
      return -(base + c.bump_amp * w) * c.bump_speed * w;
    };
  } else {
    throw ConfigError("config: unknown initial '" + cfg.initial + "'");
  }
  r.initial = prepare_initial_data(init, r.bc, r.gas, r.profile, r.grid);

  r.options.snapshots = cfg.snapshots;
  r.options.energy = cfg.diag_energy;
  r.options.riemann = cfg.diag_riemann;
  r.options.quartic = cfg.diag_quartic;
  r.options.rho_tilde = cfg.rho_tilde;
  r.options.reference = r.reference;
  r.options.L0 = cfg.L0;
  return r;
}

double lp_distance(std::span<const FluidField> a, std::span<const FluidField> b, double k_lo, double k_hi, double p,
                   Component c) {
  if (!(p >= 1.0)) throw ConfigError("lp_distance: p must be >= 1");
  if (a.size() != b.size() || a.size() < 2) throw ConfigError("lp_distance: snapshot sets differ in length");
  const double tol = 1e-9 * std::max(1.0, std::abs(a.back().t));
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k].t - b[k].t) > tol) throw ConfigError("lp_distance: snapshot times differ");
    for (const FluidField* f : {&a[k], &b[k]}) {
      const double eps = 1e-12 * (1.0 + std::abs(k_lo) + std::abs(k_hi));
      if (f->grid.a > k_lo + eps || f->grid.b < k_hi - eps) throw ConfigError("lp_distance: snapshot does not cover K");
    }
  }
  double total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const Grid& fine = a[k].grid.dx() <= b[k].grid.dx() ? a[k].grid : b[k].grid;
    const std::vector<double> xs = window_points(fine, k_lo, k_hi);
    const auto& va = values_of(a[k], c);
    const auto& vb = values_of(b[k], c);
    double space = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      const double d0 = std::pow(std::abs(interpolate(a[k].grid, va, xs[i]) - interpolate(b[k].grid, vb, xs[i])), p);
      const double d1 =
          std::pow(std::abs(interpolate(a[k].grid, va, xs[i + 1]) - interpolate(b[k].grid, vb, xs[i + 1])), p);
      space += 0.5 * (xs[i + 1] - xs[i]) * (d0 + d1);
    }
    const double w_lo = k > 0 ? a[k].t - a[k - 1].t : 0.0;
    const double w_hi = k + 1 < a.size() ? a[k + 1].t - a[k].t : 0.0;
    total += 0.5 * (w_lo + w_hi) * space;
  }
  return std::pow(total, 1.0 / p);
}

bool converging(std::span<const double> d, double ratio, int allowed) {
  if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) return true;
  int fails = 0;
  for (std::size_t k = 1; k < d.size(); ++k)
    if (!(d[k] < ratio * d[k - 1])) ++fails;
  return fails <= allowed;
}

std::vector<double> SweepResult::ratios(Component c) const {
  const auto& d = c == Component::Density ? d_rho : d_m;
  std::vector<double> r;
  for (std::size_t k = 1; k < d.size(); ++k) r.push_back(d[k - 1] > 0.0 ? d[k] / d[k - 1] : 0.0);
  return r;
}

std::string SweepResult::summary() const {
  std::ostringstream os;
  os << certificate.text();
  os << "eps,delta,a,b,cells,status,tv_final\n";
  for (const auto& r : runs) {
    os << r.eps << ',' << r.delta << ',' << r.a << ',' << r.b << ',' << r.cells << ','
       << (r.ok ? "ok" : "failed: " + r.error) << ',' << r.tv_final << '\n';
  }
  os << "d_rho:";
  for (double d : d_rho) os << ' ' << d;
  os << "\nd_m:";
  for (double d : d_m) os << ' ' << d;
  os << "\nratios_rho:";
  for (double r : ratios(Component::Density)) os << ' ' << r;
  os << "\nratios_m:";
  for (double r : ratios(Component::Momentum)) os << ' ' << r;
  os << "\nconverging_rho: " << (converging_rho ? "yes" : "no") << "\nconverging_m: " << (converging_m ? "yes" : "no")
     << "\ntv_monotone (heuristic): " << (tv_monotone ? "yes" : "no") << '\n';
  return os.str();
}

SweepResult sweep(const RunConfig& cfg) {
  if (!(cfg.p >= 1.0) || cfg.p >= cfg.gamma + 1.0) throw ConfigError("sweep: need 1 <= p < gamma + 1");
  if (!(cfg.q_m >= 1.0) || cfg.q_m >= 3.0 * (cfg.gamma + 1.0) / (cfg.gamma + 3.0)) {
    throw ConfigError("sweep: need 1 <= q_m < 3(gamma+1)/(gamma+3)");
  }
  const NozzleProfile profile = profile_for(cfg);
  const ViscositySchedule sched = schedule_for(cfg, profile);
  if (sched.eps_list.size() < 2) throw ConfigError("sweep: the eps ladder needs at least two rungs");
  SweepResult res;
  res.certificate = certify(sched, profile, GasLaw(cfg.gamma, 0.0, cfg.kappa));
  if (!res.certificate.passed() && !cfg.force) {
    throw ConfigError("sweep: schedule certificate failed (set force = true to override)\n" + res.certificate.text());
  }

  const double dx = cfg.dx;
  const int pad = 4;
  const double w_lo = std::floor(cfg.k_lo / dx + 1e-9) * dx - pad * dx;
  const double w_hi = std::ceil(cfg.k_hi / dx - 1e-9) * dx + pad * dx;
  const int w_cells = static_cast<int>(std::lround((w_hi - w_lo) / dx));

  const std::size_t n = sched.eps_list.size();
  res.runs.resize(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < n; k = next++) {
      SweepRun& out = res.runs[k];
      out.eps = sched.eps_list[k];
      try {
        RunSetup s = setup_run(cfg, sched, out.eps, true);
        out.delta = s.delta;
        out.a = s.grid.a;
        out.b = s.grid.b;
        out.cells = s.grid.cells;
        if (!(s.grid.a < w_lo) || !(s.grid.b > w_hi)) throw ConfigError("sweep: window K must lie inside (a, b)");
        const int i0 = static_cast<int>(std::lround((w_lo - s.grid.a) / dx));
        s.options.keep_snapshots = false;
        s.options.on_snapshot = [&out, i0, w_cells](const FluidField& f) {
          out.window.push_back(restrict_to(f, i0, w_cells));
        };
        const Solver solver(s.gas, s.profile, s.eps, s.bc, s.grid, SolverOptions{cfg.cfl, {}});
        RunResult rr = solver.run(s.initial, cfg.t_end, s.options);
        out.report = std::move(rr.report);
        out.tv_final = total_variation(out.window.back());
        const GridCoefficients wc =
            GridCoefficients::build(out.window.front().grid, s.profile, s.bc.spherical());
        if (cfg.diag_integrability) {
          out.report.integrability =
              integrability_window(out.window, s.gas, wc, s.eps, cfg.k_lo, cfg.k_hi, 0.0, cfg.t_end);
        }
        if (cfg.diag_weak) {
          const EntropyKernel kernel(s.gas.with_delta(0.0));
          const auto tests = test_lattice(cfg.k_lo, cfg.k_hi, cfg.t_end);
          const auto gens = default_generator_family();
          out.report.weak_residuals = weak_residual(out.window, s.gas, wc, kernel, tests, gens);
        }
        out.ok = true;
      } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
        out.window.clear();
      }
    }
  };
  unsigned threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::vector<const SweepRun*> good;
  for (const auto& r : res.runs)
    if (r.ok) good.push_back(&r);
  if (good.size() < 2) {
    std::string why;
    for (const auto& r : res.runs)
      if (!r.ok) why += "\n  eps=" + std::to_string(r.eps) + ": " + r.error;
    throw SweepError("sweep: fewer than two runs succeeded" + why);
  }
  for (std::size_t k = 1; k < good.size(); ++k) {
    res.d_rho.push_back(lp_distance(good[k]->window, good[k - 1]->window, cfg.k_lo, cfg.k_hi, cfg.p, Component::Density));
    res.d_m.push_back(lp_distance(good[k]->window, good[k - 1]->window, cfg.k_lo, cfg.k_hi, cfg.q_m, Component::Momentum));
  }
  res.converging_rho = converging(res.d_rho);
  res.converging_m = converging(res.d_m);
  res.tv_monotone = true;
  for (std::size_t k = 1; k < good.size(); ++k)
    if (good[k]->tv_final < good[k - 1]->tv_final * (1.0 - 1e-12)) res.tv_monotone = false;
  return res;
}

std::vector<VerdictLine> evaluate_run(const RunConfig& cfg, const RunSetup& setup, const RunResult& result) {
  std::vector<VerdictLine> out;
  const auto& rep = result.report;
  if (cfg.diag_energy && !rep.energy_series.empty()) {
    const double E0 = rep.energy_series.front().E;
    double worst = 0.0;
    for (const auto& s : rep.energy_series) worst = std::max(worst, s.E + s.D);
    if (setup.bc.mode == BoundaryMode::DirichletSpherical) {
      const bool ok = sharp_energy_check(rep.energy_series, cfg.energy_tol);
      out.push_back({"energy_sharp", ok, E0 > 0.0 ? worst / E0 - 1.0 : worst, "max (E+D)/E0 - 1"});
    } else {
      const bool ok = gronwall_check(rep.energy_series, cfg.energy_M);
      out.push_back({"energy_gronwall", ok, worst / (E0 + 1.0), "max (E+D)/(E0+1)"});
    }
  }
  if (cfg.diag_riemann && !rep.riemann_series.empty()) {
    double wmin = 1e300, wmax = -1e300;
    const FluidField& f0 = setup.initial;
    for (int i = 0; i < f0.grid.nodes(); ++i) {
      const double w = setup.gas.riemann_invariants(f0.rho[i], f0.u(i)).w;
      wmin = std::min(wmin, w);
      wmax = std::max(wmax, w);
    }
    const double rate = 1e-3 * (wmax - wmin);
    const double excess = max_principle_excess(rep.riemann_series, rate);
    out.push_back({"max_principle", excess <= 0.0, excess, "worst excess over 1e-3 osc(w0) per unit time"});
  }
  if (!rep.vacuum_series.empty()) {
    double min_rho = 1e300;
    for (const auto& v : rep.vacuum_series) min_rho = std::min(min_rho, v.min_rho);
    out.push_back({"positivity", min_rho > kRhoFloor, min_rho, "min rho over snapshots"});
  }
  if (cfg.diag_quartic && rep.quartic_series.size() > 1) {
    double worst = 0.0;
    double run_min = rep.quartic_series.front().second;
    for (const auto& [t, q] : rep.quartic_series) {
      worst = std::max(worst, (q - run_min) / std::max(std::abs(run_min), 1e-300));
      run_min = std::min(run_min, q);
    }
    out.push_back({"quartic_monotone", worst <= 1e-3, worst, "relative increase of the quartic energy"});
  }
  if ((cfg.diag_integrability || cfg.diag_weak) && result.snapshots.size() >= 2) {
    const Grid& g = setup.grid;
    if (g.a < cfg.k_lo && g.b > cfg.k_hi) {
      const GridCoefficients c = GridCoefficients::build(g, setup.profile, setup.bc.spherical());
      if (cfg.diag_integrability) {
        const auto I = integrability_window(result.snapshots, setup.gas, c, setup.eps, cfg.k_lo, cfg.k_hi,
                                            result.snapshots.front().t, result.snapshots.back().t);
        const bool finite = std::isfinite(I.rho_gamma1 + I.delta_rho3 + I.rho_u3 + I.rho_gamma_theta + I.eps_rho3_area);
        out.push_back({"integrability_finite", finite, I.rho_gamma1, "int int rho^(gamma+1) over K"});
      }
      if (cfg.diag_weak) {
        const EntropyKernel kernel(setup.gas.with_delta(0.0));
        const double t0 = result.snapshots.front().t;
        auto tests = test_lattice(cfg.k_lo, cfg.k_hi, result.snapshots.back().t - t0);
        for (auto& tf : tests) tf.t0 += t0;
        const auto gens = default_generator_family();
        const auto w = weak_residual(result.snapshots, setup.gas, c, kernel, tests, gens);
        const double v = w.max_entropy_violation();
        out.push_back({"entropy_residual", v <= cfg.entropy_tol, v, "max pairing+ / ||phi||"});
      }
    }
  }
  return out;
}

}  // namespace nozzleflow
