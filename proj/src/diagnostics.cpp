#include "nozzleflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

namespace {

double bump(double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

double dbump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double d = 1.0 - s * s;
  return std::exp(-1.0 / d) * (-2.0 * s / (d * d));
}

// int_{-1}^{1} b(s) ds, by a composite Simpson rule fine enough for double precision.
double bump_integral() {
  static const double value = [] {
    const int n = 20000;
    const double h = 2.0 / n;
    double acc = bump(-1.0) + bump(1.0);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * bump(-1.0 + i * h);
    return acc * h / 3.0;
  }();
  return value;
}

double trapezoid_weight(const Grid& g, int i) {
  return (i == 0 || i == g.cells) ? 0.5 * g.dx() : g.dx();
}

// int_lo^hi of the piecewise-linear interpolant of node values.
double window_integral(const Grid& g, const std::vector<double>& v, double lo, double hi) {
  double acc = 0.0;
  const double dx = g.dx();
  for (int i = 0; i < g.cells; ++i) {
    const double x0 = g.x(i);
    const double x1 = g.x(i + 1);
    const double l = std::max(lo, x0);
    const double r = std::min(hi, x1);
    if (r <= l) continue;
    const double fl = v[i] + (v[i + 1] - v[i]) * (l - x0) / dx;
    const double fr = v[i] + (v[i + 1] - v[i]) * (r - x0) / dx;
    acc += 0.5 * (fl + fr) * (r - l);
  }
  return acc;
}

std::vector<double> time_weights(std::span<const FluidField> h) {
  std::vector<double> w(h.size(), 0.0);
  for (std::size_t k = 0; k + 1 < h.size(); ++k) {
    const double d = h[k + 1].t - h[k].t;
    w[k] += 0.5 * d;
    w[k + 1] += 0.5 * d;
  }
  return w;
}

}  // namespace

double TestFunction::value(double t, double x) const { return bump((t - t0) / rt) * bump((x - x0) / rx); }

double TestFunction::dt(double t, double x) const {
  return dbump((t - t0) / rt) / rt * bump((x - x0) / rx);
}

double TestFunction::dx(double t, double x) const {
  return bump((t - t0) / rt) * dbump((x - x0) / rx) / rx;
}

double TestFunction::norm_w11() const {
  // Separable: int|b'| = 2 b(0) = 2/e.
  const double b0 = bump_integral();
  const double b1 = 2.0 * std::exp(-1.0);
  return rt * rx * b0 * b0 + rx * b0 * b1 + rt * b0 * b1;
}

std::vector<TestFunction> test_lattice(double k_lo, double k_hi, double T, int nt, int nx) {
  if (!(k_hi > k_lo) || !(T > 0.0) || nt < 1 || nx < 1) throw ConfigError("test lattice: invalid window");
  std::vector<TestFunction> out;
  const double rt = T / (nt + 1);
  const double rx = (k_hi - k_lo) / (nx + 1);
  for (int j = 0; j < nt; ++j) {
    for (int i = 0; i < nx; ++i) out.push_back({(j + 1) * rt, rt, k_lo + (i + 1) * rx, rx});
  }
  return out;
}

std::vector<EntropyGenerator> default_generator_family() {
  return {EntropyGenerator::half_square(),         EntropyGenerator::smoothed_convex(-1.0, 0.5),
          EntropyGenerator::smoothed_convex(0.0, 0.5), EntropyGenerator::smoothed_convex(1.0, 0.5),
          EntropyGenerator::convex_spline(-0.5, 0.5),  EntropyGenerator::convex_spline(0.5, 0.5)};
}

double WeakResidualRecord::max_entropy_violation() const {
  double worst = 0.0;
  for (const auto& e : entropy) worst = std::max(worst, std::max(e.pairing, 0.0) / e.norm);
  return worst;
}

double WeakResidualRecord::max_mass() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < mass.size(); ++j) worst = std::max(worst, std::abs(mass[j]) / norms[j]);
  return worst;
}

double WeakResidualRecord::max_momentum() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < momentum.size(); ++j) worst = std::max(worst, std::abs(momentum[j]) / norms[j]);
  return worst;
}

void DiagnosticsReport::write_csv(std::ostream& out) const {
  const auto prec = out.precision(15);
  out << "# energy\nt,E,D,llf\n";
  for (const auto& s : energy_series) out << s.t << ',' << s.E << ',' << s.D << ',' << s.llf << '\n';
  out << "# riemann\nt,max_w,min_z,corr_w,corr_z,w_tilde,z_tilde\n";
  for (const auto& s : riemann_series) {
    out << s.t << ',' << s.max_w << ',' << s.min_z << ',' << s.corr_w << ',' << s.corr_z << ',' << s.w_tilde()
        << ',' << s.z_tilde() << '\n';
  }
  out << "# vacuum\nt,functional,min_rho\n";
  for (const auto& s : vacuum_series) out << s.t << ',' << s.functional << ',' << s.min_rho << '\n';
  if (!quartic_series.empty()) {
    out << "# quartic\nt,energy\n";
    for (const auto& [t, e] : quartic_series) out << t << ',' << e << '\n';
  }
  if (integrability) {
    const auto& r = *integrability;
    out << "# integrability\nrho_gamma1,delta_rho3,rho_u3,rho_gamma_theta,eps_rho3_area\n"
        << r.rho_gamma1 << ',' << r.delta_rho3 << ',' << r.rho_u3 << ',' << r.rho_gamma_theta << ','
        << r.eps_rho3_area << '\n';
  }
  if (weak_residuals) {
    const auto& w = *weak_residuals;
    out << "# weak_residuals\nkind,index,generator,value,norm\n";
    for (std::size_t j = 0; j < w.mass.size(); ++j) out << "mass," << j << ",," << w.mass[j] << ',' << w.norms[j] << '\n';
    for (std::size_t j = 0; j < w.momentum.size(); ++j) {
      out << "momentum," << j << ",," << w.momentum[j] << ',' << w.norms[j] << '\n';
    }
    for (const auto& e : w.entropy) {
      out << "entropy," << e.test_index << ',' << e.generator << ',' << e.pairing << ',' << e.norm << '\n';
    }
  }
  out << "# totals\nsteps,undershoots,llf_dissipation\n" << steps << ',' << undershoots << ',' << llf_dissipation << '\n';
  out.precision(prec);
}

EnergyBudget energy_budget(const FluidField& f, const GasLaw& gas, const GridCoefficients& c,
                           const ReferenceState& ref, double eps) {
  const Grid& g = f.grid;
  const double dx = g.dx();
  EnergyBudget b;
  for (int i = 0; i < g.nodes(); ++i) {
    const double x = g.x(i);
    const double w = trapezoid_weight(g, i);
    b.E += w * c.area[i] * relative_energy_density(gas, ref, x, f.rho[i], f.m[i]);
    const double u = f.u(i);
    b.geometric += w * c.area[i] * std::abs(c.g_prime[i] * f.rho[i] * u * (u - ref.u(x)));
  }
  b.geometric *= eps;
  for (int i = 0; i < g.cells; ++i) {
    const double rf = 0.5 * (f.rho[i] + f.rho[i + 1]);
    const double rx = (f.rho[i + 1] - f.rho[i]) / dx;
    const double ux = (f.u(i + 1) - f.u(i)) / dx;
    b.hessian += (gas.d2h_delta(rf) * rx * rx + rf * ux * ux) * c.area_face[i] * dx;
    // Jump of the state times jump of the entropy variables (eta*_rho, eta*_m).
    const double u0 = f.u(i), u1 = f.u(i + 1);
    const double alpha = std::max(std::abs(u0) + gas.sound_speed(f.rho[i]), std::abs(u1) + gas.sound_speed(f.rho[i + 1]));
    const double dv_r = (-0.5 * u1 * u1 + gas.dh_delta(f.rho[i + 1])) - (-0.5 * u0 * u0 + gas.dh_delta(f.rho[i]));
    b.llf += 0.5 * alpha * ((f.rho[i + 1] - f.rho[i]) * dv_r + (f.m[i + 1] - f.m[i]) * (u1 - u0)) * c.area_face[i];
  }
  b.hessian *= eps;
  return b;
}

EnergyBudget energy_budget(const FluidField& f, const GasLaw& gas, const NozzleProfile& profile,
                           const ReferenceState& ref, double eps) {
  return energy_budget(f, gas, GridCoefficients::build(f.grid, profile, false), ref, eps);
}

bool gronwall_check(std::span<const EnergySample> series, double M) {
  if (series.empty()) return true;
  const double e0 = series.front().E;
  return std::all_of(series.begin(), series.end(), [&](const EnergySample& s) { return s.E + s.D <= M * (e0 + 1.0); });
}

bool sharp_energy_check(std::span<const EnergySample> series, double tol) {
  if (series.empty()) return true;
  const double e0 = series.front().E;
  return std::all_of(series.begin(), series.end(), [&](const EnergySample& s) { return s.E + s.D <= e0 * (1.0 + tol); });
}

RiemannSample riemann_extrema(const FluidField& f, const GasLaw& gas) {
  RiemannSample s;
  s.t = f.t;
  s.max_w = -std::numeric_limits<double>::infinity();
  s.min_z = std::numeric_limits<double>::infinity();
  for (int i = 0; i < f.grid.nodes(); ++i) {
    if (!(f.rho[i] > 0.0)) throw CavitationError("riemann monitor: vacuum encountered");
    const RiemannPair p = gas.riemann_invariants(f.rho[i], f.m[i] / f.rho[i]);
    s.max_w = std::max(s.max_w, p.w);
    s.min_z = std::min(s.min_z, p.z);
  }
  return s;
}

RiemannMonitor::Rates RiemannMonitor::rates(const FluidField& f) const {
  Rates r{0.0, 0.0};
  for (int i = 0; i < f.grid.nodes(); ++i) {
    const double u = f.u(i);
    const double a = u * gas_.sound_speed(f.rho[i]) * c_.g[i];
    const double b = eps_ * c_.g_prime[i] * u;
    r.w = std::max(r.w, std::abs(a - b));
    r.z = std::max(r.z, std::abs(a + b));
  }
  return r;
}

RiemannSample RiemannMonitor::record(const FluidField& f, double dt) {
  RiemannSample s = riemann_extrema(f, gas_);
  const Rates now = rates(f);
  if (series_.empty()) {
    s.corr_w = s.corr_z = 0.0;
  } else {
    s.corr_w = series_.back().corr_w + 0.5 * dt * (last_.w + now.w);
    s.corr_z = series_.back().corr_z + 0.5 * dt * (last_.z + now.z);
  }
  last_ = now;
  series_.push_back(s);
  return s;
}

double max_principle_excess(std::span<const RiemannSample> series, double rate) {
  double best_w = std::numeric_limits<double>::infinity();
  double best_z = -std::numeric_limits<double>::infinity();
  double excess = -std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    const double w = s.w_tilde() - rate * s.t;
    const double z = s.z_tilde() + rate * s.t;
    if (std::isfinite(best_w)) excess = std::max({excess, w - best_w, best_z - z});
    best_w = std::min(best_w, w);
    best_z = std::max(best_z, z);
  }
  return std::isfinite(excess) ? excess : 0.0;
}

IntegrabilityRecord integrability_window(std::span<const FluidField> history, const GasLaw& gas,
                                         const GridCoefficients& c, double eps, double k_lo, double k_hi,
                                         double t1, double t2) {
  if (history.empty()) throw ConfigError("integrability window: no snapshots");
  const Grid& g = history.front().grid;
  if (!(k_lo > g.a) || !(k_hi < g.b) || !(k_hi > k_lo)) throw ConfigError("integrability window: K must lie inside (a, b)");
  std::vector<FluidField> in;
  for (const auto& f : history) {
    if (f.t >= t1 - 1e-12 && f.t <= t2 + 1e-12) in.push_back(f);
  }
  IntegrabilityRecord r;
  if (in.size() < 2) return r;
  const std::vector<double> wt = time_weights(in);
  const double gm = gas.gamma();
  const double th = gas.theta();
  std::vector<double> v1(g.nodes()), v2(g.nodes()), v3(g.nodes()), v4(g.nodes()), v5(g.nodes());
  for (std::size_t k = 0; k < in.size(); ++k) {
    const FluidField& f = in[k];
    for (int i = 0; i < g.nodes(); ++i) {
      const double rho = f.rho[i];
      const double au = std::abs(f.u(i));
      v1[i] = std::pow(rho, gm + 1.0);
      v2[i] = gas.delta() * rho * rho * rho;
      v3[i] = rho * au * au * au;
      v4[i] = std::pow(rho, gm + th);
      v5[i] = eps * rho * rho * rho * c.area[i];
    }
    r.rho_gamma1 += wt[k] * window_integral(g, v1, k_lo, k_hi);
    r.delta_rho3 += wt[k] * window_integral(g, v2, k_lo, k_hi);
    r.rho_u3 += wt[k] * window_integral(g, v3, k_lo, k_hi);
    r.rho_gamma_theta += wt[k] * window_integral(g, v4, k_lo, k_hi);
    r.eps_rho3_area += wt[k] * window_integral(g, v5, k_lo, k_hi);
  }
  return r;
}

double vacuum_functional(const FluidField& f, double rho_tilde) {
  if (!(rho_tilde > 0.0)) throw DomainError("vacuum_functional: rho_tilde must be positive");
  double acc = 0.0;
  for (int i = 0; i < f.grid.nodes(); ++i) {
    const double r = f.rho[i];
    if (r < rho_tilde) acc += trapezoid_weight(f.grid, i) * (1.0 / r - 1.0 / rho_tilde + (r - rho_tilde) / (rho_tilde * rho_tilde));
  }
  return acc;
}

WeakResidualRecord weak_residual(std::span<const FluidField> history, const GasLaw& gas, const GridCoefficients& c,
                                 const EntropyKernel& kernel, std::span<const TestFunction> tests,
                                 std::span<const EntropyGenerator> gens) {
  if (history.size() < 2) throw ConfigError("weak residual: need at least two snapshots");
  const Grid& g = history.front().grid;
  const double t_lo = history.front().t;
  const double t_hi = history.back().t;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  for (const auto& tf : tests) {
    if (tf.t0 - tf.rt < t_lo - 1e-12 || tf.t0 + tf.rt > t_hi + 1e-12 || tf.x0 - tf.rx < g.a || tf.x0 + tf.rx > g.b) {
      throw ConfigError("weak residual: test function support leaves the snapshot window");
    }
    x_lo = std::min(x_lo, tf.x0 - tf.rx);
    x_hi = std::max(x_hi, tf.x0 + tf.rx);
  }
  const std::size_t nt = tests.size();
  WeakResidualRecord rec;
  rec.mass.assign(nt, 0.0);
  rec.momentum.assign(nt, 0.0);
  for (const auto& tf : tests) rec.norms.push_back(tf.norm_w11());
  std::vector<std::vector<double>> pairing(gens.size(), std::vector<double>(nt, 0.0));

  const std::vector<double> wt = time_weights(history);
  const double dx = g.dx();
  const double kappa = gas.kappa();
  const double gm = gas.gamma();
  std::vector<EntropyJet> jets(gens.size());
  for (std::size_t k = 0; k < history.size(); ++k) {
    const FluidField& f = history[k];
    const double t = f.t;
    if (wt[k] == 0.0) continue;
    for (int i = 0; i < g.nodes(); ++i) {
      const double x = g.x(i);
      if (x <= x_lo || x >= x_hi) continue;
      // Skip nodes no test function touches at this time.
      bool any = false;
      for (const auto& tf : tests) {
        if (std::abs(t - tf.t0) < tf.rt && std::abs(x - tf.x0) < tf.rx) {
          any = true;
          break;
        }
      }
      if (!any) continue;
      const double rho = f.rho[i];
      const double m = f.m[i];
      const double u = f.u(i);
      const double p = kappa * std::pow(rho, gm);
      const double A = c.area[i];
      const double dA = c.g[i] * A;
      const double w = wt[k] * dx;
      for (std::size_t j = 0; j < gens.size(); ++j) jets[j] = kernel.jet(gens[j], rho, m);
      for (std::size_t n = 0; n < nt; ++n) {
        const TestFunction& tf = tests[n];
        if (!(std::abs(t - tf.t0) < tf.rt && std::abs(x - tf.x0) < tf.rx)) continue;
        const double ph = tf.value(t, x);
        const double pt = tf.dt(t, x);
        const double px = tf.dx(t, x);
        rec.mass[n] += w * (rho * pt + m * px) * A;
        rec.momentum[n] += w * ((m * pt + m * u * px) * A + p * (dA * ph + A * px));
        for (std::size_t j = 0; j < gens.size(); ++j) {
          const EntropyJet& e = jets[j];
          pairing[j][n] += w * (-(e.eta * A * pt + e.q * A * px) + dA * (m * e.eta_rho + m * u * e.eta_m - e.q) * ph);
        }
      }
    }
  }
  for (std::size_t j = 0; j < gens.size(); ++j) {
    for (std::size_t n = 0; n < nt; ++n) rec.entropy.push_back({gens[j].name(), static_cast<int>(n), pairing[j][n], rec.norms[n]});
  }
  return rec;
}

double quartic_energy(const FluidField& f, const EntropyKernel& kernel, const GridCoefficients& c) {
  double acc = 0.0;
  for (int i = 0; i < f.grid.nodes(); ++i) {
    acc += trapezoid_weight(f.grid, i) * c.area[i] * quartic_entropy(kernel, f.rho[i], f.m[i]);
  }
  return acc;
}

double total_variation(const FluidField& f) {
  double tv = 0.0;
  for (int i = 0; i < f.grid.cells; ++i) tv += std::abs(f.rho[i + 1] - f.rho[i]) + std::abs(f.m[i + 1] - f.m[i]);
  return tv;
}

}  // namespace nozzleflow
