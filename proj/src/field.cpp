#include "nozzleflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

namespace {

// C-infinity step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double f0 = std::exp(-1.0 / s);
  const double f1 = std::exp(-1.0 / (1.0 - s));
  return f0 / (f0 + f1);
}

double bump(double s) { return std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

// Weight 1 within l/2 of the end, 0 beyond l, smooth in between.
double end_weight(double distance, double l) { return 1.0 - smooth_step((distance - 0.5 * l) / (0.5 * l)); }

}  // namespace

Grid Grid::with_spacing(double a, double b, double dx) {
  if (!(b > a) || !(dx > 0.0)) throw ConfigError("grid: need b > a and dx > 0");
  const int cells = std::max(2, static_cast<int>(std::ceil((b - a) / dx - 1e-9)));
  return Grid{a, b, cells};
}

void FluidField::validate() const {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!std::isfinite(rho[i]) || !std::isfinite(m[i])) {
      std::ostringstream os;
      os << "non-finite state at x=" << grid.x(static_cast<int>(i)) << ", t=" << t;
      throw NonFiniteError(os.str());
    }
    if (rho[i] < kRhoFloor) {
      std::ostringstream os;
      os << "density " << rho[i] << " below floor at x=" << grid.x(static_cast<int>(i)) << ", t=" << t;
      throw CavitationError(os.str());
    }
  }
}

std::string_view to_string(BoundaryMode mode) {
  switch (mode) {
    case BoundaryMode::DirichletNozzle: return "dirichlet_nozzle";
    case BoundaryMode::DirichletSpherical: return "dirichlet_spherical";
    case BoundaryMode::NeumannSpherical: return "neumann_spherical";
  }
  return "unknown";
}

BoundarySpec BoundarySpec::dirichlet_nozzle(double rho_left, double m_left, double rho_right, double m_right) {
  if (!(rho_left > 0.0) || !(rho_right > 0.0)) throw ConfigError("Dirichlet densities must be positive");
  BoundarySpec bc;
  bc.mode = BoundaryMode::DirichletNozzle;
  bc.state = {rho_left, m_left, rho_right, m_right};
  return bc;
}

BoundarySpec BoundarySpec::dirichlet_spherical(double rho_bar) {
  if (!(rho_bar > 0.0)) throw ConfigError("Dirichlet densities must be positive");
  BoundarySpec bc;
  bc.mode = BoundaryMode::DirichletSpherical;
  bc.state = {rho_bar, 0.0, rho_bar, 0.0};
  return bc;
}

BoundarySpec BoundarySpec::neumann_spherical(double rho_bar) {
  if (!(rho_bar > 0.0)) throw ConfigError("Dirichlet densities must be positive");
  BoundarySpec bc;
  bc.mode = BoundaryMode::NeumannSpherical;
  bc.state = {rho_bar, 0.0, rho_bar, 0.0};
  return bc;
}

GridCoefficients GridCoefficients::build(const Grid& grid, const NozzleProfile& profile, bool spherical_closed_form) {
  if (!profile.contains(grid.a) || !profile.contains(grid.b)) {
    throw DomainError("grid extends outside the profile domain");
  }
  const int n = grid.nodes();
  GridCoefficients c;
  c.area.resize(n);
  c.g.resize(n);
  c.g_prime.resize(n);
  c.area_face.resize(grid.cells);
  c.g_face.resize(grid.cells);
  if (spherical_closed_form) {
    if (profile.kind() != ProfileKind::Spherical) throw ConfigError("spherical boundary modes need a spherical profile");
    const double k = profile.dimension() - 1.0;
    auto fill = [&](double x, double& a, double& g) {
      a = std::pow(x, k);
      g = k / x;
    };
    for (int i = 0; i < n; ++i) {
      const double x = grid.x(i);
      fill(x, c.area[i], c.g[i]);
      c.g_prime[i] = -k / (x * x);
    }
    for (int i = 0; i < grid.cells; ++i) fill(grid.x(i) + 0.5 * grid.dx(), c.area_face[i], c.g_face[i]);
    return c;
  }
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    const AreaJet j = profile.jet(x);
    c.area[i] = j.a;
    c.g[i] = j.da / j.a;
    c.g_prime[i] = j.d2a / j.a - c.g[i] * c.g[i];
  }
  for (int i = 0; i < grid.cells; ++i) {
    const AreaJet j = profile.jet(grid.x(i) + 0.5 * grid.dx());
    c.area_face[i] = j.a;
    c.g_face[i] = j.da / j.a;
  }
  return c;
}

FluidField prepare_initial_data(const InitialData& raw, const BoundarySpec& bc, const GasLaw& gas,
                                const NozzleProfile& profile, const Grid& grid) {
  (void)gas;
  if (!raw.rho || !raw.m) throw ConfigError("initial data: rho and m are required");
  if (bc.spherical() && profile.kind() != ProfileKind::Spherical) {
    throw ConfigError("spherical boundary modes need a spherical profile");
  }
  const double len = grid.b - grid.a;
  const double l = raw.blend_width > 0.0 ? raw.blend_width : std::min(1.0, len / 8.0);
  if (l >= len / 4.0) throw ConfigError("initial data: blend width must be below (b - a)/4");
  const double h = raw.mollify_width;
  if (h < 0.0) throw ConfigError("initial data: mollifier width must be nonnegative");

  FluidField f(grid, 0.0, 0.0, 0.0);
  const int n = grid.nodes();

  // Composite midpoint rule for the mollifier with spacing <= min(dx/8, h/16).
  std::vector<double> ys, ws;
  if (h > 0.0) {
    const int k = std::max(32, static_cast<int>(std::ceil(2.0 * h / std::min(grid.dx() / 8.0, h / 16.0))));
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
      const double s = -1.0 + (j + 0.5) * 2.0 / k;
      ys.push_back(s * h);
      ws.push_back(bump(s));
      total += ws.back();
    }
    for (double& w : ws) w /= total;
  }
  auto mollified = [&](const std::function<double(double)>& fn, double x) {
    const double f0 = fn(x);
    if (h == 0.0) return f0;
    // increment form: constants come back bit for bit
    double acc = 0.0;
    for (std::size_t j = 0; j < ys.size(); ++j) acc += ws[j] * (fn(x - ys[j]) - f0);
    return f0 + acc;
  };

  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    f.rho[i] = std::max(mollified(raw.rho, x), raw.rho_lift);
    f.m[i] = mollified(raw.m, x);
  }

  const BoundaryState s = bc.at(0.0);
  // Neumann end: flatten rho towards its value at distance l and send m to 0.
  const double rho_flat = bc.neumann_left() ? f.rho[std::min(n - 1, static_cast<int>(std::round(l / grid.dx())))] : 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = grid.x(i);
    const double wl = end_weight(x - grid.a, l);
    const double wr = end_weight(grid.b - x, l);
    const double left_rho = bc.neumann_left() ? rho_flat : s.rho_left;
    f.rho[i] += wl * (left_rho - f.rho[i]) + wr * (s.rho_right - f.rho[i]);
    f.m[i] += wl * (s.m_left - f.m[i]) + wr * (s.m_right - f.m[i]);
  }
  if (!bc.neumann_left()) f.rho[0] = s.rho_left;
  f.m[0] = s.m_left;
  f.rho[n - 1] = s.rho_right;
  f.m[n - 1] = s.m_right;
  f.validate();
  return f;
}

void write_snapshot(std::ostream& out, const FluidField& field, const GridCoefficients& coeff,
                    const SnapshotMeta& meta) {
  out << "# gamma=" << meta.gamma << " kappa=" << meta.kappa << " delta=" << meta.delta << " eps=" << meta.eps
      << "\n# a=" << field.grid.a << " b=" << field.grid.b << " N=" << field.grid.cells << " cfl=" << meta.cfl
      << " bc=" << to_string(meta.mode) << " t=" << field.t << "\n";
  out << "x,rho,m,u,A\n";
  const auto prec = out.precision(17);
  for (int i = 0; i < field.grid.nodes(); ++i) {
    out << field.grid.x(i) << ',' << field.rho[i] << ',' << field.m[i] << ',' << field.u(i) << ','
        << coeff.area[i] << '\n';
  }
  out.precision(prec);
}

double interpolate(const Grid& grid, const std::vector<double>& values, double x) {
  if (x < grid.a - 1e-12 * (1.0 + std::abs(grid.a)) || x > grid.b + 1e-12 * (1.0 + std::abs(grid.b))) {
    throw DomainError("interpolate: point outside grid");
  }
  const double s = (x - grid.a) / grid.dx();
  int i = std::clamp(static_cast<int>(std::floor(s)), 0, grid.cells - 1);
  const double t = std::clamp(s - i, 0.0, 1.0);
  return (1.0 - t) * values[i] + t * values[i + 1];
}

}  // namespace nozzleflow
