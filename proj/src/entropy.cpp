#include "nozzleflow/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::vector<double> split_fields(std::string_view text, std::string& head) {
  std::vector<double> out;
  std::size_t pos = text.find(':');
  head = std::string(text.substr(0, pos));
  while (pos != std::string_view::npos) {
    const std::size_t next = text.find(':', pos + 1);
    const std::string field(text.substr(pos + 1, next == std::string_view::npos ? next : next - pos - 1));
    try {
      std::size_t used = 0;
      out.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw ConfigError("generator: bad numeric field '" + field + "'");
    }
    pos = next;
  }
  return out;
}

}  // namespace

EntropyGenerator EntropyGenerator::one() {
  EntropyGenerator g;
  g.kind_ = GeneratorKind::One;
  g.name_ = "one";
  g.convex_ = true;
  return g;
}

EntropyGenerator EntropyGenerator::linear() {
  EntropyGenerator g;
  g.kind_ = GeneratorKind::Linear;
  g.name_ = "linear";
  g.convex_ = true;
  return g;
}

EntropyGenerator EntropyGenerator::half_square() {
  EntropyGenerator g;
  g.kind_ = GeneratorKind::HalfSquare;
  g.name_ = "half_square";
  g.convex_ = true;
  return g;
}

EntropyGenerator EntropyGenerator::quartic() {
  EntropyGenerator g;
  g.kind_ = GeneratorKind::Quartic;
  g.name_ = "quartic";
  g.convex_ = true;
  return g;
}

EntropyGenerator EntropyGenerator::half_signed_square_shifted(double u_minus) {
  EntropyGenerator g;
  g.kind_ = GeneratorKind::HalfSignedSquareShifted;
  g.c_ = u_minus;
  g.breakpoints_ = {u_minus};
  std::ostringstream os;
  os << "signed_square:" << u_minus;
  g.name_ = os.str();
  return g;
}

EntropyGenerator EntropyGenerator::smoothed_convex(double center, double width) {
  if (!(width > 0.0)) throw ConfigError("smoothed_convex: width must be positive");
  EntropyGenerator g;
  g.kind_ = GeneratorKind::SmoothedConvex;
  g.c_ = center;
  g.w_ = width;
  g.convex_ = true;
  g.breakpoints_ = {center - width, center + width};
  std::ostringstream os;
  os << "smoothed_abs:" << center << ":" << width;
  g.name_ = os.str();
  return g;
}

EntropyGenerator EntropyGenerator::convex_spline(double center, double width) {
  if (!(width > 0.0)) throw ConfigError("convex_spline: width must be positive");
  EntropyGenerator g;
  g.kind_ = GeneratorKind::ConvexSpline;
  g.c_ = center;
  g.w_ = width;
  g.convex_ = true;
  g.breakpoints_ = {center - width, center + width};
  std::ostringstream os;
  os << "spline:" << center << ":" << width;
  g.name_ = os.str();
  return g;
}

EntropyGenerator EntropyGenerator::custom(std::string name, Fn psi, Fn dpsi, Fn d2psi,
                                          std::vector<double> breakpoints, bool convex) {
  if (!psi || !dpsi || !d2psi) throw ConfigError("custom generator: psi, psi' and psi'' are required");
  EntropyGenerator g;
  g.kind_ = GeneratorKind::Custom;
  g.name_ = std::move(name);
  g.convex_ = convex;
  std::sort(breakpoints.begin(), breakpoints.end());
  g.breakpoints_ = std::move(breakpoints);
  g.psi_ = std::make_shared<const Fn>(std::move(psi));
  g.dpsi_ = std::make_shared<const Fn>(std::move(dpsi));
  g.d2psi_ = std::make_shared<const Fn>(std::move(d2psi));
  return g;
}

EntropyGenerator EntropyGenerator::from_name(std::string_view name) {
  std::string head;
  const std::vector<double> p = split_fields(name, head);
  auto want = [&](std::size_t n) {
    if (p.size() != n) throw ConfigError("generator '" + std::string(name) + "': wrong number of parameters");
  };
  if (head == "one") return want(0), one();
  if (head == "linear") return want(0), linear();
  if (head == "half_square") return want(0), half_square();
  if (head == "quartic") return want(0), quartic();
  if (head == "signed_square") return want(1), half_signed_square_shifted(p[0]);
  if (head == "smoothed_abs") return want(2), smoothed_convex(p[0], p[1]);
  if (head == "spline") return want(2), convex_spline(p[0], p[1]);
  throw ConfigError("unknown generator '" + std::string(name) + "'");
}

double EntropyGenerator::value(double s) const {
  switch (kind_) {
    case GeneratorKind::One: return 1.0;
    case GeneratorKind::Linear: return s;
    case GeneratorKind::HalfSquare: return 0.5 * s * s;
    case GeneratorKind::Quartic: return s * s * s * s;
    case GeneratorKind::HalfSignedSquareShifted: {
      const double d = s - c_;
      return 0.5 * d * std::abs(d);
    }
    case GeneratorKind::SmoothedConvex: {
      const double d = std::abs(s - c_);
      return d < w_ ? d * d / (2.0 * w_) + 0.5 * w_ : d;
    }
    case GeneratorKind::ConvexSpline: {
      const double d = std::abs(s - c_);
      if (d >= w_) return 0.5 * d - 3.0 * w_ / 16.0;
      const double xi = d / w_;
      return 0.75 * w_ * (0.5 * xi * xi - xi * xi * xi * xi / 12.0);
    }
    case GeneratorKind::Custom: return (*psi_)(s);
  }
  return 0.0;
}

double EntropyGenerator::d1(double s) const {
  switch (kind_) {
    case GeneratorKind::One: return 0.0;
    case GeneratorKind::Linear: return 1.0;
    case GeneratorKind::HalfSquare: return s;
    case GeneratorKind::Quartic: return 4.0 * s * s * s;
    case GeneratorKind::HalfSignedSquareShifted: return std::abs(s - c_);
    case GeneratorKind::SmoothedConvex: {
      const double d = s - c_;
      return std::abs(d) < w_ ? d / w_ : sign(d);
    }
    case GeneratorKind::ConvexSpline: {
      const double d = s - c_;
      if (std::abs(d) >= w_) return 0.5 * sign(d);
      const double xi = d / w_;
      return 0.75 * (xi - xi * xi * xi / 3.0);
    }
    case GeneratorKind::Custom: return (*dpsi_)(s);
  }
  return 0.0;
}

double EntropyGenerator::d2(double s) const {
  switch (kind_) {
    case GeneratorKind::One:
    case GeneratorKind::Linear: return 0.0;
    case GeneratorKind::HalfSquare: return 1.0;
    case GeneratorKind::Quartic: return 12.0 * s * s;
    case GeneratorKind::HalfSignedSquareShifted: return s >= c_ ? 1.0 : -1.0;
    case GeneratorKind::SmoothedConvex: return std::abs(s - c_) < w_ ? 1.0 / w_ : 0.0;
    case GeneratorKind::ConvexSpline: {
      const double xi = (s - c_) / w_;
      return std::abs(xi) < 1.0 ? 0.75 / w_ * (1.0 - xi * xi) : 0.0;
    }
    case GeneratorKind::Custom: return (*d2psi_)(s);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

namespace {

// Raw kernel integrals, in this order:
//   psi, (u + theta r s) psi, psi', psi' D, psi'', psi'' D, psi'' D^2 + psi' (theta + theta^2) r s
// with r = k rho^theta and D = -u + theta r s.
constexpr int kPairTerms = 2;
constexpr int kJetTerms = 7;

struct Segment {
  double lo, hi;
};

// Cuts [-1, 1] at the breakpoints and grades the pieces geometrically
// towards any endpoint singularity of the weight that is close relative
// to the piece length.
// Splits [lo, hi] until neither weight singularity at -1 or +1 is closer
// than half the piece length (pieces ending at -1 or 1 use Jacobi rules).
void grade(double lo, double hi, std::vector<Segment>& out) {
  const double len = hi - lo;
  if (lo > -1.0 && (1.0 + lo) < 0.5 * len) {
    const double mid = lo + 2.0 * (1.0 + lo);
    if (mid < hi) {
      grade(lo, mid, out);
      grade(mid, hi, out);
      return;
    }
  }
  if (hi < 1.0 && (1.0 - hi) < 0.5 * len) {
    const double mid = hi - 2.0 * (1.0 - hi);
    if (mid > lo) {
      grade(lo, mid, out);
      grade(mid, hi, out);
      return;
    }
  }
  out.push_back({lo, hi});
}

std::vector<Segment> build_segments(std::span<const double> cuts, bool graded) {
  std::vector<double> pts{-1.0};
  for (double c : cuts) {
    if (c > -1.0 + 1e-12 && c < 1.0 - 1e-12 && c > pts.back()) pts.push_back(c);
  }
  pts.push_back(1.0);
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (graded) {
      grade(pts[i], pts[i + 1], out);
    } else {
      out.push_back({pts[i], pts[i + 1]});
    }
  }
  return out;
}

}  // namespace

EntropyKernel::EntropyKernel(const GasLaw& gas, int base_nodes, int max_nodes, double tolerance)
    : gas_(gas), tolerance_(tolerance) {
  if (base_nodes < 2 || max_nodes < 2 * base_nodes) {
    throw ConfigError("EntropyKernel: need base_nodes >= 2 and max_nodes >= 2 * base_nodes");
  }
  const double lam = gas_.lambda_exp();
  c_lambda_ = std::sqrt(M_PI) * std::exp(std::lgamma(lam + 1.0) - std::lgamma(lam + 1.5));
  for (int n = base_nodes; n <= max_nodes; n *= 2) {
    Level lv;
    lv.n = n;
    lv.plain = gauss_legendre(n);
    if (lam == 0.0) {
      lv.both = lv.right = lv.left = lv.plain;
    } else {
      lv.both = gauss_jacobi(n, lam, lam);
      lv.right = gauss_jacobi(n, lam, 0.0);
      lv.left = gauss_jacobi(n, 0.0, lam);
    }
    levels_.push_back(std::move(lv));
  }
}

template <bool WithDerivatives>
void EntropyKernel::accumulate(const Level& lv, const EntropyGenerator& gen, double rho, double u,
                               std::span<const double> cuts, double* out, double* mag) const {
  constexpr int terms = WithDerivatives ? kJetTerms : kPairTerms;
  const double lam = gas_.lambda_exp();
  const double th = gas_.theta();
  const double r = gas_.kernel_scale() * std::pow(rho, th);
  std::fill(out, out + terms, 0.0);
  std::fill(mag, mag + terms, 0.0);

  for (const Segment& seg : build_segments(cuts, lam != 0.0)) {
    const double h = 0.5 * (seg.hi - seg.lo);
    const bool at_lo = seg.lo == -1.0;
    const bool at_hi = seg.hi == 1.0;
    const QuadratureRule& rule = at_lo && at_hi ? lv.both : at_lo ? lv.left : at_hi ? lv.right : lv.plain;
    const double scale = (at_lo || at_hi) ? std::pow(h, lam + 1.0) : h;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double s = seg.lo + h * (rule.nodes[j] + 1.0);
      // The part of (1 - s^2)^lambda not absorbed by the rule.
      double wt = rule.weights[j] * scale;
      if (at_lo && !at_hi) wt *= std::pow(1.0 - s, lam);
      else if (at_hi && !at_lo) wt *= std::pow(1.0 + s, lam);
      else if (!at_lo && !at_hi) wt *= std::pow((1.0 - s) * (1.0 + s), lam);

      const double v = u + r * s;
      const double psi = gen.value(v);
      std::array<double, kJetTerms> f{};
      f[0] = psi;
      f[1] = (u + th * r * s) * psi;
      if constexpr (WithDerivatives) {
        const double d1 = gen.d1(v);
        const double d2 = gen.d2(v);
        const double D = -u + th * r * s;
        f[2] = d1;
        f[3] = d1 * D;
        f[4] = d2;
        f[5] = d2 * D;
        f[6] = d2 * D * D + d1 * (th + th * th) * r * s;
      }
      for (int k = 0; k < terms; ++k) {
        out[k] += wt * f[k];
        mag[k] += wt * std::abs(f[k]);
      }
    }
  }
}

template <bool WithDerivatives>
void EntropyKernel::evaluate(const EntropyGenerator& gen, double rho, double m, double* out) const {
  constexpr int terms = WithDerivatives ? kJetTerms : kPairTerms;
  const double u = m / rho;
  const double r = gas_.kernel_scale() * std::pow(rho, gas_.theta());
  std::vector<double> cuts;
  cuts.reserve(gen.breakpoints().size());
  for (double bp : gen.breakpoints()) cuts.push_back((bp - u) / r);

  std::array<double, kJetTerms> prev{}, cur{}, mag{};
  accumulate<WithDerivatives>(levels_[0], gen, rho, u, cuts, prev.data(), mag.data());
  for (std::size_t l = 1; l < levels_.size(); ++l) {
    accumulate<WithDerivatives>(levels_[l], gen, rho, u, cuts, cur.data(), mag.data());
    bool ok = true;
    for (int k = 0; k < terms && ok; ++k) {
      ok = std::abs(cur[k] - prev[k]) <= tolerance_ * mag[k] + 1e-300;
    }
    if (ok) {
      std::copy(cur.begin(), cur.begin() + terms, out);
      return;
    }
    prev = cur;
  }
  std::ostringstream os;
  os.precision(17);
  os << "EntropyKernel: no convergence for " << gen.name() << " at rho=" << rho << ", m=" << m
     << " with " << levels_.back().n << " nodes";
  throw QuadratureError(os.str());
}

EntropyPair EntropyKernel::pair(const EntropyGenerator& gen, double rho, double m) const {
  if (!(rho >= 0.0)) throw DomainError("weak entropy pair: density must be nonnegative");
  if (rho < kRhoFloor) return {};
  std::array<double, kPairTerms> raw{};
  evaluate<false>(gen, rho, m, raw.data());
  return {rho * raw[0], rho * raw[1]};
}

EntropyJet EntropyKernel::jet(const EntropyGenerator& gen, double rho, double m) const {
  if (!(rho >= 0.0)) throw DomainError("weak entropy pair: density must be nonnegative");
  EntropyJet j;
  if (rho < kRhoFloor) {
    // Vacuum limits: the kernel collapses to the point s-value 0 with u = 0.
    j.eta_rho = c_lambda_ * gen.value(0.0);
    j.eta_m = c_lambda_ * gen.d1(0.0);
    return j;
  }
  std::array<double, kJetTerms> raw{};
  evaluate<true>(gen, rho, m, raw.data());
  j.eta = rho * raw[0];
  j.q = rho * raw[1];
  j.eta_m = raw[2];
  j.eta_rho = raw[0] + raw[3];
  j.eta_mm = raw[4] / rho;
  j.eta_rm = raw[5] / rho;
  j.eta_rr = raw[6] / rho;
  return j;
}

// ---------------------------------------------------------------------------

EntropyPair mechanical_energy(const GasLaw& gas, double rho, double m) {
  if (!(rho >= 0.0)) throw DomainError("mechanical_energy: density must be nonnegative");
  if (rho < kRhoFloor) return {};
  const double g = gas.gamma();
  const double k = gas.kappa();
  const double u = m / rho;
  const double eta = 0.5 * m * u + k * std::pow(rho, g) / (g - 1.0);
  const double q = 0.5 * m * u * u + k * g * m * std::pow(rho, g - 1.0) / (g - 1.0);
  return {eta, q};
}

ReferenceState::ReferenceState(double rho_minus, double u_minus, double rho_plus, double u_plus, double L0)
    : rho_minus_(rho_minus), u_minus_(u_minus), rho_plus_(rho_plus), u_plus_(u_plus), L0_(L0) {
  if (!(rho_minus >= 0.0) || !(rho_plus >= 0.0)) throw ConfigError("ReferenceState: densities must be nonnegative");
  if (!(L0 > 0.0)) throw ConfigError("ReferenceState: L0 must be positive");
}

ReferenceState ReferenceState::constant(double rho, double u) { return ReferenceState(rho, u, rho, u, 2.0); }

double ReferenceState::blend(double x) const {
  // C-infinity step from 0 at -L0 to 1 at L0.
  const double t = (x + L0_) / (2.0 * L0_);
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double f0 = std::exp(-1.0 / t);
  const double f1 = std::exp(-1.0 / (1.0 - t));
  return f0 / (f0 + f1);
}

double ReferenceState::rho(double x) const { return rho_minus_ + (rho_plus_ - rho_minus_) * blend(x); }
double ReferenceState::u(double x) const { return u_minus_ + (u_plus_ - u_minus_) * blend(x); }

double relative_energy_density(const GasLaw& gas, const ReferenceState& ref, double x, double rho, double m) {
  if (!(rho >= 0.0)) throw DomainError("relative_energy_density: density must be nonnegative");
  const double rb = ref.rho(x);
  const double du = GasLaw::velocity(rho, m) - ref.u(x);
  const double hbar = gas.h_delta(rho) - gas.h_delta(rb) - gas.dh_delta(rb) * (rho - rb);
  // Clamp the rounding-level negatives of a convex remainder.
  return std::max(0.0, 0.5 * rho * du * du + hbar);
}

// ---------------------------------------------------------------------------

SpecialPair::SpecialPair(const EntropyKernel& kernel, const ReferenceState& ref)
    : kernel_(kernel),
      rho_minus_(ref.rho_minus()),
      u_minus_(ref.u_minus()),
      gen_(EntropyGenerator::half_signed_square_shifted(ref.u_minus())) {
  if (!(rho_minus_ > 0.0)) throw DomainError("SpecialPair: left density must be positive");
  const EntropyJet jm = kernel_.jet(gen_, rho_minus_, rho_minus_ * u_minus_);
  grad_rho_ = jm.eta_rho;
  grad_m_ = jm.eta_m;
  const double p = kernel_.gas().kappa() * std::pow(rho_minus_, kernel_.gas().gamma());
  const double mm = rho_minus_ * u_minus_;
  q_tilde_minus_ = jm.q - grad_rho_ * mm - grad_m_ * (mm * u_minus_ + p);
}

SpecialPairReport SpecialPair::check(double rho, double m, double M) const {
  if (!(rho >= 0.0)) throw DomainError("special_pair_check: density must be nonnegative");
  const GasLaw& gas = kernel_.gas();
  const double g = gas.gamma();
  const double th = gas.theta();
  const double k = gas.kernel_scale();
  const EntropyJet j = kernel_.jet(gen_, rho, m);
  const double u = GasLaw::velocity(rho, m);
  const double p = gas.kappa() * std::pow(rho, g);
  const double du = u - u_minus_;
  const double dR = k * (std::pow(rho, th) - std::pow(rho_minus_, th));

  SpecialPairReport r;
  r.eta_check = j.eta;
  r.q_check = j.q;
  r.eta_tilde = j.eta - grad_rho_ * (rho - rho_minus_) - grad_m_ * (m - rho_minus_ * u_minus_);
  r.q_tilde = j.q - grad_rho_ * m - grad_m_ * (m * u + p);
  r.eta_tilde_m = j.eta_m - grad_m_;
  r.q_tilde_at_minus = q_tilde_minus_;

  const double ad = std::abs(du);
  r.eta_bound_residual = M * (rho * du * du + rho * dR * dR) - std::abs(r.eta_tilde);
  r.growth_residual =
      r.q_tilde - ((rho * ad * ad * ad + std::pow(rho, g + th)) / M - M * (rho + rho * du * du + std::pow(rho, g)));
  const double flux_term = -j.q + m * j.eta_rho + m * u * j.eta_m;
  r.flux_bound_residual = M * r.q_tilde + M - std::abs(flux_term);
  r.m_eta_m_residual = M * (rho * du * du + rho * dR * dR + rho) - std::abs(m * r.eta_tilde_m);
  r.eta_m_bound_residual = M * (ad + std::abs(dR)) - std::abs(r.eta_tilde_m);
  return r;
}

SpecialPairConstants fit_special_pair_constants(const SpecialPair& pair, const GasLaw& gas, double rho_minus,
                                                double u_minus,
                                                std::span<const std::pair<double, double>> samples) {
  // Each residual is affine or monotone in M, so the minimal M is the max
  // over samples of the per-sample threshold.
  const double g = gas.gamma();
  const double th = gas.theta();
  const double k = gas.kernel_scale();
  SpecialPairConstants c;
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : (num > 0.0 ? INFINITY : 0.0); };
  for (const auto& [rho, u] : samples) {
    const SpecialPairReport r = pair.check(rho, rho * u, 1.0);
    const double du = u - u_minus;
    const double ad = std::abs(du);
    const double dR = k * (std::pow(rho, th) - std::pow(rho_minus, th));
    c.eta_bound = std::max(c.eta_bound, ratio(std::abs(r.eta_tilde), rho * du * du + rho * dR * dR));
    // q~ - X/M + M Y >= 0  <=>  Y M^2 + q~ M - X >= 0.
    const double X = rho * ad * ad * ad + std::pow(rho, g + th);
    const double Y = rho + rho * du * du + std::pow(rho, g);
    if (Y > 0.0) {
      const double qt = r.q_tilde;
      c.growth = std::max(c.growth, (-qt + std::sqrt(qt * qt + 4.0 * X * Y)) / (2.0 * Y));
    }
    // r.flux_bound_residual at M = 1 is q~ + 1 - F.
    const double F = r.q_tilde + 1.0 - r.flux_bound_residual;
    c.flux_bound = std::max(c.flux_bound, ratio(F, r.q_tilde + 1.0));
    c.m_eta_m = std::max(c.m_eta_m, ratio(std::abs(rho * u * r.eta_tilde_m), rho * du * du + rho * dR * dR + rho));
    c.eta_m_bound = std::max(c.eta_m_bound, ratio(std::abs(r.eta_tilde_m), ad + std::abs(dR)));
  }
  return c;
}

double quartic_entropy(const EntropyKernel& kernel, double rho, double m) {
  static const EntropyGenerator gen = EntropyGenerator::quartic();
  return kernel.pair(gen, rho, m).eta;
}

double hessian_domination_ratio(const EntropyKernel& kernel, const EntropyGenerator& gen, double rho, double m,
                                double xi_rho, double xi_m) {
  const GasLaw& gas = kernel.gas();
  const EntropyJet j = kernel.jet(gen, rho, m);
  const double u = m / rho;
  const double s_rr = u * u / rho + gas.kappa() * gas.gamma() * std::pow(rho, gas.gamma() - 2.0);
  const double s_rm = -u / rho;
  const double s_mm = 1.0 / rho;
  const double num = j.eta_rr * xi_rho * xi_rho + 2.0 * j.eta_rm * xi_rho * xi_m + j.eta_mm * xi_m * xi_m;
  const double den = s_rr * xi_rho * xi_rho + 2.0 * s_rm * xi_rho * xi_m + s_mm * xi_m * xi_m;
  return std::abs(num) / den;
}

void write_entropy_table(std::ostream& out, const EntropyKernel& kernel, const EntropyGenerator& gen,
                         double rho_max, double u_min, double u_max, int n_rho, int n_u) {
  if (n_rho < 1 || n_u < 1 || !(rho_max > 0.0) || !(u_max >= u_min)) {
    throw ConfigError("entropy table: invalid grid");
  }
  out << "# generator=" << gen.name() << " gamma=" << kernel.gas().gamma() << " kappa=" << kernel.gas().kappa()
      << "\n";
  out << "rho,u,eta,q\n";
  out.precision(17);
  for (int i = 0; i <= n_rho; ++i) {
    const double rho = rho_max * i / n_rho;
    for (int j = 0; j <= n_u; ++j) {
      const double u = n_u == 0 ? u_min : u_min + (u_max - u_min) * j / n_u;
      const EntropyPair p = kernel.pair(gen, rho, rho * u);
      out << rho << ',' << u << ',' << p.eta << ',' << p.q << '\n';
    }
  }
}

}  // namespace nozzleflow
