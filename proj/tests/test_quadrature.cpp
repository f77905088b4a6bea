#include <doctest.h>

#include <cmath>

#include "nozzleflow/quadrature.hpp"

using namespace nozzleflow;
using doctest::Approx;

TEST_CASE("Gauss-Jacobi against scipy roots_jacobi") {
  const auto r = gauss_jacobi(5, 0.5, 0.5);
  const double x[] = {-0.8660254037844386, -0.5, 0.0, 0.5, 0.8660254037844386};
  const double w[] = {0.13089969389957468, 0.392699081698724, 0.5235987755982987, 0.392699081698724,
                      0.13089969389957468};
  for (int i = 0; i < 5; ++i) {
    CHECK(r.nodes[i] == Approx(x[i]).epsilon(1e-14));
    CHECK(r.weights[i] == Approx(w[i]).epsilon(1e-13));
  }
  const auto s = gauss_jacobi(5, -0.5, 1.5);
  const double xs[] = {-0.7312389603397392, -0.2765223195610213, 0.24840938306402652, 0.7029952175724261,
                       0.9654475883552172};
  const double ws[] = {0.03978899985896734, 0.27936011740379557, 0.8251844754748141, 1.5310084883327284,
                       2.0370468993143844};
  for (int i = 0; i < 5; ++i) {
    CHECK(s.nodes[i] == Approx(xs[i]).epsilon(1e-13));
    CHECK(s.weights[i] == Approx(ws[i]).epsilon(1e-13));
  }
}

TEST_CASE("exact on polynomials") {
  // int x^k (1-x^2)^(1/2) = pi/8 for k = 2, pi/16 for k = 4
  const auto r = gauss_jacobi(6, 0.5, 0.5);
  double m2 = 0, m4 = 0, m11 = 0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    m2 += r.weights[i] * std::pow(r.nodes[i], 2);
    m4 += r.weights[i] * std::pow(r.nodes[i], 4);
    m11 += r.weights[i] * std::pow(r.nodes[i], 11);
  }
  CHECK(m2 == Approx(M_PI / 8).epsilon(1e-14));
  CHECK(m4 == Approx(M_PI / 16).epsilon(1e-14));
  CHECK(std::abs(m11) < 1e-15);
  const auto l = gauss_legendre(10);
  double s = 0;
  for (std::size_t i = 0; i < l.nodes.size(); ++i) s += l.weights[i] * std::pow(l.nodes[i], 18);
  CHECK(s == Approx(2.0 / 19).epsilon(1e-14));
}

TEST_CASE("weights sum to the weight integral") {
  for (double a : {-0.4, 0.0, 0.25, 3.0}) {
    const auto r = gauss_jacobi(64, a, a);
    double s = 0;
    for (double w : r.weights) s += w;
    const double exact = std::pow(2.0, 2 * a + 1) * std::tgamma(a + 1) * std::tgamma(a + 1) / std::tgamma(2 * a + 2);
    CHECK(s == Approx(exact).epsilon(1e-13));
  }
}
