#include "nozzleflow/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "nozzleflow/errors.hpp"

namespace nozzleflow {

namespace {

// Three-term recurrence of the monic Jacobi polynomials:
// p_{k+1} = (x - a_k) p_k - b_k p_{k-1}, with b_k the squared off-diagonal.
struct Recurrence {
  std::vector<double> a;
  std::vector<double> b;
};

Recurrence jacobi_recurrence(int n, double alpha, double beta) {
  Recurrence r;
  r.a.resize(n);
  r.b.resize(n);
  const double ab = alpha + beta;
  r.a[0] = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    r.a[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  r.b[0] = 0.0;
  if (n > 1) {
    // k = 1 written separately: the general formula is 0/0 when alpha + beta = -1.
    r.b[1] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
  }
  for (int k = 2; k < n; ++k) {
    const double s = 2.0 * k + ab;
    r.b[k] = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
  }
  return r;
}

}  // namespace

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("gauss_jacobi: need at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");

  const Recurrence rec = jacobi_recurrence(n, alpha, beta);
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = rec.a[k];
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(rec.b[k]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw QuadratureError("gauss_jacobi: eigenvalue iteration failed");

  const double mu0 = std::exp((alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0));
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int j = 0; j < n; ++j) {
    const double x = eig.eigenvalues()(j);
    // Orthonormal recurrence: w_j = 1 / sum_k P_k(x_j)^2 with P_0 = 1 / sqrt(mu0).
    double p_prev = 0.0;
    double p = 1.0 / std::sqrt(mu0);
    double sum = p * p;
    for (int k = 0; k + 1 < n; ++k) {
      const double next = ((x - rec.a[k]) * p - (k > 0 ? std::sqrt(rec.b[k]) : 0.0) * p_prev) /
                          std::sqrt(rec.b[k + 1]);
      p_prev = p;
      p = next;
      sum += p * p;
    }
    rule.nodes[j] = x;
    rule.weights[j] = 1.0 / sum;
  }
  if (alpha == beta) {
    // Exact symmetry, so odd moments cancel pairwise.
    for (int j = 0; j < n / 2; ++j) {
      const int k = n - 1 - j;
      const double x = 0.5 * (rule.nodes[k] - rule.nodes[j]);
      const double w = 0.5 * (rule.weights[k] + rule.weights[j]);
      rule.nodes[j] = -x;
      rule.nodes[k] = x;
      rule.weights[j] = rule.weights[k] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  }
  return rule;
}

}  // namespace nozzleflow
