#pragma once

#include <vector>

namespace nozzleflow {

/// Nodes and weights of an n-point Gauss rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Jacobi rule for the weight (1 - x)^alpha (1 + x)^beta, alpha, beta > -1.
///
/// Nodes are the eigenvalues of the symmetric Jacobi matrix (Golub-Welsch);
/// weights are the Christoffel numbers from the orthonormal recurrence.
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

inline QuadratureRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

}  // namespace nozzleflow
