#pragma once

// Gauss rules from the Golub-Welsch eigenproblem of the Jacobi matrix.

#include <vector>

namespace hilbert {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Weight exp(-x^2) on the real line.
QuadratureRule gauss_hermite(int n);

/// Weight x^alpha exp(-x) on (0, inf), alpha > -1.
QuadratureRule gauss_laguerre(int n, double alpha);

/// Unit weight on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Rule for the half-line weight w^power exp(-w^2) on (0, inf), obtained from
/// generalized Laguerre via t = w^2 (alpha = (power - 1) / 2).
QuadratureRule half_line_gauss(int n, int power);

}  // namespace hilbert
