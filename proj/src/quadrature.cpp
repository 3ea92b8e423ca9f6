#include "hilbert/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "hilbert/error.hpp"
#include "hilbert/measure.hpp"

namespace hilbert {

namespace {

// Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix; the
// weights are mu0 times the squared first eigenvector components.
QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double mu0) {
  const auto n = diag.size();
  QuadratureRule rule;
  if (n == 1) {
    rule.nodes = {diag(0)};
    rule.weights = {mu0};
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kDomainError, "Jacobi matrix eigensolve failed");
  }
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

void require_nodes(int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "quadrature needs at least one node");
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
  require_nodes(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int j = 1; j < n; ++j) sub(j - 1) = std::sqrt(0.5 * j);
  return golub_welsch(diag, sub, std::sqrt(std::numbers::pi));
}

QuadratureRule gauss_laguerre(int n, double alpha) {
  require_nodes(n);
  if (!(alpha > -1.0)) throw Error(ErrorCode::kDomainError, "Laguerre rule needs alpha > -1");
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int j = 0; j < n; ++j) diag(j) = 2.0 * j + alpha + 1.0;
  for (int j = 1; j < n; ++j) sub(j - 1) = std::sqrt(j * (j + alpha));
  return golub_welsch(diag, sub, std::exp(log_gamma(alpha + 1.0)));
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  require_nodes(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max(n - 1, 0));
  for (int j = 1; j < n; ++j) sub(j - 1) = j / std::sqrt(4.0 * j * j - 1.0);
  QuadratureRule rule = golub_welsch(diag, sub, 2.0);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (auto& x : rule.nodes) x = mid + half * x;
  for (auto& w : rule.weights) w *= half;
  return rule;
}

QuadratureRule half_line_gauss(int n, int power) {
  if (power < 0) throw Error(ErrorCode::kDomainError, "half-line rule needs power >= 0");
  QuadratureRule rule = gauss_laguerre(n, 0.5 * (power - 1));
  for (auto& t : rule.nodes) t = std::sqrt(t);
  for (auto& w : rule.weights) w *= 0.5;
  return rule;
}

}  // namespace hilbert
