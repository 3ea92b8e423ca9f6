#pragma once

// Reference computations that share no code path with the production kernels.
// They are slow and meant for tests and the verification battery.

#include <random>
#include <vector>

#include "hilbert/euler.hpp"
#include "hilbert/linalg.hpp"
#include "hilbert/reduction.hpp"

namespace hilbert::oracle {

/// Laplace expansion along the first row.
double cofactor_determinant(const Matrix& a);

/// PSD test through the signs of all 2^k - 1 principal minors, each computed
/// by cofactor expansion; a minor counts as nonnegative when it exceeds
/// -tol * scale^size.
bool all_principal_minors_nonnegative(const GramMatrix& g, double tol);

/// |det du/dw| of the packed map w -> u = W W^T by central differences.
double finite_difference_jacobian(const TriangularFactor& w, double step = 1e-6);

/// |det| of the km x km Jacobian of (w, angles) -> compose(w, angles) by
/// central differences. Requires k(k+1)/2 + |angles| = km.
double finite_difference_compose_volume(const std::vector<double>& w_lower, const AngleSchedule& schedule,
                                        double step = 1e-6);

/// Frame of angle derivatives built recursively: for v = sin t1 e1 + cos t1 v',
/// a_1 = cos t1 e1 - sin t1 v', a_j = (0, a'_{j-1}) and a_m = v.
Matrix recursive_frame(const EulerAngles& angles);

/// Tensor Gauss-Legendre integral of angular_weight over the angle ranges:
/// azimuthal angles on (-pi, pi] with one node (the weight ignores them),
/// polar angles on (0, pi) with `nodes` nodes.
double angular_weight_quadrature(int k, int m, int nodes);

/// Haar-distributed element of SO(m): Gram-Schmidt on a Gaussian matrix,
/// then a column sign flip if the determinant is negative.
Matrix haar_rotation(int m, std::mt19937_64& rng);

/// Haar-distributed element of O(m).
Matrix haar_orthogonal(int m, std::mt19937_64& rng);

/// G = A A^T with A a k x rank Gaussian matrix; rank < k gives a boundary point.
GramMatrix random_psd(int k, int rank, std::mt19937_64& rng);

/// Exactly singular PSD matrix of rank k-1 with integer entries: G = A A^T
/// where the top k-1 rows of A are diagonally dominant and the last row is an
/// integer combination of them. The leading (k-1) x (k-1) block stays well
/// conditioned, so Cholesky pivot noise stays far below the tolerance.
GramMatrix random_boundary_psd(int k, std::mt19937_64& rng);

/// Configuration with i.i.d. N(0, 1) entries.
VectorTuple random_configuration(int k, int m, std::mt19937_64& rng);

}  // namespace hilbert::oracle
