#pragma once

#include "hilbert/linalg.hpp"

namespace hilbert {

/// ln Gamma(x) for x > 0; throws kDomainError otherwise.
double log_gamma(double x);

/// Surface volume of the unit n-sphere, 2 pi^{(n+1)/2} / Gamma((n+1)/2).
/// Vol(S^0) = 2.
double sphere_volume(int n);

/// Vol(O_m) = 2^m sqrt(pi)^{m(m+1)/2} / prod_{j=1}^{m} Gamma(j/2).
double orthogonal_group_volume(int m);

/// Vol(O_m / O_{m-k}) = prod_{j=1}^{k} Vol(S^{m-j}).
double stiefel_volume(int m, int k);

struct DensityValue {
  double value = 0.0;      // +inf when singular
  double log_value = 0.0;  // -inf for an exact zero, +inf when singular
  bool singular = false;
};

/// Density of the pushforward of Lebesgue measure on (R^m)^k under the Gram
/// map, with respect to Lebesgue measure on the packed coordinates u_{ij},
/// j <= i:
///
///   lambda_{k,m}(u) = 2^{-k} Vol(O_m/O_{m-k}) |G_k|^{(m-k-1)/2}.
///
/// Evaluated in log space. On the rank-deficient boundary (|G_k| <= tol *
/// scale^k) the k = m case is flagged singular and k < m returns the
/// continuous extension. Throws kNotCoregular for k > m and kNotInImage when G
/// is not positive semidefinite.
DensityValue hilbert_density(const GramMatrix& g, int k, int m, double tol = kDefaultTolerance);

/// log of the constant 2^{-k} Vol(O_m/O_{m-k}).
double log_density_constant(int k, int m);

}  // namespace hilbert
