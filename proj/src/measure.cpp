#include "hilbert/measure.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hilbert/error.hpp"

namespace hilbert {

namespace {

const double kLogPi = std::log(std::numbers::pi);

void require_coregular(int k, int m, const char* what) {
  if (k < 1 || m < 1) throw Error(ErrorCode::kInvalidInput, std::string(what) + " needs k, m >= 1");
  if (k > m) {
    throw Error(ErrorCode::kNotCoregular, std::string(what) + " requires k <= m (got k=" +
                                              std::to_string(k) + ", m=" + std::to_string(m) + ")");
  }
}

double log_sphere_volume(int n) {
  const double h = 0.5 * (n + 1);
  return std::numbers::ln2 + h * kLogPi - log_gamma(h);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::kDomainError, "log_gamma needs a finite x > 0");
  }
  return std::lgamma(x);
}

double sphere_volume(int n) {
  if (n < 0) throw Error(ErrorCode::kDomainError, "sphere dimension must be >= 0");
  if (n == 0) return 2.0;
  return std::exp(log_sphere_volume(n));
}

double orthogonal_group_volume(int m) {
  if (m < 1) throw Error(ErrorCode::kDomainError, "orthogonal group needs m >= 1");
  double log_v = m * std::numbers::ln2 + 0.25 * m * (m + 1) * kLogPi;
  for (int j = 1; j <= m; ++j) log_v -= log_gamma(0.5 * j);
  return std::exp(log_v);
}

double stiefel_volume(int m, int k) {
  require_coregular(k, m, "stiefel_volume");
  double v = 1.0;
  for (int j = 1; j <= k; ++j) v *= sphere_volume(m - j);
  return v;
}

double log_density_constant(int k, int m) {
  require_coregular(k, m, "density");
  double c = -k * std::numbers::ln2;
  for (int j = 1; j <= k; ++j) c += log_sphere_volume(m - j);
  return c;
}

DensityValue hilbert_density(const GramMatrix& g, int k, int m, double tol) {
  require_coregular(k, m, "hilbert_density");
  if (g.k() != k) throw Error(ErrorCode::kDimensionMismatch, "gram matrix size differs from k");
  if (!is_in_image(g, k, m, tol)) {
    throw Error(ErrorCode::kNotInImage, "gram matrix is not positive semidefinite");
  }

  const double log_c = log_density_constant(k, m);
  const int twice_exponent = m - k - 1;
  const double det = leading_minors(g, tol).back();
  const double scale = g.max_abs_entry();
  const bool boundary = det <= tol * std::pow(scale, k);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  DensityValue out;
  if (boundary) {
    if (twice_exponent < 0) {
      out.singular = true;
      out.value = kInf;
      out.log_value = kInf;
    } else if (twice_exponent == 0) {
      out.log_value = log_c;
      out.value = std::exp(log_c);
    } else {
      out.log_value = -kInf;
      out.value = 0.0;
    }
    return out;
  }
  out.log_value = log_c + 0.5 * twice_exponent * std::log(det);
  out.value = std::exp(out.log_value);
  return out;
}

}  // namespace hilbert
