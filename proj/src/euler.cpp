#include "hilbert/euler.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "hilbert/error.hpp"

namespace hilbert {

namespace {

constexpr double kPi = std::numbers::pi;
// Relative size below which a tail of the unit vector counts as vanished.
constexpr double kTailFloor = 1e-14;

double wrap_azimuth(double t) {
  // atan2 returns -pi for (-0, negative); the declared range is (-pi, pi].
  return t <= -kPi ? kPi : t;
}

Matrix embed_top_left(const Matrix& a, int n) {
  Matrix r = Matrix::identity(n);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  }
  return r;
}

}  // namespace

EulerAngles::EulerAngles(int m_, std::vector<double> theta_) : m(m_), theta(std::move(theta_)) {
  if (m < 1) throw Error(ErrorCode::kInvalidInput, "euler angles need m >= 1");
  if (theta.size() != static_cast<std::size_t>(m - 1)) {
    throw Error(ErrorCode::kInvalidInput, "euler angles need exactly m-1 angles");
  }
  for (double t : theta) {
    if (!std::isfinite(t)) throw Error(ErrorCode::kInvalidInput, "non-finite euler angle");
  }
}

RotationMatrix::RotationMatrix(Matrix a) : Matrix(std::move(a)) {
  if (rows() != cols()) throw Error(ErrorCode::kDimensionMismatch, "rotation must be square");
}

std::vector<double> vector_from_angles(const EulerAngles& angles) {
  const int m = angles.m;
  std::vector<double> v(static_cast<std::size_t>(m), 0.0);
  double c = 1.0;
  for (int j = 0; j + 1 < m; ++j) {
    const double t = angles.theta[static_cast<std::size_t>(j)];
    v[static_cast<std::size_t>(j)] = std::sin(t) * c;
    c *= std::cos(t);
  }
  v[static_cast<std::size_t>(m - 1)] = c;
  return v;
}

EulerAngles angles_from_unit_vector(std::span<const double> v) {
  const int m = static_cast<int>(v.size());
  if (m < 1) throw Error(ErrorCode::kInvalidInput, "empty vector");
  double norm = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidInput, "non-finite vector entry");
    norm = std::hypot(norm, x);
  }
  if (norm < 1e-8) throw Error(ErrorCode::kZeroVector, "cannot take angles of a zero vector");

  std::vector<double> u(v.begin(), v.end());
  for (double& x : u) x /= norm;
  // tail[j] = |(u_j, ..., u_{m-1})|
  std::vector<double> tail(static_cast<std::size_t>(m + 1), 0.0);
  for (int j = m - 1; j >= 0; --j) {
    tail[static_cast<std::size_t>(j)] = std::hypot(tail[static_cast<std::size_t>(j + 1)],
                                                   u[static_cast<std::size_t>(j)]);
  }

  std::vector<double> theta(static_cast<std::size_t>(m - 1), 0.0);
  for (int j = 0; j + 1 < m; ++j) {
    if (tail[static_cast<std::size_t>(j)] <= kTailFloor) break;  // rest stay 0
    if (j + 2 < m) {
      theta[static_cast<std::size_t>(j)] =
          std::atan2(u[static_cast<std::size_t>(j)], tail[static_cast<std::size_t>(j + 1)]);
    } else {
      theta[static_cast<std::size_t>(j)] = wrap_azimuth(
          std::atan2(u[static_cast<std::size_t>(j)], u[static_cast<std::size_t>(j + 1)]));
    }
  }
  return EulerAngles(m, std::move(theta));
}

EulerAngles canonicalize(const EulerAngles& angles) {
  return angles_from_unit_vector(vector_from_angles(angles));
}

RotationMatrix rotation_from_angles(const EulerAngles& angles) {
  const int m = angles.m;
  std::vector<double> s(static_cast<std::size_t>(m), 1.0);
  std::vector<double> c(static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j + 1 < m; ++j) {
    s[static_cast<std::size_t>(j)] = std::sin(angles.theta[static_cast<std::size_t>(j)]);
    c[static_cast<std::size_t>(j)] = std::cos(angles.theta[static_cast<std::size_t>(j)]);
  }
  // Last slot carries the theta_m = pi/2 convention: s = 1, tan * cos = 1.

  Matrix a(m, m);
  for (int j = 0; j + 1 < m; ++j) a(j, j) = c[static_cast<std::size_t>(j)];

  // Last column a_m := v, shared with vector_from_angles bit for bit.
  const std::vector<double> v = vector_from_angles(angles);
  for (int i = 0; i < m; ++i) a(i, m - 1) = v[static_cast<std::size_t>(i)];

  // Below the diagonal: -s_j s_i prod_{j<l<i} c_l.
  for (int j = 0; j + 1 < m; ++j) {
    double between = 1.0;
    for (int i = j + 1; i < m; ++i) {
      a(i, j) = -s[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(i)] * between;
      between *= c[static_cast<std::size_t>(i)];
    }
  }
  return RotationMatrix(std::move(a));
}

void require_special_orthogonal(const Matrix& a, double tol) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw Error(ErrorCode::kNotSpecialOrthogonal, "rotation must be a non-empty square matrix");
  }
  const double ortho = max_abs_diff(transpose(a) * a, Matrix::identity(a.rows()));
  if (!(ortho <= tol)) {
    throw Error(ErrorCode::kNotSpecialOrthogonal,
                "columns not orthonormal (max |A^T A - I| = " + std::to_string(ortho) + ")");
  }
  const double det = determinant(a);
  if (!(std::abs(det - 1.0) <= tol)) {
    throw Error(ErrorCode::kNotSpecialOrthogonal, "determinant " + std::to_string(det) + " != 1");
  }
}

EulerAngles angles_from_rotation(const Matrix& a) {
  require_special_orthogonal(a);
  const int m = a.rows();
  std::vector<double> last(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) last[static_cast<std::size_t>(i)] = a(i, m - 1);

  EulerAngles angles = angles_from_unit_vector(last);
  double c = 1.0;
  for (int j = 0; j + 2 < m; ++j) {
    c = std::cos(angles.theta[static_cast<std::size_t>(j)]);
    if (std::abs(c) < kEulerDegeneracyTolerance) {
      throw Error(ErrorCode::kDegenerateAngles,
                  "polar cosine vanishes at angle " + std::to_string(j + 1));
    }
  }
  const double mismatch = max_abs_diff(rotation_from_angles(angles), a);
  if (mismatch > 1e-6) {
    throw Error(ErrorCode::kNotEulerForm,
                "rotation is not of the single-frame form A_theta (mismatch " +
                    std::to_string(mismatch) + "); use decompose_rotation");
  }
  return angles;
}

std::vector<EulerAngles> decompose_rotation(const Matrix& a) {
  require_special_orthogonal(a);
  std::vector<EulerAngles> factors;
  Matrix cur = a;
  for (int n = a.rows(); n >= 2; --n) {
    std::vector<double> last(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) last[static_cast<std::size_t>(i)] = cur(i, n - 1);
    EulerAngles angles = angles_from_unit_vector(last);
    const Matrix rest = transpose(rotation_from_angles(angles)) * cur;
    Matrix next(n - 1, n - 1);
    for (int i = 0; i + 1 < n; ++i) {
      for (int j = 0; j + 1 < n; ++j) next(i, j) = rest(i, j);
    }
    cur = std::move(next);
    factors.push_back(std::move(angles));
  }
  return factors;
}

RotationMatrix compose_rotation(const std::vector<EulerAngles>& factors) {
  if (factors.empty()) return RotationMatrix(Matrix::identity(1));
  const int m = factors.front().m;
  Matrix r = Matrix::identity(m);
  for (const auto& f : factors) {
    if (f.m > m) throw Error(ErrorCode::kDimensionMismatch, "factor larger than the rotation");
    r = r * embed_top_left(rotation_from_angles(f), m);
  }
  return RotationMatrix(std::move(r));
}

}  // namespace hilbert
