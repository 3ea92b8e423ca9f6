#include "hilbert/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hilbert/error.hpp"
#include "hilbert/measure.hpp"

namespace hilbert {

namespace {

// Coordinate pairs below this (relative to the configuration scale) carry no
// direction; their rotation angle is fixed at 0.
constexpr double kPairFloor = 1e-13;

// R <- R * R_theta^{(j)}
void right_multiply_plane(Matrix& r, int j, double c, double s) {
  for (int q = 0; q < r.rows(); ++q) {
    const double a = r(q, j);
    const double b = r(q, j + 1);
    r(q, j) = a * c + b * s;
    r(q, j + 1) = -a * s + b * c;
  }
}

}  // namespace

AngleSchedule::AngleSchedule(int k, int m) : k_(k), m_(m) {
  if (k < 1 || m < 1) throw Error(ErrorCode::kInvalidInput, "schedule needs k, m >= 1");
  if (k > m) throw Error(ErrorCode::kDimensionMismatch, "schedule needs k <= m");
  int total = 0;
  for (int i = 0; i < k; ++i) {
    offset_.push_back(total);
    total += rotations_for(i);
  }
  theta_.assign(static_cast<std::size_t>(total), 0.0);
}

int AngleSchedule::rotations_for(int i) const { return std::max(m_ - 1 - i, 0); }

double& AngleSchedule::angle(int i, int p) {
  if (i < 0 || i >= k_ || p < 0 || p >= rotations_for(i)) {
    throw Error(ErrorCode::kIndexOutOfRange, "schedule index out of range");
  }
  return theta_[static_cast<std::size_t>(offset_[static_cast<std::size_t>(i)] + p)];
}

double AngleSchedule::angle(int i, int p) const {
  return const_cast<AngleSchedule*>(this)->angle(i, p);
}

RotationMatrix plane_rotation(int m, int j, double angle) {
  if (m < 2 || j < 0 || j >= m - 1) {
    throw Error(ErrorCode::kIndexOutOfRange, "plane index " + std::to_string(j) +
                                                 " out of range for m=" + std::to_string(m));
  }
  Matrix r = Matrix::identity(m);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  r(j, j) = c;
  r(j, j + 1) = -s;
  r(j + 1, j) = s;
  r(j + 1, j + 1) = c;
  return RotationMatrix(std::move(r));
}

Reduction reduce(const VectorTuple& v) {
  const int k = v.k();
  const int m = v.m();
  if (k > m) {
    throw Error(ErrorCode::kDimensionMismatch,
                "reduction requires k <= m (got k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")");
  }
  double scale = 0.0;
  for (double x : v.entries()) scale = std::max(scale, std::abs(x));
  const double floor = kPairFloor * scale;

  Matrix cur = v.as_matrix();
  Matrix r = Matrix::identity(m);
  AngleSchedule schedule(k, m);

  for (int i = 0; i < k; ++i) {
    for (int p = 0; p < schedule.rotations_for(i); ++p) {
      const int j = schedule.plane_of(p);
      const double x = cur(i, j);
      const double y = cur(i, j + 1);
      double theta = 0.0;
      if (std::abs(x) > floor || std::abs(y) > floor) {
        theta = std::atan2(y, x);
        if (theta <= -std::numbers::pi) theta = std::numbers::pi;
      }
      schedule.angle(i, p) = theta;
      if (theta == 0.0) continue;
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      // Apply R_{-theta} to every remaining vector.
      for (int q = i; q < k; ++q) {
        const double a = cur(q, j);
        const double b = cur(q, j + 1);
        cur(q, j) = c * a + s * b;
        cur(q, j + 1) = -s * a + c * b;
      }
      cur(i, j) = std::hypot(x, y);
      cur(i, j + 1) = 0.0;
      right_multiply_plane(r, j, c, s);
    }
  }

  if (k == m && cur(k - 1, k - 1) < 0.0) {
    for (int q = 0; q < k; ++q) cur(q, m - 1) = -cur(q, m - 1);
    for (int q = 0; q < m; ++q) r(q, m - 1) = -r(q, m - 1);
    schedule.reflection_applied = true;
  }

  std::vector<double> lower(static_cast<std::size_t>(packed_size(k)), 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j) lower[static_cast<std::size_t>(packed_index(i, j))] = cur(i, j);
    // Only a fully degenerate vector can leave a (rounding-sized) negative here.
    lower[static_cast<std::size_t>(packed_index(i, i))] = std::max(cur(i, i), 0.0);
  }
  return Reduction{TriangularFactor(k, m, std::move(lower)), std::move(schedule), std::move(r)};
}

Matrix rotation_from_schedule(const AngleSchedule& schedule) {
  const int m = schedule.m();
  Matrix r = Matrix::identity(m);
  for (int i = 0; i < schedule.k(); ++i) {
    for (int p = 0; p < schedule.rotations_for(i); ++p) {
      const double t = schedule.angle(i, p);
      right_multiply_plane(r, schedule.plane_of(p), std::cos(t), std::sin(t));
    }
  }
  if (schedule.reflection_applied && schedule.k() == m) {
    for (int q = 0; q < m; ++q) r(q, m - 1) = -r(q, m - 1);
  }
  return r;
}

VectorTuple compose(const std::vector<double>& w_lower, const AngleSchedule& schedule) {
  const int k = schedule.k();
  const int m = schedule.m();
  if (w_lower.size() != static_cast<std::size_t>(packed_size(k))) {
    throw Error(ErrorCode::kInvalidInput, "compose needs k(k+1)/2 packed entries");
  }
  const Matrix r = rotation_from_schedule(schedule);
  VectorTuple v(k, m);
  for (int i = 0; i < k; ++i) {
    for (int q = 0; q < m; ++q) {
      double s = 0.0;
      for (int j = 0; j <= i; ++j) s += r(q, j) * w_lower[static_cast<std::size_t>(packed_index(i, j))];
      v(i, q) = s;
    }
  }
  return v;
}

double angular_weight(const AngleSchedule& schedule) {
  double w = schedule.k() == schedule.m() ? 2.0 : 1.0;
  for (int i = 0; i < schedule.k(); ++i) {
    for (int p = 1; p < schedule.rotations_for(i); ++p) {
      w *= std::pow(std::sin(schedule.angle(i, p)), p);
    }
  }
  return w;
}

double angular_volume(int k, int m) {
  if (k < 1 || m < 1) throw Error(ErrorCode::kInvalidInput, "angular volume needs k, m >= 1");
  if (k > m) {
    throw Error(ErrorCode::kNotCoregular,
                "angular volume requires k <= m (got k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")");
  }
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= sphere_volume(m - i);
  return v;
}

}  // namespace hilbert
