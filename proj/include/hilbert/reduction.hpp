#pragma once

// Reduction of a configuration to its fundamental-domain representative by
// coordinate-plane rotations. Vector i (zero-based) is targeted by m-1-i
// rotations; rotation p acts on coordinates (m-2-p, m-1-p) and zeroes the
// higher one. For k = m a final reflection of the last coordinate makes the
// last diagonal entry nonnegative.

#include <vector>

#include "hilbert/euler.hpp"
#include "hilbert/linalg.hpp"

namespace hilbert {

class AngleSchedule {
 public:
  AngleSchedule(int k, int m);

  int k() const { return k_; }
  int m() const { return m_; }

  /// Number of rotations that target vector i.
  int rotations_for(int i) const;
  /// Total number of angles: sum over i < min(k, m-1) of m-1-i.
  int size() const { return static_cast<int>(theta_.size()); }

  /// Angle of rotation p targeting vector i. p = 0 is the azimuthal step in
  /// (-pi, pi]; p > 0 lies in (0, pi) on the principal stratum.
  double& angle(int i, int p);
  double angle(int i, int p) const;

  /// Coordinate j such that rotation (i, p) acts on coordinates (j, j+1).
  int plane_of(int p) const { return m_ - 2 - p; }

  bool reflection_applied = false;

  std::span<const double> flat() const { return theta_; }

 private:
  int k_;
  int m_;
  std::vector<int> offset_;
  std::vector<double> theta_;
};

/// Identity except [[cos, -sin], [sin, cos]] on coordinates (j, j+1).
/// Throws kIndexOutOfRange unless 0 <= j < m-1.
RotationMatrix plane_rotation(int m, int j, double angle);

struct Reduction {
  TriangularFactor w;
  AngleSchedule schedule;
  Matrix r;  // v_i = R w_i for every i; det R = -1 iff a reflection was used
};

/// Throws kDimensionMismatch when k > m.
Reduction reduce(const VectorTuple& v);

/// The accumulated group element encoded by a schedule.
Matrix rotation_from_schedule(const AngleSchedule& schedule);

/// Inverse of reduce: V = R(schedule) W. Diagonal entries of w may be any
/// sign here, which lets callers differentiate through the parametrization.
VectorTuple compose(const std::vector<double>& w_lower, const AngleSchedule& schedule);

/// (1 + [k = m]) * prod_i prod_{p >= 1} sin^p theta(i, p).
double angular_weight(const AngleSchedule& schedule);

/// prod_{i=1}^{k} Vol(S^{m-i}), the integral of angular_weight over the angle
/// ranges. Throws kNotCoregular when k > m.
double angular_volume(int k, int m);

}  // namespace hilbert
