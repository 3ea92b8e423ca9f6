#pragma once

// Generalized Euler angles. A unit vector in R^m is written as
//
//   v = sin t1 e1 + cos t1 (sin t2 e2 + cos t2 (... (sin t_{m-1} e_{m-1}
//                                                  + cos t_{m-1} e_m)))
//
// with polar angles t1..t_{m-2} in [-pi/2, pi/2] and the azimuthal angle
// t_{m-1} in (-pi, pi]. The orthonormal frame a_1..a_m built from the angle
// derivatives of v (a_m = v) gives the rotation A_theta.

#include <vector>

#include "hilbert/linalg.hpp"

namespace hilbert {

struct EulerAngles {
  int m = 1;
  std::vector<double> theta;  // m - 1 angles, theta[0] = t1

  EulerAngles() = default;
  EulerAngles(int m_, std::vector<double> theta_);
};

/// An element of SO(m), stored as a dense m x m matrix.
class RotationMatrix : public Matrix {
 public:
  RotationMatrix() = default;
  explicit RotationMatrix(Matrix a);
  int dim() const { return rows(); }
};

/// Cosines with |cos| below this are treated as vanishing during recovery.
inline constexpr double kEulerDegeneracyTolerance = 1e-8;

std::vector<double> vector_from_angles(const EulerAngles& angles);

/// Throws kZeroVector when |v| < 1e-8; otherwise v is renormalized. When a
/// cosine product vanishes the remaining angles are set to 0.
EulerAngles angles_from_unit_vector(std::span<const double> v);

/// Same vector, angles moved into the declared ranges.
EulerAngles canonicalize(const EulerAngles& angles);

/// A_theta from the closed-form entry table, evaluated without tangents.
RotationMatrix rotation_from_angles(const EulerAngles& angles);

/// Inverse of rotation_from_angles. A must be special orthogonal to 1e-8
/// (kNotSpecialOrthogonal otherwise); a vanishing polar cosine raises
/// kDegenerateAngles; a rotation outside the A_theta family (m >= 3) raises
/// kNotEulerForm, see decompose_rotation.
EulerAngles angles_from_rotation(const Matrix& a);

/// Factor an arbitrary rotation as
///   A = A_{theta_m} * diag(A_{theta_{m-1}}, 1) * ... * diag(A_{theta_2}, I)
/// returning the angle tuples for dimensions m, m-1, ..., 2.
std::vector<EulerAngles> decompose_rotation(const Matrix& a);

/// Product of the nested A_theta factors produced by decompose_rotation.
RotationMatrix compose_rotation(const std::vector<EulerAngles>& factors);

/// Throws kNotSpecialOrthogonal unless A^T A = I and det A = 1 within tol.
void require_special_orthogonal(const Matrix& a, double tol = 1e-8);

}  // namespace hilbert
