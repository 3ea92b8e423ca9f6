#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "hilbert/measure.hpp"
#include "hilbert/oracles.hpp"
#include "hilbert/reduction.hpp"

using namespace hilbert;

namespace {

constexpr double kPi = std::numbers::pi;

// Rows of R applied to each zero-extended row of W.
VectorTuple rotate_rows(const Matrix& r, const VectorTuple& w) {
  VectorTuple out(w.k(), w.m());
  for (int i = 0; i < w.k(); ++i) {
    for (int a = 0; a < w.m(); ++a) {
      double s = 0.0;
      for (int b = 0; b < w.m(); ++b) s += r(a, b) * w(i, b);
      out(i, a) = s;
    }
  }
  return out;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST(PlaneRotation, ZeroAngleIsIdentity) {
  EXPECT_EQ(max_abs_diff(plane_rotation(4, 1, 0.0), Matrix::identity(4)), 0.0);
}

TEST(PlaneRotation, QuarterTurn) {
  const RotationMatrix r = plane_rotation(2, 0, kPi / 2);
  EXPECT_NEAR(r(0, 0), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(r(0, 1), -1.0);
  EXPECT_DOUBLE_EQ(r(1, 0), 1.0);
  EXPECT_NEAR(r(1, 1), 0.0, 1e-16);
}

TEST(PlaneRotation, IndexOutOfRange) {
  EXPECT_EQ(gen::code_of([] { plane_rotation(3, 2, 0.1); }), ErrorCode::kIndexOutOfRange);
  EXPECT_EQ(gen::code_of([] { plane_rotation(3, -1, 0.1); }), ErrorCode::kIndexOutOfRange);
}

TEST(Schedule, RotationCounts) {
  const AngleSchedule s(3, 5);
  EXPECT_EQ(s.rotations_for(0), 4);
  EXPECT_EQ(s.rotations_for(1), 3);
  EXPECT_EQ(s.rotations_for(2), 2);
  EXPECT_EQ(s.size(), 9);
  // Angles plus the k(k+1)/2 triangle entries cover all km coordinates.
  EXPECT_EQ(s.size() + packed_size(3), 15);
  const AngleSchedule square(3, 3);
  EXPECT_EQ(square.rotations_for(2), 0);
  EXPECT_EQ(square.size(), 3);
}

TEST(Reduce, TriangularInputIsFixed) {
  const VectorTuple v(2, 3, {2, 0, 0, 1, 3, 0});
  const Reduction r = reduce(v);
  EXPECT_EQ(r.w(0, 0), 2.0);
  EXPECT_EQ(r.w(1, 0), 1.0);
  EXPECT_EQ(r.w(1, 1), 3.0);
  for (double t : r.schedule.flat()) EXPECT_EQ(t, 0.0);
  EXPECT_EQ(max_abs_diff(r.r, Matrix::identity(3)), 0.0);
  EXPECT_FALSE(r.schedule.reflection_applied);
}

TEST(Reduce, SingleVectorInThePlane) {
  const Reduction r = reduce(VectorTuple(1, 2, {0, 5}));
  EXPECT_DOUBLE_EQ(r.w(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(std::abs(r.schedule.angle(0, 0)), kPi / 2);
  EXPECT_NEAR(r.r(0, 0) * 5.0, 0.0, 1e-15);
  EXPECT_NEAR(r.r(1, 0) * 5.0, 5.0, 1e-15);
}

TEST(Reduce, HandExample) {
  const Reduction r = reduce(VectorTuple(2, 3, {1, 2, 2, 2, 0, 0}));
  EXPECT_NEAR(r.w(0, 0), 3.0, 1e-15);
  EXPECT_NEAR(r.w(1, 0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.w(1, 1), 4.0 * std::sqrt(2.0) / 3.0, 1e-15);
  const TriangularFactor c = semidefinite_cholesky(gram(VectorTuple(2, 3, {1, 2, 2, 2, 0, 0})));
  for (std::size_t i = 0; i < c.lower().size(); ++i) EXPECT_NEAR(r.w.lower()[i], c.lower()[i], 1e-14);
}

TEST(Reduce, TooManyVectors) {
  EXPECT_EQ(gen::code_of([] { reduce(VectorTuple(3, 2, {1, 0, 0, 1, 1, 1})); }), ErrorCode::kDimensionMismatch);
}

TEST(Reduce, SquareCaseUsesReflection) {
  const Reduction r = reduce(VectorTuple(2, 2, {1, 0, 0, -1}));
  EXPECT_TRUE(r.schedule.reflection_applied);
  EXPECT_DOUBLE_EQ(r.w(1, 1), 1.0);
  EXPECT_NEAR(determinant(r.r), -1.0, 1e-15);
}

TEST(Reduce, OrbitFidelityAndReconstruction) {
  gen::Rng rng(31);
  for (int t = 0; t < 3000; ++t) {
    auto [k, m] = gen::shape(rng, 5);
    const VectorTuple v = gen::configuration(rng, k, m);
    const Reduction r = reduce(v);
    const GramMatrix g = gram(v);
    const double scale = g.max_abs_entry();
    EXPECT_LE(max_diff(gram(r.w).lower(), g.lower()), 1e-10 * scale);
    EXPECT_LE(max_diff(rotate_rows(r.r, r.w.embed()).entries(), v.entries()), 1e-10 * std::sqrt(scale));
    EXPECT_LE(max_diff(compose(std::vector<double>(r.w.lower().begin(), r.w.lower().end()), r.schedule).entries(),
                       v.entries()),
              1e-10 * std::sqrt(scale));
    EXPECT_LE(max_abs_diff(transpose(r.r) * r.r, Matrix::identity(m)), 1e-12);
    EXPECT_NEAR(determinant(r.r), r.schedule.reflection_applied ? -1.0 : 1.0, 1e-12);
    for (int i = 0; i < k; ++i) EXPECT_GT(r.w(i, i), 0.0);
  }
}

TEST(Reduce, InvariantUnderRotation) {
  gen::Rng rng(32);
  for (int t = 0; t < 2000; ++t) {
    auto [k, m] = gen::shape(rng, 5);
    const VectorTuple v = gen::configuration(rng, k, m);
    const Matrix q = gen::rotation(rng, m);
    const Reduction a = reduce(v);
    const Matrix rotated = v.as_matrix() * transpose(q);
    const Reduction b = reduce(VectorTuple(k, m, std::vector<double>(rotated.data().begin(), rotated.data().end())));
    EXPECT_LE(max_diff(a.w.lower(), b.w.lower()), 1e-10 * std::sqrt(gram(v).max_abs_entry()));
  }
}

TEST(Reduce, RankDeficientInputIsTotal) {
  // Second vector parallel to the first.
  const Reduction r = reduce(VectorTuple(2, 3, {1, 1, 0, 2, 2, 0}));
  EXPECT_NEAR(r.w(0, 0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.w(1, 0), 2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.w(1, 1), 0.0, 1e-15);
  EXPECT_EQ(r.schedule.angle(1, 0), 0.0);
}

TEST(Reduce, ZeroConfiguration) {
  const Reduction r = reduce(VectorTuple(2, 3));
  for (double x : r.w.lower()) EXPECT_EQ(x, 0.0);
  for (double t : r.schedule.flat()) EXPECT_EQ(t, 0.0);
}

TEST(RotationFromSchedule, MatchesReduction) {
  gen::Rng rng(33);
  for (int t = 0; t < 200; ++t) {
    auto [k, m] = gen::shape(rng, 5);
    const Reduction r = reduce(gen::configuration(rng, k, m));
    EXPECT_LE(max_abs_diff(rotation_from_schedule(r.schedule), r.r), 1e-13);
  }
}

TEST(AngularWeight, Examples) {
  AngleSchedule s(1, 3);
  s.angle(0, 0) = kPi / 2;
  s.angle(0, 1) = kPi / 2;
  EXPECT_DOUBLE_EQ(angular_weight(s), 1.0);

  AngleSchedule t(2, 3);
  t.angle(0, 1) = 0.7;
  EXPECT_DOUBLE_EQ(angular_weight(t), std::sin(0.7));

  AngleSchedule square(2, 2);
  square.angle(0, 0) = 1.3;
  EXPECT_EQ(angular_weight(square), 2.0);
}

TEST(AngularVolume, Examples) {
  EXPECT_NEAR(angular_volume(2, 3), 8 * kPi * kPi, 1e-12);
  EXPECT_NEAR(angular_volume(1, 2), 2 * kPi, 1e-14);
  EXPECT_NEAR(angular_volume(2, 2), 4 * kPi, 1e-14);
  EXPECT_EQ(gen::code_of([] { angular_volume(3, 2); }), ErrorCode::kNotCoregular);
}

TEST(AngularVolume, MatchesQuadratureOfTheWeight) {
  for (int m = 1; m <= 5; ++m) {
    for (int k = 1; k <= m; ++k) {
      EXPECT_LE(gen::rel_err(oracle::angular_weight_quadrature(k, m, 12), angular_volume(k, m)), 1e-8)
          << "k=" << k << " m=" << m;
    }
  }
}

TEST(AngularVolume, EqualsStiefelVolume) {
  for (int m = 1; m <= 7; ++m) {
    for (int k = 1; k <= m; ++k) EXPECT_LE(gen::rel_err(angular_volume(k, m), stiefel_volume(m, k)), 1e-13);
  }
}

TEST(Compose, VolumeElementOfOneVector) {
  gen::Rng rng(34);
  for (int t = 0; t < 100; ++t) {
    AngleSchedule s(1, 3);
    s.angle(0, 0) = gen::uniform(rng, -3.0, 3.0);
    s.angle(0, 1) = gen::uniform(rng, 0.2, 2.9);
    const double w = gen::uniform(rng, 0.5, 2.0);
    const double fd = oracle::finite_difference_compose_volume({w}, s);
    EXPECT_LE(gen::rel_err(fd, w * w * std::sin(s.angle(0, 1))), 1e-6);
  }
}

TEST(Compose, VolumeElementMatchesWeightTimesDiagonalPowers) {
  gen::Rng rng(35);
  for (int t = 0; t < 100; ++t) {
    auto [k, m] = gen::shape(rng, 4);
    if (k == m) continue;  // the reflection makes the k = m chart two-to-one
    const Reduction r = reduce(gen::configuration(rng, k, m));
    const std::vector<double> w(r.w.lower().begin(), r.w.lower().end());
    double expected = angular_weight(r.schedule);
    for (int i = 0; i < k; ++i) expected *= std::pow(r.w(i, i), m - 1 - i);
    const double fd = oracle::finite_difference_compose_volume(w, r.schedule);
    EXPECT_LE(gen::rel_err(fd, expected), 1e-6) << "k=" << k << " m=" << m;
  }
}
