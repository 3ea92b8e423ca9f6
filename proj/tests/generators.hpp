#pragma once

// Hand-rolled generators for the property tests. Every generator draws from a
// caller-owned engine so a failing case can be replayed from its seed.

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "hilbert/error.hpp"
#include "hilbert/euler.hpp"
#include "hilbert/linalg.hpp"
#include "hilbert/reduction.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

/// (k, m) with 1 <= k <= m <= max_m.
inline std::pair<int, int> shape(Rng& rng, int max_m) {
  const int m = uniform_int(rng, 1, max_m);
  return {uniform_int(rng, 1, m), m};
}

inline hilbert::VectorTuple configuration(Rng& rng, int k, int m) {
  std::normal_distribution<double> normal;
  std::vector<double> e(static_cast<std::size_t>(k * m));
  for (double& x : e) x = normal(rng);
  return hilbert::VectorTuple(k, m, std::move(e));
}

/// Lower-triangular factor with diagonal in [0.5, 2] and off-diagonal entries
/// in [-1, 1]: interior and well conditioned.
inline hilbert::TriangularFactor interior_factor(Rng& rng, int k, int m) {
  hilbert::TriangularFactor w(k, m);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < i; ++j) w.at(i, j) = uniform(rng, -1.0, 1.0);
    w.at(i, i) = uniform(rng, 0.5, 2.0);
  }
  return w;
}

/// Positive definite Gram matrix of an interior factor.
inline hilbert::GramMatrix positive_definite(Rng& rng, int k) { return hilbert::gram(interior_factor(rng, k, k)); }

/// Gram matrix of `rank` random integer vectors with a diagonally dominant
/// leading block; exactly singular when rank < k.
inline hilbert::GramMatrix integer_psd(Rng& rng, int k, int rank) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(rank)));
  for (int i = 0; i < rank && i < k; ++i) {
    for (int j = 0; j < rank; ++j) rows[i][j] = i == j ? 4.0 : uniform_int(rng, -1, 1);
  }
  for (int i = rank; i < k; ++i) {
    for (int b = 0; b < rank; ++b) {
      const int c = uniform_int(rng, -2, 2);
      for (int j = 0; j < rank; ++j) rows[i][j] += c * rows[b][j];
    }
  }
  hilbert::GramMatrix g(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int l = 0; l < rank; ++l) s += rows[i][l] * rows[j][l];
      g.at(i, j) = s;
    }
  }
  return g;
}

/// Angles with every polar angle in [-pi/2 + margin, pi/2 - margin].
inline hilbert::EulerAngles generic_angles(Rng& rng, int m, double margin = 0.1) {
  std::vector<double> theta(static_cast<std::size_t>(m - 1));
  const double half = std::numbers::pi / 2.0 - margin;
  for (int j = 0; j + 1 < m; ++j) {
    theta[static_cast<std::size_t>(j)] = j + 2 == m ? uniform(rng, -std::numbers::pi + margin, std::numbers::pi - margin) : uniform(rng, -half, half);
  }
  return hilbert::EulerAngles(m, std::move(theta));
}

/// Random element of SO(m) as a product of plane rotations.
inline hilbert::Matrix rotation(Rng& rng, int m) {
  hilbert::Matrix q = hilbert::Matrix::identity(m);
  for (int sweep = 0; sweep < 3; ++sweep) {
    for (int j = 0; j + 1 < m; ++j) q = hilbert::plane_rotation(m, j, uniform(rng, -std::numbers::pi, std::numbers::pi)) * q;
  }
  return q;
}

/// Code of the hilbert::Error thrown by f; records a failure if none is.
inline hilbert::ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const hilbert::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no hilbert::Error thrown";
  return hilbert::ErrorCode::kInvalidInput;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace gen
