#include "hilbert/oracles.hpp"

#include <cmath>
#include <numbers>

#include "hilbert/error.hpp"
#include "hilbert/quadrature.hpp"

namespace hilbert::oracle {

namespace {

Matrix drop_row0_col(const Matrix& a, int col) {
  const int n = a.rows();
  Matrix s(n - 1, n - 1);
  for (int i = 1; i < n; ++i) {
    int c = 0;
    for (int j = 0; j < n; ++j) {
      if (j != col) s(i - 1, c++) = a(i, j);
    }
  }
  return s;
}

Matrix principal_submatrix(const GramMatrix& g, const std::vector<int>& idx) {
  const int n = static_cast<int>(idx.size());
  Matrix s(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) s(a, b) = g(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
  }
  return s;
}

std::vector<double> packed_gram(const std::vector<double>& w, int k) {
  std::vector<double> u(static_cast<std::size_t>(packed_size(k)), 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int l = 0; l <= j; ++l) {
        s += w[static_cast<std::size_t>(packed_index(i, l))] * w[static_cast<std::size_t>(packed_index(j, l))];
      }
      u[static_cast<std::size_t>(packed_index(i, j))] = s;
    }
  }
  return u;
}

Matrix gram_schmidt(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix q(m, m);
  for (int j = 0; j < m; ++j) {
    for (;;) {
      std::vector<double> x(static_cast<std::size_t>(m));
      for (double& e : x) e = normal(rng);
      // Modified Gram-Schmidt, applied twice for stability.
      for (int pass = 0; pass < 2; ++pass) {
        for (int c = 0; c < j; ++c) {
          double dot = 0.0;
          for (int r = 0; r < m; ++r) dot += q(r, c) * x[static_cast<std::size_t>(r)];
          for (int r = 0; r < m; ++r) x[static_cast<std::size_t>(r)] -= dot * q(r, c);
        }
      }
      double norm = 0.0;
      for (double e : x) norm += e * e;
      norm = std::sqrt(norm);
      if (norm < 1e-6) continue;
      for (int r = 0; r < m; ++r) q(r, j) = x[static_cast<std::size_t>(r)] / norm;
      break;
    }
  }
  return q;
}

}  // namespace

double cofactor_determinant(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::kDimensionMismatch, "determinant of a non-square matrix");
  const int n = a.rows();
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  if (n == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  double det = 0.0;
  double sign = 1.0;
  for (int j = 0; j < n; ++j) {
    if (a(0, j) != 0.0) det += sign * a(0, j) * cofactor_determinant(drop_row0_col(a, j));
    sign = -sign;
  }
  return det;
}

bool all_principal_minors_nonnegative(const GramMatrix& g, double tol) {
  const int k = g.k();
  const double scale = std::max(g.max_abs_entry(), 1e-300);
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < k; ++i) {
      if (mask & (1u << i)) idx.push_back(i);
    }
    const double minor = cofactor_determinant(principal_submatrix(g, idx));
    if (minor < -tol * std::pow(scale, static_cast<double>(idx.size()))) return false;
  }
  return true;
}

double finite_difference_jacobian(const TriangularFactor& w, double step) {
  const int k = w.k();
  const int n = packed_size(k);
  std::vector<double> base(w.lower().begin(), w.lower().end());
  Matrix jac(n, n);
  for (int c = 0; c < n; ++c) {
    auto plus = base;
    auto minus = base;
    plus[static_cast<std::size_t>(c)] += step;
    minus[static_cast<std::size_t>(c)] -= step;
    const auto up = packed_gram(plus, k);
    const auto down = packed_gram(minus, k);
    for (int r = 0; r < n; ++r) {
      jac(r, c) = (up[static_cast<std::size_t>(r)] - down[static_cast<std::size_t>(r)]) / (2.0 * step);
    }
  }
  return std::abs(cofactor_determinant(jac));
}

double finite_difference_compose_volume(const std::vector<double>& w_lower, const AngleSchedule& schedule,
                                        double step) {
  const int k = schedule.k();
  const int m = schedule.m();
  const int nw = packed_size(k);
  const int n = nw + schedule.size();
  if (n != k * m) {
    throw Error(ErrorCode::kDimensionMismatch, "compose volume needs k(k+1)/2 + angles = km");
  }
  Matrix jac(n, n);
  auto column = [&](int c, const VectorTuple& up, const VectorTuple& down) {
    for (int r = 0; r < n; ++r) {
      jac(r, c) = (up.entries()[static_cast<std::size_t>(r)] - down.entries()[static_cast<std::size_t>(r)]) /
                  (2.0 * step);
    }
  };
  for (int c = 0; c < nw; ++c) {
    auto plus = w_lower;
    auto minus = w_lower;
    plus[static_cast<std::size_t>(c)] += step;
    minus[static_cast<std::size_t>(c)] -= step;
    column(c, compose(plus, schedule), compose(minus, schedule));
  }
  int c = nw;
  for (int i = 0; i < k; ++i) {
    for (int p = 0; p < schedule.rotations_for(i); ++p, ++c) {
      AngleSchedule plus = schedule;
      AngleSchedule minus = schedule;
      plus.angle(i, p) += step;
      minus.angle(i, p) -= step;
      column(c, compose(w_lower, plus), compose(w_lower, minus));
    }
  }
  return std::abs(determinant(jac));
}

Matrix recursive_frame(const EulerAngles& angles) {
  const int m = angles.m;
  if (m == 1) return Matrix::identity(1);
  const double t = angles.theta[0];
  std::vector<double> rest(angles.theta.begin() + 1, angles.theta.end());
  if (m == 2) {
    // Terminal step: v' = (1) in R^1.
    Matrix a(2, 2);
    a(0, 0) = std::cos(t);
    a(1, 0) = -std::sin(t);
    a(0, 1) = std::sin(t);
    a(1, 1) = std::cos(t);
    return a;
  }
  const Matrix sub = recursive_frame(EulerAngles(m - 1, rest));
  Matrix a(m, m);
  // a_1 = cos t e1 - sin t (0, v'), where v' is the last column of sub.
  a(0, 0) = std::cos(t);
  for (int r = 1; r < m; ++r) a(r, 0) = -std::sin(t) * sub(r - 1, m - 2);
  for (int j = 1; j + 1 < m; ++j) {
    a(0, j) = 0.0;
    for (int r = 1; r < m; ++r) a(r, j) = sub(r - 1, j - 1);
  }
  a(0, m - 1) = std::sin(t);
  for (int r = 1; r < m; ++r) a(r, m - 1) = std::cos(t) * sub(r - 1, m - 2);
  return a;
}

double angular_weight_quadrature(int k, int m, int nodes) {
  AngleSchedule schedule(k, m);
  const QuadratureRule polar = gauss_legendre(nodes, 0.0, std::numbers::pi);
  // Coordinates of the tensor grid: (i, p) pairs with p >= 1.
  std::vector<std::pair<int, int>> axes;
  double azimuth_measure = 1.0;
  for (int i = 0; i < k; ++i) {
    for (int p = 0; p < schedule.rotations_for(i); ++p) {
      if (p == 0) {
        azimuth_measure *= 2.0 * std::numbers::pi;
        schedule.angle(i, p) = 0.5;  // any value: the weight does not depend on it
      } else {
        axes.emplace_back(i, p);
      }
    }
  }
  const auto d = axes.size();
  std::vector<std::size_t> digit(d, 0);
  double total = 0.0;
  for (;;) {
    double w = 1.0;
    for (std::size_t a = 0; a < d; ++a) {
      schedule.angle(axes[a].first, axes[a].second) = polar.nodes[digit[a]];
      w *= polar.weights[digit[a]];
    }
    total += w * angular_weight(schedule);
    std::size_t a = 0;
    while (a < d && ++digit[a] == polar.nodes.size()) digit[a++] = 0;
    if (a == d) break;
  }
  return azimuth_measure * total;
}

Matrix haar_orthogonal(int m, std::mt19937_64& rng) { return gram_schmidt(m, rng); }

Matrix haar_rotation(int m, std::mt19937_64& rng) {
  Matrix q = gram_schmidt(m, rng);
  if (cofactor_determinant(q) < 0.0) {
    for (int r = 0; r < m; ++r) q(r, 0) = -q(r, 0);
  }
  return q;
}

GramMatrix random_psd(int k, int rank, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix a(k, rank);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < rank; ++j) a(i, j) = normal(rng);
  }
  GramMatrix g(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int l = 0; l < rank; ++l) s += a(i, l) * a(j, l);
      g.at(i, j) = s;
    }
  }
  return g;
}

GramMatrix random_boundary_psd(int k, std::mt19937_64& rng) {
  const int r = k - 1;
  std::uniform_int_distribution<int> small(-1, 1);
  std::uniform_int_distribution<int> coeff(-2, 2);
  std::bernoulli_distribution flip;
  Matrix a(k, std::max(r, 1));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) a(i, j) = i == j ? (flip(rng) ? 4.0 : -4.0) : small(rng);
  }
  for (int i = 0; i < r; ++i) {
    const double c = coeff(rng);
    for (int j = 0; j < r; ++j) a(k - 1, j) += c * a(i, j);
  }
  GramMatrix g(k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int l = 0; l < r; ++l) s += a(i, l) * a(j, l);
      g.at(i, j) = s;
    }
  }
  return g;
}

VectorTuple random_configuration(int k, int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> e(static_cast<std::size_t>(k * m));
  for (double& x : e) x = normal(rng);
  return VectorTuple(k, m, std::move(e));
}

}  // namespace hilbert::oracle
