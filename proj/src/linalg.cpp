#include "hilbert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hilbert/error.hpp"

namespace hilbert {

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double x : values) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidInput, std::string(what) + " has a non-finite entry");
    }
  }
}

double det2(double a, double b, double c, double d) { return a * d - b * c; }

// Closed-form determinant of the leading l x l block, l <= 3.
double small_leading_det(const GramMatrix& g, int l) {
  switch (l) {
    case 0: return 1.0;
    case 1: return g(0, 0);
    case 2: return det2(g(0, 0), g(0, 1), g(1, 0), g(1, 1));
    default:
      return g(0, 0) * det2(g(1, 1), g(1, 2), g(2, 1), g(2, 2)) -
             g(0, 1) * det2(g(1, 0), g(1, 2), g(2, 0), g(2, 2)) +
             g(0, 2) * det2(g(1, 0), g(1, 1), g(2, 0), g(2, 1));
  }
}

Matrix leading_block(const GramMatrix& g, int l) {
  Matrix a(l, l);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) a(i, j) = g(i, j);
  }
  return a;
}

}  // namespace

Matrix::Matrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0.0) {
  if (rows < 0 || cols < 0) throw Error(ErrorCode::kInvalidInput, "negative matrix shape");
}

Matrix::Matrix(int rows, int cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows < 0 || cols < 0 || data_.size() != static_cast<std::size_t>(rows * cols)) {
    throw Error(ErrorCode::kInvalidInput, "matrix data does not match its shape");
  }
}

Matrix Matrix::identity(int n) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::kDimensionMismatch, "matrix product shape");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int l = 0; l < a.cols(); ++l) {
      const double x = a(i, l);
      if (x == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += x * b(l, j);
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

double determinant(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::kDimensionMismatch, "determinant of non-square");
  const int n = a.rows();
  Matrix lu = a;
  double det = 1.0;
  for (int p = 0; p < n; ++p) {
    int piv = p;
    for (int i = p + 1; i < n; ++i) {
      if (std::abs(lu(i, p)) > std::abs(lu(piv, p))) piv = i;
    }
    if (lu(piv, p) == 0.0) return 0.0;
    if (piv != p) {
      for (int j = 0; j < n; ++j) std::swap(lu(p, j), lu(piv, j));
      det = -det;
    }
    det *= lu(p, p);
    for (int i = p + 1; i < n; ++i) {
      const double f = lu(i, p) / lu(p, p);
      for (int j = p + 1; j < n; ++j) lu(i, j) -= f * lu(p, j);
    }
  }
  return det;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "max_abs_diff shape");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  }
  return d;
}

VectorTuple::VectorTuple(int k, int m)
    : VectorTuple(k, m, std::vector<double>(static_cast<std::size_t>(std::max(k * m, 0)), 0.0)) {}

VectorTuple::VectorTuple(int k, int m, std::vector<double> entries)
    : k_(k), m_(m), v_(std::move(entries)) {
  if (k < 1 || m < 1) throw Error(ErrorCode::kInvalidInput, "vector tuple needs k >= 1 and m >= 1");
  if (v_.size() != static_cast<std::size_t>(k * m)) {
    throw Error(ErrorCode::kInvalidInput, "vector tuple needs exactly k*m entries");
  }
  require_finite(v_, "vector tuple");
}

Matrix VectorTuple::as_matrix() const { return Matrix(k_, m_, v_); }

GramMatrix::GramMatrix(int k)
    : GramMatrix(k, std::vector<double>(static_cast<std::size_t>(std::max(packed_size(k), 0)), 0.0)) {}

GramMatrix::GramMatrix(int k, std::vector<double> lower) : k_(k), lower_(std::move(lower)) {
  if (k < 1) throw Error(ErrorCode::kInvalidInput, "gram matrix needs k >= 1");
  if (lower_.size() != static_cast<std::size_t>(packed_size(k))) {
    throw Error(ErrorCode::kInvalidInput, "gram matrix needs k(k+1)/2 packed entries");
  }
  require_finite(lower_, "gram matrix");
}

double GramMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < k_; ++i) t += (*this)(i, i);
  return t;
}

double GramMatrix::max_abs_entry() const {
  double s = 0.0;
  for (double x : lower_) s = std::max(s, std::abs(x));
  return s;
}

Matrix GramMatrix::as_matrix() const { return leading_block(*this, k_); }

TriangularFactor::TriangularFactor(int k, int m)
    : TriangularFactor(k, m, std::vector<double>(static_cast<std::size_t>(std::max(packed_size(k), 0)), 0.0)) {}

TriangularFactor::TriangularFactor(int k, int m, std::vector<double> lower)
    : k_(k), m_(m), w_(std::move(lower)) {
  if (k < 1 || m < 1) throw Error(ErrorCode::kInvalidInput, "triangular factor needs k, m >= 1");
  if (k > m) throw Error(ErrorCode::kDimensionMismatch, "triangular factor needs k <= m");
  if (w_.size() != static_cast<std::size_t>(packed_size(k))) {
    throw Error(ErrorCode::kInvalidInput, "triangular factor needs k(k+1)/2 packed entries");
  }
  require_finite(w_, "triangular factor");
  for (int i = 0; i < k; ++i) {
    if ((*this)(i, i) < 0.0) {
      throw Error(ErrorCode::kInvalidInput, "triangular factor needs a nonnegative diagonal");
    }
  }
}

VectorTuple TriangularFactor::embed() const {
  VectorTuple v(k_, m_);
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j <= i; ++j) v(i, j) = (*this)(i, j);
  }
  return v;
}

TriangularFactor TriangularFactor::with_ambient(int m2) const {
  return TriangularFactor(k_, m2, w_);
}

bool TriangularFactor::is_interior(double tol) const {
  double scale = 0.0;
  for (double x : w_) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return false;
  for (int i = 0; i < k_; ++i) {
    if ((*this)(i, i) <= tol * scale) return false;
  }
  return true;
}

GramMatrix gram(const VectorTuple& v) {
  GramMatrix g(v.k());
  for (int i = 0; i < v.k(); ++i) {
    const auto vi = v.row(i);
    for (int j = 0; j <= i; ++j) {
      const auto vj = v.row(j);
      double s = 0.0;
      for (int l = 0; l < v.m(); ++l) s += vi[static_cast<std::size_t>(l)] * vj[static_cast<std::size_t>(l)];
      g.at(i, j) = s;
    }
  }
  return g;
}

GramMatrix gram(const TriangularFactor& w) {
  GramMatrix g(w.k());
  for (int i = 0; i < w.k(); ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = 0.0;
      for (int l = 0; l <= j; ++l) s += w(i, l) * w(j, l);
      g.at(i, j) = s;
    }
  }
  return g;
}

std::vector<double> leading_minors(const GramMatrix& g, double tol) {
  const int k = g.k();
  const double scale = g.max_abs_entry();
  std::vector<double> minors(static_cast<std::size_t>(k + 1), 0.0);
  minors[0] = 1.0;
  if (scale == 0.0) return minors;

  // Positive semidefinite input: products of the squared Cholesky pivots, so
  // that |G_l| / |G_{l-1}| reproduces w_ll^2 to rounding.
  try {
    const TriangularFactor w = semidefinite_cholesky(g, tol);
    for (int l = 1; l <= k; ++l) {
      minors[static_cast<std::size_t>(l)] = minors[static_cast<std::size_t>(l - 1)] * w(l - 1, l - 1) * w(l - 1, l - 1);
    }
    return minors;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotPositiveSemidefinite) throw;
  }

  // Indefinite input: Schur pivots of the unpivoted elimination. A clamped
  // pivot with a negligible column zeroes the remaining minors; one with a live
  // column stops elimination and the larger blocks fall back to LU.
  Matrix a = g.as_matrix();
  std::vector<double> pivot(static_cast<std::size_t>(k), 0.0);
  int rank_break = k;  // first index with a PSD-consistent zero pivot
  int stuck_at = k;    // first index where elimination broke down
  for (int p = 0; p < k; ++p) {
    const double d = a(p, p);
    if (std::abs(d) <= tol * scale) {
      double col = 0.0;
      for (int i = p + 1; i < k; ++i) col = std::max(col, std::abs(a(i, p)));
      if (col <= std::sqrt(tol) * scale) {
        rank_break = p;
      } else {
        stuck_at = p;
      }
      break;
    }
    pivot[static_cast<std::size_t>(p)] = d;
    for (int i = p + 1; i < k; ++i) {
      const double f = a(i, p) / d;
      for (int j = p + 1; j < k; ++j) a(i, j) -= f * a(p, j);
    }
  }

  for (int l = 1; l <= k; ++l) {
    if (l > rank_break) {
      minors[static_cast<std::size_t>(l)] = 0.0;
    } else if (l <= 3) {
      minors[static_cast<std::size_t>(l)] = small_leading_det(g, l);
    } else if (l > stuck_at) {
      minors[static_cast<std::size_t>(l)] = determinant(leading_block(g, l));
    } else {
      minors[static_cast<std::size_t>(l)] =
          minors[static_cast<std::size_t>(l - 1)] * pivot[static_cast<std::size_t>(l - 1)];
    }
  }
  return minors;
}

TriangularFactor semidefinite_cholesky(const GramMatrix& g, double tol) {
  const int k = g.k();
  const double scale = g.max_abs_entry();
  TriangularFactor w(k, k);
  if (scale == 0.0) return w;
  const double pivot_floor = tol * scale;
  const double residual_cap = std::sqrt(tol) * scale;

  for (int j = 0; j < k; ++j) {
    double d = g(j, j);
    for (int s = 0; s < j; ++s) d -= w(j, s) * w(j, s);
    if (d < -pivot_floor) {
      throw Error(ErrorCode::kNotPositiveSemidefinite,
                  "negative pivot " + std::to_string(d) + " at index " + std::to_string(j));
    }
    const bool clamped = d <= pivot_floor;
    const double djj = clamped ? 0.0 : std::sqrt(d);
    w.at(j, j) = djj;
    for (int i = j + 1; i < k; ++i) {
      double r = g(i, j);
      for (int s = 0; s < j; ++s) r -= w(i, s) * w(j, s);
      if (clamped) {
        if (std::abs(r) > residual_cap) {
          throw Error(ErrorCode::kNotPositiveSemidefinite,
                      "zero pivot with nonzero coupling at index " + std::to_string(j));
        }
        w.at(i, j) = 0.0;
      } else {
        w.at(i, j) = r / djj;
      }
    }
  }
  return w;
}

bool is_in_image(const GramMatrix& g, int k, int m, double tol) {
  if (g.k() != k) throw Error(ErrorCode::kDimensionMismatch, "gram matrix size differs from k");
  if (k > m) {
    throw Error(ErrorCode::kNotCoregular,
                "image characterization requires k <= m (got k=" + std::to_string(k) +
                    ", m=" + std::to_string(m) + ")");
  }
  try {
    (void)semidefinite_cholesky(g, tol);
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNotPositiveSemidefinite) return false;
    throw;
  }
}

VectorTuple lift(const GramMatrix& g, int m, double tol) {
  if (g.k() > m) {
    throw Error(ErrorCode::kNotCoregular, "lift requires k <= m (got k=" + std::to_string(g.k()) +
                                               ", m=" + std::to_string(m) + ")");
  }
  try {
    return semidefinite_cholesky(g, tol).with_ambient(m).embed();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotPositiveSemidefinite) throw;
    throw Error(ErrorCode::kNotInImage, std::string("no preimage: ") + e.what());
  }
}

}  // namespace hilbert
