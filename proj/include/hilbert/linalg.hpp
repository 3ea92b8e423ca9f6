#pragma once

// Small exact-shape kernels for configurations of k vectors in R^m and their
// Gram matrices. All indices are zero-based; the packed lower-triangular
// layout is row-major over j <= i, i.e. (0,0), (1,0), (1,1), (2,0), ...

#include <cstddef>
#include <span>
#include <vector>

namespace hilbert {

inline constexpr double kDefaultTolerance = 1e-12;

/// Number of entries in a packed k x k lower triangle.
constexpr int packed_size(int k) { return k * (k + 1) / 2; }

/// Offset of entry (i, j), j <= i, in the packed lower triangle.
constexpr int packed_index(int i, int j) { return i * (i + 1) / 2 + j; }

/// Dense row-major matrix for desk-scale sizes.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);
  Matrix(int rows, int cols, std::vector<double> data);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r * cols_ + c)];
  }

  std::span<const double> data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

/// Determinant by partially pivoted elimination.
double determinant(const Matrix& a);

/// Largest entrywise |a - b|; the shapes must agree.
double max_abs_diff(const Matrix& a, const Matrix& b);

/// k vectors in R^m stored row by row (v[i][l] at i*m + l).
class VectorTuple {
 public:
  VectorTuple(int k, int m);
  VectorTuple(int k, int m, std::vector<double> entries);

  int k() const { return k_; }
  int m() const { return m_; }

  double& operator()(int i, int l) { return v_[static_cast<std::size_t>(i * m_ + l)]; }
  double operator()(int i, int l) const { return v_[static_cast<std::size_t>(i * m_ + l)]; }

  std::span<const double> row(int i) const {
    return std::span<const double>(v_).subspan(static_cast<std::size_t>(i * m_),
                                               static_cast<std::size_t>(m_));
  }
  std::span<const double> entries() const { return v_; }

  /// The k x m matrix whose rows are the vectors.
  Matrix as_matrix() const;

 private:
  int k_;
  int m_;
  std::vector<double> v_;
};

/// Symmetric k x k matrix holding only its packed lower triangle.
class GramMatrix {
 public:
  explicit GramMatrix(int k);
  GramMatrix(int k, std::vector<double> lower);

  int k() const { return k_; }

  double operator()(int i, int j) const {
    return i >= j ? lower_[static_cast<std::size_t>(packed_index(i, j))]
                  : lower_[static_cast<std::size_t>(packed_index(j, i))];
  }
  /// Mutable access to the stored entry for (i, j) or (j, i).
  double& at(int i, int j) {
    return i >= j ? lower_[static_cast<std::size_t>(packed_index(i, j))]
                  : lower_[static_cast<std::size_t>(packed_index(j, i))];
  }

  std::span<const double> lower() const { return lower_; }

  double trace() const;
  double max_abs_entry() const;
  Matrix as_matrix() const;

 private:
  int k_;
  std::vector<double> lower_;
};

/// Lower-triangular k x m configuration with nonnegative diagonal: a point of
/// the closed fundamental domain. Entries with j > i are identically zero and
/// are not stored.
class TriangularFactor {
 public:
  TriangularFactor(int k, int m);
  TriangularFactor(int k, int m, std::vector<double> lower);

  int k() const { return k_; }
  int m() const { return m_; }

  double operator()(int i, int j) const {
    return j > i ? 0.0 : w_[static_cast<std::size_t>(packed_index(i, j))];
  }
  double& at(int i, int j) { return w_[static_cast<std::size_t>(packed_index(i, j))]; }

  std::span<const double> lower() const { return w_; }

  /// Rows zero-extended into R^m.
  VectorTuple embed() const;
  /// Same factor viewed in a larger ambient space (m2 >= k).
  TriangularFactor with_ambient(int m2) const;

  /// Principal-stratum test: every diagonal entry exceeds tol * scale, where
  /// scale is the largest absolute entry.
  bool is_interior(double tol = kDefaultTolerance) const;

 private:
  int k_;
  int m_;
  std::vector<double> w_;
};

/// u[i][j] = <v_i, v_j>.
GramMatrix gram(const VectorTuple& v);
GramMatrix gram(const TriangularFactor& w);

/// (|G_0|, |G_1|, ..., |G_k|) with |G_0| = 1. On positive semidefinite input
/// these are prefix products of the squared semidefinite_cholesky pivots, so a
/// rank-deficient G yields exact zeros from the deficient index on. Indefinite
/// input falls back to the closed-form determinant for blocks up to 3 x 3 and
/// to Schur pivots or LU beyond.
std::vector<double> leading_minors(const GramMatrix& g, double tol = kDefaultTolerance);

/// Cholesky factor W (W W^T = G) that is total on positive semidefinite input.
/// A pivot in [-tol*scale, tol*scale] is clamped to zero together with the rest
/// of its column. Throws kNotPositiveSemidefinite for a pivot below
/// -tol*scale, or when a clamped column still carries an off-diagonal residual
/// larger than sqrt(tol)*scale (which no PSD matrix can produce). scale is the
/// largest absolute entry of G.
TriangularFactor semidefinite_cholesky(const GramMatrix& g, double tol = kDefaultTolerance);

/// Membership of G in the image of the Hilbert map for k vectors in R^m.
/// Throws kNotCoregular when k > m.
bool is_in_image(const GramMatrix& g, int k, int m, double tol = kDefaultTolerance);

/// A configuration whose Gram matrix is G: Cholesky-factor G and embed the
/// rows into R^m. Throws kNotInImage when G is not positive semidefinite.
VectorTuple lift(const GramMatrix& g, int m, double tol = kDefaultTolerance);

}  // namespace hilbert
