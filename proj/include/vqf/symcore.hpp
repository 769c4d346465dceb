#pragma once

// Dense symmetric-matrix kernel for vector-valued quadratic forms.
//
// A form Q: R^n -> R^m is stored as m symmetric n x n matrices A_1..A_m with
// Q(u)_i = u^t A_i u. Everything here is sized for desk-scale problems
// (n <= 16, m <= 8): dense row-major storage, cyclic Jacobi eigensolver.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vqf {

using Vector = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// General dense row-major matrix (Jacobians, eigenvector bases, whiteners).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  Vector column(std::size_t j) const;
  std::span<const double> data() const { return data_; }

  Vector multiply(std::span<const double> x) const;
  DenseMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Real symmetric n x n matrix. Construction rejects asymmetric or
/// non-finite input; the stored entries are exactly symmetric.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  /// Zero matrix of dimension n (n >= 1).
  explicit SymmetricMatrix(std::size_t n);
  /// From row-major n*n entries. Throws InputError unless entries[i][j] ==
  /// entries[j][i] bit-for-bit and all are finite.
  SymmetricMatrix(std::size_t n, std::vector<double> row_major);
  SymmetricMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SymmetricMatrix identity(std::size_t n);
  static SymmetricMatrix diagonal(std::span<const double> diag);
  /// x x^t
  static SymmetricMatrix outer(std::span<const double> x);

  std::size_t dim() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  /// Writes (i,j) and (j,i) together.
  void set(std::size_t i, std::size_t j, double value);
  std::span<const double> data() const { return data_; }

  double trace() const;
  double frobenius_norm() const;
  /// x^t A y
  double bilinear(std::span<const double> x, std::span<const double> y) const;
  double quadratic(std::span<const double> x) const { return bilinear(x, x); }
  Vector multiply(std::span<const double> x) const;

  SymmetricMatrix& operator+=(const SymmetricMatrix& other);
  SymmetricMatrix& operator-=(const SymmetricMatrix& other);
  SymmetricMatrix& operator*=(double s);
  friend SymmetricMatrix operator+(SymmetricMatrix a, const SymmetricMatrix& b) { return a += b; }
  friend SymmetricMatrix operator-(SymmetricMatrix a, const SymmetricMatrix& b) { return a -= b; }
  friend SymmetricMatrix operator*(double s, SymmetricMatrix a) { return a *= s; }
  friend SymmetricMatrix operator-(SymmetricMatrix a) { return a *= -1.0; }

  friend bool operator==(const SymmetricMatrix&, const SymmetricMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// An m-tuple of symmetric n x n matrices; Q(u)_i = u^t A_i u.
class VQForm {
 public:
  VQForm() = default;
  /// Throws InputError if mats is empty or dimensions disagree.
  explicit VQForm(std::vector<SymmetricMatrix> mats);

  std::size_t n() const { return n_; }
  std::size_t m() const { return mats_.size(); }
  const SymmetricMatrix& operator[](std::size_t i) const { return mats_[i]; }
  const std::vector<SymmetricMatrix>& matrices() const { return mats_; }

  /// max_i ||A_i||_F
  double max_norm() const;

  friend bool operator==(const VQForm&, const VQForm&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<SymmetricMatrix> mats_;
};

struct Inertia {
  int n_plus = 0;
  int n_minus = 0;
  int n_zero = 0;
  double tol = 0.0;

  int dim() const { return n_plus + n_minus + n_zero; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

struct EigenDecomposition {
  Vector values;          // ascending
  DenseMatrix vectors;    // column k is the unit eigenvector for values[k]
};

/// (u^t A_1 u, ..., u^t A_m u)
Vector evaluate(const VQForm& form, std::span<const double> u);
/// (u^t A_i w)_i
Vector bilinear(const VQForm& form, std::span<const double> u, std::span<const double> w);
/// sum_i lambda_i A_i
SymmetricMatrix contract(const VQForm& form, std::span<const double> lambda);

/// Cyclic Jacobi with threshold sweeps (cap 100 sweeps).
EigenDecomposition eigh(const SymmetricMatrix& a);
/// Eigenvalues only, ascending. Cheaper than eigh when vectors are unused.
Vector eigenvalues(const SymmetricMatrix& a);

/// 1e-8 * max(1, ||A||_F)
double default_inertia_tol(const SymmetricMatrix& a);
Inertia inertia(const SymmetricMatrix& a, double tol);
Inertia inertia(const SymmetricMatrix& a);
Inertia inertia_from_eigenvalues(std::span<const double> values, double tol);

/// tr(AB)
double frobenius(const SymmetricMatrix& a, const SymmetricMatrix& b);

/// G_ij = tr(A_i A_j), returned as an m x m symmetric matrix.
SymmetricMatrix gram(const VQForm& form);

enum class Ensemble { Gaussian, TracelessGaussian, DefinitePlanted, IndefinitePlanted };

Ensemble parse_ensemble(std::string_view name);
std::string_view ensemble_name(Ensemble e);

/// Seeded random form. DefinitePlanted shifts A_1 so lambda_min(A_1) == 1;
/// IndefinitePlanted draws traceless, linearly independent A_i (requires
/// m <= n(n+1)/2 - 1).
VQForm random_form(std::size_t n, std::size_t m, Ensemble ensemble, std::uint64_t seed);
VQForm random_form(std::size_t n, std::size_t m, std::string_view ensemble, std::uint64_t seed);

}  // namespace vqf
