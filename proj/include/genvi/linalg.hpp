#pragma once

// Small dense vectors and matrices. Systems here have at most a handful of
// degrees of freedom, so everything is row-major std::vector storage.

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace genvi {

using Vec = std::vector<double>;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace vec {

Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scaled(const Vec& a, double s);
/// y + s * x
Vec axpy(double s, const Vec& x, const Vec& y);
double dot(const Vec& a, const Vec& b);
double norm_inf(const Vec& a);
double max_abs_diff(const Vec& a, const Vec& b);
bool all_finite(const Vec& a);
Vec concat(const Vec& a, const Vec& b);

void require_same_size(const Vec& a, const Vec& b, const char* what);

}  // namespace vec

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vec& d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vec operator*(const Vec& x) const;
  Matrix operator*(const Matrix& b) const;
  Matrix transposed() const;

  /// Largest absolute entry.
  double max_abs() const;
  /// Induced infinity norm (maximum absolute row sum).
  double norm_inf() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator-(const Matrix& a, const Matrix& b);

/// Lower-triangular factor L with A = L L^T. Throws SingularMatrix if A is not
/// numerically positive definite.
class Cholesky {
 public:
  explicit Cholesky(const Matrix& a);

  Vec solve(const Vec& b) const;
  const Matrix& factor() const { return l_; }
  std::size_t size() const { return l_.rows(); }

 private:
  Matrix l_;
};

/// Gaussian elimination with partial pivoting. A pivot below
/// n * eps * ||A||_inf is treated as singular.
Vec lu_solve(Matrix a, Vec b);

}  // namespace genvi
