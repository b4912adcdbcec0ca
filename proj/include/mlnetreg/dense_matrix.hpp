#pragma once

#include <cstddef>
#include <vector>

#include "mlnetreg/errors.hpp"

namespace mlnetreg {

/**
 * Dense row-major matrix of doubles.
 *
 * Carries an optional symmetry flag: mark_symmetric() verifies
 * |M(i,j) - M(j,i)| <= 1e-12 * max(1, max|M|) and remembers the result,
 * so consumers that require symmetry can check cheaply.
 */
class DenseMatrix {
 public:
  DenseMatrix() = default;

  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    m.symmetric_ = true;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) {
    symmetric_ = false;  // mutation invalidates the flag
    return entries_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  /// Read-only access that does not touch the symmetry flag.
  double at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const std::vector<double>& data() const { return entries_; }
  std::vector<double>& mutable_data() {
    symmetric_ = false;
    return entries_;
  }

  const double* row_ptr(std::size_t i) const { return entries_.data() + i * cols_; }

  bool is_marked_symmetric() const { return symmetric_; }

  double max_abs() const;

  /// Verifies symmetry within tolerance and sets the flag; throws AsymmetricInput.
  void mark_symmetric();

  /// True if the symmetry bound holds (does not set the flag).
  bool symmetry_holds() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
  bool symmetric_ = false;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x);
DenseMatrix transpose(const DenseMatrix& a);

/// Horizontal concatenation [a b]; either side may have zero columns.
DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix column_matrix(const std::vector<double>& v);

}  // namespace mlnetreg
