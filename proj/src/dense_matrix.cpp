#include "mlnetreg/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mlnetreg {

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : entries_) m = std::max(m, std::abs(v));
  return m;
}

bool DenseMatrix::symmetry_holds() const {
  if (rows_ != cols_) return false;
  const double bound = 1e-12 * std::max(1.0, max_abs());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i + 1; j < cols_; ++j) {
      if (std::abs(at(i, j) - at(j, i)) > bound) return false;
    }
  }
  return true;
}

void DenseMatrix::mark_symmetric() {
  if (rows_ != cols_) {
    throw AsymmetricInput("matrix is not square (" + std::to_string(rows_) + "x" +
                          std::to_string(cols_) + ")");
  }
  if (!symmetry_holds()) {
    throw AsymmetricInput("matrix is not symmetric within tolerance");
  }
  symmetric_ = true;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("matmul: " + std::to_string(a.cols()) + " columns vs " +
                            std::to_string(b.rows()) + " rows");
  }
  DenseMatrix c(a.rows(), b.cols());
  std::vector<double>& cdata = c.mutable_data();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* crow = cdata.data() + i * b.cols();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.row_ptr(k);
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

std::vector<double> matvec(const DenseMatrix& a, const std::vector<double>& x) {
  if (a.cols() != x.size()) {
    throw DimensionMismatch("matvec: " + std::to_string(a.cols()) + " columns vs vector of " +
                            std::to_string(x.size()));
  }
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* row = a.row_ptr(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a.at(i, j);
  return t;
}

DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  if (a.rows() != b.rows()) {
    throw DimensionMismatch("hcat: row counts " + std::to_string(a.rows()) + " vs " +
                            std::to_string(b.rows()));
  }
  DenseMatrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a.at(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, a.cols() + j) = b.at(i, j);
  }
  return c;
}

DenseMatrix column_matrix(const std::vector<double>& v) {
  DenseMatrix c(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) c(i, 0) = v[i];
  return c;
}

}  // namespace mlnetreg
