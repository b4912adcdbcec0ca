#pragma once

#include <cstddef>
#include <vector>

#include "mlnetreg/dense_matrix.hpp"

namespace mlnetreg::linalg {

inline constexpr double kDefaultEigTol = 1e-10;
inline constexpr std::size_t kDefaultEigMaxIter = 100000;

struct EigenResult {
  double value = 0.0;
  std::vector<double> vector;  // unit l2 norm
  std::size_t iterations = 0;
  double residual = 0.0;  // ||M v - value v||_2
};

struct LeastSquaresResult {
  std::vector<double> coefficients;
  std::vector<double> residuals;
  double rss = 0.0;
  double sigma2_hat = 0.0;                // rss / (n - q); 0 when n == q
  std::vector<double> xtx_inverse_diag;   // diag((W^T W)^{-1})
};

/**
 * Largest algebraic eigenpair of a symmetric matrix by shifted power
 * iteration. A Gershgorin shift s = max_i sum_j |M_ij| makes M + sI
 * positive semi-definite, so the dominant eigenvalue of the shifted matrix
 * is the algebraically largest one of M. Starts from the normalized
 * all-ones vector; converged when successive iterates differ by less than
 * tol in l2. The eigenvector sign is chosen so its component sum is
 * nonnegative.
 */
EigenResult leading_eigenpair(const DenseMatrix& m, double tol = kDefaultEigTol,
                              std::size_t max_iter = kDefaultEigMaxIter);

/**
 * Second-largest algebraic eigenvalue, by power iteration on the shifted
 * deflated matrix (M + sI) - (lambda1 + s) v1 v1^T. Requires a converged
 * leading pair. The result is clamped to lead.value from above to keep
 * the spectral gap nonnegative under roundoff.
 */
double second_eigenvalue(const DenseMatrix& m, const EigenResult& lead,
                         double tol = kDefaultEigTol, std::size_t max_iter = kDefaultEigMaxIter);

/**
 * Least squares via Householder QR; requires n >= q >= 1 and a full column
 * rank design (relative R-diagonal threshold 1e-12, else RankDeficient).
 * Square systems interpolate exactly and report sigma2_hat = 0.
 */
LeastSquaresResult least_squares(const DenseMatrix& w, const std::vector<double>& y);

/// Row-wise Kronecker (face-splitting) product: row k is kron(a_k, b_k).
DenseMatrix face_splitting(const DenseMatrix& a, const DenseMatrix& b);

/**
 * sigma_min((I - P_X) V) where P_X projects onto the column span of X.
 * Computed as the square root of the smallest eigenvalue of the small Gram
 * matrix of the projection residuals (cyclic Jacobi). X may have zero
 * columns, in which case the result is sigma_min(V).
 */
double smallest_singular_value_residual(const DenseMatrix& x, const DenseMatrix& v);

/// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi.
/// Intended for small matrices (Gram matrices of a few columns).
std::vector<double> symmetric_eigenvalues(const DenseMatrix& m);

}  // namespace mlnetreg::linalg
