#include "mlnetreg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mlnetreg::linalg {

namespace {

double gershgorin_shift(const DenseMatrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = m.row_ptr(i);
    double sum = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) sum += std::abs(row[j]);
    s = std::max(s, sum);
  }
  return s;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void require_symmetric(const DenseMatrix& m) {
  if (!m.is_marked_symmetric() && !m.symmetry_holds()) {
    throw AsymmetricInput("eigensolver requires a symmetric matrix");
  }
}

struct PowerOutcome {
  double shifted_value = 0.0;  // Rayleigh quotient of (M + sI)
  std::vector<double> vector;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool annihilated = false;  // operator is (numerically) zero on its domain
};

/**
 * Power iteration on (M + sI) - deflate_scale * v1 v1^T. Iterates until
 * both the successive-iterate distance drops below tol and the residual
 * ||op(v) - mu v|| is at most tol. Starting vectors: the normalized
 * all-ones vector, then unit basis vectors, skipping any start that the
 * operator annihilates.
 */
PowerOutcome shifted_power(const DenseMatrix& m, double s, const std::vector<double>* v1,
                           double deflate_scale, double tol, std::size_t max_iter) {
  const std::size_t n = m.rows();
  const double op_bound = 2.0 * s + std::abs(deflate_scale);
  const double kernel_tol = 1e-13 * op_bound;

  PowerOutcome out;
  std::vector<double> v(n), w(n);
  std::size_t used = 0;

  for (std::size_t cand = 0; cand <= n; ++cand) {
    if (cand == 0) {
      std::fill(v.begin(), v.end(), 1.0 / std::sqrt(static_cast<double>(n)));
    } else {
      std::fill(v.begin(), v.end(), 0.0);
      v[cand - 1] = 1.0;
    }
    if (v1 != nullptr) {
      const double c = dot(*v1, v);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * (*v1)[i];
      const double nv = norm2(v);
      if (nv < 1e-8) continue;  // start (nearly) parallel to the deflated direction
      for (double& x : v) x /= nv;
    }

    bool annihilated_here = false;
    while (used < max_iter) {
      ++used;
      w = matvec(m, v);
      for (std::size_t i = 0; i < n; ++i) w[i] += s * v[i];
      if (v1 != nullptr) {
        const double c = deflate_scale * dot(*v1, v);
        for (std::size_t i = 0; i < n; ++i) w[i] -= c * (*v1)[i];
        const double drift = dot(*v1, w);  // roundoff leakage back onto v1
        for (std::size_t i = 0; i < n; ++i) w[i] -= drift * (*v1)[i];
      }
      const double nw = norm2(w);
      if (nw <= kernel_tol) {
        annihilated_here = true;
        break;
      }
      const double mu = dot(v, w);
      double res2 = 0.0;
      double dist2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = w[i] - mu * v[i];
        res2 += r * r;
        const double d = w[i] / nw - v[i];
        dist2 += d * d;
      }
      const double residual = std::sqrt(res2);
      if (std::sqrt(dist2) < tol && residual <= tol) {
        out.shifted_value = mu;
        out.vector = v;
        out.iterations = used;
        out.residual = residual;
        return out;
      }
      for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    }
    if (annihilated_here) continue;

    // Budget exhausted: report the current iterate; the caller decides
    // whether its residual is acceptable.
    w = matvec(m, v);
    for (std::size_t i = 0; i < n; ++i) w[i] += s * v[i];
    if (v1 != nullptr) {
      const double c = deflate_scale * dot(*v1, v);
      for (std::size_t i = 0; i < n; ++i) w[i] -= c * (*v1)[i];
    }
    const double mu = dot(v, w);
    double res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = w[i] - mu * v[i];
      res2 += r * r;
    }
    out.shifted_value = mu;
    out.vector = v;
    out.iterations = used;
    out.residual = std::sqrt(res2);
    return out;
  }

  out.annihilated = true;
  out.iterations = used;
  return out;
}

void resolve_sign(std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  if (sum < 0.0) {
    for (double& x : v) x = -x;
  }
}

}  // namespace

EigenResult leading_eigenpair(const DenseMatrix& m, double tol, std::size_t max_iter) {
  const std::size_t n = m.rows();
  if (n == 0) throw EmptyMatrix("leading_eigenpair: empty matrix");
  if (tol <= 0.0) throw InvalidArgument("leading_eigenpair: tol must be positive");
  require_symmetric(m);

  EigenResult result;
  if (n == 1) {
    result.value = m.at(0, 0);
    result.vector = {1.0};
    return result;
  }

  const double s = gershgorin_shift(m);
  if (s == 0.0) {  // zero matrix
    result.value = 0.0;
    result.vector.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    return result;
  }

  PowerOutcome po = shifted_power(m, s, nullptr, 0.0, tol, max_iter);
  if (po.annihilated) {
    // M + sI is numerically zero, i.e. M = -sI; every unit vector qualifies.
    result.value = -s;
    result.vector.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    result.iterations = po.iterations;
    return result;
  }
  if (po.residual > tol) {
    throw NonConvergence("leading_eigenpair: max_iter=" + std::to_string(max_iter) +
                         " reached with residual " + std::to_string(po.residual));
  }
  result.value = po.shifted_value - s;
  result.vector = std::move(po.vector);
  result.iterations = po.iterations;
  result.residual = po.residual;
  resolve_sign(result.vector);
  return result;
}

double second_eigenvalue(const DenseMatrix& m, const EigenResult& lead, double tol,
                         std::size_t max_iter) {
  const std::size_t n = m.rows();
  if (n < 2) throw InvalidArgument("second_eigenvalue: need at least a 2x2 matrix");
  if (lead.vector.size() != n) {
    throw DimensionMismatch("second_eigenvalue: leading eigenvector has wrong length");
  }
  if (tol <= 0.0) throw InvalidArgument("second_eigenvalue: tol must be positive");
  require_symmetric(m);

  const double s = gershgorin_shift(m);
  PowerOutcome po = shifted_power(m, s, &lead.vector, lead.value + s, tol, max_iter);
  if (po.annihilated) {
    // The deflated operator vanishes: all remaining shifted eigenvalues are 0.
    return std::min(-s, lead.value);
  }
  if (po.residual > tol) {
    throw NonConvergence("second_eigenvalue: max_iter=" + std::to_string(max_iter) +
                         " reached with residual " + std::to_string(po.residual));
  }
  return std::min(po.shifted_value - s, lead.value);
}

LeastSquaresResult least_squares(const DenseMatrix& w, const std::vector<double>& y) {
  const std::size_t n = w.rows();
  const std::size_t q = w.cols();
  if (q < 1) throw InvalidArgument("least_squares: design must have at least one column");
  if (n < q) {
    throw DimensionMismatch("least_squares: need at least as many rows as columns (" +
                            std::to_string(n) + " rows, " + std::to_string(q) + " columns)");
  }
  if (y.size() != n) {
    throw DimensionMismatch("least_squares: response length " + std::to_string(y.size()) +
                            " does not match " + std::to_string(n) + " rows");
  }

  // Householder QR of a working copy; the transformed response rides along.
  DenseMatrix a = w;
  std::vector<double> b = y;
  for (std::size_t k = 0; k < q; ++k) {
    double sigma = 0.0;
    for (std::size_t i = k; i < n; ++i) sigma += a.at(i, k) * a.at(i, k);
    const double norm_x = std::sqrt(sigma);
    if (norm_x == 0.0) continue;  // zero column; rank check below flags it
    const double alpha = (a.at(k, k) >= 0.0) ? -norm_x : norm_x;
    // Householder vector u = x - alpha e_k, stored in place of the column.
    a(k, k) -= alpha;
    double unorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) unorm2 += a.at(i, k) * a.at(i, k);
    if (unorm2 > 0.0) {
      for (std::size_t j = k + 1; j < q; ++j) {
        double proj = 0.0;
        for (std::size_t i = k; i < n; ++i) proj += a.at(i, k) * a.at(i, j);
        const double f = 2.0 * proj / unorm2;
        for (std::size_t i = k; i < n; ++i) a(i, j) -= f * a.at(i, k);
      }
      double proj = 0.0;
      for (std::size_t i = k; i < n; ++i) proj += a.at(i, k) * b[i];
      const double f = 2.0 * proj / unorm2;
      for (std::size_t i = k; i < n; ++i) b[i] -= f * a.at(i, k);
    }
    a(k, k) = alpha;  // R diagonal
  }

  double max_diag = 0.0, min_diag = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < q; ++k) {
    const double d = std::abs(a.at(k, k));
    max_diag = std::max(max_diag, d);
    min_diag = std::min(min_diag, d);
  }
  if (min_diag < 1e-12 * max_diag || max_diag == 0.0) {
    throw RankDeficient("least_squares: design matrix is not of full column rank");
  }

  LeastSquaresResult result;
  result.coefficients.assign(q, 0.0);
  for (std::size_t kk = q; kk-- > 0;) {
    double acc = b[kk];
    for (std::size_t j = kk + 1; j < q; ++j) acc -= a.at(kk, j) * result.coefficients[j];
    result.coefficients[kk] = acc / a.at(kk, kk);
  }

  result.residuals.assign(n, 0.0);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fit = 0.0;
    for (std::size_t j = 0; j < q; ++j) fit += w.at(i, j) * result.coefficients[j];
    result.residuals[i] = y[i] - fit;
    rss += result.residuals[i] * result.residuals[i];
  }
  result.rss = rss;
  // Square systems interpolate exactly, so the error-variance estimate is 0 by convention.
  result.sigma2_hat = (n > q) ? rss / static_cast<double>(n - q) : 0.0;

  // diag((W^T W)^{-1}) = row norms squared of R^{-1}.
  DenseMatrix rinv(q, q);
  for (std::size_t j = 0; j < q; ++j) {
    rinv(j, j) = 1.0 / a.at(j, j);
    for (std::size_t i = j; i-- > 0;) {
      double acc = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) acc += a.at(i, k) * rinv.at(k, j);
      rinv(i, j) = -acc / a.at(i, i);
    }
  }
  result.xtx_inverse_diag.assign(q, 0.0);
  for (std::size_t i = 0; i < q; ++i) {
    double acc = 0.0;
    for (std::size_t k = i; k < q; ++k) acc += rinv.at(i, k) * rinv.at(i, k);
    result.xtx_inverse_diag[i] = acc;
  }
  return result;
}

DenseMatrix face_splitting(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionMismatch("face_splitting: row counts " + std::to_string(a.rows()) + " vs " +
                            std::to_string(b.rows()));
  }
  const std::size_t k = a.rows();
  const std::size_t ia = a.cols();
  const std::size_t jb = b.cols();
  DenseMatrix c(k, ia * jb);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t i = 0; i < ia; ++i) {
      const double av = a.at(r, i);
      for (std::size_t j = 0; j < jb; ++j) c(r, i * jb + j) = av * b.at(r, j);
    }
  }
  return c;
}

double smallest_singular_value_residual(const DenseMatrix& x, const DenseMatrix& v) {
  const std::size_t n = v.rows();
  const std::size_t p = x.cols();
  const std::size_t l = v.cols();
  if (l < 1) throw InvalidArgument("smallest_singular_value_residual: V has no columns");
  if (p > 0 && x.rows() != n) {
    throw DimensionMismatch("smallest_singular_value_residual: X has " +
                            std::to_string(x.rows()) + " rows, V has " + std::to_string(n));
  }
  if (n <= p + l) {
    throw DimensionMismatch("smallest_singular_value_residual: need n > P + L");
  }

  DenseMatrix residual_cols(n, l);
  if (p == 0) {
    residual_cols = v;
  } else {
    for (std::size_t j = 0; j < l; ++j) {
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = v.at(i, j);
      const LeastSquaresResult fit = least_squares(x, col);
      for (std::size_t i = 0; i < n; ++i) residual_cols(i, j) = fit.residuals[i];
    }
  }

  DenseMatrix gram(l, l);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = i; j < l; ++j) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) acc += residual_cols.at(r, i) * residual_cols.at(r, j);
      gram(i, j) = acc;
      gram(j, i) = acc;
    }
  }
  const std::vector<double> eigs = symmetric_eigenvalues(gram);
  return std::sqrt(std::max(0.0, eigs.front()));
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& m) {
  require_symmetric(m);
  const std::size_t n = m.rows();
  if (n == 0) return {};
  DenseMatrix a = m;
  const std::size_t max_sweeps = 100;
  double fro = 0.0;
  for (double x : a.data()) fro += x * x;
  const double stop = 1e-15 * std::sqrt(std::max(fro, 1e-300));

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a.at(i, j) * a.at(i, j);
    if (std::sqrt(off) <= stop) break;

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double apq = a.at(i, j);
        if (apq == 0.0) continue;
        const double app = a.at(i, i);
        const double aqq = a.at(j, j);
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double aki = a.at(k, i);
          const double akj = a.at(k, j);
          a(k, i) = c * aki - s * akj;
          a(k, j) = s * aki + c * akj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double aik = a.at(i, k);
          const double ajk = a.at(j, k);
          a(i, k) = c * aik - s * ajk;
          a(j, k) = s * aik + c * ajk;
        }
      }
    }
  }

  std::vector<double> eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = a.at(i, i);
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

}  // namespace mlnetreg::linalg
