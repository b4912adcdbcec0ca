#include "mlnetreg/regression.hpp"

#include <cmath>
#include <string>

#include "mlnetreg/errors.hpp"
#include "mlnetreg/linalg.hpp"

namespace mlnetreg {

namespace {

RegressionFit fit_ols(ModelKind model, const DenseMatrix& design, const std::vector<double>& y,
                      std::size_t n_covariates) {
  const linalg::LeastSquaresResult ls = linalg::least_squares(design, y);
  const std::size_t q = design.cols();

  RegressionFit fit;
  fit.model = model;
  fit.n_obs = y.size();
  fit.beta_x.assign(ls.coefficients.begin(), ls.coefficients.begin() + n_covariates);
  fit.beta_net.assign(ls.coefficients.begin() + n_covariates, ls.coefficients.end());
  fit.residuals = ls.residuals;
  fit.rss = ls.rss;
  fit.sigma2_hat = ls.sigma2_hat;
  fit.std_errors.resize(q);
  for (std::size_t j = 0; j < q; ++j) {
    fit.std_errors[j] = std::sqrt(ls.sigma2_hat * ls.xtx_inverse_diag[j]);
  }

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double tss = 0.0;
  for (double v : y) tss += (v - mean) * (v - mean);
  fit.r_squared = tss > 0.0 ? 1.0 - ls.rss / tss : (ls.rss == 0.0 ? 1.0 : 0.0);
  return fit;
}

bool numerically_exact(const RegressionFit& fit, const std::vector<double>& y) {
  double ynorm2 = 0.0;
  for (double v : y) ynorm2 += v * v;
  return fit.rss <= 1e-12 * ynorm2;
}

}  // namespace

RegressionFit fit_cmnetr(const DenseMatrix& x, const DenseMatrix& c,
                         const std::vector<double>& y) {
  if (c.cols() == 0) throw InvalidArgument("fit_cmnetr: centrality matrix has no columns");
  if (x.cols() > 0 && x.rows() != c.rows()) {
    throw DimensionMismatch("fit_cmnetr: X and C row counts differ");
  }
  return fit_ols(ModelKind::CMNetR, hcat(x, c), y, x.cols());
}

RegressionFit fit_ccmnetr(const DenseMatrix& x, const std::vector<double>& z,
                          const std::vector<double>& y, double beta_z_null) {
  if (x.cols() > 0 && x.rows() != z.size()) {
    throw DimensionMismatch("fit_ccmnetr: X rows and Z length differ");
  }
  RegressionFit fit = fit_ols(ModelKind::CCMNetR, hcat(x, column_matrix(z)), y, x.cols());
  if (!numerically_exact(fit, y) && fit.sigma2_hat > 0.0) {
    double ztz = 0.0;
    for (double v : z) ztz += v * v;
    fit.z_stat_z = std::sqrt(ztz / fit.sigma2_hat) * (fit.beta_net.front() - beta_z_null);
  }
  return fit;
}

RegressionFit fit_rcfe(const DenseMatrix& x, const DenseMatrix& c, const DenseMatrix& s,
                       const std::vector<double>& y) {
  if (c.rows() != s.rows() || (x.cols() > 0 && x.rows() != c.rows())) {
    throw DimensionMismatch("fit_rcfe: design blocks have differing row counts");
  }
  return fit_ols(ModelKind::RCFE, hcat(hcat(x, c), s), y, x.cols());
}

std::vector<double> vif(const DenseMatrix& x) {
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();
  if (p < 2) throw InvalidArgument("vif: need at least two columns");

  std::vector<double> factors(p);
  for (std::size_t target = 0; target < p; ++target) {
    DenseMatrix aux(n, p);  // intercept plus the other p - 1 columns
    std::vector<double> response(n);
    for (std::size_t i = 0; i < n; ++i) {
      aux(i, 0) = 1.0;
      std::size_t col = 1;
      for (std::size_t j = 0; j < p; ++j) {
        if (j == target) continue;
        aux(i, col++) = x.at(i, j);
      }
      response[i] = x.at(i, target);
    }
    const linalg::LeastSquaresResult ls = linalg::least_squares(aux, response);

    double mean = 0.0;
    for (double v : response) mean += v;
    mean /= static_cast<double>(n);
    double tss = 0.0;
    for (double v : response) tss += (v - mean) * (v - mean);
    if (tss <= 0.0) throw ZeroVariance("vif: column " + std::to_string(target + 1) +
                                       " is constant");
    const double unexplained = ls.rss / tss;  // 1 - R^2
    if (unexplained < 1e-12) {
      throw RankDeficient("vif: column " + std::to_string(target + 1) +
                          " is perfectly collinear with the others");
    }
    factors[target] = 1.0 / unexplained;
  }
  return factors;
}

std::pair<double, std::pair<std::size_t, std::size_t>> added_variable_f_test(
    const RegressionFit& reduced, const RegressionFit& full) {
  if (reduced.n_obs != full.n_obs) {
    throw DimensionMismatch("f_test: fits use different numbers of observations");
  }
  const std::size_t q_r = reduced.beta_x.size() + reduced.beta_net.size();
  const std::size_t q_f = full.beta_x.size() + full.beta_net.size();
  if (q_r > q_f) {
    throw DimensionMismatch("f_test: reduced model has more columns than the full model");
  }
  const std::size_t dq = q_f - q_r;
  const std::size_t df2 = full.n_obs - q_f;
  if (dq == 0) return {0.0, {0, df2}};
  const double f =
      ((reduced.rss - full.rss) / static_cast<double>(dq)) / (full.rss / static_cast<double>(df2));
  return {f, {dq, df2}};
}

StandardizeResult standardize(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  const std::size_t p = m.cols();
  if (n < 2) throw InsufficientData("standardize: need at least two rows");

  StandardizeResult out;
  out.values = DenseMatrix(n, p);
  out.means.resize(p);
  out.sds.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += m.at(i, j);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (m.at(i, j) - mean) * (m.at(i, j) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd <= 0.0) {
      throw ZeroVariance("standardize: column " + std::to_string(j + 1) + " is constant");
    }
    out.means[j] = mean;
    out.sds[j] = sd;
    for (std::size_t i = 0; i < n; ++i) out.values(i, j) = (m.at(i, j) - mean) / sd;
  }
  return out;
}

}  // namespace mlnetreg
