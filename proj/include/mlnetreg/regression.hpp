#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "mlnetreg/dense_matrix.hpp"

namespace mlnetreg {

enum class ModelKind { CMNetR, CCMNetR, RCFE };

/**
 * One fitted linear model. beta_net holds the network-derived coefficients:
 * the L centrality coefficients for CMNetR, the single community-centrality
 * coefficient for CCMNetR, and the L centrality plus R community-effect
 * coefficients for RCFE. std_errors covers all fitted columns in design
 * order (covariates first). z_stat_z is the CCMNetR test statistic
 * sqrt(Z^T Z / sigma2_hat) * (beta_z - beta_z_null); it is omitted when the
 * fit is numerically exact (zero error variance).
 */
struct RegressionFit {
  ModelKind model = ModelKind::CMNetR;
  std::vector<double> beta_x;
  std::vector<double> beta_net;
  std::vector<double> residuals;
  double sigma2_hat = 0.0;
  std::vector<double> std_errors;
  double r_squared = 0.0;
  std::optional<double> z_stat_z;
  double rss = 0.0;
  std::size_t n_obs = 0;
};

/// OLS of y on (X, C); no implicit intercept (append a ones column to X
/// if one is wanted).
RegressionFit fit_cmnetr(const DenseMatrix& x, const DenseMatrix& c, const std::vector<double>& y);

/// OLS of y on (X, Z) plus the z statistic against beta_z_null.
RegressionFit fit_ccmnetr(const DenseMatrix& x, const std::vector<double>& z,
                          const std::vector<double>& y, double beta_z_null);

/**
 * Community-fixed-effects baseline: OLS of y on (X, C, S). S's columns sum
 * to the ones vector, so X must not contain an intercept column.
 */
RegressionFit fit_rcfe(const DenseMatrix& x, const DenseMatrix& c, const DenseMatrix& s,
                       const std::vector<double>& y);

/**
 * Variance inflation factors: column i is regressed on the remaining
 * columns plus an intercept; VIF_i = 1 / (1 - R_i^2). Perfect collinearity
 * (R_i^2 = 1 within 1e-12) raises RankDeficient instead of returning an
 * infinite factor.
 */
std::vector<double> vif(const DenseMatrix& x);

/**
 * Added-variable F test for nested fits:
 * F = ((RSS_r - RSS_f) / dq) / (RSS_f / (N - q_f)). Returns the statistic
 * and the degrees of freedom (dq, N - q_f); identical designs give F = 0.
 */
std::pair<double, std::pair<std::size_t, std::size_t>> added_variable_f_test(
    const RegressionFit& reduced, const RegressionFit& full);

struct StandardizeResult {
  DenseMatrix values;
  std::vector<double> means;
  std::vector<double> sds;  // sample standard deviation, divisor N - 1
};

/// Centers and scales every column to mean 0, sample variance 1.
StandardizeResult standardize(const DenseMatrix& m);

}  // namespace mlnetreg
