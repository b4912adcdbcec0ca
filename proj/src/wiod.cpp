#include "mlnetreg/wiod.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlnetreg/errors.hpp"
#include "mlnetreg/linalg.hpp"

namespace mlnetreg::wiod {

namespace {

void validate_bundle(const DatasetBundle& bundle) {
  const std::size_t n = bundle.n_nodes;
  const std::size_t l = bundle.n_layers;
  if (n == 0 || l == 0) throw EmptyMatrix("dataset: N and L must be positive");
  const std::size_t dim = n * l;
  if (bundle.flows.rows() != dim || bundle.flows.cols() != dim) {
    throw DimensionMismatch("dataset: flow matrix is " + std::to_string(bundle.flows.rows()) +
                            "x" + std::to_string(bundle.flows.cols()) + ", expected " +
                            std::to_string(dim) + " for N=" + std::to_string(n) +
                            ", L=" + std::to_string(l));
  }
  for (double v : bundle.flows.data()) {
    if (v < 0.0) throw InvalidArgument("dataset: flow matrix has a negative entry");
  }
  if (bundle.covariates.rows() != n) {
    throw DimensionMismatch("dataset: covariates have " +
                            std::to_string(bundle.covariates.rows()) + " rows, expected " +
                            std::to_string(n));
  }
  if (bundle.covariate_names.size() != bundle.covariates.cols()) {
    throw DimensionMismatch("dataset: covariate name count does not match columns");
  }
  if (bundle.response.size() != n) {
    throw DimensionMismatch("dataset: response has " + std::to_string(bundle.response.size()) +
                            " entries, expected " + std::to_string(n));
  }
  if (bundle.communities.labels.size() != n) {
    throw DimensionMismatch("dataset: community labels do not cover all " + std::to_string(n) +
                            " sectors");
  }
}

}  // namespace

DenseMatrix symmetrize_and_scale(const DenseMatrix& flows, std::size_t n_nodes,
                                 std::size_t n_layers, ScaleMode mode) {
  const std::size_t dim = flows.rows();
  if (flows.cols() != dim) throw DimensionMismatch("symmetrize_and_scale: matrix must be square");
  if (n_nodes * n_layers != dim) {
    throw DimensionMismatch("symmetrize_and_scale: N*L does not match the matrix size");
  }

  DenseMatrix b(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) b(i, j) = flows.at(i, j) + flows.at(j, i);

  if (mode == ScaleMode::Global) {
    double max_entry = 0.0;
    for (double v : b.data()) max_entry = std::max(max_entry, v);
    if (max_entry <= 0.0) {
      throw DegenerateRange("symmetrize_and_scale: matrix is identically zero");
    }
    const double f = 2.0 / max_entry;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) b(i, j) *= f;
  } else {
    // Per-block scaling keeps symmetry because block (l', l) is the
    // transpose of block (l, l') after symmetrization, so both share a max.
    for (std::size_t bl = 0; bl < n_layers; ++bl) {
      for (std::size_t bc = 0; bc < n_layers; ++bc) {
        double max_entry = 0.0;
        for (std::size_t i = 0; i < n_nodes; ++i)
          for (std::size_t j = 0; j < n_nodes; ++j)
            max_entry = std::max(max_entry, b.at(bl * n_nodes + i, bc * n_nodes + j));
        if (max_entry <= 0.0) continue;  // empty block stays zero
        const double f = 2.0 / max_entry;
        for (std::size_t i = 0; i < n_nodes; ++i)
          for (std::size_t j = 0; j < n_nodes; ++j) b(bl * n_nodes + i, bc * n_nodes + j) *= f;
      }
    }
  }
  b.mark_symmetric();
  return b;
}

WiodResult wiod_pipeline(const DatasetBundle& bundle, double vif_threshold, ScaleMode mode) {
  validate_bundle(bundle);
  const std::size_t n = bundle.n_nodes;
  const std::size_t l = bundle.n_layers;
  if (bundle.covariates.cols() == 0) {
    throw NoCovariatesSurvive("wiod_pipeline: no covariates supplied");
  }

  const DenseMatrix b = symmetrize_and_scale(bundle.flows, n, l, mode);
  const double a_n = std::sqrt(static_cast<double>(n * l));
  const CentralityBundle bundle_c = eigenvector_centrality(b, n, l, a_n);
  const CommunityCentrality agg = community_centrality(bundle_c.c, bundle.communities);

  // Standardize the response and covariates; Z enters on its own scale.
  const StandardizeResult y_std = standardize(column_matrix(bundle.response));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = y_std.values.at(i, 0);
  const StandardizeResult x_std = standardize(bundle.covariates);

  WiodResult result;
  result.z = agg.z;
  result.lambda1 = bundle_c.lambda1;
  result.lambda2 = bundle_c.lambda2;
  result.gap = bundle_c.gap;
  result.a_n = a_n;

  // Iterative VIF screening: drop the worst offender until all factors are
  // at or below the threshold (or only one covariate remains).
  std::vector<std::size_t> kept(bundle.covariates.cols());
  for (std::size_t j = 0; j < kept.size(); ++j) kept[j] = j;
  bool first_round = true;
  while (kept.size() >= 2) {
    DenseMatrix sub(n, kept.size());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < kept.size(); ++j) sub(i, j) = x_std.values.at(i, kept[j]);
    const std::vector<double> factors = vif(sub);
    if (first_round) {
      for (std::size_t j = 0; j < kept.size(); ++j) {
        result.initial_vifs.emplace_back(bundle.covariate_names[kept[j]], factors[j]);
      }
      first_round = false;
    }
    std::size_t worst = 0;
    for (std::size_t j = 1; j < factors.size(); ++j) {
      if (factors[j] > factors[worst]) worst = j;
    }
    if (factors[worst] <= vif_threshold) {
      for (std::size_t j = 0; j < kept.size(); ++j) {
        result.final_vifs.emplace_back(bundle.covariate_names[kept[j]], factors[j]);
      }
      break;
    }
    result.dropped.push_back(bundle.covariate_names[kept[worst]]);
    kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  if (kept.empty()) throw NoCovariatesSurvive("wiod_pipeline: screening removed every covariate");
  for (const std::size_t j : kept) result.surviving.push_back(bundle.covariate_names[j]);

  // Final design: surviving covariates plus an intercept column.
  DenseMatrix x(n, kept.size() + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < kept.size(); ++j) x(i, j) = x_std.values.at(i, kept[j]);
    x(i, kept.size()) = 1.0;
  }
  result.design_names = result.surviving;
  result.design_names.push_back("intercept");
  result.design_names.push_back("z");

  // Reduced model for the F test: the response on the covariate design
  // alone. Only its RSS and shape matter downstream.
  const linalg::LeastSquaresResult red = linalg::least_squares(x, y);
  RegressionFit reduced;
  reduced.beta_x = red.coefficients;
  reduced.residuals = red.residuals;
  reduced.rss = red.rss;
  reduced.sigma2_hat = red.sigma2_hat;
  reduced.n_obs = n;
  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  double tss = 0.0;
  for (double v : y) tss += (v - y_mean) * (v - y_mean);
  reduced.r_squared = tss > 0.0 ? 1.0 - red.rss / tss : 0.0;

  result.fit = fit_ccmnetr(x, agg.z, y, 0.0);
  const auto [f_stat, f_df] = added_variable_f_test(reduced, result.fit);
  result.f_stat = f_stat;
  result.f_df = f_df;
  result.r_squared_without_z = reduced.r_squared;
  result.r_squared_with_z = result.fit.r_squared;
  result.sigma_min = linalg::smallest_singular_value_residual(x, bundle_c.v);
  return result;
}

}  // namespace mlnetreg::wiod
