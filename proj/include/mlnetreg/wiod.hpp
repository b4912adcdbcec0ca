#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mlnetreg/centrality.hpp"
#include "mlnetreg/dense_matrix.hpp"
#include "mlnetreg/regression.hpp"

namespace mlnetreg::wiod {

/**
 * Everything the real-data pipeline consumes: a raw directed flow matrix
 * over N sectors x L layers (countries), per-sector covariates with names,
 * a named response, and the sector communities. provenance records the
 * source paths and transforms applied so reports are self-describing.
 */
struct DatasetBundle {
  DenseMatrix flows;  // NL x NL, nonnegative, not necessarily symmetric
  std::size_t n_nodes = 0;
  std::size_t n_layers = 0;
  std::vector<std::string> covariate_names;
  DenseMatrix covariates;  // N x P
  std::string response_name;
  std::vector<double> response;  // length N
  CommunityStructure communities;
  std::vector<std::string> provenance;
};

enum class ScaleMode {
  Global,    // scale every entry by 2 / max over the whole symmetrized matrix
  PerBlock,  // scale each N x N block by 2 / its own max (zero blocks stay zero)
};

struct WiodResult {
  RegressionFit fit;  // response on (surviving covariates, intercept, Z)
  std::vector<std::string> design_names;  // column names of the final design
  std::vector<std::string> surviving;     // covariates kept after screening
  std::vector<std::string> dropped;       // covariates removed, in drop order
  std::vector<std::pair<std::string, double>> initial_vifs;
  std::vector<std::pair<std::string, double>> final_vifs;
  double f_stat = 0.0;  // added-variable F test of Z
  std::pair<std::size_t, std::size_t> f_df{0, 0};
  double r_squared_without_z = 0.0;
  double r_squared_with_z = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;
  double a_n = 0.0;
  double sigma_min = 0.0;  // sigma_min((I - P_X)V) for the final design
  std::vector<double> z;   // community centrality per sector
};

/**
 * The real-data workflow: symmetrize B = B_a + B_a^T, scale entries onto
 * [0, 2], compute centrality with a_N = sqrt(N*L), aggregate Z over the
 * sector communities, standardize the response and covariates, iteratively
 * drop the highest-VIF covariate while any factor exceeds vif_threshold,
 * append an intercept, fit the community-centrality regression, and attach
 * the added-variable F test plus spectral diagnostics.
 */
WiodResult wiod_pipeline(const DatasetBundle& bundle, double vif_threshold,
                         ScaleMode mode = ScaleMode::Global);

/// Symmetrize-and-scale step exposed for reuse and idempotence checks.
DenseMatrix symmetrize_and_scale(const DenseMatrix& flows, std::size_t n_nodes,
                                 std::size_t n_layers, ScaleMode mode);

}  // namespace mlnetreg::wiod
