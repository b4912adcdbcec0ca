#pragma once

#include <cstdint>
#include <vector>

#include "mlnetreg/centrality.hpp"
#include "mlnetreg/dense_matrix.hpp"

namespace mlnetreg::synth {

enum class WeightDist {
  Uniform12,    // edge weights i.i.d. Uniform(1, 2)
  ExpRescaled,  // edge weights i.i.d. Exp(1), then rescaled onto [1, 2]
};

/**
 * Stochastic block model layer: an edge between i and j appears with
 * probability conn_prob(c_i, c_j) and carries a weight from weight_dist.
 */
struct SbmSpec {
  std::size_t n_nodes = 0;
  CommunityStructure labels;
  DenseMatrix conn_prob;  // R x R symmetric, entries in [0, 1]
  WeightDist weight_dist = WeightDist::Uniform12;
  std::uint64_t seed = 0;
};

/**
 * Contiguous balanced partition: community r gets floor(N/R) nodes and the
 * first N mod R communities one extra.
 */
CommunityStructure balanced_labels(std::size_t n, std::size_t r);

/**
 * Draws one symmetric zero-diagonal layer. Upper-triangle pairs are visited
 * row-major; each present edge consumes one weight draw, so output is
 * bit-reproducible per seed. ExpRescaled weights are mapped onto [1, 2]
 * after the draw via rescale_to_unit_band.
 */
DenseMatrix sample_sbm_layer(const SbmSpec& spec);

/**
 * Affine rescaling of the nonzero entries onto [1, 2]:
 * a -> 1 + (a - min) / (max - min) with min/max over nonzero entries; zeros
 * (non-edges) are left untouched. Requires at least two distinct nonzero
 * values, else DegenerateRange.
 */
DenseMatrix rescale_to_unit_band(const DenseMatrix& a);

/// N x P matrix of i.i.d. standard normal entries.
DenseMatrix sample_covariates(std::size_t n, std::size_t p, std::uint64_t seed);

/**
 * Linear response y = X beta_x + M beta_net + eps with eps i.i.d.
 * Normal(0, sigma_y^2); M is any network-derived regressor block (C or the
 * Z column).
 */
std::vector<double> sample_response(const DenseMatrix& x, const DenseMatrix& net_covariate,
                                    const std::vector<double>& beta_x,
                                    const std::vector<double>& beta_net, double sigma_y,
                                    std::uint64_t seed);

}  // namespace mlnetreg::synth
