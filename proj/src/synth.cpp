#include "mlnetreg/synth.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mlnetreg/errors.hpp"
#include "mlnetreg/rng.hpp"

namespace mlnetreg::synth {

CommunityStructure balanced_labels(std::size_t n, std::size_t r) {
  if (r == 0 || r > n) {
    throw InvalidArgument("balanced_labels: need 1 <= R <= N, got R=" + std::to_string(r) +
                          ", N=" + std::to_string(n));
  }
  const std::size_t base = n / r;
  const std::size_t extra = n % r;
  std::vector<std::size_t> labels;
  labels.reserve(n);
  for (std::size_t c = 0; c < r; ++c) {
    const std::size_t size = base + (c < extra ? 1 : 0);
    labels.insert(labels.end(), size, c + 1);
  }
  return community_structure_from_labels(std::move(labels), r);
}

DenseMatrix sample_sbm_layer(const SbmSpec& spec) {
  const std::size_t n = spec.n_nodes;
  const std::size_t r = spec.labels.n_communities;
  if (spec.labels.labels.size() != n) {
    throw DimensionMismatch("sample_sbm_layer: label count does not match n_nodes");
  }
  if (spec.conn_prob.rows() != r || spec.conn_prob.cols() != r) {
    throw DimensionMismatch("sample_sbm_layer: conn_prob must be R x R");
  }
  if (!spec.conn_prob.is_marked_symmetric() && !spec.conn_prob.symmetry_holds()) {
    throw AsymmetricInput("sample_sbm_layer: conn_prob must be symmetric");
  }
  for (double p : spec.conn_prob.data()) {
    if (p < 0.0 || p > 1.0) {
      throw InvalidArgument("sample_sbm_layer: connection probabilities must lie in [0, 1]");
    }
  }

  rng::Engine gen(spec.seed);
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = spec.conn_prob.at(spec.labels.labels[i] - 1, spec.labels.labels[j] - 1);
      if (!gen.bernoulli(p)) continue;
      const double w = spec.weight_dist == WeightDist::Uniform12 ? gen.uniform(1.0, 2.0)
                                                                 : gen.exponential();
      a(i, j) = w;
      a(j, i) = w;
    }
  }
  if (spec.weight_dist == WeightDist::ExpRescaled) a = rescale_to_unit_band(a);
  a.mark_symmetric();
  return a;
}

DenseMatrix rescale_to_unit_band(const DenseMatrix& a) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : a.data()) {
    if (v == 0.0) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    throw DegenerateRange("rescale_to_unit_band: need at least two distinct nonzero entries");
  }
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double v = a.at(i, j);
      out(i, j) = v == 0.0 ? 0.0 : 1.0 + (v - lo) / (hi - lo);
    }
  }
  return out;
}

DenseMatrix sample_covariates(std::size_t n, std::size_t p, std::uint64_t seed) {
  rng::Engine gen(seed);
  DenseMatrix x(n, p);
  std::vector<double>& data = x.mutable_data();
  for (double& v : data) v = gen.normal();
  return x;
}

std::vector<double> sample_response(const DenseMatrix& x, const DenseMatrix& net_covariate,
                                    const std::vector<double>& beta_x,
                                    const std::vector<double>& beta_net, double sigma_y,
                                    std::uint64_t seed) {
  const std::size_t n = net_covariate.rows();
  if (x.cols() != beta_x.size()) {
    throw DimensionMismatch("sample_response: beta_x length does not match X columns");
  }
  if (net_covariate.cols() != beta_net.size()) {
    throw DimensionMismatch("sample_response: beta_net length does not match regressor columns");
  }
  if (x.cols() > 0 && x.rows() != n) {
    throw DimensionMismatch("sample_response: X and network regressor row counts differ");
  }
  if (sigma_y < 0.0) throw InvalidArgument("sample_response: sigma_y must be nonnegative");

  rng::Engine gen(seed);
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) acc += x.at(i, j) * beta_x[j];
    for (std::size_t j = 0; j < net_covariate.cols(); ++j)
      acc += net_covariate.at(i, j) * beta_net[j];
    if (sigma_y > 0.0) acc += gen.normal(0.0, sigma_y);
    y[i] = acc;
  }
  return y;
}

}  // namespace mlnetreg::synth
