#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include <mlnetreg/centrality.hpp>
#include <mlnetreg/dense_matrix.hpp>
#include <mlnetreg/errors.hpp>
#include <mlnetreg/synth.hpp>

#include "oracle.hpp"

using mlnetreg::DenseMatrix;
namespace synth = mlnetreg::synth;

namespace {

DenseMatrix constant_conn(std::size_t r, double p) {
  DenseMatrix m(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) m(i, j) = p;
  m.mark_symmetric();
  return m;
}

DenseMatrix block_conn(std::size_t r, double within, double between) {
  DenseMatrix m(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) m(i, j) = i == j ? within : between;
  m.mark_symmetric();
  return m;
}

}  // namespace

TEST_CASE("balanced labels split nodes into contiguous nearly equal communities") {
  const auto c9 = synth::balanced_labels(9, 3);
  CHECK(c9.sizes == std::vector<std::size_t>{3, 3, 3});

  const auto c10 = synth::balanced_labels(10, 3);
  CHECK(c10.sizes == std::vector<std::size_t>{4, 3, 3});
  // Contiguity: labels are non-decreasing.
  for (std::size_t i = 1; i < 10; ++i) CHECK(c10.labels[i] >= c10.labels[i - 1]);

  const auto c100 = synth::balanced_labels(100, 3);
  CHECK(c100.sizes == std::vector<std::size_t>{34, 33, 33});
  double min_share = 1.0;
  for (std::size_t s : c100.sizes)
    min_share = std::min(min_share, static_cast<double>(s) / 100.0);
  CHECK(min_share == doctest::Approx(0.33));

  CHECK_THROWS_AS(synth::balanced_labels(3, 4), mlnetreg::InvalidArgument);
  CHECK_THROWS_AS(synth::balanced_labels(3, 0), mlnetreg::InvalidArgument);
}

TEST_CASE("a fully connected layer has unit-band weights off the diagonal") {
  synth::SbmSpec spec;
  spec.n_nodes = 12;
  spec.labels = synth::balanced_labels(12, 3);
  spec.conn_prob = constant_conn(3, 1.0);
  spec.weight_dist = synth::WeightDist::Uniform12;
  spec.seed = 5;
  const DenseMatrix a = synth::sample_sbm_layer(spec);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(a.at(i, i) == 0.0);
    for (std::size_t j = 0; j < 12; ++j) {
      if (i == j) continue;
      CHECK(a.at(i, j) >= 1.0);
      CHECK(a.at(i, j) <= 2.0);
      CHECK(a.at(i, j) == a.at(j, i));
    }
  }
}

TEST_CASE("a zero-probability layer is the zero matrix") {
  synth::SbmSpec spec;
  spec.n_nodes = 10;
  spec.labels = synth::balanced_labels(10, 2);
  spec.conn_prob = constant_conn(2, 0.0);
  spec.weight_dist = synth::WeightDist::Uniform12;
  spec.seed = 1;
  const DenseMatrix a = synth::sample_sbm_layer(spec);
  for (double v : a.data()) CHECK(v == 0.0);
}

TEST_CASE("block-model edge densities land near their probabilities") {
  const std::size_t n = 300;
  synth::SbmSpec spec;
  spec.n_nodes = n;
  spec.labels = synth::balanced_labels(n, 3);
  spec.conn_prob = block_conn(3, 0.8, 0.1);
  spec.weight_dist = synth::WeightDist::Uniform12;
  spec.seed = 99;
  const DenseMatrix a = synth::sample_sbm_layer(spec);
  std::size_t within_edges = 0, within_pairs = 0, between_edges = 0, between_pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same = spec.labels.labels[i] == spec.labels.labels[j];
      const bool edge = a.at(i, j) != 0.0;
      if (same) {
        ++within_pairs;
        within_edges += edge ? 1 : 0;
      } else {
        ++between_pairs;
        between_edges += edge ? 1 : 0;
      }
    }
  }
  const double within_density =
      static_cast<double>(within_edges) / static_cast<double>(within_pairs);
  const double between_density =
      static_cast<double>(between_edges) / static_cast<double>(between_pairs);
  CHECK(std::abs(within_density - 0.8) < 0.02);
  CHECK(std::abs(between_density - 0.1) < 0.02);
}

TEST_CASE("layer sampling is reproducible per seed and varies across seeds") {
  synth::SbmSpec spec;
  spec.n_nodes = 20;
  spec.labels = synth::balanced_labels(20, 3);
  spec.conn_prob = block_conn(3, 0.8, 0.1);
  spec.weight_dist = synth::WeightDist::Uniform12;
  spec.seed = 42;
  const DenseMatrix a1 = synth::sample_sbm_layer(spec);
  const DenseMatrix a2 = synth::sample_sbm_layer(spec);
  spec.seed = 43;
  const DenseMatrix a3 = synth::sample_sbm_layer(spec);
  bool same = true, diff = false;
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j) {
      same = same && (a1.at(i, j) == a2.at(i, j));
      diff = diff || (a1.at(i, j) != a3.at(i, j));
    }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("exponential weights come back rescaled onto the unit band") {
  synth::SbmSpec spec;
  spec.n_nodes = 40;
  spec.labels = synth::balanced_labels(40, 2);
  spec.conn_prob = constant_conn(2, 0.7);
  spec.weight_dist = synth::WeightDist::ExpRescaled;
  spec.seed = 11;
  const DenseMatrix a = synth::sample_sbm_layer(spec);
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < 40; ++i) {
    CHECK(a.at(i, i) == 0.0);
    for (std::size_t j = 0; j < 40; ++j) {
      if (a.at(i, j) == 0.0) continue;
      CHECK(a.at(i, j) >= 1.0);
      CHECK(a.at(i, j) <= 2.0);
      lo = std::min(lo, a.at(i, j));
      hi = std::max(hi, a.at(i, j));
    }
  }
  // The extreme weights map exactly onto the band endpoints.
  CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hi == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("band rescaling maps extremes to the endpoints and keeps zeros") {
  DenseMatrix m(2, 2);
  m(0, 1) = 3.0;
  m(1, 0) = 3.0;
  m(0, 0) = 9.0;
  const DenseMatrix r = synth::rescale_to_unit_band(m);
  CHECK(r.at(0, 1) == doctest::Approx(1.0));
  CHECK(r.at(1, 0) == doctest::Approx(1.0));
  CHECK(r.at(0, 0) == doctest::Approx(2.0));
  CHECK(r.at(1, 1) == 0.0);
}

TEST_CASE("band rescaling fixes inputs already spanning the band") {
  DenseMatrix m(1, 3);
  m(0, 0) = 1.0;
  m(0, 1) = 1.5;
  m(0, 2) = 2.0;
  const DenseMatrix r = synth::rescale_to_unit_band(m);
  CHECK(r.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.at(0, 1) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(r.at(0, 2) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("band rescaling preserves the order of exponential draws") {
  oracle::TestRng gen(404);
  DenseMatrix m(1, 50);
  for (std::size_t j = 0; j < 50; ++j) m(0, j) = -std::log(1.0 - gen.next01());
  const DenseMatrix r = synth::rescale_to_unit_band(m);
  for (std::size_t a = 0; a < 50; ++a) {
    CHECK(r.at(0, a) >= 1.0);
    CHECK(r.at(0, a) <= 2.0);
    for (std::size_t b = 0; b < 50; ++b)
      if (m.at(0, a) < m.at(0, b)) CHECK(r.at(0, a) <= r.at(0, b));
  }
}

TEST_CASE("band rescaling rejects a constant nonzero set") {
  DenseMatrix m(2, 2);
  m(0, 1) = 4.0;
  m(1, 0) = 4.0;
  CHECK_THROWS_AS(synth::rescale_to_unit_band(m), mlnetreg::DegenerateRange);
}

TEST_CASE("covariate sampling is seed-deterministic with standard-normal moments") {
  const DenseMatrix x1 = synth::sample_covariates(100, 100, 7);
  const DenseMatrix x2 = synth::sample_covariates(100, 100, 7);
  const DenseMatrix x3 = synth::sample_covariates(100, 100, 8);
  bool same = true, diff = false;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < 100; ++i)
    for (std::size_t j = 0; j < 100; ++j) {
      same = same && (x1.at(i, j) == x2.at(i, j));
      diff = diff || (x1.at(i, j) != x3.at(i, j));
      sum += x1.at(i, j);
      sum2 += x1.at(i, j) * x1.at(i, j);
    }
  CHECK(same);
  CHECK(diff);
  const double mean = sum / 10000.0;
  const double var = sum2 / 10000.0 - mean * mean;
  CHECK(std::abs(mean) < 0.05);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("response generation is the exact linear model at zero noise") {
  const DenseMatrix x = oracle::random_matrix(9, 2, 15);
  const DenseMatrix c = oracle::random_matrix(9, 2, 16);
  const auto y = synth::sample_response(x, c, {1.0, 2.0}, {1.0, 2.0}, 0.0, 3);
  for (std::size_t i = 0; i < 9; ++i) {
    const double expected = x.at(i, 0) + 2.0 * x.at(i, 1) + c.at(i, 0) + 2.0 * c.at(i, 1);
    CHECK(y[i] == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("with zero coefficients the response is pure noise at the requested level") {
  const DenseMatrix x(4000, 1);
  const DenseMatrix c(4000, 1);
  const auto y = synth::sample_response(x, c, {0.0}, {0.0}, 1.5, 21);
  double sum = 0.0, sum2 = 0.0;
  for (double v : y) {
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / 4000.0;
  const double var = sum2 / 4000.0 - mean * mean;
  CHECK(std::abs(mean) < 0.1);
  CHECK(std::abs(var - 2.25) < 0.2);
}

TEST_CASE("response generation is reproducible and validates its inputs") {
  const DenseMatrix x = oracle::random_matrix(6, 1, 1);
  const DenseMatrix c = oracle::random_matrix(6, 1, 2);
  const auto y1 = synth::sample_response(x, c, {1.0}, {1.0}, 0.5, 9);
  const auto y2 = synth::sample_response(x, c, {1.0}, {1.0}, 0.5, 9);
  CHECK(oracle::max_abs_diff(y1, y2) == 0.0);

  CHECK_THROWS_AS(synth::sample_response(x, c, {1.0, 2.0}, {1.0}, 0.5, 9),
                  mlnetreg::DimensionMismatch);
  CHECK_THROWS_AS(synth::sample_response(x, c, {1.0}, {1.0}, -0.5, 9),
                  mlnetreg::InvalidArgument);
}

TEST_CASE("layer samplers reject malformed specifications") {
  synth::SbmSpec spec;
  spec.n_nodes = 10;
  spec.labels = synth::balanced_labels(9, 3);  // wrong count
  spec.conn_prob = constant_conn(3, 0.5);
  CHECK_THROWS_AS(synth::sample_sbm_layer(spec), mlnetreg::DimensionMismatch);

  spec.labels = synth::balanced_labels(10, 3);
  spec.conn_prob = constant_conn(2, 0.5);  // wrong size
  CHECK_THROWS_AS(synth::sample_sbm_layer(spec), mlnetreg::DimensionMismatch);

  spec.conn_prob = constant_conn(3, 1.5);  // out of range
  CHECK_THROWS_AS(synth::sample_sbm_layer(spec), mlnetreg::InvalidArgument);

  DenseMatrix asym(3, 3);
  asym(0, 1) = 0.5;
  spec.conn_prob = asym;
  CHECK_THROWS_AS(synth::sample_sbm_layer(spec), mlnetreg::AsymmetricInput);
}
