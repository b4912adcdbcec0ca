#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include <mlnetreg/centrality.hpp>
#include <mlnetreg/dense_matrix.hpp>
#include <mlnetreg/errors.hpp>
#include <mlnetreg/network.hpp>
#include <mlnetreg/synth.hpp>

#include "oracle.hpp"

using mlnetreg::CommunityStructure;
using mlnetreg::DenseMatrix;

namespace {

DenseMatrix symmetric_nonneg(std::size_t n, std::uint64_t seed) {
  oracle::TestRng gen(seed);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = gen.uniform(0.0, 2.0);
      m(i, j) = v;
      m(j, i) = v;
    }
  m.mark_symmetric();
  return m;
}

DenseMatrix sbm_multiplex_supra(std::size_t n, std::uint64_t seed) {
  const CommunityStructure comm = mlnetreg::synth::balanced_labels(n, 3);
  DenseMatrix conn(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) conn(i, j) = i == j ? 0.8 : 0.1;
  conn.mark_symmetric();
  std::vector<DenseMatrix> layers;
  for (std::uint64_t ell = 0; ell < 2; ++ell) {
    mlnetreg::synth::SbmSpec spec;
    spec.n_nodes = n;
    spec.labels = comm;
    spec.conn_prob = conn;
    spec.weight_dist = mlnetreg::synth::WeightDist::Uniform12;
    spec.seed = seed + ell;
    layers.push_back(mlnetreg::synth::sample_sbm_layer(spec));
  }
  return mlnetreg::assemble_supra(mlnetreg::make_multiplex(layers));
}

}  // namespace

TEST_CASE("single-node two-layer coupling splits centrality evenly") {
  DenseMatrix b(2, 2);
  b(0, 1) = 1.0;
  b(1, 0) = 1.0;
  b.mark_symmetric();
  const auto bundle = mlnetreg::eigenvector_centrality(b, 1, 2, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(bundle.lambda1 == doctest::Approx(1.0).epsilon(1e-10));
  REQUIRE(bundle.v.rows() == 1);
  REQUIRE(bundle.v.cols() == 2);
  CHECK(bundle.v.at(0, 0) == doctest::Approx(inv_sqrt2).epsilon(1e-10));
  CHECK(bundle.v.at(0, 1) == doctest::Approx(inv_sqrt2).epsilon(1e-10));
}

TEST_CASE("identical layers shift the leading eigenvalue by the coupling strength") {
  const std::size_t n = 5;
  const DenseMatrix a = symmetric_nonneg(n, 91);
  const DenseMatrix supra = mlnetreg::assemble_supra(mlnetreg::make_multiplex({a, a}));
  const auto bundle = mlnetreg::eigenvector_centrality(supra, n, 2, 1.0);
  const auto ref = oracle::jacobi_full(a);
  CHECK(bundle.lambda1 == doctest::Approx(ref.values.back() + 1.0).epsilon(1e-9));
  for (std::size_t i = 0; i < n; ++i)
    CHECK(bundle.v.at(i, 0) == doctest::Approx(bundle.v.at(i, 1)).epsilon(1e-8));
}

TEST_CASE("block-model multiplex centrality matches the full-decomposition oracle") {
  const std::size_t n = 30;
  const DenseMatrix supra = sbm_multiplex_supra(n, 404);
  const auto bundle = mlnetreg::eigenvector_centrality(supra, n, 2, 1.0, mlnetreg::kAutoGapTol,
                                                       1e-11, 400000);
  const auto ref = oracle::jacobi_full(supra);
  const std::size_t dim = 2 * n;
  std::vector<double> lead_ref(dim);
  for (std::size_t k = 0; k < dim; ++k) lead_ref[k] = ref.vectors.at(k, dim - 1);
  // Re-pack the bundle's V (layer-major columns) into the flat eigenvector.
  std::vector<double> lead_got(dim);
  for (std::size_t ell = 0; ell < 2; ++ell)
    for (std::size_t i = 0; i < n; ++i) lead_got[ell * n + i] = bundle.v.at(i, ell);
  CHECK(oracle::vector_gap_up_to_sign(lead_got, lead_ref) <= 1e-7);
  CHECK(bundle.lambda1 == doctest::Approx(ref.values[dim - 1]).epsilon(1e-9));
  CHECK(bundle.lambda2 == doctest::Approx(ref.values[dim - 2]).epsilon(1e-7));
  CHECK(bundle.gap == doctest::Approx(bundle.lambda1 - bundle.lambda2).epsilon(1e-12));

  // Frobenius normalization and nonnegativity of the reshaped eigenvector.
  double frob = 0.0;
  double vmin = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t ell = 0; ell < 2; ++ell) {
      frob += bundle.v.at(i, ell) * bundle.v.at(i, ell);
      vmin = std::min(vmin, bundle.v.at(i, ell));
    }
  CHECK(std::abs(std::sqrt(frob) - 1.0) <= 1e-10);
  CHECK(vmin >= 0.0);
}

TEST_CASE("scaled centrality is the eigenvector matrix times the magnitude parameter") {
  const DenseMatrix supra = sbm_multiplex_supra(12, 8);
  const double a_n = std::sqrt(12.0);
  const auto bundle = mlnetreg::eigenvector_centrality(supra, 12, 2, a_n);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t ell = 0; ell < 2; ++ell)
      CHECK(bundle.c.at(i, ell) == doctest::Approx(a_n * bundle.v.at(i, ell)).epsilon(1e-14));
}

TEST_CASE("matrix scaling leaves the centrality direction fixed and scales the gap") {
  const DenseMatrix supra = sbm_multiplex_supra(10, 15);
  DenseMatrix scaled = supra;
  const double c = 2.5;
  for (std::size_t i = 0; i < scaled.rows(); ++i)
    for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) = c * supra.at(i, j);
  scaled.mark_symmetric();
  const auto b1 = mlnetreg::eigenvector_centrality(supra, 10, 2, 1.0);
  const auto b2 = mlnetreg::eigenvector_centrality(scaled, 10, 2, 1.0);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t ell = 0; ell < 2; ++ell)
      CHECK(b1.v.at(i, ell) == doctest::Approx(b2.v.at(i, ell)).epsilon(1e-7));
  CHECK(b2.gap == doctest::Approx(c * b1.gap).epsilon(1e-7));
}

TEST_CASE("a vanishing spectral gap is rejected as ill-defined") {
  DenseMatrix b(2, 2);
  b(0, 1) = 1.0;
  b(1, 0) = 1.0;
  b.mark_symmetric();
  // Explicit tolerance above the true gap of 2.
  CHECK_THROWS_AS(mlnetreg::eigenvector_centrality(b, 1, 2, 1.0, 10.0),
                  mlnetreg::SpectralGapTooSmall);

  // Two disconnected identical components duplicate the leading eigenvalue.
  const DenseMatrix a = symmetric_nonneg(3, 71);
  mlnetreg::MultilayerNetwork net;
  net.n_nodes = 3;
  net.n_layers = 2;
  net.intralayer = {a, a};
  net.interlayer.emplace(std::make_pair<std::size_t, std::size_t>(0, 1), DenseMatrix(3, 3));
  const DenseMatrix supra = mlnetreg::assemble_supra(net);
  CHECK_THROWS_AS(mlnetreg::eigenvector_centrality(supra, 3, 2, 1.0),
                  mlnetreg::SpectralGapTooSmall);
}

TEST_CASE("a genuinely mixed-sign leading eigenvector is rejected for true networks") {
  DenseMatrix b(2, 2);
  b(0, 0) = 2.0;
  b(0, 1) = -1.0;
  b(1, 0) = -1.0;
  b(1, 1) = 1.0;
  b.mark_symmetric();
  CHECK_THROWS_AS(mlnetreg::eigenvector_centrality(b, 1, 2, 1.0), mlnetreg::NegativeEntries);

  // The observed-matrix variant accepts the same input and keeps the signs.
  const auto bundle = mlnetreg::centrality_from_observed(b, 1, 2, 1.0);
  CHECK(bundle.v.at(0, 0) * bundle.v.at(0, 1) < 0.0);
  CHECK(bundle.gap > 0.0);
}

TEST_CASE("community structure bookkeeping: indicator, sizes, reciprocal weights") {
  const CommunityStructure comm =
      mlnetreg::community_structure_from_labels({1, 1, 2, 3, 3, 3});
  CHECK(comm.n_communities == 3);
  CHECK(comm.sizes == std::vector<std::size_t>{2, 1, 3});
  REQUIRE(comm.s.rows() == 6);
  REQUIRE(comm.s.cols() == 3);
  double trace = 0.0;
  for (std::size_t r = 0; r < 3; ++r) {
    double col = 0.0;
    for (std::size_t i = 0; i < 6; ++i) col += comm.s.at(i, r);
    CHECK(col == doctest::Approx(static_cast<double>(comm.sizes[r])));
    trace += col;  // since entries are 0/1, S^T S diagonal equals column sums
    CHECK(comm.h[r] == doctest::Approx(1.0 / static_cast<double>(comm.sizes[r])));
  }
  CHECK(trace == doctest::Approx(6.0));
  for (std::size_t i = 0; i < 6; ++i) {
    double row = 0.0;
    for (std::size_t r = 0; r < 3; ++r) row += comm.s.at(i, r);
    CHECK(row == doctest::Approx(1.0));
  }

  CHECK_THROWS_AS(mlnetreg::community_structure_from_labels({1, 3}, 3),
                  mlnetreg::EmptyCommunity);
}

TEST_CASE("community aggregation on the hand-worked 4x2 example") {
  DenseMatrix c(4, 2);
  const double vals[4][2] = {{1, 2}, {3, 4}, {5, 6}, {7, 8}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 2; ++j) c(i, j) = vals[i][j];
  const CommunityStructure comm = mlnetreg::community_structure_from_labels({1, 1, 2, 2});
  const auto cc = mlnetreg::community_centrality(c, comm);
  CHECK(cc.z[0] == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(cc.z[1] == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(cc.z[2] == doctest::Approx(6.5).epsilon(1e-14));
  CHECK(cc.z[3] == doctest::Approx(6.5).epsilon(1e-14));
  // Per-layer community means, repeated for every member row.
  CHECK(cc.u.at(0, 0) == doctest::Approx(2.0));
  CHECK(cc.u.at(0, 1) == doctest::Approx(3.0));
  CHECK(cc.u.at(2, 0) == doctest::Approx(6.0));
  CHECK(cc.u.at(2, 1) == doctest::Approx(7.0));
}

TEST_CASE("degenerate partitions: singleton communities keep C, one community averages all") {
  const DenseMatrix c = oracle::random_matrix(6, 3, 55);
  const auto singleton =
      mlnetreg::community_centrality(c, mlnetreg::community_structure_from_labels({1, 2, 3, 4, 5, 6}));
  for (std::size_t i = 0; i < 6; ++i) {
    double rowmean = 0.0;
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(singleton.u.at(i, j) == doctest::Approx(c.at(i, j)).epsilon(1e-14));
      rowmean += c.at(i, j);
    }
    CHECK(singleton.z[i] == doctest::Approx(rowmean / 3.0).epsilon(1e-12));
  }

  const auto pooled =
      mlnetreg::community_centrality(c, mlnetreg::community_structure_from_labels({1, 1, 1, 1, 1, 1}));
  double total = 0.0;
  for (double v : c.data()) total += v;
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(pooled.z[i] == doctest::Approx(total / 18.0).epsilon(1e-12));
}

TEST_CASE("community aggregation matches a direct mean oracle on random instances") {
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    oracle::TestRng gen(seed);
    const std::size_t n = 8 + static_cast<std::size_t>(gen.next_u64() % 8);
    const std::size_t l = 2 + static_cast<std::size_t>(gen.next_u64() % 3);
    const std::size_t r = 2 + static_cast<std::size_t>(gen.next_u64() % 3);
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = 1 + i % r;  // every community nonempty
    const DenseMatrix c = oracle::random_matrix(n, l, seed * 13);
    const CommunityStructure comm = mlnetreg::community_structure_from_labels(labels, r);
    const auto cc = mlnetreg::community_centrality(c, comm);

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < l; ++j) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t k = 0; k < n; ++k)
          if (labels[k] == labels[i]) {
            sum += c.at(k, j);
            ++count;
          }
        CHECK(cc.u.at(i, j) == doctest::Approx(sum / static_cast<double>(count)).epsilon(1e-12));
      }
      double rowmean = 0.0;
      for (std::size_t j = 0; j < l; ++j) rowmean += cc.u.at(i, j);
      CHECK(cc.z[i] == doctest::Approx(rowmean / static_cast<double>(l)).epsilon(1e-12));
    }

    // Mass identity: L * sum(Z) equals the total mass of C.
    double zsum = 0.0;
    for (double z : cc.z) zsum += z;
    double csum = 0.0;
    for (double v : c.data()) csum += v;
    CHECK(static_cast<double>(l) * zsum ==
          doctest::Approx(csum).epsilon(1e-10));

    // Aggregation is exactly constant within each community.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (labels[i] == labels[k]) CHECK(cc.z[i] == cc.z[k]);

    // Linearity in the centrality argument.
    DenseMatrix c3(n, l);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < l; ++j) c3(i, j) = 3.0 * c.at(i, j);
    const auto cc3 = mlnetreg::community_centrality(c3, comm);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(cc3.z[i] == doctest::Approx(3.0 * cc.z[i]).epsilon(1e-11));
  }
}

TEST_CASE("node relabeling permutes centrality and aggregation consistently") {
  const std::size_t n = 6;
  const DenseMatrix a0 = symmetric_nonneg(n, 301);
  const DenseMatrix a1 = symmetric_nonneg(n, 302);
  const std::vector<std::size_t> labels = {1, 2, 1, 2, 1, 2};
  const std::size_t perm[6] = {4, 2, 0, 5, 1, 3};

  const DenseMatrix supra = mlnetreg::assemble_supra(mlnetreg::make_multiplex({a0, a1}));
  const auto bundle = mlnetreg::eigenvector_centrality(supra, n, 2, 2.0);
  const auto agg = mlnetreg::community_centrality(
      bundle.c, mlnetreg::community_structure_from_labels(labels));

  DenseMatrix p0(n, n), p1(n, n);
  std::vector<std::size_t> plabels(n);
  for (std::size_t i = 0; i < n; ++i) {
    plabels[i] = labels[perm[i]];
    for (std::size_t j = 0; j < n; ++j) {
      p0(i, j) = a0.at(perm[i], perm[j]);
      p1(i, j) = a1.at(perm[i], perm[j]);
    }
  }
  p0.mark_symmetric();
  p1.mark_symmetric();
  const DenseMatrix supra_p = mlnetreg::assemble_supra(mlnetreg::make_multiplex({p0, p1}));
  const auto bundle_p = mlnetreg::eigenvector_centrality(supra_p, n, 2, 2.0);
  const auto agg_p = mlnetreg::community_centrality(
      bundle_p.c, mlnetreg::community_structure_from_labels(plabels));

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t ell = 0; ell < 2; ++ell)
      CHECK(bundle_p.v.at(i, ell) == doctest::Approx(bundle.v.at(perm[i], ell)).epsilon(1e-8));
    CHECK(agg_p.z[i] == doctest::Approx(agg.z[perm[i]]).epsilon(1e-8));
  }
}

TEST_CASE("diagnostics report community share, gap ratio and projection residual") {
  // Balanced three-way split of thirty nodes.
  const CommunityStructure comm = mlnetreg::synth::balanced_labels(30, 3);
  double min_share = 1.0;
  for (std::size_t r = 0; r < 3; ++r)
    min_share = std::min(min_share, static_cast<double>(comm.sizes[r]) / 30.0);
  CHECK(min_share == doctest::Approx(1.0 / 3.0));

  // Two-node, one-layer supra with eigenvalues 3 and 1: gap 2, ratio 1/2.
  DenseMatrix b0(2, 2);
  b0(0, 0) = 3.0;
  b0(1, 1) = 1.0;
  b0.mark_symmetric();
  const DenseMatrix x(2, 0);
  DenseMatrix v(2, 1);
  v(0, 0) = 1.0;
  v(1, 0) = 0.0;
  const CommunityStructure one = mlnetreg::community_structure_from_labels({1, 1});
  const auto diag = mlnetreg::assumption_diagnostics(b0, x, v, one, 1.0);
  CHECK(diag.lambda1 == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(diag.lambda2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(diag.gap == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(diag.an_over_gap == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(diag.min_community_share == doctest::Approx(1.0));
  CHECK(diag.sigma_min_residual == doctest::Approx(1.0).epsilon(1e-9));
}
