#pragma once

#include <cstddef>
#include <vector>

#include "mlnetreg/dense_matrix.hpp"
#include "mlnetreg/linalg.hpp"

namespace mlnetreg {

/**
 * Node-to-community assignment. Labels are 1-based ids in 1..R; S is the
 * N x R 0/1 indicator matrix and H holds the reciprocal community sizes.
 */
struct CommunityStructure {
  std::vector<std::size_t> labels;
  std::size_t n_communities = 0;
  std::vector<std::size_t> sizes;
  DenseMatrix s;
  std::vector<double> h;
};

/**
 * Builds the structure from labels. With r = 0 the community count is
 * inferred as the maximum label; every community in 1..R must be nonempty.
 */
CommunityStructure community_structure_from_labels(std::vector<std::size_t> labels,
                                                   std::size_t r = 0);

/**
 * Spectral centrality of a supra matrix: lambda1/lambda2/gap, the leading
 * eigenvector reshaped to the N x L matrix V (unit Frobenius norm, one
 * column per layer under the layer-major supra index), and C = a_n * V.
 */
struct CentralityBundle {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;
  double a_n = 1.0;
  DenseMatrix v;
  DenseMatrix c;
  std::size_t iterations = 0;
};

/// Sentinel for eigenvector_centrality: gap tolerance 1e-8 * |lambda1|.
inline constexpr double kAutoGapTol = -1.0;

/**
 * Centrality of a true (nonnegative, connected) supra matrix. The leading
 * eigenvector is sign-resolved to nonnegative entries; entries in
 * [-1e-6, 0) are treated as solver noise and clamped to zero (followed by
 * renormalization), anything more negative raises NegativeEntries, which
 * typically signals a disconnected supra graph. A spectral gap below
 * gap_tol raises SpectralGapTooSmall since the leading direction is then
 * numerically ambiguous.
 */
CentralityBundle eigenvector_centrality(const DenseMatrix& b, std::size_t n_nodes,
                                        std::size_t n_layers, double a_n,
                                        double gap_tol = kAutoGapTol,
                                        double eig_tol = linalg::kDefaultEigTol,
                                        std::size_t max_iter = linalg::kDefaultEigMaxIter);

/**
 * Centrality of an observed (noise-perturbed) matrix. Such a matrix need
 * not be nonnegative, so no Perron structure is assumed: entries keep their
 * signs (beyond the overall sign resolution) and no gap threshold is
 * enforced; the gap is still reported for diagnostics.
 */
CentralityBundle centrality_from_observed(const DenseMatrix& b, std::size_t n_nodes,
                                          std::size_t n_layers, double a_n,
                                          double eig_tol = linalg::kDefaultEigTol,
                                          std::size_t max_iter = linalg::kDefaultEigMaxIter);

struct CommunityCentrality {
  DenseMatrix u;          // N x L: per-layer community means, repeated per node
  std::vector<double> z;  // length N: row means of U, constant within a community
};

/**
 * Community aggregation U = S (H • S^T C) (face-splitting product) and
 * Z = U 1_L / L. Row i of U holds, per layer, the mean of C over node i's
 * community; Z additionally averages over layers.
 */
CommunityCentrality community_centrality(const DenseMatrix& c, const CommunityStructure& comm);

/**
 * Measured counterparts of the estimator's identification conditions:
 * sigma_min((I - P_X)V), the smallest community share min_r N_r / N, the
 * centrality mass ratio min_i ||C_i||_1^2 * N / a_n^2, and the spectral
 * quantities lambda1, lambda2, gap and a_n / gap of the supplied supra
 * matrix.
 */
struct AssumptionDiagnostics {
  double sigma_min_residual = 0.0;
  double min_community_share = 0.0;
  double centrality_mass_ratio = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;
  double an_over_gap = 0.0;
};

AssumptionDiagnostics assumption_diagnostics(const DenseMatrix& b0, const DenseMatrix& x,
                                             const DenseMatrix& v, const CommunityStructure& comm,
                                             double a_n,
                                             double eig_tol = linalg::kDefaultEigTol,
                                             std::size_t max_iter = linalg::kDefaultEigMaxIter);

}  // namespace mlnetreg
