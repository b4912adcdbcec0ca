#include "mlnetreg/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "mlnetreg/errors.hpp"

namespace mlnetreg {

namespace {

constexpr double kNegativeClampBand = 1e-6;

CentralityBundle centrality_common(const DenseMatrix& b, std::size_t n_nodes,
                                   std::size_t n_layers, double a_n, double eig_tol,
                                   std::size_t max_iter) {
  if (n_nodes == 0 || n_layers == 0) throw EmptyMatrix("centrality: N and L must be positive");
  const std::size_t dim = n_nodes * n_layers;
  if (b.rows() != dim || b.cols() != dim) {
    throw DimensionMismatch("centrality: supra matrix is " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()) + ", expected " + std::to_string(dim) +
                            " for N=" + std::to_string(n_nodes) +
                            ", L=" + std::to_string(n_layers));
  }
  if (a_n <= 0.0) throw InvalidArgument("centrality: a_n must be positive");

  const linalg::EigenResult lead = linalg::leading_eigenpair(b, eig_tol, max_iter);
  const double lambda2 = linalg::second_eigenvalue(b, lead, eig_tol, max_iter);

  CentralityBundle bundle;
  bundle.lambda1 = lead.value;
  bundle.lambda2 = lambda2;
  bundle.gap = lead.value - lambda2;
  bundle.a_n = a_n;
  bundle.iterations = lead.iterations;
  bundle.v = DenseMatrix(n_nodes, n_layers);
  for (std::size_t ell = 0; ell < n_layers; ++ell)
    for (std::size_t i = 0; i < n_nodes; ++i) bundle.v(i, ell) = lead.vector[ell * n_nodes + i];
  return bundle;
}

void finish_bundle(CentralityBundle& bundle) {
  bundle.c = DenseMatrix(bundle.v.rows(), bundle.v.cols());
  for (std::size_t i = 0; i < bundle.v.rows(); ++i)
    for (std::size_t j = 0; j < bundle.v.cols(); ++j)
      bundle.c(i, j) = bundle.a_n * bundle.v.at(i, j);
}

}  // namespace

CentralityBundle eigenvector_centrality(const DenseMatrix& b, std::size_t n_nodes,
                                        std::size_t n_layers, double a_n, double gap_tol,
                                        double eig_tol, std::size_t max_iter) {
  CentralityBundle bundle = centrality_common(b, n_nodes, n_layers, a_n, eig_tol, max_iter);

  const double effective_gap_tol =
      gap_tol < 0.0 ? 1e-8 * std::max(std::abs(bundle.lambda1), 1e-300) : gap_tol;
  if (bundle.gap < effective_gap_tol) {
    throw SpectralGapTooSmall("spectral gap " + std::to_string(bundle.gap) +
                              " below threshold " + std::to_string(effective_gap_tol) +
                              "; leading direction is not identified");
  }

  double min_entry = 0.0;
  for (double x : bundle.v.data()) min_entry = std::min(min_entry, x);
  if (min_entry < -kNegativeClampBand) {
    throw NegativeEntries("leading eigenvector has entry " + std::to_string(min_entry) +
                          " after sign resolution; the supra graph is likely disconnected");
  }
  double norm2 = 0.0;
  for (std::size_t i = 0; i < bundle.v.rows(); ++i) {
    for (std::size_t j = 0; j < bundle.v.cols(); ++j) {
      if (bundle.v.at(i, j) < 0.0) bundle.v(i, j) = 0.0;
      norm2 += bundle.v.at(i, j) * bundle.v.at(i, j);
    }
  }
  const double norm = std::sqrt(norm2);
  for (std::size_t i = 0; i < bundle.v.rows(); ++i)
    for (std::size_t j = 0; j < bundle.v.cols(); ++j) bundle.v(i, j) /= norm;

  finish_bundle(bundle);
  return bundle;
}

CentralityBundle centrality_from_observed(const DenseMatrix& b, std::size_t n_nodes,
                                          std::size_t n_layers, double a_n, double eig_tol,
                                          std::size_t max_iter) {
  CentralityBundle bundle = centrality_common(b, n_nodes, n_layers, a_n, eig_tol, max_iter);
  finish_bundle(bundle);
  return bundle;
}

CommunityStructure community_structure_from_labels(std::vector<std::size_t> labels,
                                                   std::size_t r) {
  const std::size_t n = labels.size();
  if (n == 0) throw EmptyMatrix("community structure: no labels");
  std::size_t max_label = 0;
  for (std::size_t lab : labels) {
    if (lab == 0) throw InvalidArgument("community labels are 1-based; got 0");
    max_label = std::max(max_label, lab);
  }
  const std::size_t n_comm = r == 0 ? max_label : r;
  if (max_label > n_comm) {
    throw IndexOutOfRange("community label " + std::to_string(max_label) + " exceeds R=" +
                          std::to_string(n_comm));
  }

  CommunityStructure comm;
  comm.labels = std::move(labels);
  comm.n_communities = n_comm;
  comm.sizes.assign(n_comm, 0);
  for (std::size_t lab : comm.labels) ++comm.sizes[lab - 1];
  for (std::size_t c = 0; c < n_comm; ++c) {
    if (comm.sizes[c] == 0) {
      throw EmptyCommunity("community " + std::to_string(c + 1) + " has no members");
    }
  }
  comm.s = DenseMatrix(n, n_comm);
  for (std::size_t i = 0; i < n; ++i) comm.s(i, comm.labels[i] - 1) = 1.0;
  comm.h.resize(n_comm);
  for (std::size_t c = 0; c < n_comm; ++c) comm.h[c] = 1.0 / static_cast<double>(comm.sizes[c]);
  return comm;
}

CommunityCentrality community_centrality(const DenseMatrix& c, const CommunityStructure& comm) {
  const std::size_t n = c.rows();
  const std::size_t l = c.cols();
  if (comm.labels.size() != n) {
    throw DimensionMismatch("community_centrality: " + std::to_string(comm.labels.size()) +
                            " labels for " + std::to_string(n) + " rows");
  }
  for (std::size_t r = 0; r < comm.n_communities; ++r) {
    if (r >= comm.sizes.size() || comm.sizes[r] == 0) {
      throw EmptyCommunity("community " + std::to_string(r + 1) + " has no members");
    }
  }

  // U = S (H • S^T C): the face-splitting product with the column vector H
  // scales row r of S^T C by 1/N_r, i.e. turns community sums into means.
  const DenseMatrix sums = matmul(transpose(comm.s), c);   // R x L
  const DenseMatrix means = linalg::face_splitting(column_matrix(comm.h), sums);
  CommunityCentrality result;
  result.u = matmul(comm.s, means);  // N x L
  result.z.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < l; ++j) acc += result.u.at(i, j);
    result.z[i] = acc / static_cast<double>(l);
  }
  return result;
}

AssumptionDiagnostics assumption_diagnostics(const DenseMatrix& b0, const DenseMatrix& x,
                                             const DenseMatrix& v, const CommunityStructure& comm,
                                             double a_n, double eig_tol, std::size_t max_iter) {
  const std::size_t n = v.rows();
  if (n == 0) throw EmptyMatrix("assumption_diagnostics: V has no rows");
  if (comm.labels.size() != n) {
    throw DimensionMismatch("assumption_diagnostics: community labels do not match V rows");
  }
  if (a_n <= 0.0) throw InvalidArgument("assumption_diagnostics: a_n must be positive");

  AssumptionDiagnostics diag;
  diag.sigma_min_residual = linalg::smallest_singular_value_residual(x, v);

  std::size_t min_size = comm.sizes.front();
  for (std::size_t s : comm.sizes) min_size = std::min(min_size, s);
  diag.min_community_share = static_cast<double>(min_size) / static_cast<double>(n);

  double min_mass = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double row_l1 = 0.0;
    for (std::size_t j = 0; j < v.cols(); ++j) row_l1 += std::abs(a_n * v.at(i, j));
    min_mass = std::min(min_mass, row_l1 * row_l1 * static_cast<double>(n) / (a_n * a_n));
  }
  diag.centrality_mass_ratio = min_mass;

  const linalg::EigenResult lead = linalg::leading_eigenpair(b0, eig_tol, max_iter);
  diag.lambda1 = lead.value;
  diag.lambda2 = linalg::second_eigenvalue(b0, lead, eig_tol, max_iter);
  diag.gap = diag.lambda1 - diag.lambda2;
  diag.an_over_gap =
      diag.gap > 0.0 ? a_n / diag.gap : std::numeric_limits<double>::infinity();
  return diag;
}

}  // namespace mlnetreg
