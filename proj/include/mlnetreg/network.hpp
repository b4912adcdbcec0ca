#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "mlnetreg/dense_matrix.hpp"

namespace mlnetreg {

/**
 * Multilayer network over a shared node set of size N: one symmetric
 * nonnegative N x N adjacency matrix per layer, plus optional interlayer
 * coupling blocks D(l, l') stored only for l < l' (0-based); the reverse
 * block is implied as the transpose, so the assembled supra matrix is
 * symmetric by construction.
 */
struct MultilayerNetwork {
  std::size_t n_nodes = 0;
  std::size_t n_layers = 0;
  std::vector<DenseMatrix> intralayer;
  std::map<std::pair<std::size_t, std::size_t>, DenseMatrix> interlayer;
};

enum class NoiseStructure { FullSymmetric, BlockDiagonal };

struct NoiseSpec {
  double sigma_b = 0.0;
  NoiseStructure structure = NoiseStructure::FullSymmetric;
  std::uint64_t seed = 0;
};

/// Checks sizes, symmetry and nonnegativity of every stored block.
void validate_network(const MultilayerNetwork& net);

/**
 * Assembles the NL x NL supra-adjacency matrix: diagonal block l holds the
 * layer-l adjacency, block (l, l') holds the interlayer coupling (zero when
 * absent). Supra index k = l * N + i for node i in layer l (0-based,
 * layer-major), which also fixes the vectorization convention used by the
 * centrality module.
 */
DenseMatrix assemble_supra(const MultilayerNetwork& net);

/**
 * Multiplex special case: every interlayer block is the identity (each node
 * couples to its own copies in all other layers with weight 1).
 */
MultilayerNetwork make_multiplex(std::vector<DenseMatrix> layers);

/**
 * Additive symmetric Gaussian noise: E0 has i.i.d. Normal(0, sigma_b^2)
 * entries on and above the diagonal, mirrored below. FullSymmetric draws
 * over the whole matrix; BlockDiagonal only inside the n_nodes-sized
 * diagonal blocks (interlayer couplings stay clean), which is why the node
 * count is a parameter. Returns (B0 + E0, E0); deterministic per seed.
 */
std::pair<DenseMatrix, DenseMatrix> perturb(const DenseMatrix& b0, const NoiseSpec& spec,
                                            std::size_t n_nodes = 0);

}  // namespace mlnetreg
