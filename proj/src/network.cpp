#include "mlnetreg/network.hpp"

#include <string>

#include "mlnetreg/errors.hpp"
#include "mlnetreg/rng.hpp"

namespace mlnetreg {

void validate_network(const MultilayerNetwork& net) {
  const std::size_t n = net.n_nodes;
  const std::size_t l = net.n_layers;
  if (l == 0 || n == 0) throw EmptyMatrix("network has no nodes or no layers");
  if (net.intralayer.size() != l) {
    throw DimensionMismatch("expected " + std::to_string(l) + " intralayer matrices, got " +
                            std::to_string(net.intralayer.size()));
  }
  for (std::size_t ell = 0; ell < l; ++ell) {
    const DenseMatrix& a = net.intralayer[ell];
    if (a.rows() != n || a.cols() != n) {
      throw DimensionMismatch("layer " + std::to_string(ell + 1) + " is " +
                              std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                              ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!a.is_marked_symmetric() && !a.symmetry_holds()) {
      throw AsymmetricInput("layer " + std::to_string(ell + 1) + " adjacency is not symmetric");
    }
    for (double v : a.data()) {
      if (v < 0.0) {
        throw InvalidArgument("layer " + std::to_string(ell + 1) +
                              " adjacency has a negative entry");
      }
    }
  }
  for (const auto& [key, d] : net.interlayer) {
    if (key.first >= key.second || key.second >= l) {
      throw DimensionMismatch("interlayer key (" + std::to_string(key.first) + ", " +
                              std::to_string(key.second) + ") out of order or range");
    }
    if (d.rows() != n || d.cols() != n) {
      throw DimensionMismatch("interlayer block (" + std::to_string(key.first) + ", " +
                              std::to_string(key.second) + ") has wrong shape");
    }
  }
}

DenseMatrix assemble_supra(const MultilayerNetwork& net) {
  validate_network(net);
  const std::size_t n = net.n_nodes;
  const std::size_t l = net.n_layers;
  DenseMatrix supra(n * l, n * l);
  for (std::size_t ell = 0; ell < l; ++ell) {
    const DenseMatrix& a = net.intralayer[ell];
    const std::size_t off = ell * n;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) supra(off + i, off + j) = a.at(i, j);
  }
  for (const auto& [key, d] : net.interlayer) {
    const std::size_t ro = key.first * n;
    const std::size_t co = key.second * n;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        supra(ro + i, co + j) = d.at(i, j);
        supra(co + j, ro + i) = d.at(i, j);
      }
    }
  }
  supra.mark_symmetric();
  return supra;
}

MultilayerNetwork make_multiplex(std::vector<DenseMatrix> layers) {
  if (layers.empty()) throw EmptyMatrix("make_multiplex: no layers");
  const std::size_t n = layers.front().rows();
  MultilayerNetwork net;
  net.n_nodes = n;
  net.n_layers = layers.size();
  net.intralayer = std::move(layers);
  for (std::size_t a = 0; a < net.n_layers; ++a) {
    for (std::size_t b = a + 1; b < net.n_layers; ++b) {
      net.interlayer.emplace(std::make_pair(a, b), DenseMatrix::identity(n));
    }
  }
  validate_network(net);
  return net;
}

std::pair<DenseMatrix, DenseMatrix> perturb(const DenseMatrix& b0, const NoiseSpec& spec,
                                            std::size_t n_nodes) {
  const std::size_t dim = b0.rows();
  if (dim == 0 || b0.cols() != dim) throw DimensionMismatch("perturb: matrix must be square");
  if (!b0.is_marked_symmetric() && !b0.symmetry_holds()) {
    throw AsymmetricInput("perturb: base matrix is not symmetric");
  }
  if (spec.sigma_b < 0.0) throw InvalidArgument("perturb: sigma_b must be nonnegative");

  DenseMatrix e0(dim, dim);
  if (spec.sigma_b > 0.0) {
    rng::Engine gen(spec.seed);
    if (spec.structure == NoiseStructure::FullSymmetric) {
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = i; j < dim; ++j) {
          const double v = gen.normal(0.0, spec.sigma_b);
          e0(i, j) = v;
          e0(j, i) = v;
        }
      }
    } else {
      if (n_nodes == 0 || dim % n_nodes != 0) {
        throw DimensionMismatch("perturb: block-diagonal noise needs a node count dividing " +
                                std::to_string(dim));
      }
      const std::size_t l = dim / n_nodes;
      for (std::size_t ell = 0; ell < l; ++ell) {
        const std::size_t off = ell * n_nodes;
        for (std::size_t i = 0; i < n_nodes; ++i) {
          for (std::size_t j = i; j < n_nodes; ++j) {
            const double v = gen.normal(0.0, spec.sigma_b);
            e0(off + i, off + j) = v;
            e0(off + j, off + i) = v;
          }
        }
      }
    }
  }
  DenseMatrix b(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) b(i, j) = b0.at(i, j) + e0.at(i, j);
  b.mark_symmetric();
  e0.mark_symmetric();
  return {std::move(b), std::move(e0)};
}

}  // namespace mlnetreg
