#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mlnetreg/centrality.hpp"
#include "mlnetreg/dense_matrix.hpp"
#include "mlnetreg/regression.hpp"
#include "mlnetreg/simulation.hpp"
#include "mlnetreg/wiod.hpp"

namespace mlnetreg::io {

enum class NetworkFormat { EdgeList, DenseSupra };

NetworkFormat parse_network_format(const std::string& text);

struct LoadedNetwork {
  DenseMatrix supra;
  std::size_t n_nodes = 0;
  std::size_t n_layers = 0;
};

/**
 * Loads a supra matrix. EdgeList rows are
 * "node_i,layer_i,node_j,layer_j,weight" with 1-based indices; both
 * orientations of an edge are accepted, but re-specifying an entry with a
 * different weight is an error. DenseSupra is a headerless numeric grid
 * (comma or whitespace separated) that must match the declared N and L and
 * be symmetric. Malformed content reports the offending line.
 */
LoadedNetwork load_network(const std::string& path, NetworkFormat format, std::size_t n_nodes,
                           std::size_t n_layers);

/// Headerless numeric grid, one matrix row per line.
DenseMatrix load_dense_grid(const std::string& path);

struct Table {
  std::vector<std::string> names;
  DenseMatrix values;
};

/// Headered CSV of floats (first line: column names).
Table load_csv_table(const std::string& path);

/// Single-column headered CSV; returns (column name, values).
std::pair<std::string, std::vector<double>> load_response(const std::string& path);

/**
 * Headered CSV of 1-based community labels: either one label column, or
 * (node, label) rows whose node ids must run 1..N in order.
 */
CommunityStructure load_communities(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

/// Comma-separated grid with shortest round-trip number formatting.
std::string supra_to_csv(const DenseMatrix& m);

std::string read_text_file(const std::string& path);

// JSON views (keys sorted, schema stable; doubles use shortest round-trip
// formatting, so equal inputs serialize to identical bytes).
nlohmann::json report_json(const simulation::SimulationReport& report);
nlohmann::json sigma_min_json(const simulation::ExperimentConfig& config,
                              const std::vector<simulation::SigmaMinRow>& rows);
nlohmann::json bundle_json(const CentralityBundle& bundle, const std::vector<double>* z);
nlohmann::json fit_json(const RegressionFit& fit, const std::vector<std::string>& design_names);
nlohmann::json diagnostics_json(const AssumptionDiagnostics& diag);
nlohmann::json wiod_json(const wiod::WiodResult& result);
nlohmann::json config_json(const simulation::ExperimentConfig& config);

}  // namespace mlnetreg::io
