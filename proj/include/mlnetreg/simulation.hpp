#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mlnetreg/network.hpp"

namespace mlnetreg::simulation {

enum class ExperimentKind {
  CMnetrNoiseless,
  CCMnetrNoiseless,
  CMnetrNoisy,
  CCMnetrNoisy,
  RcfeComparison,
  SigmaMinStudy,
};

std::string experiment_name(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name);

/**
 * Rule mapping (N, L) to the centrality scale a_N: sqrt(N), N^value, N,
 * sqrt(N*L), or a fixed constant.
 */
struct AnRule {
  enum class Kind { SqrtN, Pow, LinearN, SqrtNL, Fixed };
  Kind kind = Kind::SqrtN;
  double value = 0.0;  // exponent for Pow, the constant for Fixed

  double evaluate(std::size_t n, std::size_t l) const;
  std::string name() const;
  // Accepts "sqrt-n", "n", "sqrt-nl", "pow:<exponent>", "fixed:<value>".
  static AnRule parse(const std::string& text);
};

struct TrueBeta {
  std::vector<double> beta_x{1.0, 2.0};
  std::vector<double> beta_c{1.0, 2.0};
  double beta_z = 2.0;
  // Community fixed effects used by the RCFE comparison; when empty, the
  // data carries no community effect and the truth is zero.
  std::vector<double> beta_s;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::CCMnetrNoiseless;
  std::vector<std::size_t> n_values{100, 200, 500};
  AnRule a_n_rule{};
  std::size_t n_reps = 500;
  double sigma_b = 0.25;
  double sigma_y = 1.0;
  TrueBeta true_beta{};
  std::uint64_t master_seed = 1;

  // Data-generating process shape (defaults follow the simulation design:
  // two layers, two covariates, three balanced communities, block
  // connection probabilities 0.8 within / 0.1 between).
  std::size_t n_layers = 2;
  std::size_t p_covariates = 2;
  std::size_t r_communities = 3;
  double conn_within = 0.8;
  double conn_between = 0.1;
  // Per-layer (block-diagonal) noise keeps the interlayer couplings clean,
  // which is what lets the layer-wise centrality columns stay near-collinear
  // under perturbation; the full-symmetric variant remains selectable.
  NoiseStructure noise_structure = NoiseStructure::BlockDiagonal;

  // Eigensolver budget for replication-scale matrices.
  double eig_tol = 1e-8;
  std::size_t eig_max_iter = 200000;
};

struct EstimateEntry {
  std::string name;
  double value = 0.0;
  double truth = 0.0;
};

struct ReplicationRecord {
  std::vector<EstimateEntry> estimates;
  double gap = 0.0;  // spectral gap of the noiseless supra matrix
  double a_n = 0.0;
  std::optional<double> z_stat;
};

/**
 * One full pipeline pass for (N, rep_index): sample the layers, assemble
 * the multiplex supra matrix, compute true centrality, draw covariates and
 * the response from the true model, optionally perturb the network and
 * re-estimate centrality from the observed matrix, then fit the configured
 * model. All randomness flows through streams derived from
 * (master_seed, N, rep_index, role), so records are reproducible and
 * independent across replications. Throws on numerical failure; the
 * experiment driver records and skips failed replications.
 */
ReplicationRecord run_replication(const ExperimentConfig& config, std::size_t n,
                                  std::size_t rep_index);

struct CoefficientStat {
  std::string name;
  double truth = 0.0;
  double mean = 0.0;
  double sd = 0.0;   // sample standard deviation over replications
  double mse = 0.0;  // mean squared deviation from the truth
};

struct ExperimentCell {
  std::size_t n = 0;
  double a_n = 0.0;
  std::size_t n_success = 0;
  std::size_t n_failed = 0;
  std::vector<std::string> failure_messages;  // first few, for the report
  std::vector<CoefficientStat> coefficients;
  double mean_gap = 0.0;
  double mean_an_over_gap = 0.0;
  bool degenerate_sd = false;  // fewer than two successes: sd reported as 0
  std::vector<double> z_stats;
  std::vector<std::pair<double, double>> qq;  // (normal quantile, standardized estimate)
};

struct SimulationReport {
  ExperimentConfig config;
  std::vector<ExperimentCell> cells;
  // Informational only; excluded from serialized reports so that equal
  // seeds give byte-identical files.
  double wall_seconds = 0.0;
};

/**
 * Runs n_reps replications per N. Replications execute on a small worker
 * pool (capped by the MLNETREG_THREADS environment variable); results are
 * aggregated in replication order, so the report does not depend on the
 * parallelism degree.
 */
SimulationReport run_experiment(const ExperimentConfig& config);

struct SigmaMinRow {
  std::size_t n = 0;
  std::string variant;  // "identical" or "different" connection matrices
  double sigma_min = 0.0;
  double scaled = 0.0;  // sigma_min * sqrt(N)
};

/**
 * Order study of sigma_min((I - P_X)V): one SBM draw per N and per layer
 * connection-probability variant (both layers sharing one matrix, versus
 * two distinct matrices).
 */
std::vector<SigmaMinRow> sigma_min_study(const ExperimentConfig& config);

/**
 * Sorted standardized estimates paired with standard normal quantiles at
 * (i - 0.5)/n. Needs at least 10 estimates and a positive scale.
 */
std::vector<std::pair<double, double>> qq_data(const std::vector<double>& estimates,
                                               double center, double scale);

/// Inverse standard normal CDF (rational approximation plus one Halley
/// refinement; accurate to full double precision on (0, 1)).
double normal_quantile(double p);

/// Worker count for replication parallelism: MLNETREG_THREADS if set, else
/// the hardware concurrency, clamped to [1, n_tasks].
std::size_t resolve_thread_count(std::size_t n_tasks);

}  // namespace mlnetreg::simulation
