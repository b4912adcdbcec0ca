#include "mlnetreg/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "mlnetreg/centrality.hpp"
#include "mlnetreg/errors.hpp"
#include "mlnetreg/regression.hpp"
#include "mlnetreg/rng.hpp"
#include "mlnetreg/synth.hpp"

namespace mlnetreg::simulation {

namespace {

// Stream roles; combined with (master_seed, N, rep_index) they name every
// independent random draw in a replication.
constexpr std::uint64_t kRoleLayerBase = 1000;  // + layer index
constexpr std::uint64_t kRoleCovariates = 2001;
constexpr std::uint64_t kRoleResponse = 2002;
constexpr std::uint64_t kRoleNoise = 2003;
// sigma_min study paths: (master_seed, N, variant, role)
constexpr std::uint64_t kVariantIdentical = 7001;
constexpr std::uint64_t kVariantDifferent = 7002;

DenseMatrix block_probabilities(std::size_t r, double within, double between) {
  DenseMatrix p(r, r, between);
  for (std::size_t i = 0; i < r; ++i) p(i, i) = within;
  p.mark_symmetric();
  return p;
}

bool is_noisy(ExperimentKind kind) {
  return kind == ExperimentKind::CMnetrNoisy || kind == ExperimentKind::CCMnetrNoisy;
}

bool is_community_model(ExperimentKind kind) {
  return kind == ExperimentKind::CCMnetrNoiseless || kind == ExperimentKind::CCMnetrNoisy;
}

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CMnetrNoiseless: return "cmnetr-noiseless";
    case ExperimentKind::CCMnetrNoiseless: return "ccmnetr-noiseless";
    case ExperimentKind::CMnetrNoisy: return "cmnetr-noisy";
    case ExperimentKind::CCMnetrNoisy: return "ccmnetr-noisy";
    case ExperimentKind::RcfeComparison: return "rcfe-comparison";
    case ExperimentKind::SigmaMinStudy: return "sigma-min";
  }
  throw InvalidArgument("unknown experiment kind");
}

ExperimentKind parse_experiment(const std::string& name) {
  if (name == "cmnetr-noiseless") return ExperimentKind::CMnetrNoiseless;
  if (name == "ccmnetr-noiseless") return ExperimentKind::CCMnetrNoiseless;
  if (name == "cmnetr-noisy") return ExperimentKind::CMnetrNoisy;
  if (name == "ccmnetr-noisy") return ExperimentKind::CCMnetrNoisy;
  if (name == "rcfe-comparison") return ExperimentKind::RcfeComparison;
  if (name == "sigma-min") return ExperimentKind::SigmaMinStudy;
  throw InvalidArgument("unknown experiment '" + name +
                        "' (expected cmnetr-noiseless, ccmnetr-noiseless, cmnetr-noisy, "
                        "ccmnetr-noisy, rcfe-comparison or sigma-min)");
}

double AnRule::evaluate(std::size_t n, std::size_t l) const {
  const double nd = static_cast<double>(n);
  switch (kind) {
    case Kind::SqrtN: return std::sqrt(nd);
    case Kind::Pow: return std::pow(nd, value);
    case Kind::LinearN: return nd;
    case Kind::SqrtNL: return std::sqrt(nd * static_cast<double>(l));
    case Kind::Fixed: return value;
  }
  throw InvalidArgument("unknown a_n rule");
}

std::string AnRule::name() const {
  switch (kind) {
    case Kind::SqrtN: return "sqrt-n";
    case Kind::Pow: return "pow:" + format_value(value);
    case Kind::LinearN: return "n";
    case Kind::SqrtNL: return "sqrt-nl";
    case Kind::Fixed: return "fixed:" + format_value(value);
  }
  throw InvalidArgument("unknown a_n rule");
}

AnRule AnRule::parse(const std::string& text) {
  AnRule rule;
  if (text == "sqrt-n") {
    rule.kind = Kind::SqrtN;
    return rule;
  }
  if (text == "n") {
    rule.kind = Kind::LinearN;
    return rule;
  }
  if (text == "sqrt-nl") {
    rule.kind = Kind::SqrtNL;
    return rule;
  }
  const auto parse_suffix = [&](const std::string& prefix, double& out) {
    if (text.rfind(prefix, 0) != 0) return false;
    const std::string num = text.substr(prefix.size());
    char* end = nullptr;
    out = std::strtod(num.c_str(), &end);
    if (end == num.c_str() || *end != '\0') {
      throw InvalidArgument("bad a_n rule '" + text + "': cannot parse number after '" +
                            prefix + "'");
    }
    return true;
  };
  double v = 0.0;
  if (parse_suffix("pow:", v)) {
    rule.kind = Kind::Pow;
    rule.value = v;
    return rule;
  }
  if (parse_suffix("fixed:", v)) {
    if (v <= 0.0) throw InvalidArgument("bad a_n rule: fixed value must be positive");
    rule.kind = Kind::Fixed;
    rule.value = v;
    return rule;
  }
  throw InvalidArgument("unknown a_n rule '" + text +
                        "' (expected sqrt-n, n, sqrt-nl, pow:<e> or fixed:<v>)");
}

ReplicationRecord run_replication(const ExperimentConfig& config, std::size_t n,
                                  std::size_t rep_index) {
  if (config.experiment == ExperimentKind::SigmaMinStudy) {
    throw InvalidArgument("sigma-min runs through sigma_min_study, not run_replication");
  }
  const std::size_t l = config.n_layers;
  const CommunityStructure comm = synth::balanced_labels(n, config.r_communities);
  const DenseMatrix conn =
      block_probabilities(config.r_communities, config.conn_within, config.conn_between);
  const bool noisy = is_noisy(config.experiment);

  // Sample layers. The noisy experiments use the heterogeneous-layer
  // construction (layer 1 Uniform(1,2) weights, layer 2 rescaled Exp(1));
  // noiseless ones use Uniform(1,2) everywhere.
  std::vector<DenseMatrix> layers;
  layers.reserve(l);
  for (std::size_t ell = 0; ell < l; ++ell) {
    synth::SbmSpec spec;
    spec.n_nodes = n;
    spec.labels = comm;
    spec.conn_prob = conn;
    spec.weight_dist = (noisy && ell % 2 == 1) ? synth::WeightDist::ExpRescaled
                                               : synth::WeightDist::Uniform12;
    spec.seed = rng::derive_stream(config.master_seed, {n, rep_index, kRoleLayerBase + ell});
    layers.push_back(synth::sample_sbm_layer(spec));
  }
  const DenseMatrix b0 = assemble_supra(make_multiplex(std::move(layers)));
  const double a_n = config.a_n_rule.evaluate(n, l);

  // True centrality (and the gap, always measured on the noiseless matrix).
  const CentralityBundle truth = eigenvector_centrality(
      b0, n, l, a_n, kAutoGapTol, config.eig_tol, config.eig_max_iter);

  const DenseMatrix x = synth::sample_covariates(
      n, config.p_covariates,
      rng::derive_stream(config.master_seed, {n, rep_index, kRoleCovariates}));

  // The response always follows the true model (noiseless centrality).
  const std::uint64_t response_seed =
      rng::derive_stream(config.master_seed, {n, rep_index, kRoleResponse});
  std::vector<double> y;
  std::vector<double> true_z;
  if (is_community_model(config.experiment)) {
    true_z = community_centrality(truth.c, comm).z;
    y = synth::sample_response(x, column_matrix(true_z), config.true_beta.beta_x,
                               {config.true_beta.beta_z}, config.sigma_y, response_seed);
  } else {
    y = synth::sample_response(x, truth.c, config.true_beta.beta_x, config.true_beta.beta_c,
                               config.sigma_y, response_seed);
    if (config.experiment == ExperimentKind::RcfeComparison &&
        !config.true_beta.beta_s.empty()) {
      if (config.true_beta.beta_s.size() != config.r_communities) {
        throw DimensionMismatch("true_beta.beta_s must have one entry per community");
      }
      for (std::size_t i = 0; i < n; ++i) y[i] += config.true_beta.beta_s[comm.labels[i] - 1];
    }
  }

  // The fit uses estimated centrality: from the observed (perturbed) matrix
  // in the noisy experiments, from the true matrix otherwise.
  const DenseMatrix* c_hat = &truth.c;
  CentralityBundle observed;
  if (noisy) {
    NoiseSpec noise;
    noise.sigma_b = config.sigma_b;
    noise.structure = config.noise_structure;
    noise.seed = rng::derive_stream(config.master_seed, {n, rep_index, kRoleNoise});
    auto [b, e0] = perturb(b0, noise, n);
    observed = centrality_from_observed(b, n, l, a_n, config.eig_tol, config.eig_max_iter);
    c_hat = &observed.c;
  }

  ReplicationRecord record;
  record.gap = truth.gap;
  record.a_n = a_n;
  const auto push = [&record](const std::string& name, double value, double truth_value) {
    record.estimates.push_back({name, value, truth_value});
  };

  switch (config.experiment) {
    case ExperimentKind::CMnetrNoiseless:
    case ExperimentKind::CMnetrNoisy: {
      const RegressionFit fit = fit_cmnetr(x, *c_hat, y);
      for (std::size_t j = 0; j < fit.beta_x.size(); ++j)
        push("beta_x_" + std::to_string(j + 1), fit.beta_x[j], config.true_beta.beta_x[j]);
      for (std::size_t j = 0; j < fit.beta_net.size(); ++j)
        push("beta_c_" + std::to_string(j + 1), fit.beta_net[j], config.true_beta.beta_c[j]);
      break;
    }
    case ExperimentKind::CCMnetrNoiseless:
    case ExperimentKind::CCMnetrNoisy: {
      const std::vector<double> z_hat = community_centrality(*c_hat, comm).z;
      const RegressionFit fit = fit_ccmnetr(x, z_hat, y, config.true_beta.beta_z);
      for (std::size_t j = 0; j < fit.beta_x.size(); ++j)
        push("beta_x_" + std::to_string(j + 1), fit.beta_x[j], config.true_beta.beta_x[j]);
      push("beta_z", fit.beta_net.front(), config.true_beta.beta_z);
      record.z_stat = fit.z_stat_z;
      break;
    }
    case ExperimentKind::RcfeComparison: {
      const RegressionFit fit = fit_rcfe(x, *c_hat, comm.s, y);
      for (std::size_t j = 0; j < fit.beta_x.size(); ++j)
        push("beta_x_" + std::to_string(j + 1), fit.beta_x[j], config.true_beta.beta_x[j]);
      for (std::size_t j = 0; j < l; ++j)
        push("beta_c_" + std::to_string(j + 1), fit.beta_net[j], config.true_beta.beta_c[j]);
      for (std::size_t r = 0; r < config.r_communities; ++r) {
        const double truth_s =
            config.true_beta.beta_s.empty() ? 0.0 : config.true_beta.beta_s[r];
        push("beta_s_" + std::to_string(r + 1), fit.beta_net[l + r], truth_s);
      }
      break;
    }
    case ExperimentKind::SigmaMinStudy:
      break;  // unreachable; rejected above
  }
  return record;
}

std::size_t resolve_thread_count(std::size_t n_tasks) {
  std::size_t t = 0;
  if (const char* env = std::getenv("MLNETREG_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || parsed == 0) {
      throw InvalidArgument("MLNETREG_THREADS must be a positive integer");
    }
    t = parsed;
  } else {
    t = std::thread::hardware_concurrency();
  }
  if (t == 0) t = 1;
  return std::min(std::max<std::size_t>(t, 1), std::max<std::size_t>(n_tasks, 1));
}

SimulationReport run_experiment(const ExperimentConfig& config) {
  if (config.n_reps < 1) throw InvalidArgument("run_experiment: n_reps must be at least 1");
  if (config.experiment == ExperimentKind::SigmaMinStudy) {
    throw InvalidArgument("sigma-min runs through sigma_min_study, not run_experiment");
  }
  const auto t0 = std::chrono::steady_clock::now();

  SimulationReport report;
  report.config = config;
  for (const std::size_t n : config.n_values) {
    if (n <= config.p_covariates + config.n_layers) {
      throw InvalidArgument("run_experiment: N must exceed P + L");
    }
    std::vector<ReplicationRecord> records(config.n_reps);
    std::vector<char> ok(config.n_reps, 0);
    std::vector<std::string> errors(config.n_reps);

    const std::size_t n_threads = resolve_thread_count(config.n_reps);
    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= config.n_reps) return;
        try {
          records[i] = run_replication(config, n, i);
          ok[i] = 1;
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t + 1 < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    // Aggregation runs strictly in replication order, so the cell content
    // is independent of how the work was scheduled.
    ExperimentCell cell;
    cell.n = n;
    cell.a_n = config.a_n_rule.evaluate(n, config.n_layers);
    std::vector<std::size_t> good;
    for (std::size_t i = 0; i < config.n_reps; ++i) {
      if (ok[i]) {
        good.push_back(i);
      } else {
        ++cell.n_failed;
        if (cell.failure_messages.size() < 20) {
          cell.failure_messages.push_back("rep " + std::to_string(i) + ": " + errors[i]);
        }
      }
    }
    cell.n_success = good.size();
    if (good.empty()) {
      throw AllReplicationsFailed("all " + std::to_string(config.n_reps) +
                                  " replications failed at N=" + std::to_string(n) +
                                  "; first error: " + errors.front());
    }

    const std::vector<EstimateEntry>& schema = records[good.front()].estimates;
    for (std::size_t k = 0; k < schema.size(); ++k) {
      CoefficientStat stat;
      stat.name = schema[k].name;
      stat.truth = schema[k].truth;
      double sum = 0.0;
      for (const std::size_t i : good) sum += records[i].estimates[k].value;
      stat.mean = sum / static_cast<double>(good.size());
      double ss = 0.0, se = 0.0;
      for (const std::size_t i : good) {
        const double v = records[i].estimates[k].value;
        ss += (v - stat.mean) * (v - stat.mean);
        se += (v - stat.truth) * (v - stat.truth);
      }
      stat.sd = good.size() > 1 ? std::sqrt(ss / static_cast<double>(good.size() - 1)) : 0.0;
      stat.mse = se / static_cast<double>(good.size());
      cell.coefficients.push_back(std::move(stat));
    }
    cell.degenerate_sd = good.size() < 2;

    double gap_sum = 0.0, ratio_sum = 0.0;
    for (const std::size_t i : good) {
      gap_sum += records[i].gap;
      ratio_sum += records[i].a_n / records[i].gap;
    }
    cell.mean_gap = gap_sum / static_cast<double>(good.size());
    cell.mean_an_over_gap = ratio_sum / static_cast<double>(good.size());

    for (const std::size_t i : good) {
      if (records[i].z_stat.has_value()) cell.z_stats.push_back(*records[i].z_stat);
    }
    if (cell.z_stats.size() >= 10) {
      cell.qq = qq_data(cell.z_stats, 0.0, 1.0);
    } else {
      // Fall back to the first network coefficient, standardized by its
      // own sample moments.
      for (const CoefficientStat& stat : cell.coefficients) {
        if (stat.name.rfind("beta_x_", 0) == 0) continue;
        if (good.size() >= 10 && stat.sd > 0.0) {
          std::vector<double> values;
          values.reserve(good.size());
          for (const std::size_t i : good) {
            const auto& entries = records[i].estimates;
            for (const EstimateEntry& e : entries) {
              if (e.name == stat.name) values.push_back(e.value);
            }
          }
          cell.qq = qq_data(values, stat.mean, stat.sd);
        }
        break;
      }
    }
    report.cells.push_back(std::move(cell));
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::vector<SigmaMinRow> sigma_min_study(const ExperimentConfig& config) {
  std::vector<SigmaMinRow> rows;
  for (const std::size_t n : config.n_values) {
    for (const bool identical : {true, false}) {
      const std::uint64_t variant = identical ? kVariantIdentical : kVariantDifferent;
      const CommunityStructure comm = synth::balanced_labels(n, config.r_communities);
      const DenseMatrix p_first =
          block_probabilities(config.r_communities, config.conn_within, config.conn_between);
      // The contrast variant swaps in a flatter connection matrix for the
      // second layer (0.5 within, 0.25 between).
      const DenseMatrix p_second =
          identical ? p_first : block_probabilities(config.r_communities, 0.5, 0.25);

      std::vector<DenseMatrix> layers;
      for (std::size_t ell = 0; ell < config.n_layers; ++ell) {
        synth::SbmSpec spec;
        spec.n_nodes = n;
        spec.labels = comm;
        spec.conn_prob = ell == 0 ? p_first : p_second;
        spec.weight_dist = synth::WeightDist::Uniform12;
        spec.seed = rng::derive_stream(config.master_seed, {n, variant, kRoleLayerBase + ell});
        layers.push_back(synth::sample_sbm_layer(spec));
      }
      const DenseMatrix b0 = assemble_supra(make_multiplex(std::move(layers)));
      const CentralityBundle bundle = eigenvector_centrality(
          b0, n, config.n_layers, 1.0, kAutoGapTol, config.eig_tol, config.eig_max_iter);
      const DenseMatrix x = synth::sample_covariates(
          n, config.p_covariates,
          rng::derive_stream(config.master_seed, {n, variant, kRoleCovariates}));

      SigmaMinRow row;
      row.n = n;
      row.variant = identical ? "identical" : "different";
      row.sigma_min = linalg::smallest_singular_value_residual(x, bundle.v);
      row.scaled = row.sigma_min * std::sqrt(static_cast<double>(n));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<std::pair<double, double>> qq_data(const std::vector<double>& estimates,
                                               double center, double scale) {
  if (estimates.size() < 10) {
    throw InsufficientData("qq_data: need at least 10 estimates, got " +
                           std::to_string(estimates.size()));
  }
  if (!(scale > 0.0)) throw InvalidArgument("qq_data: scale must be positive");

  std::vector<double> standardized;
  standardized.reserve(estimates.size());
  for (double e : estimates) standardized.push_back((e - center) / scale);
  std::sort(standardized.begin(), standardized.end());

  const std::size_t n = standardized.size();
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    pairs.emplace_back(normal_quantile(p), standardized[i]);
  }
  return pairs;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidArgument("normal_quantile: p must lie strictly inside (0, 1)");
  }
  // Rational approximation in three regions, then one Halley step.
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double err = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = err * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

}  // namespace mlnetreg::simulation
