// Command-line front end: simulation harness, centrality and regression
// runs on files, multicollinearity screening, and the input-output-table
// pipeline. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlnetreg/centrality.hpp"
#include "mlnetreg/errors.hpp"
#include "mlnetreg/io.hpp"
#include "mlnetreg/regression.hpp"
#include "mlnetreg/simulation.hpp"
#include "mlnetreg/wiod.hpp"

namespace {

using namespace mlnetreg;

void emit(const nlohmann::json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    io::write_text_file(out_path, text);
  }
}

struct SimulateArgs {
  std::string experiment = "ccmnetr-noiseless";
  std::vector<std::size_t> n_list;
  std::size_t reps = 0;
  std::uint64_t seed = 1;
  std::string a_n = "sqrt-n";
  double sigma_b = 0.25;
  double sigma_y = 1.0;
  double eig_tol = 1e-8;
  std::string noise = "block-diagonal";
  bool full_grid = false;
  std::string out = "report.json";
};

int run_simulate(const SimulateArgs& args) {
  simulation::ExperimentConfig config;
  config.experiment = simulation::parse_experiment(args.experiment);
  config.a_n_rule = simulation::AnRule::parse(args.a_n);
  config.master_seed = args.seed;
  config.sigma_b = args.sigma_b;
  config.sigma_y = args.sigma_y;
  config.eig_tol = args.eig_tol;
  if (args.noise == "full-symmetric") {
    config.noise_structure = NoiseStructure::FullSymmetric;
  } else if (args.noise == "block-diagonal") {
    config.noise_structure = NoiseStructure::BlockDiagonal;
  } else {
    throw InvalidArgument("unknown noise structure '" + args.noise + "'");
  }
  if (args.full_grid) {
    config.n_values = {100, 200, 500, 1000};
    config.n_reps = 1000;
  }
  if (!args.n_list.empty()) config.n_values = args.n_list;
  if (args.reps > 0) config.n_reps = args.reps;

  if (config.experiment == simulation::ExperimentKind::SigmaMinStudy) {
    const auto rows = simulation::sigma_min_study(config);
    emit(io::sigma_min_json(config, rows), args.out);
    return 0;
  }
  const simulation::SimulationReport report = simulation::run_experiment(config);
  std::cerr << "simulate: " << report.cells.size() << " cell(s) in " << report.wall_seconds
            << " s\n";
  emit(io::report_json(report), args.out);
  return 0;
}

struct NetworkArgs {
  std::string path;
  std::string format = "edge-list";
  std::size_t n_nodes = 0;
  std::size_t n_layers = 0;
};

DenseMatrix load_supra(const NetworkArgs& args) {
  return io::load_network(args.path, io::parse_network_format(args.format), args.n_nodes,
                          args.n_layers)
      .supra;
}

void add_network_options(CLI::App* cmd, NetworkArgs& args) {
  cmd->add_option("--network", args.path, "network file")->required();
  cmd->add_option("--format", args.format, "edge-list or dense");
  cmd->add_option("--n", args.n_nodes, "number of nodes per layer")->required();
  cmd->add_option("--layers", args.n_layers, "number of layers")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multilayer-network centrality and regression toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand("simulate", "run a seeded Monte Carlo experiment");
  simulate->add_option("--experiment", sim.experiment,
                       "cmnetr-noiseless | ccmnetr-noiseless | cmnetr-noisy | ccmnetr-noisy | "
                       "rcfe-comparison | sigma-min");
  simulate->add_option("--n-list", sim.n_list, "network sizes to sweep");
  simulate->add_option("--reps", sim.reps, "replications per size");
  simulate->add_option("--seed", sim.seed, "master seed");
  simulate->add_option("--a-n", sim.a_n, "scale rule: sqrt-n | n | sqrt-nl | pow:<e> | fixed:<v>");
  simulate->add_option("--sigma-b", sim.sigma_b, "network noise level");
  simulate->add_option("--sigma-y", sim.sigma_y, "response noise level");
  simulate->add_option("--eig-tol", sim.eig_tol, "eigensolver tolerance");
  simulate->add_option("--noise", sim.noise,
                       "block-diagonal (per-layer, default) or full-symmetric");
  simulate->add_flag("--full-grid", sim.full_grid,
                     "use the full grid (N up to 1000, 1000 replications)");
  simulate->add_option("--out", sim.out, "report path (default report.json)");

  NetworkArgs cent_net;
  std::string cent_comm, cent_an = "sqrt-n", cent_out;
  CLI::App* centrality_cmd = app.add_subcommand("centrality", "spectral centrality of a network");
  add_network_options(centrality_cmd, cent_net);
  centrality_cmd->add_option("--communities", cent_comm, "community CSV (adds Z to the report)");
  centrality_cmd->add_option("--a-n", cent_an, "scale rule");
  centrality_cmd->add_option("--out", cent_out, "output path (default stdout)");

  NetworkArgs fit_net;
  std::string fit_model, fit_cov, fit_resp, fit_comm, fit_an = "sqrt-n", fit_out;
  double fit_z_null = 0.0;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit a centrality regression on files");
  fit_cmd->add_option("--model", fit_model, "cmnetr | ccmnetr | rcfe")->required();
  add_network_options(fit_cmd, fit_net);
  fit_cmd->add_option("--covariates", fit_cov, "covariate CSV")->required();
  fit_cmd->add_option("--response", fit_resp, "response CSV")->required();
  fit_cmd->add_option("--communities", fit_comm, "community CSV (ccmnetr and rcfe)");
  fit_cmd->add_option("--a-n", fit_an, "scale rule");
  fit_cmd->add_option("--z-null", fit_z_null, "null value for the z statistic (ccmnetr)");
  fit_cmd->add_option("--out", fit_out, "output path (default stdout)");

  std::string vif_cov, vif_out;
  CLI::App* vif_cmd = app.add_subcommand("vif", "variance inflation factors of a covariate CSV");
  vif_cmd->add_option("--covariates", vif_cov, "covariate CSV")->required();
  vif_cmd->add_option("--out", vif_out, "output path (default stdout)");

  NetworkArgs diag_net;
  std::string diag_cov, diag_comm, diag_an = "sqrt-n", diag_out;
  CLI::App* diag_cmd = app.add_subcommand("diagnose", "identification diagnostics for a dataset");
  add_network_options(diag_cmd, diag_net);
  diag_cmd->add_option("--covariates", diag_cov, "covariate CSV")->required();
  diag_cmd->add_option("--communities", diag_comm,
                       "community CSV (defaults to one global community)");
  diag_cmd->add_option("--a-n", diag_an, "scale rule");
  diag_cmd->add_option("--out", diag_out, "output path (default stdout)");

  std::string w_flows, w_cov, w_resp, w_resp_col, w_comm, w_scale = "global", w_out;
  std::size_t w_n = 0, w_layers = 0;
  double w_vif = 5.0;
  CLI::App* wiod_cmd =
      app.add_subcommand("wiod", "input-output-table pipeline (symmetrize, scale, screen, fit)");
  wiod_cmd->add_option("--flows", w_flows, "raw flow matrix (dense grid, NL x NL)")->required();
  wiod_cmd->add_option("--n", w_n, "sectors per layer")->required();
  wiod_cmd->add_option("--layers", w_layers, "layers (countries)")->required();
  wiod_cmd->add_option("--covariates", w_cov, "sector covariate CSV")->required();
  wiod_cmd->add_option("--response", w_resp, "response CSV");
  wiod_cmd->add_option("--response-col", w_resp_col,
                       "use this covariate column as the response instead");
  wiod_cmd->add_option("--communities", w_comm, "sector community CSV")->required();
  wiod_cmd->add_option("--vif-threshold", w_vif, "drop covariates while any VIF exceeds this");
  wiod_cmd->add_option("--scale", w_scale, "global or per-block [0,2] scaling");
  wiod_cmd->add_option("--out", w_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return run_simulate(sim);

    if (centrality_cmd->parsed()) {
      const DenseMatrix supra = load_supra(cent_net);
      const simulation::AnRule rule = simulation::AnRule::parse(cent_an);
      const CentralityBundle bundle =
          eigenvector_centrality(supra, cent_net.n_nodes, cent_net.n_layers,
                                 rule.evaluate(cent_net.n_nodes, cent_net.n_layers));
      std::vector<double> z;
      const std::vector<double>* z_ptr = nullptr;
      if (!cent_comm.empty()) {
        const CommunityStructure comm = io::load_communities(cent_comm);
        z = community_centrality(bundle.c, comm).z;
        z_ptr = &z;
      }
      emit(io::bundle_json(bundle, z_ptr), cent_out);
      return 0;
    }

    if (fit_cmd->parsed()) {
      const DenseMatrix supra = load_supra(fit_net);
      const simulation::AnRule rule = simulation::AnRule::parse(fit_an);
      const CentralityBundle bundle =
          eigenvector_centrality(supra, fit_net.n_nodes, fit_net.n_layers,
                                 rule.evaluate(fit_net.n_nodes, fit_net.n_layers));
      const io::Table cov = io::load_csv_table(fit_cov);
      const auto [resp_name, y] = io::load_response(fit_resp);
      std::vector<std::string> names = cov.names;

      RegressionFit fit;
      if (fit_model == "cmnetr") {
        fit = fit_cmnetr(cov.values, bundle.c, y);
        for (std::size_t l = 1; l <= fit_net.n_layers; ++l)
          names.push_back("c_" + std::to_string(l));
      } else if (fit_model == "ccmnetr" || fit_model == "rcfe") {
        if (fit_comm.empty()) {
          throw InvalidArgument("--communities is required for model '" + fit_model + "'");
        }
        const CommunityStructure comm = io::load_communities(fit_comm);
        if (fit_model == "ccmnetr") {
          const std::vector<double> z = community_centrality(bundle.c, comm).z;
          fit = fit_ccmnetr(cov.values, z, y, fit_z_null);
          names.push_back("z");
        } else {
          fit = fit_rcfe(cov.values, bundle.c, comm.s, y);
          for (std::size_t l = 1; l <= fit_net.n_layers; ++l)
            names.push_back("c_" + std::to_string(l));
          for (std::size_t r = 1; r <= comm.n_communities; ++r)
            names.push_back("s_" + std::to_string(r));
        }
      } else {
        throw InvalidArgument("unknown model '" + fit_model +
                              "' (expected cmnetr, ccmnetr or rcfe)");
      }
      emit(io::fit_json(fit, names), fit_out);
      return 0;
    }

    if (vif_cmd->parsed()) {
      const io::Table cov = io::load_csv_table(vif_cov);
      const std::vector<double> factors = vif(cov.values);
      nlohmann::json j;
      nlohmann::json rows = nlohmann::json::array();
      for (std::size_t i = 0; i < factors.size(); ++i) {
        rows.push_back(nlohmann::json{{"name", cov.names[i]}, {"vif", factors[i]}});
      }
      j["vifs"] = std::move(rows);
      emit(j, vif_out);
      return 0;
    }

    if (diag_cmd->parsed()) {
      const DenseMatrix supra = load_supra(diag_net);
      const io::Table cov = io::load_csv_table(diag_cov);
      const simulation::AnRule rule = simulation::AnRule::parse(diag_an);
      const double a_n = rule.evaluate(diag_net.n_nodes, diag_net.n_layers);
      const CentralityBundle bundle =
          eigenvector_centrality(supra, diag_net.n_nodes, diag_net.n_layers, a_n);
      CommunityStructure comm;
      if (diag_comm.empty()) {
        comm = community_structure_from_labels(
            std::vector<std::size_t>(diag_net.n_nodes, 1), 1);
      } else {
        comm = io::load_communities(diag_comm);
      }
      const AssumptionDiagnostics diag =
          assumption_diagnostics(supra, cov.values, bundle.v, comm, a_n);
      emit(io::diagnostics_json(diag), diag_out);
      return 0;
    }

    if (wiod_cmd->parsed()) {
      if (w_resp.empty() == w_resp_col.empty()) {
        throw InvalidArgument("provide exactly one of --response and --response-col");
      }
      wiod::DatasetBundle bundle;
      bundle.flows = io::load_dense_grid(w_flows);
      bundle.n_nodes = w_n;
      bundle.n_layers = w_layers;
      bundle.communities = io::load_communities(w_comm);
      const io::Table cov = io::load_csv_table(w_cov);
      bundle.provenance = {"flows: " + w_flows, "covariates: " + w_cov,
                           "communities: " + w_comm};
      if (!w_resp.empty()) {
        auto [name, y] = io::load_response(w_resp);
        bundle.response_name = std::move(name);
        bundle.response = std::move(y);
        bundle.covariate_names = cov.names;
        bundle.covariates = cov.values;
        bundle.provenance.push_back("response: " + w_resp);
      } else {
        std::size_t target = cov.names.size();
        for (std::size_t j = 0; j < cov.names.size(); ++j) {
          if (cov.names[j] == w_resp_col) target = j;
        }
        if (target == cov.names.size()) {
          throw InvalidArgument("response column '" + w_resp_col + "' not found");
        }
        bundle.response_name = w_resp_col;
        bundle.response.resize(cov.values.rows());
        for (std::size_t i = 0; i < cov.values.rows(); ++i) {
          bundle.response[i] = cov.values.at(i, target);
        }
        bundle.covariates = DenseMatrix(cov.values.rows(), cov.names.size() - 1);
        for (std::size_t j = 0; j < cov.names.size(); ++j) {
          if (j == target) continue;
          const std::size_t col = j < target ? j : j - 1;
          bundle.covariate_names.push_back(cov.names[j]);
          for (std::size_t i = 0; i < cov.values.rows(); ++i) {
            bundle.covariates(i, col) = cov.values.at(i, j);
          }
        }
        bundle.provenance.push_back("response column: " + w_resp_col);
      }
      wiod::ScaleMode mode;
      if (w_scale == "global") {
        mode = wiod::ScaleMode::Global;
      } else if (w_scale == "per-block") {
        mode = wiod::ScaleMode::PerBlock;
      } else {
        throw InvalidArgument("unknown scale mode '" + w_scale +
                              "' (expected global or per-block)");
      }
      const wiod::WiodResult result = wiod::wiod_pipeline(bundle, w_vif, mode);
      emit(io::wiod_json(result), w_out);
      return 0;
    }

    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
