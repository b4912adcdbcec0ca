#include "mlnetreg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mlnetreg/errors.hpp"

namespace mlnetreg::io {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

/// Splits on commas when present, else on runs of whitespace.
std::vector<std::string> split_fields(const std::string& line) {
  if (line.find(',') != std::string::npos) return split(line, ',');
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& text, const std::string& path, std::size_t line_no) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v)) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": '" + text +
                     "' is not a finite number");
  }
  return v;
}

std::size_t parse_index(const std::string& text, const std::string& path, std::size_t line_no) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || v == 0) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": '" + text +
                     "' is not a positive integer");
  }
  return static_cast<std::size_t>(v);
}

std::vector<std::pair<std::size_t, std::string>> read_data_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    lines.emplace_back(line_no, line);
  }
  return lines;
}

void append_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

nlohmann::json matrix_json(const DenseMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json pairs_json(const std::vector<std::pair<double, double>>& pairs) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [a, b] : pairs) out.push_back(nlohmann::json::array({a, b}));
  return out;
}

}  // namespace

NetworkFormat parse_network_format(const std::string& text) {
  if (text == "edge-list") return NetworkFormat::EdgeList;
  if (text == "dense") return NetworkFormat::DenseSupra;
  throw InvalidArgument("unknown network format '" + text + "' (expected edge-list or dense)");
}

DenseMatrix load_dense_grid(const std::string& path) {
  const auto lines = read_data_lines(path);
  if (lines.empty()) throw ParseError(path + ": no data lines");
  const std::size_t cols = split_fields(lines.front().second).size();
  DenseMatrix m(lines.size(), cols);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& [line_no, line] = lines[i];
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != cols) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " values, got " + std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_double(fields[j], path, line_no);
  }
  return m;
}

LoadedNetwork load_network(const std::string& path, NetworkFormat format, std::size_t n_nodes,
                           std::size_t n_layers) {
  if (n_nodes == 0 || n_layers == 0) {
    throw InvalidArgument("load_network: node and layer counts must be positive");
  }
  const std::size_t dim = n_nodes * n_layers;
  LoadedNetwork net;
  net.n_nodes = n_nodes;
  net.n_layers = n_layers;

  if (format == NetworkFormat::DenseSupra) {
    net.supra = load_dense_grid(path);
    if (net.supra.rows() != dim || net.supra.cols() != dim) {
      throw DimensionMismatch(path + ": grid is " + std::to_string(net.supra.rows()) + "x" +
                              std::to_string(net.supra.cols()) + ", expected " +
                              std::to_string(dim) + "x" + std::to_string(dim));
    }
    net.supra.mark_symmetric();
    return net;
  }

  const auto lines = read_data_lines(path);
  if (lines.empty()) throw ParseError(path + ": no data lines");
  net.supra = DenseMatrix(dim, dim);
  std::vector<char> assigned(dim * dim, 0);
  for (const auto& [line_no, line] : lines) {
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 5) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected node_i,layer_i,node_j,layer_j,weight");
    }
    const std::size_t node_i = parse_index(fields[0], path, line_no);
    const std::size_t layer_i = parse_index(fields[1], path, line_no);
    const std::size_t node_j = parse_index(fields[2], path, line_no);
    const std::size_t layer_j = parse_index(fields[3], path, line_no);
    const double weight = parse_double(fields[4], path, line_no);
    if (node_i > n_nodes || node_j > n_nodes) {
      throw IndexOutOfRange(path + ":" + std::to_string(line_no) + ": node index exceeds N=" +
                            std::to_string(n_nodes));
    }
    if (layer_i > n_layers || layer_j > n_layers) {
      throw IndexOutOfRange(path + ":" + std::to_string(line_no) + ": layer index exceeds L=" +
                            std::to_string(n_layers));
    }
    const std::size_t a = (layer_i - 1) * n_nodes + (node_i - 1);
    const std::size_t b = (layer_j - 1) * n_nodes + (node_j - 1);
    if (assigned[a * dim + b] && net.supra.at(a, b) != weight) {
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": conflicting weight for an already-set edge");
    }
    net.supra(a, b) = weight;
    net.supra(b, a) = weight;
    assigned[a * dim + b] = 1;
    assigned[b * dim + a] = 1;
  }
  net.supra.mark_symmetric();
  return net;
}

Table load_csv_table(const std::string& path) {
  const auto lines = read_data_lines(path);
  if (lines.size() < 2) throw ParseError(path + ": need a header line and at least one row");
  Table table;
  table.names = split(lines.front().second, ',');
  const std::size_t cols = table.names.size();
  table.values = DenseMatrix(lines.size() - 1, cols);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [line_no, line] = lines[i];
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != cols) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " fields, got " + std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < cols; ++j)
      table.values(i - 1, j) = parse_double(fields[j], path, line_no);
  }
  return table;
}

std::pair<std::string, std::vector<double>> load_response(const std::string& path) {
  const Table table = load_csv_table(path);
  if (table.names.size() != 1) {
    throw ParseError(path + ": response file must have exactly one column, got " +
                     std::to_string(table.names.size()));
  }
  std::vector<double> values(table.values.rows());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = table.values.at(i, 0);
  return {table.names.front(), std::move(values)};
}

CommunityStructure load_communities(const std::string& path) {
  const auto lines = read_data_lines(path);
  if (lines.size() < 2) throw ParseError(path + ": need a header line and at least one row");
  const std::size_t cols = split(lines.front().second, ',').size();
  if (cols != 1 && cols != 2) {
    throw ParseError(path + ": expected one label column or (node, label) pairs");
  }
  std::vector<std::size_t> labels;
  labels.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [line_no, line] = lines[i];
    const std::vector<std::string> fields = split(line, ',');
    if (fields.size() != cols) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " fields");
    }
    if (cols == 2) {
      const std::size_t node = parse_index(fields[0], path, line_no);
      if (node != i) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": node ids must run 1..N " +
                         "in order; got " + std::to_string(node));
      }
    }
    labels.push_back(parse_index(fields.back(), path, line_no));
  }
  return community_structure_from_labels(std::move(labels));
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw ParseError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string supra_to_csv(const DenseMatrix& m) {
  std::string out;
  out.reserve(m.rows() * m.cols() * 8);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out.push_back(',');
      append_number(out, m.at(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

nlohmann::json config_json(const simulation::ExperimentConfig& config) {
  nlohmann::json j;
  j["experiment"] = simulation::experiment_name(config.experiment);
  j["n_values"] = config.n_values;
  j["a_n_rule"] = config.a_n_rule.name();
  j["n_reps"] = config.n_reps;
  j["sigma_b"] = config.sigma_b;
  j["sigma_y"] = config.sigma_y;
  j["master_seed"] = config.master_seed;
  j["n_layers"] = config.n_layers;
  j["p_covariates"] = config.p_covariates;
  j["r_communities"] = config.r_communities;
  j["conn_within"] = config.conn_within;
  j["conn_between"] = config.conn_between;
  j["noise_structure"] =
      config.noise_structure == NoiseStructure::FullSymmetric ? "full-symmetric" : "block-diagonal";
  j["eig_tol"] = config.eig_tol;
  j["eig_max_iter"] = config.eig_max_iter;
  nlohmann::json beta;
  beta["beta_x"] = config.true_beta.beta_x;
  beta["beta_c"] = config.true_beta.beta_c;
  beta["beta_z"] = config.true_beta.beta_z;
  beta["beta_s"] = config.true_beta.beta_s;
  j["true_beta"] = std::move(beta);
  return j;
}

nlohmann::json report_json(const simulation::SimulationReport& report) {
  nlohmann::json j;
  j["config"] = config_json(report.config);
  nlohmann::json cells = nlohmann::json::array();
  for (const simulation::ExperimentCell& cell : report.cells) {
    nlohmann::json c;
    c["n"] = cell.n;
    c["a_n"] = cell.a_n;
    c["n_success"] = cell.n_success;
    c["n_failed"] = cell.n_failed;
    c["failure_messages"] = cell.failure_messages;
    c["mean_gap"] = cell.mean_gap;
    c["mean_an_over_gap"] = cell.mean_an_over_gap;
    c["degenerate_sd"] = cell.degenerate_sd;
    nlohmann::json coeffs = nlohmann::json::array();
    for (const simulation::CoefficientStat& stat : cell.coefficients) {
      nlohmann::json s;
      s["name"] = stat.name;
      s["true"] = stat.truth;
      s["mean"] = stat.mean;
      s["sd"] = stat.sd;
      s["mse"] = stat.mse;
      coeffs.push_back(std::move(s));
    }
    c["coefficients"] = std::move(coeffs);
    c["z_stats"] = cell.z_stats;
    c["qq"] = pairs_json(cell.qq);
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  return j;
}

nlohmann::json sigma_min_json(const simulation::ExperimentConfig& config,
                              const std::vector<simulation::SigmaMinRow>& rows) {
  nlohmann::json j;
  j["config"] = config_json(config);
  nlohmann::json out = nlohmann::json::array();
  for (const simulation::SigmaMinRow& row : rows) {
    nlohmann::json r;
    r["n"] = row.n;
    r["variant"] = row.variant;
    r["sigma_min"] = row.sigma_min;
    r["sigma_min_times_sqrt_n"] = row.scaled;
    out.push_back(std::move(r));
  }
  j["rows"] = std::move(out);
  return j;
}

nlohmann::json bundle_json(const CentralityBundle& bundle, const std::vector<double>* z) {
  nlohmann::json j;
  j["lambda1"] = bundle.lambda1;
  j["lambda2"] = bundle.lambda2;
  j["gap"] = bundle.gap;
  j["a_n"] = bundle.a_n;
  j["iterations"] = bundle.iterations;
  j["v"] = matrix_json(bundle.v);
  j["c"] = matrix_json(bundle.c);
  if (z != nullptr) j["z"] = *z;
  return j;
}

nlohmann::json fit_json(const RegressionFit& fit, const std::vector<std::string>& design_names) {
  nlohmann::json j;
  switch (fit.model) {
    case ModelKind::CMNetR: j["model"] = "cmnetr"; break;
    case ModelKind::CCMNetR: j["model"] = "ccmnetr"; break;
    case ModelKind::RCFE: j["model"] = "rcfe"; break;
  }
  j["beta_x"] = fit.beta_x;
  j["beta_net"] = fit.beta_net;
  j["sigma2_hat"] = fit.sigma2_hat;
  j["std_errors"] = fit.std_errors;
  j["r_squared"] = fit.r_squared;
  j["rss"] = fit.rss;
  j["n_obs"] = fit.n_obs;
  if (fit.z_stat_z.has_value()) j["z_stat_z"] = *fit.z_stat_z;
  if (!design_names.empty()) j["design"] = design_names;
  return j;
}

nlohmann::json diagnostics_json(const AssumptionDiagnostics& diag) {
  nlohmann::json j;
  j["sigma_min_residual"] = diag.sigma_min_residual;
  j["min_community_share"] = diag.min_community_share;
  j["centrality_mass_ratio"] = diag.centrality_mass_ratio;
  j["lambda1"] = diag.lambda1;
  j["lambda2"] = diag.lambda2;
  j["gap"] = diag.gap;
  j["an_over_gap"] = diag.an_over_gap;
  return j;
}

nlohmann::json wiod_json(const wiod::WiodResult& result) {
  nlohmann::json j;
  j["fit"] = fit_json(result.fit, result.design_names);
  j["surviving"] = result.surviving;
  j["dropped"] = result.dropped;
  nlohmann::json initial = nlohmann::json::array();
  for (const auto& [name, value] : result.initial_vifs) {
    initial.push_back(nlohmann::json{{"name", name}, {"vif", value}});
  }
  j["initial_vifs"] = std::move(initial);
  nlohmann::json final_v = nlohmann::json::array();
  for (const auto& [name, value] : result.final_vifs) {
    final_v.push_back(nlohmann::json{{"name", name}, {"vif", value}});
  }
  j["final_vifs"] = std::move(final_v);
  j["f_stat"] = result.f_stat;
  j["f_df"] = nlohmann::json::array({result.f_df.first, result.f_df.second});
  j["r_squared_without_z"] = result.r_squared_without_z;
  j["r_squared_with_z"] = result.r_squared_with_z;
  j["lambda1"] = result.lambda1;
  j["lambda2"] = result.lambda2;
  j["gap"] = result.gap;
  j["a_n"] = result.a_n;
  j["sigma_min"] = result.sigma_min;
  j["z"] = result.z;
  return j;
}

}  // namespace mlnetreg::io
