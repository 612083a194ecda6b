#include "structpca/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "structpca/registry.hpp"
#include "structpca/rng.hpp"
#include "structpca/version.hpp"

namespace structpca {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

double parse_number(const std::string& token, const std::string& context) {
  try {
    size_t pos = 0;
    const double v = std::stod(token, &pos);
    while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
    if (pos != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    raise(Errc::parse_error, context + ": cannot parse number '" + token + "'");
  }
}

json snr_to_json(double snr) {
  if (std::isinf(snr)) return json("inf");
  return json(snr);
}

double snr_from_json(const json& j) {
  if (j.is_string()) return snr_from_string(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  raise(Errc::parse_error, "snr must be a number or \"inf\"");
}

json labels_to_json(const std::vector<EquationLabel>& labels) {
  json arr = json::array();
  for (const auto& rec : labels) {
    json item;
    item["index"] = rec.sorted_index + 1;
    item["original_row"] = rec.original_row + 1;
    json phi = json::array();
    for (int v : rec.phi) phi.push_back(v + 1);
    json psi = json::array();
    for (int v : rec.psi) psi.push_back(v + 1);
    item["phi"] = phi;
    item["psi"] = psi;
    item["label"] = std::string(1, static_cast<char>(rec.label));
    arr.push_back(item);
  }
  return arr;
}

int default_runs_for_case(const std::string& case_name) {
  if (case_name == "flow-mix") return 1000;
  if (case_name == "cs1") return 500;
  if (case_name == "cs3") return 100;
  return 500;
}

ConstraintModel model_from_config(const json& cfg, std::string* case_name_out) {
  const bool has_case = cfg.contains("case");
  const bool has_model = cfg.contains("model");
  if (has_case == has_model) {
    raise(Errc::parse_error, "config needs exactly one of \"case\" or \"model\"");
  }
  if (has_case) {
    const auto name = cfg.at("case").get<std::string>();
    *case_name_out = name;
    return registry_lookup(name).model;
  }
  *case_name_out = "";
  Mat a = load_matrix_csv(cfg.at("model").get<std::string>());
  if (cfg.contains("mask")) {
    return make_model(std::move(a), load_mask(cfg.at("mask").get<std::string>()));
  }
  return make_model(std::move(a));
}

std::vector<Method> methods_from_config(const json& cfg) {
  std::vector<Method> methods;
  if (!cfg.contains("methods") || !cfg.at("methods").is_array() || cfg.at("methods").empty()) {
    raise(Errc::parse_error, "config requires a non-empty \"methods\" array");
  }
  for (const auto& item : cfg.at("methods")) {
    methods.push_back(method_from_name(item.get<std::string>()));
  }
  return methods;
}

}  // namespace

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::string snr_to_string(double snr) {
  if (std::isinf(snr)) return "inf";
  return format_double(snr);
}

double snr_from_string(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") {
    return std::numeric_limits<double>::infinity();
  }
  return parse_number(text, "snr");
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io_error, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) raise(Errc::io_error, "failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_error, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Mat load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<double> row;
    for (const auto& tok : split(line, ',')) {
      row.push_back(parse_number(tok, path + ":" + std::to_string(line_no)));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      raise(Errc::parse_error, path + ": inconsistent column count at line " +
                                   std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) raise(Errc::parse_error, path + ": no data rows");

  Mat a(static_cast<Eigen::Index>(rows.size()),
        static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  require_finite(a, path.c_str());
  return a;
}

void save_matrix_csv(const std::string& path, const Mat& a) {
  std::string out;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) out += ',';
      out += format_double(a(i, j));
    }
    out += '\n';
  }
  write_text_file(path, out);
}

StructureMask load_mask(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open '" + path + "'");
  std::vector<std::vector<uint8_t>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::stringstream ss(line);
    std::vector<uint8_t> row;
    std::string tok;
    while (ss >> tok) {
      if (tok == "0") {
        row.push_back(0);
      } else if (tok == "1") {
        row.push_back(1);
      } else {
        raise(Errc::parse_error, path + ":" + std::to_string(line_no) +
                                     ": mask tokens must be 0 or 1, got '" + tok + "'");
      }
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      raise(Errc::parse_error, path + ": inconsistent column count at line " +
                                   std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) raise(Errc::parse_error, path + ": empty mask file");

  std::vector<uint8_t> cells;
  cells.reserve(rows.size() * rows.front().size());
  for (const auto& row : rows) cells.insert(cells.end(), row.begin(), row.end());
  return StructureMask(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()),
                       std::move(cells));
}

void save_mask(const std::string& path, const StructureMask& mask) {
  std::string out;
  for (int i = 0; i < mask.rows(); ++i) {
    for (int j = 0; j < mask.cols(); ++j) {
      if (j) out += ' ';
      out += mask.at(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  write_text_file(path, out);
}

Mat load_data_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_error, "cannot open '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) raise(Errc::parse_error, path + ": empty file");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  const auto names = split(header, ',');
  for (size_t j = 0; j < names.size(); ++j) {
    if (names[j] != "v" + std::to_string(j + 1)) {
      raise(Errc::parse_error, path + ": expected header v1,...,vn, got '" + header + "'");
    }
  }
  const size_t n = names.size();

  std::vector<double> values;
  std::string line;
  size_t line_no = 1;
  size_t n_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = split(line, ',');
    if (toks.size() != n) {
      raise(Errc::parse_error, path + ": line " + std::to_string(line_no) + " has " +
                                   std::to_string(toks.size()) + " fields, expected " +
                                   std::to_string(n));
    }
    for (const auto& tok : toks) {
      values.push_back(parse_number(tok, path + ":" + std::to_string(line_no)));
    }
    ++n_rows;
  }
  if (n_rows == 0) raise(Errc::parse_error, path + ": no samples");

  // file rows are time samples; internal layout is variables x samples
  Mat y(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n_rows));
  for (size_t t = 0; t < n_rows; ++t) {
    for (size_t j = 0; j < n; ++j) {
      y(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) = values[t * n + j];
    }
  }
  require_finite(y, path.c_str());
  return y;
}

void save_data_csv(const std::string& path, const Mat& y) {
  std::string out;
  for (Eigen::Index j = 0; j < y.rows(); ++j) {
    if (j) out += ',';
    out += "v" + std::to_string(j + 1);
  }
  out += '\n';
  for (Eigen::Index t = 0; t < y.cols(); ++t) {
    for (Eigen::Index j = 0; j < y.rows(); ++j) {
      if (j) out += ',';
      out += format_double(y(j, t));
    }
    out += '\n';
  }
  write_text_file(path, out);
}

std::string theta_report_json(const ThetaReport& report) {
  json j;
  j["theta"] = report.theta;
  j["per_row"] = report.per_row;
  j["normalized"] = report.normalized;
  return j.dump(2) + "\n";
}

std::string fault_report_json(const FaultReport& report) {
  json j;
  j["tolerance"] = report.tolerance;
  j["n_flagged"] = report.flag_count();
  j["residuals"] = report.residuals;
  json flags = json::array();
  for (uint8_t f : report.flags) flags.push_back(f != 0);
  j["flags"] = flags;
  if (report.score) {
    j["score"] = {{"true_positive", report.score->true_positive},
                  {"false_positive", report.score->false_positive},
                  {"false_negative", report.score->false_negative}};
  }
  return j.dump(2) + "\n";
}

std::string fault_report_flags_csv(const FaultReport& report) {
  std::string out = "sample,flag\n";
  for (size_t t = 0; t < report.flags.size(); ++t) {
    out += std::to_string(t) + "," + (report.flags[t] ? "1" : "0") + "\n";
  }
  return out;
}

std::string identify_diagnostics_json(const IdentifyResult& result,
                                      const IdentifyOptions& opts) {
  json j;
  j["method"] = method_name(result.method);
  j["options"] = {{"rank_tol_rel", opts.rank_tol_rel},
                  {"center_data", opts.center_data}};
  if (opts.eig_tol > 0.0) j["options"]["eig_tol"] = opts.eig_tol;

  json perm = json::array();
  for (int v : result.permutation.order) perm.push_back(v + 1);
  j["processing_order"] = perm;

  json stages = json::array();
  for (const auto& stage : result.stages) {
    json s;
    s["stage"] = stage.stage;
    std::vector<double> ev(stage.eigenvalues.data(),
                           stage.eigenvalues.data() + stage.eigenvalues.size());
    s["eigenvalues"] = ev;
    stages.push_back(s);
  }
  j["stages"] = stages;
  if (!result.labels.empty()) j["labels"] = labels_to_json(result.labels);
  return j.dump(2) + "\n";
}

std::string provenance_json(const DataSet& data, const std::string& model_source,
                            const std::string& coeff_law) {
  json j;
  j["model_source"] = model_source;
  j["n_samples"] = data.y.cols();
  j["n_variables"] = data.y.rows();
  j["snr"] = snr_to_json(data.snr);
  j["sigma"] = data.sigma;
  j["seed"] = data.seed;
  j["coeff_law"] = coeff_law;
  j["rng"] = kRngAlgorithm;
  return j.dump(2) + "\n";
}

std::string results_long_csv(const ResultsTable& table) {
  std::string out = "method,snr,run,theta\n";
  for (const auto& cell : table.cells) {
    for (size_t run = 0; run < cell.theta.size(); ++run) {
      const double v = cell.theta[run];
      if (std::isnan(v)) continue;  // failed runs are reported in the envelope
      out += std::string(method_name(cell.method)) + "," + snr_to_string(cell.snr) + "," +
             std::to_string(run) + "," + format_double(v) + "\n";
    }
  }
  return out;
}

std::string results_summary_csv(const ResultsTable& table) {
  std::string out = "method,snr,mean_theta,std_theta,best_count\n";
  for (const auto& cell : table.cells) {
    out += std::string(method_name(cell.method)) + "," + snr_to_string(cell.snr) + "," +
           format_double(cell.mean_theta) + "," + format_double(cell.std_theta) + "," +
           std::to_string(cell.best_count) + "\n";
  }
  return out;
}

namespace {

json config_echo(const ExperimentConfig& config) {
  json j;
  if (!config.case_name.empty()) j["case"] = config.case_name;
  json methods = json::array();
  for (Method m : config.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  if (!config.known_rows.empty()) j["known_rows"] = config.known_rows;
  json grid = json::array();
  for (double snr : config.snr_grid) grid.push_back(snr_to_json(snr));
  j["snr_grid"] = grid;
  j["runs"] = config.runs;
  j["n_samples"] = config.n_samples;
  j["master_seed"] = config.master_seed;
  j["theta_normalize"] = config.theta_normalize;
  j["coeff_law"] =
      config.coeff_law == CoeffLaw::standard_normal ? "standard_normal" : "uniform_pm1";
  j["rank_tol_rel"] = config.id_opts.rank_tol_rel;
  j["center_data"] = config.id_opts.center_data;
  return j;
}

}  // namespace

std::string results_envelope_json(const ResultsTable& table) {
  json j;
  j["config"] = config_echo(table.config);
  j["versions"] = {{"structpca", kVersion}, {"format", 1}, {"rng", kRngAlgorithm}};

  json results = json::array();
  for (const auto& cell : table.cells) {
    json c;
    c["method"] = method_name(cell.method);
    c["snr"] = snr_to_json(cell.snr);
    c["mean_theta"] = cell.mean_theta;
    c["std_theta"] = cell.std_theta;
    c["best_count"] = cell.best_count;
    c["n_runs"] = cell.theta.size();
    c["n_failed"] = cell.n_failed;
    results.push_back(c);
  }
  j["results"] = results;

  json failures = json::array();
  for (const auto& f : table.failures) {
    failures.push_back({{"method", method_name(f.method)},
                        {"snr", snr_to_json(f.snr)},
                        {"run", f.run},
                        {"error", f.error}});
  }
  j["failures"] = failures;
  return j.dump(2) + "\n";
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json cfg;
  try {
    cfg = json::parse(json_text);
  } catch (const json::exception& e) {
    raise(Errc::parse_error, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    ExperimentConfig out;
    out.model = model_from_config(cfg, &out.case_name);
    out.methods = methods_from_config(cfg);
    if (cfg.contains("known_rows")) {
      out.known_rows = cfg.at("known_rows").get<std::vector<int>>();
    }
    if (cfg.contains("snr_grid")) {
      for (const auto& item : cfg.at("snr_grid")) out.snr_grid.push_back(snr_from_json(item));
    } else {
      out.snr_grid = {10, 20, 50, 100, 200, 500, 1000, 5000};
    }
    out.runs = cfg.value("runs", default_runs_for_case(out.case_name));
    out.n_samples = cfg.value("n_samples", 1000);
    out.master_seed = cfg.value("master_seed", static_cast<uint64_t>(0));
    out.theta_normalize = cfg.value("theta_normalize", false);
    out.threads = cfg.value("threads", 0);
    if (cfg.contains("coeff_law")) {
      const auto law = cfg.at("coeff_law").get<std::string>();
      if (law == "standard_normal") {
        out.coeff_law = CoeffLaw::standard_normal;
      } else if (law == "uniform_pm1") {
        out.coeff_law = CoeffLaw::uniform_pm1;
      } else {
        raise(Errc::parse_error, "unknown coeff_law '" + law + "'");
      }
    }
    out.id_opts.rank_tol_rel = cfg.value("rank_tol_rel", 0.1);
    out.id_opts.center_data = cfg.value("center_data", false);
    validate_config(out);
    return out;
  } catch (const json::exception& e) {
    raise(Errc::parse_error, std::string("bad config field: ") + e.what());
  }
}

FaultExperimentConfig parse_fault_config(const std::string& json_text) {
  json cfg;
  try {
    cfg = json::parse(json_text);
  } catch (const json::exception& e) {
    raise(Errc::parse_error, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    FaultExperimentConfig out;
    std::string case_name;
    ConstraintModel model = model_from_config(cfg, &case_name);
    out.mask = model.mask;
    out.model = std::move(model);
    out.methods = methods_from_config(cfg);
    if (cfg.contains("known_rows")) {
      out.known_rows = cfg.at("known_rows").get<std::vector<int>>();
    }
    out.snr = cfg.contains("snr") ? snr_from_json(cfg.at("snr")) : 1000.0;
    out.n_samples = cfg.value("n_samples", 1000);
    out.n_faulty = cfg.value("n_faulty", 50);
    out.runs = cfg.value("runs", 100);
    out.seed = cfg.value("seed", static_cast<uint64_t>(0));
    out.tolerance = cfg.value("tolerance", 1.0);
    if (cfg.contains("magnitude")) {
      const auto& mag = cfg.at("magnitude");
      const auto law = mag.at("law").get<std::string>();
      if (law == "constant") {
        out.magnitude.kind = MagnitudeLaw::Kind::constant;
      } else if (law == "uniform_scaled") {
        out.magnitude.kind = MagnitudeLaw::Kind::uniform_channel_scaled;
      } else {
        raise(Errc::parse_error, "unknown magnitude law '" + law + "'");
      }
      out.magnitude.value = mag.at("value").get<double>();
    }
    if (cfg.contains("residual_norm")) {
      const auto norm = cfg.at("residual_norm").get<std::string>();
      if (norm == "l1") {
        out.norm = ResidualNorm::l1;
      } else if (norm == "l2") {
        out.norm = ResidualNorm::l2;
      } else {
        raise(Errc::parse_error, "residual_norm must be l1 or l2");
      }
    }
    out.id_opts.rank_tol_rel = cfg.value("rank_tol_rel", 0.1);
    out.id_opts.center_data = cfg.value("center_data", false);
    return out;
  } catch (const json::exception& e) {
    raise(Errc::parse_error, std::string("bad config field: ") + e.what());
  }
}

std::string fault_result_json(const FaultExperimentConfig& config,
                              const FaultExperimentResult& result) {
  json j;
  json cfg;
  json methods = json::array();
  for (Method m : config.methods) methods.push_back(method_name(m));
  cfg["methods"] = methods;
  cfg["snr"] = snr_to_json(config.snr);
  cfg["n_samples"] = config.n_samples;
  cfg["n_faulty"] = config.n_faulty;
  cfg["runs"] = config.runs;
  cfg["seed"] = config.seed;
  cfg["tolerance"] = config.tolerance;
  cfg["magnitude"] = {
      {"law", config.magnitude.kind == MagnitudeLaw::Kind::constant ? "constant"
                                                                     : "uniform_scaled"},
      {"value", config.magnitude.value}};
  cfg["residual_norm"] = config.norm == ResidualNorm::l1 ? "l1" : "l2";
  j["config"] = cfg;

  j["n_injected"] = result.n_injected;
  j["oracle_count"] = result.oracle_count;
  json counts;
  json theta;
  for (const auto& [method, count] : result.counts) counts[method_name(method)] = count;
  for (const auto& [method, value] : result.theta) {
    if (std::isnan(value)) {
      theta[method_name(method)] = nullptr;
    } else {
      theta[method_name(method)] = value;
    }
  }
  j["counts"] = counts;
  j["theta_of_averaged"] = theta;
  return j.dump(2) + "\n";
}

}  // namespace structpca
