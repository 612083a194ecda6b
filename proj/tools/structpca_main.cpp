// Command-line front end. Links only the C API of libstructpca.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "structpca/structpca.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int exit_code_for(spca_status status) {
  switch (status) {
    case SPCA_ERR_PARSE:
    case SPCA_ERR_UNKNOWN_CASE:
    case SPCA_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

[[noreturn]] void die(spca_status status) {
  std::cerr << "error: " << spca_status_name(status) << ": " << spca_last_error() << "\n";
  std::exit(exit_code_for(status));
}

void check(spca_status status) {
  if (status != SPCA_OK) die(status);
}

struct MatDeleter {
  void operator()(spca_mat* m) const { spca_mat_destroy(m); }
};
struct MaskDeleter {
  void operator()(spca_mask* m) const { spca_mask_destroy(m); }
};
struct ResultDeleter {
  void operator()(spca_result* r) const { spca_result_destroy(r); }
};
struct TableDeleter {
  void operator()(spca_table* t) const { spca_table_destroy(t); }
};

using MatPtr = std::unique_ptr<spca_mat, MatDeleter>;
using MaskPtr = std::unique_ptr<spca_mask, MaskDeleter>;
using ResultPtr = std::unique_ptr<spca_result, ResultDeleter>;
using TablePtr = std::unique_ptr<spca_table, TableDeleter>;

double parse_snr(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    std::cerr << "error: cannot parse --snr value '" << text << "'\n";
    std::exit(kExitUsage);
  }
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else {
      out += c;
    }
  }
  return out;
}

std::string format_double17(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot open '" << path << "' for writing\n";
    std::exit(kExitRuntime);
  }
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    std::exit(kExitUsage);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sibling_path(const std::string& out_path, const std::string& suffix) {
  std::filesystem::path p(out_path);
  p.replace_extension(suffix);
  return p.string();
}

// ---- subcommand state -------------------------------------------------------

struct GenerateArgs {
  std::string case_name;
  std::string model_path;
  int n_samples = 1000;
  std::string snr = "inf";
  uint64_t seed = 0;
  std::string out = "data.csv";
};

struct IdentifyArgs {
  std::string method;
  std::string data_path;
  std::string mask_path;
  std::string known_path;
  int m = 0;
  std::string out = "model_est.csv";
  double rank_tol_rel = 0.1;
  double eig_tol = -1.0;
  bool center = false;
};

struct EvaluateArgs {
  std::string true_path;
  std::string case_name;
  std::string est_path;
  bool normalize = false;
};

struct SweepArgs {
  std::string config_path;
  std::string out_dir = ".";
  int threads = -1;  // -1: leave to the config
};

struct FaultArgs {
  std::string config_path;
  std::string out;
};

int run_generate(const GenerateArgs& args) {
  MatPtr model;
  std::string source;
  if (!args.case_name.empty()) {
    spca_mat* raw = nullptr;
    check(spca_case_model(args.case_name.c_str(), &raw));
    model.reset(raw);
    source = "case:" + args.case_name;
  } else {
    spca_mat* raw = nullptr;
    check(spca_mat_load_csv(args.model_path.c_str(), &raw));
    model.reset(raw);
    source = "file:" + args.model_path;
  }

  const double snr = parse_snr(args.snr);
  spca_mat* y_raw = nullptr;
  double sigma = 0.0;
  check(spca_generate(model.get(), args.n_samples, snr, args.seed, &y_raw, &sigma));
  MatPtr y(y_raw);
  check(spca_data_save_csv(y.get(), args.out.c_str()));

  std::string prov;
  prov += "{\n";
  prov += "  \"model_source\": \"" + json_escape(source) + "\",\n";
  prov += "  \"n_samples\": " + std::to_string(args.n_samples) + ",\n";
  prov += "  \"n_variables\": " + std::to_string(spca_mat_rows(y.get())) + ",\n";
  prov += std::isinf(snr) ? std::string("  \"snr\": \"inf\",\n")
                          : "  \"snr\": " + format_double17(snr) + ",\n";
  prov += "  \"sigma\": " + format_double17(sigma) + ",\n";
  prov += "  \"seed\": " + std::to_string(args.seed) + ",\n";
  prov += "  \"coeff_law\": \"standard_normal\",\n";
  prov += "  \"rng\": \"" + json_escape(spca_rng_algorithm()) + "\"\n";
  prov += "}\n";
  write_file(sibling_path(args.out, ".prov.json"), prov);
  return 0;
}

int run_identify(const IdentifyArgs& args) {
  if (args.method != "pca" && args.method != "spca" && args.method != "cpca" &&
      args.method != "cspca") {
    std::cerr << "error: unknown method '" << args.method << "'\n";
    return kExitUsage;
  }
  spca_mat* data_raw = nullptr;
  check(spca_data_load_csv(args.data_path.c_str(), &data_raw));
  MatPtr data(data_raw);

  spca_options opts;
  spca_options_init(&opts);
  opts.rank_tol_rel = args.rank_tol_rel;
  opts.eig_tol = args.eig_tol;
  opts.center_data = args.center ? 1 : 0;

  ResultPtr result;
  if (args.method == "pca") {
    if (args.m <= 0) {
      std::cerr << "error: --method pca requires -m\n";
      return kExitUsage;
    }
    spca_result* raw = nullptr;
    check(spca_identify_pca(data.get(), args.m, &opts, &raw));
    result.reset(raw);
  } else if (args.method == "spca" || args.method == "cspca") {
    if (args.mask_path.empty()) {
      std::cerr << "error: --method " << args.method << " requires --mask\n";
      return kExitUsage;
    }
    spca_mask* mask_raw = nullptr;
    check(spca_mask_load(args.mask_path.c_str(), &mask_raw));
    MaskPtr mask(mask_raw);
    spca_result* raw = nullptr;
    if (args.method == "spca") {
      check(spca_identify_spca(data.get(), mask.get(), &opts, &raw));
    } else {
      check(spca_identify_cspca(data.get(), mask.get(), &opts, &raw));
    }
    result.reset(raw);
  } else if (args.method == "cpca") {
    if (args.known_path.empty() || args.m <= 0) {
      std::cerr << "error: --method cpca requires --known and -m\n";
      return kExitUsage;
    }
    spca_mat* known_raw = nullptr;
    check(spca_mat_load_csv(args.known_path.c_str(), &known_raw));
    MatPtr known(known_raw);
    const int l = args.m - spca_mat_rows(known.get());
    if (l < 1) {
      std::cerr << "error: -m must exceed the number of known rows\n";
      return kExitUsage;
    }
    spca_result* raw = nullptr;
    check(spca_identify_cpca(data.get(), known.get(), l, &opts, &raw));
    result.reset(raw);
  }

  spca_mat* est_raw = nullptr;
  check(spca_result_model(result.get(), &est_raw));
  MatPtr est(est_raw);
  check(spca_mat_save_csv(est.get(), args.out.c_str()));
  write_file(sibling_path(args.out, ".diag.json"),
             spca_result_diagnostics_json(result.get()));
  return 0;
}

int run_evaluate(const EvaluateArgs& args) {
  MatPtr true_model;
  if (!args.case_name.empty()) {
    spca_mat* raw = nullptr;
    check(spca_case_model(args.case_name.c_str(), &raw));
    true_model.reset(raw);
  } else {
    spca_mat* raw = nullptr;
    check(spca_mat_load_csv(args.true_path.c_str(), &raw));
    true_model.reset(raw);
  }
  spca_mat* est_raw = nullptr;
  check(spca_mat_load_csv(args.est_path.c_str(), &est_raw));
  MatPtr est(est_raw);

  char* json = nullptr;
  check(spca_theta_report_json(true_model.get(), est.get(), args.normalize ? 1 : 0, &json));
  std::cout << json;
  spca_string_free(json);
  return 0;
}

int run_sweep(const SweepArgs& args) {
  std::string config = read_file(args.config_path);
  if (args.threads >= 0) {
    // command-line override; invalid JSON falls through so the library
    // reports the parse error with its usual exit code
    auto parsed = nlohmann::json::parse(config, nullptr, false);
    if (parsed.is_object()) {
      parsed["threads"] = args.threads;
      config = parsed.dump();
    }
  }

  spca_table* table_raw = nullptr;
  check(spca_mc_sweep(config.c_str(), &table_raw));
  TablePtr table(table_raw);

  std::filesystem::create_directories(args.out_dir);
  const std::filesystem::path dir(args.out_dir);
  write_file((dir / "summary.csv").string(), spca_table_summary_csv(table.get()));
  write_file((dir / "runs.csv").string(), spca_table_long_csv(table.get()));
  write_file((dir / "envelope.json").string(), spca_table_envelope_json(table.get()));
  std::cerr << "mc-sweep finished in " << spca_table_wall_seconds(table.get()) << " s\n";
  return 0;
}

int run_fault(const FaultArgs& args) {
  const std::string config = read_file(args.config_path);
  char* json = nullptr;
  check(spca_fault_experiment(config.c_str(), &json));
  if (args.out.empty()) {
    std::cout << json;
  } else {
    write_file(args.out, json);
  }
  spca_string_free(json);
  return 0;
}

int run_list_cases() {
  for (int i = 0; i < spca_case_count(); ++i) {
    const char* name = spca_case_name(i);
    spca_mat* model = nullptr;
    check(spca_case_model(name, &model));
    MatPtr guard(model);
    std::cout << name << "  (" << spca_mat_rows(model) << " constraints, "
              << spca_mat_cols(model) << " variables)\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-matrix identification toolkit (PCA, sPCA, cPCA, CSPCA)"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* cmd_gen = app.add_subcommand("generate",
                                     "Generate noisy steady-state data for a model");
  auto* gen_case = cmd_gen->add_option("--case", gen.case_name, "Registry case name");
  auto* gen_model = cmd_gen->add_option("--model", gen.model_path, "Constraint matrix CSV");
  gen_case->excludes(gen_model);
  gen_model->excludes(gen_case);
  cmd_gen->add_option("--n", gen.n_samples, "Number of samples")->check(CLI::PositiveNumber);
  cmd_gen->add_option("--snr", gen.snr, "Signal-to-noise ratio (or 'inf')");
  cmd_gen->add_option("--seed", gen.seed, "RNG seed");
  cmd_gen->add_option("--out", gen.out, "Output data CSV path");

  IdentifyArgs ident;
  auto* cmd_id = app.add_subcommand("identify", "Estimate a constraint matrix from data");
  cmd_id->add_option("--method", ident.method, "pca | spca | cpca | cspca")->required();
  cmd_id->add_option("--data", ident.data_path, "Data CSV (one sample per row)")->required();
  cmd_id->add_option("--mask", ident.mask_path, "Structure mask file (spca/cspca)");
  cmd_id->add_option("--known", ident.known_path, "Known constraint rows CSV (cpca)");
  cmd_id->add_option("-m", ident.m, "Total number of constraints (pca/cpca)");
  cmd_id->add_option("--out", ident.out, "Output model CSV path");
  cmd_id->add_option("--rank-tol", ident.rank_tol_rel, "Candidate acceptance threshold");
  cmd_id->add_option("--eig-tol", ident.eig_tol, "Rank tolerance override");
  cmd_id->add_flag("--center", ident.center, "Mean-center the data first");

  EvaluateArgs eval;
  auto* cmd_eval = app.add_subcommand("evaluate",
                                      "Subspace-dependence metric between models");
  auto* eval_true = cmd_eval->add_option("--true", eval.true_path, "True model CSV");
  auto* eval_case = cmd_eval->add_option("--case", eval.case_name, "Registry case name");
  eval_true->excludes(eval_case);
  eval_case->excludes(eval_true);
  cmd_eval->add_option("--est", eval.est_path, "Estimated model CSV")->required();
  cmd_eval->add_flag("--normalize", eval.normalize, "Normalize true-model rows first");

  SweepArgs sweep;
  auto* cmd_sweep = app.add_subcommand("mc-sweep", "Monte-Carlo SNR sweep from a config");
  cmd_sweep->add_option("--config", sweep.config_path, "Experiment config JSON")->required();
  cmd_sweep->add_option("--out-dir", sweep.out_dir, "Directory for result files");
  cmd_sweep->add_option("--threads", sweep.threads, "Worker threads (0 = hardware)");

  FaultArgs fault;
  auto* cmd_fault = app.add_subcommand("fault-detect",
                                       "Averaged-estimate fault detection experiment");
  cmd_fault->add_option("--config", fault.config_path, "Experiment config JSON")->required();
  cmd_fault->add_option("--out", fault.out, "Output JSON path (default stdout)");

  auto* cmd_list = app.add_subcommand("list-cases", "List built-in case studies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (cmd_gen->parsed()) {
    if (gen.case_name.empty() == gen.model_path.empty()) {
      std::cerr << "error: generate needs exactly one of --case / --model\n";
      return kExitUsage;
    }
    return run_generate(gen);
  }
  if (cmd_id->parsed()) return run_identify(ident);
  if (cmd_eval->parsed()) {
    if (eval.true_path.empty() == eval.case_name.empty()) {
      std::cerr << "error: evaluate needs exactly one of --true / --case\n";
      return kExitUsage;
    }
    return run_evaluate(eval);
  }
  if (cmd_sweep->parsed()) return run_sweep(sweep);
  if (cmd_fault->parsed()) return run_fault(fault);
  if (cmd_list->parsed()) return run_list_cases();
  return kExitUsage;
}
