#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "structpca/structpca.h"

namespace {

struct CApiTempDir {
  std::filesystem::path path;
  CApiTempDir() {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("structpca_capi_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~CApiTempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("matrix handles") {
  const double values[6] = {1, 2, 3, 4, 5, 6};
  spca_mat* mat = nullptr;
  REQUIRE(spca_mat_create(2, 3, values, &mat) == SPCA_OK);
  CHECK(spca_mat_rows(mat) == 2);
  CHECK(spca_mat_cols(mat) == 3);
  double v = 0.0;
  CHECK(spca_mat_get(mat, 1, 2, &v) == SPCA_OK);
  CHECK(v == 6.0);
  double out[6] = {0};
  CHECK(spca_mat_copy(mat, out) == SPCA_OK);
  CHECK(std::memcmp(values, out, sizeof(values)) == 0);
  CHECK(spca_mat_get(mat, 5, 0, &v) == SPCA_ERR_INVALID_ARGUMENT);
  spca_mat_destroy(mat);
}

TEST_CASE("null arguments produce InvalidArgument with a message") {
  CHECK(spca_mat_create(2, 2, nullptr, nullptr) == SPCA_ERR_INVALID_ARGUMENT);
  CHECK(std::string(spca_last_error()).find("must not be null") != std::string::npos);
  CHECK(std::string(spca_status_name(SPCA_ERR_STRUCTURE_INFEASIBLE)) ==
        "StructureInfeasible");
}

TEST_CASE("registry access") {
  CHECK(spca_case_count() == 3);
  CHECK(std::string(spca_case_name(0)) == "flow-mix");
  CHECK(spca_case_name(99) == nullptr);

  spca_mat* model = nullptr;
  REQUIRE(spca_case_model("cs3", &model) == SPCA_OK);
  CHECK(spca_mat_rows(model) == 4);
  CHECK(spca_mat_cols(model) == 6);
  spca_mat_destroy(model);

  spca_mat* missing = nullptr;
  CHECK(spca_case_model("bogus", &missing) == SPCA_ERR_UNKNOWN_CASE);
}

TEST_CASE("generate - identify - evaluate round trip through the C API") {
  spca_mat* model = nullptr;
  REQUIRE(spca_case_model("flow-mix", &model) == SPCA_OK);

  spca_mat* data = nullptr;
  double sigma = -1.0;
  REQUIRE(spca_generate(model, 500, INFINITY, 7, &data, &sigma) == SPCA_OK);
  CHECK(sigma == 0.0);
  CHECK(spca_mat_rows(data) == 5);
  CHECK(spca_mat_cols(data) == 500);

  spca_options opts;
  spca_options_init(&opts);
  CHECK(opts.rank_tol_rel == 0.1);

  spca_result* result = nullptr;
  REQUIRE(spca_identify_pca(data, 3, &opts, &result) == SPCA_OK);
  spca_mat* estimate = nullptr;
  REQUIRE(spca_result_model(result, &estimate) == SPCA_OK);

  double theta = 1.0;
  REQUIRE(spca_theta(model, estimate, 0, &theta) == SPCA_OK);
  CHECK(theta < 1e-8);

  char* report = nullptr;
  REQUIRE(spca_theta_report_json(model, estimate, 1, &report) == SPCA_OK);
  CHECK(std::string(report).find("\"normalized\": true") != std::string::npos);
  spca_string_free(report);

  spca_mat_destroy(estimate);
  spca_result_destroy(result);
  spca_mat_destroy(data);
  spca_mat_destroy(model);
}

TEST_CASE("spca through the C API keeps the mask and reports diagnostics") {
  spca_mat* model = nullptr;
  spca_mask* mask = nullptr;
  REQUIRE(spca_case_model("cs3", &model) == SPCA_OK);
  REQUIRE(spca_case_mask("cs3", &mask) == SPCA_OK);
  CHECK(spca_mask_rows(mask) == 4);

  spca_mat* data = nullptr;
  double sigma = 0.0;
  REQUIRE(spca_generate(model, 800, 20.0, 3, &data, &sigma) == SPCA_OK);
  CHECK(sigma > 0.0);

  spca_result* result = nullptr;
  REQUIRE(spca_identify_cspca(data, mask, nullptr, &result) == SPCA_OK);
  const std::string diag = spca_result_diagnostics_json(result);
  CHECK(diag.find("\"labels\"") != std::string::npos);
  CHECK(diag.find("\"S\"") != std::string::npos);
  CHECK(diag.find("\"C\"") != std::string::npos);

  spca_mat* estimate = nullptr;
  REQUIRE(spca_result_model(result, &estimate) == SPCA_OK);
  // zeros off support
  double v = 1.0;
  CHECK(spca_mat_get(estimate, 1, 5, &v) == SPCA_OK);
  CHECK(v == 0.0);

  spca_mat_destroy(estimate);
  spca_result_destroy(result);
  spca_mat_destroy(data);
  spca_mask_destroy(mask);
  spca_mat_destroy(model);
}

TEST_CASE("identify failure surfaces the error name") {
  spca_mat* data = nullptr;
  spca_mat* model = nullptr;
  REQUIRE(spca_case_model("flow-mix", &model) == SPCA_OK);
  double sigma = 0.0;
  REQUIRE(spca_generate(model, 100, 10.0, 1, &data, &sigma) == SPCA_OK);

  spca_result* result = nullptr;
  CHECK(spca_identify_pca(data, 5, nullptr, &result) == SPCA_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(spca_last_error()) > 0);

  spca_mat_destroy(data);
  spca_mat_destroy(model);
}

TEST_CASE("csv io through the C API") {
  CApiTempDir dir;
  spca_mat* model = nullptr;
  REQUIRE(spca_case_model("cs1", &model) == SPCA_OK);
  const std::string path = dir.file("m.csv");
  REQUIRE(spca_mat_save_csv(model, path.c_str()) == SPCA_OK);
  spca_mat* back = nullptr;
  REQUIRE(spca_mat_load_csv(path.c_str(), &back) == SPCA_OK);
  CHECK(spca_mat_rows(back) == 3);
  std::vector<double> a(18), b(18);
  spca_mat_copy(model, a.data());
  spca_mat_copy(back, b.data());
  CHECK(a == b);
  spca_mat_destroy(back);
  spca_mat_destroy(model);

  spca_mat* missing = nullptr;
  CHECK(spca_mat_load_csv(dir.file("missing.csv").c_str(), &missing) == SPCA_ERR_IO);
}

TEST_CASE("mc sweep through the C API") {
  const char* config = R"({
    "case": "flow-mix", "methods": ["pca", "spca"],
    "snr_grid": [10, "inf"], "runs": 4, "n_samples": 150, "master_seed": 5
  })";
  spca_table* table = nullptr;
  REQUIRE(spca_mc_sweep(config, &table) == SPCA_OK);
  const std::string summary = spca_table_summary_csv(table);
  CHECK(summary.rfind("method,snr,mean_theta,std_theta,best_count\n", 0) == 0);
  // 2 methods x 2 snrs = 4 data rows
  size_t lines = 0;
  for (char c : summary) lines += c == '\n' ? 1 : 0;
  CHECK(lines == 5);
  const std::string long_csv = spca_table_long_csv(table);
  CHECK(long_csv.rfind("method,snr,run,theta\n", 0) == 0);
  CHECK(spca_table_wall_seconds(table) > 0.0);
  const std::string envelope = spca_table_envelope_json(table);
  CHECK(envelope.find("\"versions\"") != std::string::npos);
  spca_table_destroy(table);

  spca_table* bad = nullptr;
  CHECK(spca_mc_sweep("{]", &bad) == SPCA_ERR_PARSE);
  CHECK(spca_mc_sweep(R"({"case": "zzz", "methods": ["pca"]})", &bad) ==
        SPCA_ERR_UNKNOWN_CASE);
}

TEST_CASE("fault experiment and detect through the C API") {
  const char* config = R"({
    "case": "flow-mix", "methods": ["pca", "spca"],
    "snr": 1000, "n_samples": 200, "n_faulty": 10, "runs": 3, "seed": 9
  })";
  char* json = nullptr;
  REQUIRE(spca_fault_experiment(config, &json) == SPCA_OK);
  const std::string text(json);
  CHECK(text.find("\"oracle_count\"") != std::string::npos);
  CHECK(text.find("\"counts\"") != std::string::npos);
  spca_string_free(json);

  spca_mat* model = nullptr;
  REQUIRE(spca_case_model("flow-mix", &model) == SPCA_OK);
  spca_mat* data = nullptr;
  double sigma = 0.0;
  REQUIRE(spca_generate(model, 50, INFINITY, 2, &data, &sigma) == SPCA_OK);
  char* report = nullptr;
  REQUIRE(spca_detect(model, data, 1.0, 0, &report) == SPCA_OK);
  CHECK(std::string(report).find("\"n_flagged\": 0") != std::string::npos);
  spca_string_free(report);
  spca_mat_destroy(data);
  spca_mat_destroy(model);
}

TEST_CASE("version and rng strings") {
  CHECK(std::strlen(spca_version()) > 0);
  CHECK(std::string(spca_rng_algorithm()).find("xoshiro") != std::string::npos);
}

}  // TEST_SUITE
