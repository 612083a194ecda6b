#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "structpca/datagen.hpp"
#include "structpca/io.hpp"
#include "structpca/registry.hpp"
#include "structpca/rng.hpp"

using namespace structpca;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("structpca_io_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("matrix csv round trip is lossless") {
  TempDir dir;
  Rng rng(3);
  Mat a(3, 4);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 4; ++j) a(i, j) = rng.normal() * std::pow(10.0, (int)rng.below(7) - 3);
  }
  const std::string path = dir.file("m.csv");
  save_matrix_csv(path, a);
  const Mat back = load_matrix_csv(path);
  CHECK(back == a);  // bitwise, thanks to 17 significant digits
}

TEST_CASE("matrix csv parse errors") {
  TempDir dir;
  const std::string path = dir.file("bad.csv");
  write_text_file(path, "1,2\n3\n");
  CHECK_THROWS_AS(load_matrix_csv(path), Error);
  write_text_file(path, "1,abc\n");
  CHECK_THROWS_AS(load_matrix_csv(path), Error);
  write_text_file(path, "");
  CHECK_THROWS_AS(load_matrix_csv(path), Error);
  CHECK_THROWS_AS(load_matrix_csv(dir.file("missing.csv")), Error);
}

TEST_CASE("mask file round trip with comments") {
  TempDir dir;
  const std::string path = dir.file("mask.txt");
  write_text_file(path,
                  "# flow-mix structure\n"
                  "1 1 0 0 1\n"
                  "0 1 1 0 0  # node 2\n"
                  "\n"
                  "0 0 1 1 1\n");
  const StructureMask mask = load_mask(path);
  CHECK(mask.rows() == 3);
  CHECK(mask.cols() == 5);
  CHECK(mask.at(0, 0));
  CHECK_FALSE(mask.at(0, 2));
  CHECK(mask.at(1, 2));

  const std::string out = dir.file("mask_out.txt");
  save_mask(out, mask);
  const StructureMask back = load_mask(out);
  CHECK(back.cells() == mask.cells());
}

TEST_CASE("mask parse errors") {
  TempDir dir;
  const std::string path = dir.file("mask.txt");
  write_text_file(path, "1 2 0\n");
  CHECK_THROWS_AS(load_mask(path), Error);
  write_text_file(path, "1 1 0\n1 1\n");
  CHECK_THROWS_AS(load_mask(path), Error);
  write_text_file(path, "# only comments\n");
  CHECK_THROWS_AS(load_mask(path), Error);
}

TEST_CASE("data csv transposition contract") {
  TempDir dir;
  const CaseFixture fixture = registry_lookup("flow-mix");
  const DataSet data = make_dataset(fixture.model, 37, 10.0, 5);
  const std::string path = dir.file("data.csv");
  save_data_csv(path, data.y);

  // header + one line per sample
  const std::string text = read_text_file(path);
  CHECK(text.rfind("v1,v2,v3,v4,v5\n", 0) == 0);
  size_t lines = 0;
  for (char c : text) lines += c == '\n' ? 1 : 0;
  CHECK(lines == 38);

  const Mat back = load_data_csv(path);
  CHECK(back.rows() == 5);
  CHECK(back.cols() == 37);
  CHECK(back == data.y);
}

TEST_CASE("data csv requires the canonical header") {
  TempDir dir;
  const std::string path = dir.file("data.csv");
  write_text_file(path, "a,b\n1,2\n");
  CHECK_THROWS_AS(load_data_csv(path), Error);
  write_text_file(path, "v1,v3\n1,2\n");
  CHECK_THROWS_AS(load_data_csv(path), Error);
  write_text_file(path, "v1,v2\n1,2,3\n");
  CHECK_THROWS_AS(load_data_csv(path), Error);
}

TEST_CASE("snr string forms") {
  CHECK(snr_to_string(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(snr_to_string(10.0) == "10");
  CHECK(std::isinf(snr_from_string("inf")));
  CHECK(snr_from_string("50") == 50.0);
  CHECK_THROWS_AS(snr_from_string("ten"), Error);
}

TEST_CASE("format_double survives round trips") {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.normal() * std::pow(10.0, (int)rng.below(13) - 6);
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("experiment config parsing") {
  SUBCASE("defaults for a registry case") {
    const ExperimentConfig cfg = parse_experiment_config(
        R"({"case": "flow-mix", "methods": ["pca", "spca"]})");
    CHECK(cfg.case_name == "flow-mix");
    CHECK(cfg.runs == 1000);  // per-case default
    CHECK(cfg.n_samples == 1000);
    CHECK(cfg.snr_grid.size() == 8);
    CHECK(cfg.id_opts.rank_tol_rel == 0.1);
  }
  SUBCASE("cs3 defaults to 100 runs") {
    const ExperimentConfig cfg =
        parse_experiment_config(R"({"case": "cs3", "methods": ["pca"]})");
    CHECK(cfg.runs == 100);
  }
  SUBCASE("snr grid accepts inf") {
    const ExperimentConfig cfg = parse_experiment_config(
        R"({"case": "cs1", "methods": ["pca"], "snr_grid": [10, "inf"]})");
    REQUIRE(cfg.snr_grid.size() == 2);
    CHECK(std::isinf(cfg.snr_grid[1]));
  }
  SUBCASE("rejects malformed configs") {
    CHECK_THROWS_AS(parse_experiment_config("not json"), Error);
    CHECK_THROWS_AS(parse_experiment_config(R"({"methods": ["pca"]})"), Error);
    CHECK_THROWS_AS(parse_experiment_config(R"({"case": "flow-mix"})"), Error);
    CHECK_THROWS_AS(
        parse_experiment_config(R"({"case": "nope", "methods": ["pca"]})"), Error);
    CHECK_THROWS_AS(parse_experiment_config(
                        R"({"case": "cs1", "methods": ["pca"], "snr_grid": []})"),
                    Error);
    CHECK_THROWS_AS(
        parse_experiment_config(R"({"case": "cs1", "methods": ["cpca"]})"), Error);
  }
  SUBCASE("model and mask from files") {
    TempDir dir;
    const CaseFixture fixture = registry_lookup("cs3");
    save_matrix_csv(dir.file("model.csv"), fixture.model.a);
    save_mask(dir.file("mask.txt"), *fixture.model.mask);
    const std::string cfg_json = std::string(R"({"model": ")") + dir.file("model.csv") +
                                 R"(", "mask": ")" + dir.file("mask.txt") +
                                 R"(", "methods": ["spca"], "runs": 3})";
    const ExperimentConfig cfg = parse_experiment_config(cfg_json);
    CHECK(cfg.case_name.empty());
    CHECK(cfg.model.a == fixture.model.a);
    CHECK(cfg.runs == 3);
  }
}

TEST_CASE("fault config parsing") {
  const FaultExperimentConfig cfg = parse_fault_config(
      R"({"case": "flow-mix", "methods": ["pca", "spca"], "snr": 1000,
          "n_faulty": 50, "runs": 10, "seed": 4,
          "magnitude": {"law": "constant", "value": 2.5}})");
  CHECK(cfg.snr == 1000.0);
  CHECK(cfg.n_faulty == 50);
  CHECK(cfg.magnitude.kind == MagnitudeLaw::Kind::constant);
  CHECK(cfg.magnitude.value == 2.5);
  CHECK(cfg.tolerance == 1.0);

  CHECK_THROWS_AS(parse_fault_config(R"({"case": "flow-mix"})"), Error);
  CHECK_THROWS_AS(
      parse_fault_config(
          R"({"case": "flow-mix", "methods": ["pca"], "magnitude": {"law": "normal", "value": 1}})"),
      Error);
}

TEST_CASE("fault report serialization") {
  const CaseFixture fixture = registry_lookup("flow-mix");
  const DataSet data =
      make_dataset(fixture.model, 10, std::numeric_limits<double>::infinity(), 1);
  Mat y = data.y;
  y(1, 4) += 50.0;
  FaultReport report = detect(fixture.model.a, y, 1.0);
  score_against(report, std::vector<uint8_t>{0, 0, 0, 0, 1, 0, 0, 0, 0, 0});

  const std::string json = fault_report_json(report);
  CHECK(json.find("\"n_flagged\": 1") != std::string::npos);
  CHECK(json.find("\"true_positive\": 1") != std::string::npos);

  const std::string csv = fault_report_flags_csv(report);
  CHECK(csv.rfind("sample,flag\n", 0) == 0);
  CHECK(csv.find("4,1\n") != std::string::npos);
  CHECK(csv.find("3,0\n") != std::string::npos);
}

TEST_CASE("theta report serialization") {
  ThetaReport report;
  report.theta = 0.25;
  report.per_row = {0.1, 0.15};
  report.normalized = true;
  const std::string json = theta_report_json(report);
  CHECK(json.find("\"theta\": 0.25") != std::string::npos);
  CHECK(json.find("\"normalized\": true") != std::string::npos);
}

}  // TEST_SUITE
