#include <doctest.h>

#include <cmath>

#include "structpca/harness.hpp"
#include "structpca/io.hpp"
#include "structpca/metrics.hpp"
#include "structpca/registry.hpp"

using namespace structpca;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  const CaseFixture fixture = registry_lookup("flow-mix");
  cfg.case_name = fixture.name;
  cfg.model = fixture.model;
  cfg.methods = {Method::pca, Method::spca};
  cfg.snr_grid = {10.0, std::numeric_limits<double>::infinity()};
  cfg.runs = 6;
  cfg.n_samples = 200;
  cfg.master_seed = 31;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("registry returns the exact embedded fixtures") {
  const Mat flow = registry_lookup("flow-mix").model.a;
  REQUIRE(flow.rows() == 3);
  REQUIRE(flow.cols() == 5);
  Mat expected_flow(3, 5);
  expected_flow << 1, -1, 0, 0, 1, 0, 1, -1, 0, 0, 0, 0, 1, -1, -1;
  CHECK(flow == expected_flow);

  const Mat cs1 = registry_lookup("cs1").model.a;
  Mat expected_cs1(3, 6);
  expected_cs1 << 1, 1, 0, 0, 0, 0, 1, 2, 3, 0, 0, 0, 3, 1, -1, 2, 0, 0;
  CHECK(cs1 == expected_cs1);

  const Mat cs3 = registry_lookup("cs3").model.a;
  Mat expected_cs3(4, 6);
  expected_cs3 << 3, 1, -1, 2, 0, -6, 2, 1, -2, 1, 0, 0, 1, 1, -1, 0, 0, 0, 1, -3, 1, 1, 0, 0;
  CHECK(cs3 == expected_cs3);

  CHECK_THROWS_AS(registry_lookup("nope"), Error);
  CHECK(registry_names().size() == 3);
}

TEST_CASE("registry masks match the matrix patterns") {
  for (const auto& name : registry_names()) {
    const CaseFixture fixture = registry_lookup(name);
    REQUIRE(fixture.model.mask.has_value());
    for (int i = 0; i < fixture.model.rows(); ++i) {
      for (int j = 0; j < fixture.model.cols(); ++j) {
        CHECK(fixture.model.mask->at(i, j) == (fixture.model.a(i, j) != 0.0));
      }
    }
  }
}

TEST_CASE("run_mc on noise-free data gives vanishing theta for every method") {
  ExperimentConfig cfg = small_config();
  cfg.snr_grid = {std::numeric_limits<double>::infinity()};
  cfg.methods = {Method::pca, Method::spca, Method::cpca, Method::cspca};
  cfg.known_rows = {1};
  const ResultsTable table = run_mc(cfg);
  for (const auto& cell : table.cells) {
    CHECK(cell.n_failed == 0);
    CHECK(cell.mean_theta < 1e-8);
  }
}

TEST_CASE("run_mc is bitwise deterministic") {
  const ExperimentConfig cfg = small_config();
  const ResultsTable a = run_mc(cfg);
  const ResultsTable b = run_mc(cfg);
  CHECK(results_long_csv(a) == results_long_csv(b));
  CHECK(results_summary_csv(a) == results_summary_csv(b));
  CHECK(results_envelope_json(a) == results_envelope_json(b));
}

TEST_CASE("parallel and sequential sweeps agree bitwise") {
  ExperimentConfig cfg = small_config();
  cfg.runs = 10;
  cfg.threads = 1;
  const ResultsTable sequential = run_mc(cfg);
  cfg.threads = 4;
  const ResultsTable parallel = run_mc(cfg);
  CHECK(results_long_csv(sequential) == results_long_csv(parallel));
  CHECK(results_summary_csv(sequential) == results_summary_csv(parallel));
  CHECK(results_envelope_json(sequential) == results_envelope_json(parallel));
}

TEST_CASE("any cell is reproducible in isolation from its derived seed") {
  const ExperimentConfig cfg = small_config();
  const ResultsTable table = run_mc(cfg);

  const int snr_idx = 0;
  const int run_idx = 3;
  const DataSet data = make_dataset(cfg.model, cfg.n_samples, cfg.snr_grid[0],
                                    run_seed(cfg.master_seed, snr_idx, run_idx));
  const Mat estimate = pca_identify(data.y, cfg.model.rows()).model.a;
  const double theta = subspace_dependence(cfg.model.a, estimate).theta;
  CHECK(table.cell(Method::pca, cfg.snr_grid[0]).theta[run_idx] == theta);
}

TEST_CASE("all methods see the same data within a run (paired design)") {
  // pca on its own reproduces the pca column of a two-method sweep
  ExperimentConfig both = small_config();
  const ResultsTable table_both = run_mc(both);

  ExperimentConfig only = small_config();
  only.methods = {Method::pca};
  const ResultsTable table_only = run_mc(only);

  CHECK(table_both.cell(Method::pca, 10.0).theta ==
        table_only.cell(Method::pca, 10.0).theta);
}

TEST_CASE("best-instance counts sum to at most the run count") {
  const ResultsTable table = run_mc(small_config());
  int total = 0;
  for (const auto& cell : table.cells) {
    if (cell.snr == 10.0) total += cell.best_count;
  }
  CHECK(total <= small_config().runs);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = small_config();
  cfg.methods.clear();
  CHECK_THROWS_AS(validate_config(cfg), Error);

  cfg = small_config();
  cfg.snr_grid.clear();
  CHECK_THROWS_AS(validate_config(cfg), Error);

  cfg = small_config();
  cfg.methods = {Method::cpca};
  cfg.known_rows = {};
  CHECK_THROWS_AS(validate_config(cfg), Error);

  cfg = small_config();
  cfg.methods = {Method::cpca};
  cfg.known_rows = {5};
  CHECK_THROWS_AS(validate_config(cfg), Error);

  cfg = small_config();
  cfg.runs = 0;
  CHECK_THROWS_AS(validate_config(cfg), Error);
}

TEST_CASE("wall time is recorded but kept out of the exports") {
  const ResultsTable table = run_mc(small_config());
  CHECK(table.wall_seconds > 0.0);
  CHECK(results_envelope_json(table).find("wall") == std::string::npos);
}

}  // TEST_SUITE
