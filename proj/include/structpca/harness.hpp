#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "structpca/datagen.hpp"
#include "structpca/identify.hpp"

namespace structpca {

struct ExperimentConfig {
  std::string case_name;  // informational; empty if the model came from files
  ConstraintModel model;
  std::vector<Method> methods;
  std::vector<int> known_rows;  // 1-based true-model rows for cpca
  std::vector<double> snr_grid;
  int runs = 500;
  int n_samples = 1000;
  uint64_t master_seed = 0;
  bool theta_normalize = false;
  CoeffLaw coeff_law = CoeffLaw::standard_normal;
  IdentifyOptions id_opts;
  /// Worker threads; 0 picks the hardware concurrency. Results are identical
  /// regardless of the value.
  int threads = 0;
};

void validate_config(const ExperimentConfig& config);

struct RunFailure {
  Method method;
  double snr;
  int run;
  std::string error;
};

struct MethodSnrCell {
  Method method = Method::pca;
  double snr = 0.0;
  std::vector<double> theta;  // per run; NaN where the run failed
  double mean_theta = 0.0;    // over successful runs
  double std_theta = 0.0;     // sample standard deviation over successful runs
  int best_count = 0;
  int n_failed = 0;
};

struct ResultsTable {
  ExperimentConfig config;
  std::vector<MethodSnrCell> cells;  // ordered by (snr index, method index)
  std::vector<RunFailure> failures;
  double wall_seconds = 0.0;  // not part of the serialized exports

  const MethodSnrCell& cell(Method method, double snr) const;
};

/// Seed for one Monte-Carlo cell; pure function of the inputs, so any cell
/// can be reproduced in isolation.
uint64_t run_seed(uint64_t master_seed, int snr_index, int run_index);

/// Monte-Carlo sweep: for every (snr, run) generate one dataset, run every
/// requested method on the same noisy data, and aggregate theta statistics
/// and best-instance counts. Deterministic given the config, including under
/// parallel execution.
ResultsTable run_mc(const ExperimentConfig& config);

}  // namespace structpca
