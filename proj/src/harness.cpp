#include "structpca/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "structpca/metrics.hpp"
#include "structpca/rng.hpp"

namespace structpca {

namespace {

constexpr uint64_t kCellStream = 0x4D435255ull;  // "MCRU"

Mat known_rows_matrix(const ConstraintModel& model, const std::vector<int>& rows) {
  Mat a_kn(static_cast<Eigen::Index>(rows.size()), model.cols());
  for (size_t k = 0; k < rows.size(); ++k) {
    a_kn.row(static_cast<Eigen::Index>(k)) = model.a.row(rows[k] - 1);
  }
  return a_kn;
}

Mat run_method(const ExperimentConfig& cfg, Method method, const Mat& y) {
  switch (method) {
    case Method::pca:
      return pca_identify(y, cfg.model.rows(), cfg.id_opts).model.a;
    case Method::spca:
      return spca_identify(y, *cfg.model.mask, cfg.id_opts).model.a;
    case Method::cspca:
      return cspca_identify(y, *cfg.model.mask, cfg.id_opts).model.a;
    case Method::cpca: {
      const Mat a_kn = known_rows_matrix(cfg.model, cfg.known_rows);
      const int l = cfg.model.rows() - static_cast<int>(cfg.known_rows.size());
      return cpca_identify(y, a_kn, l, cfg.id_opts).model.a;
    }
  }
  raise(Errc::invalid_argument, "unknown method");
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
  if (config.methods.empty()) {
    raise(Errc::invalid_argument, "methods must be non-empty");
  }
  if (config.snr_grid.empty()) {
    raise(Errc::invalid_argument, "snr_grid must be non-empty");
  }
  for (double snr : config.snr_grid) {
    if (!(snr > 0.0)) raise(Errc::invalid_argument, "snr values must be positive");
  }
  if (config.runs < 1) raise(Errc::invalid_argument, "runs must be positive");
  if (config.n_samples < config.model.cols()) {
    raise(Errc::invalid_argument, "n_samples must be at least the variable count");
  }
  const bool wants_cpca =
      std::find(config.methods.begin(), config.methods.end(), Method::cpca) !=
      config.methods.end();
  if (wants_cpca) {
    if (config.known_rows.empty()) {
      raise(Errc::invalid_argument, "cpca requires known_rows");
    }
    for (int r : config.known_rows) {
      if (r < 1 || r > config.model.rows()) {
        raise(Errc::invalid_argument, "known row index out of range: " + std::to_string(r));
      }
    }
    if (static_cast<int>(config.known_rows.size()) >= config.model.rows()) {
      raise(Errc::invalid_argument, "known_rows must leave at least one row to estimate");
    }
  }
  const bool wants_mask =
      std::find(config.methods.begin(), config.methods.end(), Method::spca) !=
          config.methods.end() ||
      std::find(config.methods.begin(), config.methods.end(), Method::cspca) !=
          config.methods.end();
  if (wants_mask && !config.model.mask) {
    raise(Errc::invalid_argument, "spca/cspca require a structure mask");
  }
}

uint64_t run_seed(uint64_t master_seed, int snr_index, int run_index) {
  return derive_seed({master_seed, kCellStream, static_cast<uint64_t>(snr_index),
                      static_cast<uint64_t>(run_index)});
}

const MethodSnrCell& ResultsTable::cell(Method method, double snr) const {
  for (const auto& c : cells) {
    if (c.method == method && (c.snr == snr || (std::isinf(c.snr) && std::isinf(snr)))) {
      return c;
    }
  }
  raise(Errc::invalid_argument, "no cell for requested (method, snr)");
}

ResultsTable run_mc(const ExperimentConfig& config) {
  validate_config(config);
  const auto start = std::chrono::steady_clock::now();

  const int n_methods = static_cast<int>(config.methods.size());
  const int n_snrs = static_cast<int>(config.snr_grid.size());
  const int runs = config.runs;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  // theta[(snr, method)] indexed storage written by the workers; failure
  // messages collected per task slot so aggregation order is deterministic.
  std::vector<std::vector<double>> theta(
      static_cast<size_t>(n_snrs) * n_methods,
      std::vector<double>(static_cast<size_t>(runs), nan));
  std::vector<std::vector<std::string>> errors(
      static_cast<size_t>(n_snrs) * n_methods,
      std::vector<std::string>(static_cast<size_t>(runs)));

  const int total_tasks = n_snrs * runs;
  std::atomic<int> next_task{0};

  auto worker = [&]() {
    for (;;) {
      const int task = next_task.fetch_add(1);
      if (task >= total_tasks) return;
      const int snr_idx = task / runs;
      const int run_idx = task % runs;
      const double snr = config.snr_grid[static_cast<size_t>(snr_idx)];

      DataSet data;
      bool data_ok = true;
      std::string data_error;
      try {
        data = make_dataset(config.model, config.n_samples, snr,
                            run_seed(config.master_seed, snr_idx, run_idx),
                            config.coeff_law);
      } catch (const std::exception& e) {
        data_ok = false;
        data_error = e.what();
      }

      for (int mi = 0; mi < n_methods; ++mi) {
        const size_t slot = static_cast<size_t>(snr_idx) * n_methods + mi;
        if (!data_ok) {
          errors[slot][static_cast<size_t>(run_idx)] = data_error;
          continue;
        }
        try {
          const Mat estimate = run_method(config, config.methods[static_cast<size_t>(mi)],
                                          data.y);
          theta[slot][static_cast<size_t>(run_idx)] =
              subspace_dependence(config.model.a, estimate, config.theta_normalize).theta;
        } catch (const std::exception& e) {
          errors[slot][static_cast<size_t>(run_idx)] = e.what();
        }
      }
    }
  };

  int n_threads = config.threads > 0
                      ? config.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  n_threads = std::min(n_threads, total_tasks);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ResultsTable table;
  table.config = config;
  for (int snr_idx = 0; snr_idx < n_snrs; ++snr_idx) {
    // best-instance counting over runs where every method succeeded
    std::vector<std::vector<double>> per_method;
    per_method.reserve(static_cast<size_t>(n_methods));
    for (int mi = 0; mi < n_methods; ++mi) {
      per_method.push_back(theta[static_cast<size_t>(snr_idx) * n_methods + mi]);
    }
    const std::vector<int> best = best_instance_counts(per_method);

    for (int mi = 0; mi < n_methods; ++mi) {
      const size_t slot = static_cast<size_t>(snr_idx) * n_methods + mi;
      MethodSnrCell cell;
      cell.method = config.methods[static_cast<size_t>(mi)];
      cell.snr = config.snr_grid[static_cast<size_t>(snr_idx)];
      cell.theta = theta[slot];
      cell.best_count = best[static_cast<size_t>(mi)];

      double sum = 0.0;
      int ok = 0;
      for (double v : cell.theta) {
        if (!std::isnan(v)) {
          sum += v;
          ++ok;
        }
      }
      cell.n_failed = runs - ok;
      cell.mean_theta = ok > 0 ? sum / ok : nan;
      if (ok > 1) {
        double sq = 0.0;
        for (double v : cell.theta) {
          if (!std::isnan(v)) sq += (v - cell.mean_theta) * (v - cell.mean_theta);
        }
        cell.std_theta = std::sqrt(sq / (ok - 1));
      } else {
        cell.std_theta = 0.0;
      }

      for (int run_idx = 0; run_idx < runs; ++run_idx) {
        const std::string& msg = errors[slot][static_cast<size_t>(run_idx)];
        if (!msg.empty()) {
          table.failures.push_back(RunFailure{cell.method, cell.snr, run_idx, msg});
        }
      }
      table.cells.push_back(std::move(cell));
    }
  }

  table.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return table;
}

}  // namespace structpca
