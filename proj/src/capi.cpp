#include "structpca/structpca.h"

#include <cstring>
#include <new>
#include <string>

#include "structpca/harness.hpp"
#include "structpca/io.hpp"
#include "structpca/registry.hpp"
#include "structpca/rng.hpp"
#include "structpca/version.hpp"

using namespace structpca;

struct spca_mat {
  Mat value;
};

struct spca_mask {
  StructureMask value;
};

struct spca_result {
  IdentifyResult value;
  IdentifyOptions opts;
  mutable std::string diagnostics;  // lazily rendered
};

struct spca_table {
  ResultsTable value;
  std::string summary_csv;
  std::string long_csv;
  std::string envelope_json;
};

namespace {

thread_local std::string g_last_error;

spca_status status_from_errc(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return SPCA_ERR_INVALID_ARGUMENT;
    case Errc::non_square: return SPCA_ERR_NON_SQUARE;
    case Errc::not_symmetric: return SPCA_ERR_NOT_SYMMETRIC;
    case Errc::failed_to_converge: return SPCA_ERR_FAILED_TO_CONVERGE;
    case Errc::empty_null_space: return SPCA_ERR_EMPTY_NULL_SPACE;
    case Errc::rank_deficient: return SPCA_ERR_RANK_DEFICIENT;
    case Errc::rank_deficient_base: return SPCA_ERR_RANK_DEFICIENT_BASE;
    case Errc::support_out_of_range: return SPCA_ERR_SUPPORT_OUT_OF_RANGE;
    case Errc::structure_infeasible: return SPCA_ERR_STRUCTURE_INFEASIBLE;
    case Errc::too_few_samples: return SPCA_ERR_TOO_FEW_SAMPLES;
    case Errc::degenerate_covariance: return SPCA_ERR_DEGENERATE_COVARIANCE;
    case Errc::degenerate_signal: return SPCA_ERR_DEGENERATE_SIGNAL;
    case Errc::known_rows_rank_deficient: return SPCA_ERR_KNOWN_ROWS_RANK_DEFICIENT;
    case Errc::dimension_mismatch: return SPCA_ERR_DIMENSION_MISMATCH;
    case Errc::shape_mismatch: return SPCA_ERR_SHAPE_MISMATCH;
    case Errc::rank_deficient_estimate: return SPCA_ERR_RANK_DEFICIENT_ESTIMATE;
    case Errc::length_mismatch: return SPCA_ERR_LENGTH_MISMATCH;
    case Errc::unknown_case: return SPCA_ERR_UNKNOWN_CASE;
    case Errc::io_error: return SPCA_ERR_IO;
    case Errc::parse_error: return SPCA_ERR_PARSE;
  }
  return SPCA_ERR_INTERNAL;
}

spca_status fail(spca_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

spca_status fail_null(const char* what) {
  return fail(SPCA_ERR_INVALID_ARGUMENT, std::string(what) + " must not be null");
}

/// Runs fn, translating exceptions into status codes.
template <typename Fn>
spca_status guarded(Fn&& fn) {
  try {
    fn();
    return SPCA_OK;
  } catch (const Error& e) {
    return fail(status_from_errc(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SPCA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SPCA_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

IdentifyOptions to_cxx_options(const spca_options* opts) {
  IdentifyOptions out;
  if (opts) {
    out.rank_tol_rel = opts->rank_tol_rel;
    out.eig_tol = opts->eig_tol;
    out.center_data = opts->center_data != 0;
  }
  return out;
}

spca_result* wrap_result(IdentifyResult&& result, const IdentifyOptions& opts) {
  auto* handle = new spca_result;
  handle->value = std::move(result);
  handle->opts = opts;
  return handle;
}

}  // namespace

extern "C" {

const char* spca_status_name(spca_status status) {
  switch (status) {
    case SPCA_OK: return "Ok";
    case SPCA_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case SPCA_ERR_NON_SQUARE: return "NonSquare";
    case SPCA_ERR_NOT_SYMMETRIC: return "NotSymmetric";
    case SPCA_ERR_FAILED_TO_CONVERGE: return "FailedToConverge";
    case SPCA_ERR_EMPTY_NULL_SPACE: return "EmptyNullSpace";
    case SPCA_ERR_RANK_DEFICIENT: return "RankDeficient";
    case SPCA_ERR_RANK_DEFICIENT_BASE: return "RankDeficientBase";
    case SPCA_ERR_SUPPORT_OUT_OF_RANGE: return "SupportOutOfRange";
    case SPCA_ERR_STRUCTURE_INFEASIBLE: return "StructureInfeasible";
    case SPCA_ERR_TOO_FEW_SAMPLES: return "TooFewSamples";
    case SPCA_ERR_DEGENERATE_COVARIANCE: return "DegenerateCovariance";
    case SPCA_ERR_DEGENERATE_SIGNAL: return "DegenerateSignal";
    case SPCA_ERR_KNOWN_ROWS_RANK_DEFICIENT: return "KnownRowsRankDeficient";
    case SPCA_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case SPCA_ERR_SHAPE_MISMATCH: return "ShapeMismatch";
    case SPCA_ERR_RANK_DEFICIENT_ESTIMATE: return "RankDeficientEstimate";
    case SPCA_ERR_LENGTH_MISMATCH: return "LengthMismatch";
    case SPCA_ERR_UNKNOWN_CASE: return "UnknownCase";
    case SPCA_ERR_IO: return "IoError";
    case SPCA_ERR_PARSE: return "ParseError";
    case SPCA_ERR_INTERNAL: return "InternalError";
  }
  return "UnknownStatus";
}

const char* spca_last_error(void) { return g_last_error.c_str(); }

const char* spca_version(void) { return kVersion; }

const char* spca_rng_algorithm(void) { return kRngAlgorithm; }

void spca_string_free(char* s) { delete[] s; }

/* ---- matrices ---- */

spca_status spca_mat_create(int rows, int cols, const double* row_major, spca_mat** out) {
  if (!row_major) return fail_null("row_major");
  if (!out) return fail_null("out");
  if (rows <= 0 || cols <= 0) {
    return fail(SPCA_ERR_INVALID_ARGUMENT, "matrix dimensions must be positive");
  }
  return guarded([&] {
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) m(i, j) = row_major[static_cast<size_t>(i) * cols + j];
    }
    require_finite(m, "matrix");
    *out = new spca_mat{std::move(m)};
  });
}

void spca_mat_destroy(spca_mat* mat) { delete mat; }

int spca_mat_rows(const spca_mat* mat) { return mat ? static_cast<int>(mat->value.rows()) : 0; }

int spca_mat_cols(const spca_mat* mat) { return mat ? static_cast<int>(mat->value.cols()) : 0; }

spca_status spca_mat_get(const spca_mat* mat, int row, int col, double* out) {
  if (!mat) return fail_null("mat");
  if (!out) return fail_null("out");
  if (row < 0 || row >= mat->value.rows() || col < 0 || col >= mat->value.cols()) {
    return fail(SPCA_ERR_INVALID_ARGUMENT, "index out of range");
  }
  *out = mat->value(row, col);
  return SPCA_OK;
}

spca_status spca_mat_copy(const spca_mat* mat, double* out_row_major) {
  if (!mat) return fail_null("mat");
  if (!out_row_major) return fail_null("out_row_major");
  for (Eigen::Index i = 0; i < mat->value.rows(); ++i) {
    for (Eigen::Index j = 0; j < mat->value.cols(); ++j) {
      out_row_major[static_cast<size_t>(i) * mat->value.cols() + j] = mat->value(i, j);
    }
  }
  return SPCA_OK;
}

spca_status spca_mat_load_csv(const char* path, spca_mat** out) {
  if (!path) return fail_null("path");
  if (!out) return fail_null("out");
  return guarded([&] { *out = new spca_mat{load_matrix_csv(path)}; });
}

spca_status spca_mat_save_csv(const spca_mat* mat, const char* path) {
  if (!mat) return fail_null("mat");
  if (!path) return fail_null("path");
  return guarded([&] { save_matrix_csv(path, mat->value); });
}

spca_status spca_data_load_csv(const char* path, spca_mat** out) {
  if (!path) return fail_null("path");
  if (!out) return fail_null("out");
  return guarded([&] { *out = new spca_mat{load_data_csv(path)}; });
}

spca_status spca_data_save_csv(const spca_mat* y, const char* path) {
  if (!y) return fail_null("y");
  if (!path) return fail_null("path");
  return guarded([&] { save_data_csv(path, y->value); });
}

/* ---- structure masks ---- */

spca_status spca_mask_create(int rows, int cols, const uint8_t* cells, spca_mask** out) {
  if (!cells) return fail_null("cells");
  if (!out) return fail_null("out");
  return guarded([&] {
    std::vector<uint8_t> data(cells, cells + static_cast<size_t>(rows) * cols);
    *out = new spca_mask{StructureMask(rows, cols, std::move(data))};
  });
}

void spca_mask_destroy(spca_mask* mask) { delete mask; }

int spca_mask_rows(const spca_mask* mask) { return mask ? mask->value.rows() : 0; }

int spca_mask_cols(const spca_mask* mask) { return mask ? mask->value.cols() : 0; }

spca_status spca_mask_load(const char* path, spca_mask** out) {
  if (!path) return fail_null("path");
  if (!out) return fail_null("out");
  return guarded([&] { *out = new spca_mask{load_mask(path)}; });
}

spca_status spca_mask_save(const spca_mask* mask, const char* path) {
  if (!mask) return fail_null("mask");
  if (!path) return fail_null("path");
  return guarded([&] { save_mask(path, mask->value); });
}

/* ---- case registry ---- */

int spca_case_count(void) { return static_cast<int>(registry_names().size()); }

const char* spca_case_name(int index) {
  const auto& names = registry_names();
  if (index < 0 || index >= static_cast<int>(names.size())) return nullptr;
  return names[static_cast<size_t>(index)].c_str();
}

spca_status spca_case_model(const char* name, spca_mat** out) {
  if (!name) return fail_null("name");
  if (!out) return fail_null("out");
  return guarded([&] { *out = new spca_mat{registry_lookup(name).model.a}; });
}

spca_status spca_case_mask(const char* name, spca_mask** out) {
  if (!name) return fail_null("name");
  if (!out) return fail_null("out");
  return guarded([&] {
    CaseFixture fixture = registry_lookup(name);
    *out = new spca_mask{*fixture.model.mask};
  });
}

/* ---- data generation ---- */

spca_status spca_generate(const spca_mat* model, int n_samples, double snr, uint64_t seed,
                          spca_mat** y_out, double* sigma_out) {
  if (!model) return fail_null("model");
  if (!y_out) return fail_null("y_out");
  return guarded([&] {
    const DataSet data = make_dataset(make_model(model->value), n_samples, snr, seed);
    if (sigma_out) *sigma_out = data.sigma;
    *y_out = new spca_mat{data.y};
  });
}

/* ---- identification ---- */

void spca_options_init(spca_options* opts) {
  if (!opts) return;
  opts->rank_tol_rel = 0.1;
  opts->eig_tol = -1.0;
  opts->center_data = 0;
}

spca_status spca_identify_pca(const spca_mat* data, int m, const spca_options* opts,
                              spca_result** out) {
  if (!data) return fail_null("data");
  if (!out) return fail_null("out");
  return guarded([&] {
    const IdentifyOptions cxx_opts = to_cxx_options(opts);
    *out = wrap_result(pca_identify(data->value, m, cxx_opts), cxx_opts);
  });
}

spca_status spca_identify_spca(const spca_mat* data, const spca_mask* mask,
                               const spca_options* opts, spca_result** out) {
  if (!data) return fail_null("data");
  if (!mask) return fail_null("mask");
  if (!out) return fail_null("out");
  return guarded([&] {
    const IdentifyOptions cxx_opts = to_cxx_options(opts);
    *out = wrap_result(spca_identify(data->value, mask->value, cxx_opts), cxx_opts);
  });
}

spca_status spca_identify_cpca(const spca_mat* data, const spca_mat* known_rows,
                               int n_unknown, const spca_options* opts, spca_result** out) {
  if (!data) return fail_null("data");
  if (!known_rows) return fail_null("known_rows");
  if (!out) return fail_null("out");
  return guarded([&] {
    const IdentifyOptions cxx_opts = to_cxx_options(opts);
    *out = wrap_result(cpca_identify(data->value, known_rows->value, n_unknown, cxx_opts),
                       cxx_opts);
  });
}

spca_status spca_identify_cspca(const spca_mat* data, const spca_mask* mask,
                                const spca_options* opts, spca_result** out) {
  if (!data) return fail_null("data");
  if (!mask) return fail_null("mask");
  if (!out) return fail_null("out");
  return guarded([&] {
    const IdentifyOptions cxx_opts = to_cxx_options(opts);
    *out = wrap_result(cspca_identify(data->value, mask->value, cxx_opts), cxx_opts);
  });
}

spca_status spca_result_model(const spca_result* result, spca_mat** out) {
  if (!result) return fail_null("result");
  if (!out) return fail_null("out");
  return guarded([&] { *out = new spca_mat{result->value.model.a}; });
}

const char* spca_result_diagnostics_json(const spca_result* result) {
  if (!result) return nullptr;
  if (result->diagnostics.empty()) {
    result->diagnostics = identify_diagnostics_json(result->value, result->opts);
  }
  return result->diagnostics.c_str();
}

void spca_result_destroy(spca_result* result) { delete result; }

spca_status spca_noise_variance(const spca_mat* data, int m, double* out) {
  if (!data) return fail_null("data");
  if (!out) return fail_null("out");
  return guarded([&] { *out = noise_variance_estimate(data->value, m); });
}

/* ---- evaluation ---- */

spca_status spca_theta(const spca_mat* true_model, const spca_mat* estimate,
                       int normalize_rows, double* theta_out) {
  if (!true_model) return fail_null("true_model");
  if (!estimate) return fail_null("estimate");
  if (!theta_out) return fail_null("theta_out");
  return guarded([&] {
    *theta_out =
        subspace_dependence(true_model->value, estimate->value, normalize_rows != 0).theta;
  });
}

spca_status spca_theta_report_json(const spca_mat* true_model, const spca_mat* estimate,
                                   int normalize_rows, char** json_out) {
  if (!true_model) return fail_null("true_model");
  if (!estimate) return fail_null("estimate");
  if (!json_out) return fail_null("json_out");
  return guarded([&] {
    const ThetaReport report =
        subspace_dependence(true_model->value, estimate->value, normalize_rows != 0);
    *json_out = dup_string(theta_report_json(report));
  });
}

/* ---- Monte-Carlo sweeps ---- */

spca_status spca_mc_sweep(const char* config_json, spca_table** out) {
  if (!config_json) return fail_null("config_json");
  if (!out) return fail_null("out");
  return guarded([&] {
    const ExperimentConfig config = parse_experiment_config(config_json);
    auto* handle = new spca_table;
    handle->value = run_mc(config);
    handle->summary_csv = results_summary_csv(handle->value);
    handle->long_csv = results_long_csv(handle->value);
    handle->envelope_json = results_envelope_json(handle->value);
    *out = handle;
  });
}

const char* spca_table_summary_csv(const spca_table* table) {
  return table ? table->summary_csv.c_str() : nullptr;
}

const char* spca_table_long_csv(const spca_table* table) {
  return table ? table->long_csv.c_str() : nullptr;
}

const char* spca_table_envelope_json(const spca_table* table) {
  return table ? table->envelope_json.c_str() : nullptr;
}

double spca_table_wall_seconds(const spca_table* table) {
  return table ? table->value.wall_seconds : 0.0;
}

void spca_table_destroy(spca_table* table) { delete table; }

/* ---- fault detection ---- */

spca_status spca_detect(const spca_mat* a_hat, const spca_mat* y, double tolerance,
                        int use_l2_norm, char** report_json_out) {
  if (!a_hat) return fail_null("a_hat");
  if (!y) return fail_null("y");
  if (!report_json_out) return fail_null("report_json_out");
  return guarded([&] {
    const FaultReport report =
        detect(a_hat->value, y->value, tolerance,
               use_l2_norm ? ResidualNorm::l2 : ResidualNorm::l1);
    *report_json_out = dup_string(fault_report_json(report));
  });
}

spca_status spca_fault_experiment(const char* config_json, char** json_out) {
  if (!config_json) return fail_null("config_json");
  if (!json_out) return fail_null("json_out");
  return guarded([&] {
    const FaultExperimentConfig config = parse_fault_config(config_json);
    const FaultExperimentResult result = fault_experiment(config);
    *json_out = dup_string(fault_result_json(config, result));
  });
}

} /* extern "C" */
