#pragma once

#include <string>

#include "structpca/faults.hpp"
#include "structpca/harness.hpp"
#include "structpca/metrics.hpp"

namespace structpca {

/// Shortest exact decimal form of a double ("%.17g"); re-ingestion is lossless.
std::string format_double(double v);

/// "inf" for the noise-free case, numeric otherwise.
std::string snr_to_string(double snr);
double snr_from_string(const std::string& text);

// ---- files ----------------------------------------------------------------

/// Constraint-matrix CSV: m rows x n numeric columns, no header.
Mat load_matrix_csv(const std::string& path);
void save_matrix_csv(const std::string& path, const Mat& a);

/// Structure-mask text: one line per row, n space-separated 0/1 tokens,
/// '#' starts a comment.
StructureMask load_mask(const std::string& path);
void save_mask(const std::string& path, const StructureMask& mask);

/// Data CSV: one time sample per row with header v1,...,vn. The on-disk
/// layout is the transpose of the internal variables-by-samples matrix.
Mat load_data_csv(const std::string& path);
void save_data_csv(const std::string& path, const Mat& y);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// ---- serialization ---------------------------------------------------------

std::string theta_report_json(const ThetaReport& report);
std::string fault_report_json(const FaultReport& report);
std::string fault_report_flags_csv(const FaultReport& report);
std::string identify_diagnostics_json(const IdentifyResult& result,
                                      const IdentifyOptions& opts);
std::string provenance_json(const DataSet& data, const std::string& model_source,
                            const std::string& coeff_law);

/// Long-format results: header method,snr,run,theta; failed runs are omitted.
std::string results_long_csv(const ResultsTable& table);
/// Summary: header method,snr,mean_theta,std_theta,best_count.
std::string results_summary_csv(const ResultsTable& table);
/// JSON envelope with config echo, versions and per-cell statistics. Contains
/// nothing execution-dependent (no timings, no thread counts), so repeated
/// runs serialize byte-identically.
std::string results_envelope_json(const ResultsTable& table);

// ---- config parsing ---------------------------------------------------------

/// Experiment config JSON. Either "case": <registry name> or "model": <csv
/// path> (optionally "mask": <mask path>). Defaults: the standard SNR grid,
/// n_samples 1000, per-case run counts, master_seed 0.
ExperimentConfig parse_experiment_config(const std::string& json_text);

FaultExperimentConfig parse_fault_config(const std::string& json_text);

std::string fault_result_json(const FaultExperimentConfig& config,
                              const FaultExperimentResult& result);

}  // namespace structpca
