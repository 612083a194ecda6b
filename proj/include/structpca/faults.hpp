#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "structpca/datagen.hpp"
#include "structpca/identify.hpp"

namespace structpca {

enum class ResidualNorm { l1, l2 };

struct FaultReport {
  std::vector<uint8_t> flags;     // flags[t] = residuals[t] > tolerance
  std::vector<double> residuals;  // one per sample
  double tolerance = 0.0;

  struct Score {
    int true_positive = 0;
    int false_positive = 0;
    int false_negative = 0;
  };
  std::optional<Score> score;  // filled by score_against

  int flag_count() const;
};

/// Residual-based detection: residuals[t] is the L1 norm (by default) of the
/// per-constraint residual vector a_hat * y(t).
FaultReport detect(const Mat& a_hat, const Mat& y, double tolerance,
                   ResidualNorm norm = ResidualNorm::l1);

/// Fills report.score by comparing flags against an oracle flag vector.
void score_against(FaultReport& report, const std::vector<uint8_t>& oracle_flags);

struct MagnitudeLaw {
  enum class Kind { constant, uniform_channel_scaled } kind = Kind::uniform_channel_scaled;
  /// constant: the additive magnitude itself; uniform_channel_scaled: faults
  /// drawn uniformly in +-value * (channel standard deviation).
  double value = 5.0;
};

struct FaultExperimentConfig {
  ConstraintModel model;
  std::optional<StructureMask> mask;   // required by spca / cspca
  std::vector<Method> methods;
  std::vector<int> known_rows;         // 1-based true-model rows for cpca
  double snr = 1000.0;
  int n_samples = 1000;
  int n_faulty = 50;
  int runs = 100;
  uint64_t seed = 0;
  double tolerance = 1.0;
  MagnitudeLaw magnitude;
  ResidualNorm norm = ResidualNorm::l1;
  IdentifyOptions id_opts;
};

struct FaultExperimentResult {
  int oracle_count = 0;                   // detections with the true model
  std::map<Method, int> counts;           // detections with each averaged estimate
  std::map<Method, double> theta;         // theta of each averaged estimate
  int n_injected = 0;
};

/// Reproduces the averaged-estimate detection protocol: identify per MC run,
/// sign-align and average the estimates, inject faults into randomly chosen
/// samples of a fresh noisy dataset, and count detections per method plus the
/// true-model oracle.
FaultExperimentResult fault_experiment(const FaultExperimentConfig& config);

/// Elementwise mean after aligning every matrix's rows to the first one by
/// sign (eigenvector signs are ambiguous; averaging without alignment would
/// cancel).
Mat sign_aligned_mean(const std::vector<Mat>& mats);

}  // namespace structpca
