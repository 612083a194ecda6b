#pragma once

#include <cstdint>

#include "structpca/structure.hpp"

namespace structpca {

enum class CoeffLaw { standard_normal, uniform_pm1 };

/// Noise calibration: shared_sigma derives one sigma from the mean of the
/// per-channel signal variances (homoscedastic noise); per_channel_sigma
/// calibrates each channel separately and is non-default.
enum class NoiseMode { shared_sigma, per_channel_sigma };

struct GenSpec {
  ConstraintModel model;  // true model
  int n_samples = 0;
  CoeffLaw coeff_law = CoeffLaw::standard_normal;
  uint64_t seed = 0;
};

/// Noise-free data X = B * M where B is an orthonormal null-space basis of
/// the model and M holds i.i.d. coefficients drawn from coeff_law.
Mat simulate(const GenSpec& spec);

struct NoisyData {
  Mat y;
  double sigma;  // RMS over channels in per-channel mode
};

/// Adds white Gaussian noise at the requested signal-to-noise ratio
/// (variance of the noise-free signal over noise variance). snr may be
/// infinite, in which case y == x and sigma == 0.
NoisyData add_noise(const Mat& x, double snr, uint64_t seed,
                    NoiseMode mode = NoiseMode::shared_sigma);

struct DataSet {
  Mat x;
  Mat y;
  double sigma = 0.0;
  uint64_t seed = 0;
  double snr = 0.0;
};

/// simulate + add_noise with independent signal and noise streams derived
/// from one seed.
DataSet make_dataset(const ConstraintModel& model, int n_samples, double snr,
                     uint64_t seed, CoeffLaw law = CoeffLaw::standard_normal,
                     NoiseMode mode = NoiseMode::shared_sigma);

}  // namespace structpca
