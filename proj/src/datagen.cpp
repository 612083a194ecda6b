#include "structpca/datagen.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "structpca/rng.hpp"

namespace structpca {

namespace {

// Stream tags so signal and noise draws never interleave.
constexpr uint64_t kSignalStream = 0x5349474Eull;  // "SIGN"
constexpr uint64_t kNoiseStream = 0x4E4F4953ull;   // "NOIS"

Vec channel_variances(const Mat& x) {
  const Eigen::Index n_samples = x.cols();
  Vec var(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mean = x.row(i).mean();
    var(i) = (x.row(i).array() - mean).square().sum() /
             static_cast<double>(n_samples - 1);
  }
  return var;
}

}  // namespace

Mat simulate(const GenSpec& spec) {
  const int n = spec.model.cols();
  const int m = spec.model.rows();
  if (spec.n_samples < n - m + 1) {
    raise(Errc::invalid_argument,
          "need at least " + std::to_string(n - m + 1) + " samples to span the null space");
  }
  const Mat basis = null_space_basis(spec.model.a);

  Rng rng(derive_seed({spec.seed, kSignalStream}));
  Mat coeffs(basis.cols(), spec.n_samples);
  for (Eigen::Index i = 0; i < coeffs.rows(); ++i) {
    for (Eigen::Index t = 0; t < coeffs.cols(); ++t) {
      coeffs(i, t) = spec.coeff_law == CoeffLaw::standard_normal ? rng.normal()
                                                                 : rng.uniform(-1.0, 1.0);
    }
  }
  return basis * coeffs;
}

NoisyData add_noise(const Mat& x, double snr, uint64_t seed, NoiseMode mode) {
  if (!(snr > 0.0)) {
    raise(Errc::invalid_argument, "snr must be positive");
  }
  if (std::isinf(snr)) {
    return NoisyData{x, 0.0};
  }
  if (x.cols() < 2) {
    raise(Errc::invalid_argument, "need at least two samples to estimate signal variance");
  }

  const Vec var = channel_variances(x);
  if (var.maxCoeff() <= 0.0) {
    raise(Errc::degenerate_signal, "all channel variances are zero");
  }

  Rng rng(derive_seed({seed, kNoiseStream}));
  Mat y = x;
  if (mode == NoiseMode::shared_sigma) {
    const double sigma = std::sqrt(var.mean() / snr);
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      for (Eigen::Index t = 0; t < y.cols(); ++t) {
        y(i, t) += sigma * rng.normal();
      }
    }
    return NoisyData{std::move(y), sigma};
  }

  Vec sigmas(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) sigmas(i) = std::sqrt(var(i) / snr);
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index t = 0; t < y.cols(); ++t) {
      y(i, t) += sigmas(i) * rng.normal();
    }
  }
  const double rms = std::sqrt(sigmas.array().square().mean());
  return NoisyData{std::move(y), rms};
}

DataSet make_dataset(const ConstraintModel& model, int n_samples, double snr,
                     uint64_t seed, CoeffLaw law, NoiseMode mode) {
  GenSpec spec{model, n_samples, law, seed};
  Mat x = simulate(spec);
  NoisyData noisy = add_noise(x, snr, seed, mode);
  return DataSet{std::move(x), std::move(noisy.y), noisy.sigma, seed, snr};
}

}  // namespace structpca
