#include "structpca/faults.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "structpca/metrics.hpp"
#include "structpca/rng.hpp"

namespace structpca {

namespace {

constexpr uint64_t kRunStream = 0x52554E53ull;    // "RUNS"
constexpr uint64_t kEvalStream = 0x4556414Cull;   // "EVAL"
constexpr uint64_t kFaultStream = 0x464C5453ull;  // "FLTS"

Mat identify_for(const FaultExperimentConfig& cfg, Method method, const Mat& y) {
  switch (method) {
    case Method::pca:
      return pca_identify(y, cfg.model.rows(), cfg.id_opts).model.a;
    case Method::spca:
      if (!cfg.mask) raise(Errc::invalid_argument, "spca requires a mask");
      return spca_identify(y, *cfg.mask, cfg.id_opts).model.a;
    case Method::cspca:
      if (!cfg.mask) raise(Errc::invalid_argument, "cspca requires a mask");
      return cspca_identify(y, *cfg.mask, cfg.id_opts).model.a;
    case Method::cpca: {
      if (cfg.known_rows.empty()) {
        raise(Errc::invalid_argument, "cpca requires known_rows");
      }
      Mat a_kn(static_cast<Eigen::Index>(cfg.known_rows.size()), cfg.model.cols());
      for (size_t k = 0; k < cfg.known_rows.size(); ++k) {
        const int r = cfg.known_rows[k];
        if (r < 1 || r > cfg.model.rows()) {
          raise(Errc::invalid_argument, "known row index out of range: " + std::to_string(r));
        }
        a_kn.row(static_cast<Eigen::Index>(k)) = cfg.model.a.row(r - 1);
      }
      const int l = cfg.model.rows() - static_cast<int>(cfg.known_rows.size());
      return cpca_identify(y, a_kn, l, cfg.id_opts).model.a;
    }
  }
  raise(Errc::invalid_argument, "unknown method");
}

}  // namespace

int FaultReport::flag_count() const {
  int count = 0;
  for (uint8_t f : flags) count += f ? 1 : 0;
  return count;
}

FaultReport detect(const Mat& a_hat, const Mat& y, double tolerance, ResidualNorm norm) {
  if (a_hat.cols() != y.rows()) {
    raise(Errc::shape_mismatch, "model width " + std::to_string(a_hat.cols()) +
                                    " does not match variable count " +
                                    std::to_string(y.rows()));
  }
  if (!(tolerance > 0.0)) {
    raise(Errc::invalid_argument, "tolerance must be positive");
  }
  const Mat res = a_hat * y;  // m x N
  FaultReport report;
  report.tolerance = tolerance;
  report.residuals.resize(y.cols());
  report.flags.resize(y.cols());
  for (Eigen::Index t = 0; t < y.cols(); ++t) {
    const double r = norm == ResidualNorm::l1 ? res.col(t).lpNorm<1>() : res.col(t).norm();
    report.residuals[static_cast<size_t>(t)] = r;
    report.flags[static_cast<size_t>(t)] = r > tolerance ? 1 : 0;
  }
  return report;
}

void score_against(FaultReport& report, const std::vector<uint8_t>& oracle_flags) {
  if (oracle_flags.size() != report.flags.size()) {
    raise(Errc::length_mismatch, "oracle flag vector length mismatch");
  }
  FaultReport::Score score;
  for (size_t t = 0; t < report.flags.size(); ++t) {
    const bool got = report.flags[t] != 0;
    const bool want = oracle_flags[t] != 0;
    if (got && want) ++score.true_positive;
    if (got && !want) ++score.false_positive;
    if (!got && want) ++score.false_negative;
  }
  report.score = score;
}

Mat sign_aligned_mean(const std::vector<Mat>& mats) {
  if (mats.empty()) raise(Errc::invalid_argument, "no matrices to average");
  const Mat& ref = mats.front();
  Mat acc = Mat::Zero(ref.rows(), ref.cols());
  for (const Mat& m : mats) {
    if (m.rows() != ref.rows() || m.cols() != ref.cols()) {
      raise(Errc::shape_mismatch, "averaged matrices have differing shapes");
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double dot = m.row(i).dot(ref.row(i));
      acc.row(i) += dot < 0.0 ? (-m.row(i)).eval() : m.row(i).eval();
    }
  }
  return acc / static_cast<double>(mats.size());
}

FaultExperimentResult fault_experiment(const FaultExperimentConfig& cfg) {
  if (cfg.methods.empty()) raise(Errc::invalid_argument, "no methods requested");
  if (cfg.n_faulty > cfg.n_samples) {
    raise(Errc::invalid_argument, "n_faulty exceeds the sample count");
  }
  if (cfg.runs < 1) raise(Errc::invalid_argument, "runs must be positive");

  // Per-run identification, then sign-aligned elementwise averaging.
  std::vector<std::vector<Mat>> per_method(cfg.methods.size());
  for (int run = 0; run < cfg.runs; ++run) {
    const uint64_t run_seed = derive_seed({cfg.seed, kRunStream, static_cast<uint64_t>(run)});
    const DataSet data = make_dataset(cfg.model, cfg.n_samples, cfg.snr, run_seed);
    for (size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      per_method[mi].push_back(identify_for(cfg, cfg.methods[mi], data.y));
    }
  }
  std::vector<Mat> averaged;
  averaged.reserve(cfg.methods.size());
  for (auto& mats : per_method) averaged.push_back(sign_aligned_mean(mats));

  // Fresh evaluation dataset; inject one fault per chosen sample.
  const uint64_t eval_seed = derive_seed({cfg.seed, kEvalStream});
  DataSet eval = make_dataset(cfg.model, cfg.n_samples, cfg.snr, eval_seed);
  Mat y = eval.y;

  Vec channel_std(y.rows());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    const double mean = y.row(i).mean();
    channel_std(i) = std::sqrt((y.row(i).array() - mean).square().sum() /
                               static_cast<double>(y.cols() - 1));
  }

  Rng rng(derive_seed({cfg.seed, kFaultStream}));
  // sample without replacement
  std::vector<int> samples(static_cast<size_t>(cfg.n_samples));
  for (int t = 0; t < cfg.n_samples; ++t) samples[static_cast<size_t>(t)] = t;
  for (int k = 0; k < cfg.n_faulty; ++k) {
    const auto pick = static_cast<size_t>(k) +
                      static_cast<size_t>(rng.below(static_cast<uint64_t>(cfg.n_samples - k)));
    std::swap(samples[static_cast<size_t>(k)], samples[pick]);
  }
  for (int k = 0; k < cfg.n_faulty; ++k) {
    const int t = samples[static_cast<size_t>(k)];
    const auto var = static_cast<Eigen::Index>(rng.below(static_cast<uint64_t>(y.rows())));
    const double magnitude =
        cfg.magnitude.kind == MagnitudeLaw::Kind::constant
            ? cfg.magnitude.value
            : rng.uniform(-cfg.magnitude.value * channel_std(var),
                          cfg.magnitude.value * channel_std(var));
    y(var, t) += magnitude;
  }

  FaultExperimentResult result;
  result.n_injected = cfg.n_faulty;
  result.oracle_count = detect(cfg.model.a, y, cfg.tolerance, cfg.norm).flag_count();
  for (size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    result.counts[cfg.methods[mi]] =
        detect(averaged[mi], y, cfg.tolerance, cfg.norm).flag_count();
    try {
      result.theta[cfg.methods[mi]] = subspace_dependence(cfg.model.a, averaged[mi]).theta;
    } catch (const Error&) {
      result.theta[cfg.methods[mi]] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return result;
}

}  // namespace structpca
