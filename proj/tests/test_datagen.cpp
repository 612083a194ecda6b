#include <doctest.h>

#include <cmath>

#include "structpca/datagen.hpp"
#include "structpca/registry.hpp"

using namespace structpca;

namespace {

double mean_channel_variance(const Mat& x) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double mean = x.row(i).mean();
    acc += (x.row(i).array() - mean).square().sum() / static_cast<double>(x.cols() - 1);
  }
  return acc / static_cast<double>(x.rows());
}

}  // namespace

TEST_SUITE("datagen") {

TEST_CASE("simulate output satisfies the model") {
  const CaseFixture fixture = registry_lookup("flow-mix");
  const Mat x = simulate(GenSpec{fixture.model, 1000, CoeffLaw::standard_normal, 3});
  CHECK((fixture.model.a * x).cwiseAbs().maxCoeff() < 1e-10 * x.cwiseAbs().maxCoeff());
  CHECK(numeric_rank(x) == 2);  // null-space dimension n - m = 5 - 3
}

TEST_CASE("simulate projects onto the null space only") {
  const CaseFixture fixture = registry_lookup("cs3");
  const Mat x = simulate(GenSpec{fixture.model, 500, CoeffLaw::standard_normal, 9});
  // projecting X onto the row space of the model leaves nearly nothing
  Eigen::JacobiSVD<Mat> svd(fixture.model.a, Eigen::ComputeFullV);
  const Mat q = svd.matrixV().leftCols(fixture.model.rows());
  CHECK((q.transpose() * x).norm() < 1e-9 * x.norm());
}

TEST_CASE("simulate is deterministic and seed-sensitive") {
  const CaseFixture fixture = registry_lookup("flow-mix");
  const GenSpec spec{fixture.model, 100, CoeffLaw::standard_normal, 1234};
  const Mat a = simulate(spec);
  const Mat b = simulate(spec);
  CHECK(a == b);  // bitwise

  GenSpec other = spec;
  other.seed = 1235;
  CHECK(simulate(other) != a);
}

TEST_CASE("simulate supports the uniform coefficient law") {
  const CaseFixture fixture = registry_lookup("flow-mix");
  const Mat x = simulate(GenSpec{fixture.model, 400, CoeffLaw::uniform_pm1, 5});
  CHECK((fixture.model.a * x).cwiseAbs().maxCoeff() < 1e-10 * x.cwiseAbs().maxCoeff());
}

TEST_CASE("simulate rejects too few samples") {
  const CaseFixture fixture = registry_lookup("flow-mix");
  CHECK_THROWS_AS(simulate(GenSpec{fixture.model, 2, CoeffLaw::standard_normal, 0}), Error);
}

TEST_CASE("add_noise infinite snr returns the input") {
  const CaseFixture fixture = registry_lookup("flow-mix");
  const Mat x = simulate(GenSpec{fixture.model, 50, CoeffLaw::standard_normal, 2});
  const NoisyData noisy = add_noise(x, std::numeric_limits<double>::infinity(), 2);
  CHECK(noisy.sigma == 0.0);
  CHECK(noisy.y == x);
}

TEST_CASE("add_noise realizes the requested snr") {
  const CaseFixture fixture = registry_lookup("flow-mix");
  const Mat x = simulate(GenSpec{fixture.model, 100000, CoeffLaw::standard_normal, 7});
  const NoisyData noisy = add_noise(x, 10.0, 7);
  const Mat e = noisy.y - x;
  const double realized = mean_channel_variance(e) * 10.0 / mean_channel_variance(x);
  CHECK(realized > 0.97);
  CHECK(realized < 1.03);

  SUBCASE("empirical noise power matches sigma^2 within 3 percent") {
    const double power = e.squaredNorm() / static_cast<double>(e.size());
    CHECK(power == doctest::Approx(noisy.sigma * noisy.sigma).epsilon(0.03));
  }
}

TEST_CASE("add_noise is deterministic") {
  const CaseFixture fixture = registry_lookup("cs1");
  const Mat x = simulate(GenSpec{fixture.model, 300, CoeffLaw::standard_normal, 11});
  const NoisyData a = add_noise(x, 20.0, 99);
  const NoisyData b = add_noise(x, 20.0, 99);
  CHECK(a.y == b.y);
  CHECK(a.sigma == b.sigma);
}

TEST_CASE("add_noise rejects degenerate signals and bad snr") {
  const Mat zeros = Mat::Zero(3, 100);
  CHECK_THROWS_AS(add_noise(zeros, 10.0, 0), Error);
  const Mat x = Mat::Random(3, 100);
  CHECK_THROWS_AS(add_noise(x, 0.0, 0), Error);
  CHECK_THROWS_AS(add_noise(x, -5.0, 0), Error);
}

TEST_CASE("per-channel mode calibrates each channel") {
  const CaseFixture fixture = registry_lookup("flow-mix");
  const Mat x = simulate(GenSpec{fixture.model, 100000, CoeffLaw::standard_normal, 13});
  const NoisyData noisy = add_noise(x, 10.0, 13, NoiseMode::per_channel_sigma);
  const Mat e = noisy.y - x;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double var_x =
        (x.row(i).array() - x.row(i).mean()).square().sum() / (x.cols() - 1.0);
    const double var_e =
        (e.row(i).array() - e.row(i).mean()).square().sum() / (e.cols() - 1.0);
    CHECK(var_e * 10.0 / var_x == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("make_dataset ties the pieces together") {
  const CaseFixture fixture = registry_lookup("flow-mix");
  const DataSet data = make_dataset(fixture.model, 500, 10.0, 21);
  CHECK(data.x.rows() == 5);
  CHECK(data.x.cols() == 500);
  CHECK(data.y.rows() == 5);
  CHECK(data.sigma > 0.0);
  CHECK(data.seed == 21);

  SUBCASE("noise stream does not perturb the signal stream") {
    const Mat x_alone = simulate(GenSpec{fixture.model, 500, CoeffLaw::standard_normal, 21});
    CHECK(data.x == x_alone);
  }
  SUBCASE("snr inf means y equals x") {
    const DataSet clean =
        make_dataset(fixture.model, 500, std::numeric_limits<double>::infinity(), 21);
    CHECK(clean.y == clean.x);
    CHECK(clean.sigma == 0.0);
  }
}

}  // TEST_SUITE
