#include <doctest.h>

#include <cmath>

#include "gsample/errors.hpp"
#include "gsample/estimation.hpp"
#include "test_util.hpp"

using namespace gsample;
using doctest::Approx;

namespace {

spectral::SpectralBasis rgg_basis(std::size_t n, std::uint64_t seed) {
  return spectral::eigendecompose(graph::laplacian(graph::random_geometric(n, 0.5, 0.3, seed)));
}

}  // namespace

TEST_CASE("sequence_from_allocation") {
  CHECK(estimation::sequence_from_allocation(design::SampleAllocation::make({2, 0, 1}, 3)).nodes ==
        std::vector<std::size_t>{0, 0, 2});
  CHECK(estimation::sequence_from_allocation(design::SampleAllocation::make({0, 4, 0}, 4)).nodes ==
        std::vector<std::size_t>{1, 1, 1, 1});
  estimation::SamplingSequence s{{3, 1, 3}};
  CHECK(s.counts(4) == std::vector<long>{0, 1, 0, 2});
}

TEST_CASE("sample_with_noise") {
  Eigen::VectorXd f(4);
  f << 1.0, -2.0, 0.5, 3.0;
  estimation::SamplingSequence s{{0, 3, 3, 1}};
  SUBCASE("infinite SNR is exact") {
    auto y = estimation::sample_with_noise(f, s, estimation::kNoiselessSnr, 1);
    CHECK(y.noise_std == 0.0);
    CHECK(y.values == Eigen::Vector4d(1.0, 3.0, 3.0, -2.0));
  }
  SUBCASE("zero signal has zero noise") {
    auto y = estimation::sample_with_noise(Eigen::VectorXd::Zero(4), s, 0.0, 1);
    CHECK(y.noise_std == 0.0);
    CHECK(y.values.isZero());
  }
  SUBCASE("constant signal at 10 dB has std c / sqrt(10)") {
    const double c = 2.0;
    Eigen::VectorXd fc = Eigen::VectorXd::Constant(4, c);
    estimation::SamplingSequence big{std::vector<std::size_t>(100000, 2)};
    auto y = estimation::sample_with_noise(fc, big, 10.0, 5);
    const Eigen::ArrayXd w = y.values.array() - c;
    const double sd = std::sqrt((w - w.mean()).square().sum() / (w.size() - 1));
    CHECK(sd == Approx(c / std::sqrt(10.0)).epsilon(0.02));
    CHECK(y.noise_std == Approx(c / std::sqrt(10.0)));
  }
  SUBCASE("the two power references") {
    auto ys = estimation::sample_with_noise(f, s, 0.0, 2, estimation::SnrReference::Samples);
    auto yf = estimation::sample_with_noise(f, s, 0.0, 2, estimation::SnrReference::Signal);
    CHECK(ys.noise_std == Approx(std::sqrt((1.0 + 9.0 + 9.0 + 4.0) / 4.0)));
    CHECK(yf.noise_std == Approx(std::sqrt((1.0 + 4.0 + 0.25 + 9.0) / 4.0)));
    // Same seed, same standard draws.
    const Eigen::VectorXd z = estimation::standard_noise(4, 2);
    const Eigen::Vector4d clean(1.0, 3.0, 3.0, -2.0);
    CHECK((ys.values - clean - ys.noise_std * z).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((yf.values - clean - yf.noise_std * z).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("empty sequence") {
    CHECK_THROWS(estimation::sample_with_noise(f, {}, 10.0, 1));
  }
}

TEST_CASE("blue_estimate") {
  SUBCASE("K = 1, node 0 sampled twice") {
    auto b = spectral::eigendecompose(graph::laplacian(testutil::complete_graph(4)));
    auto r = estimation::blue_estimate(b, 1, {{0, 0}}, Eigen::Vector2d(3.0, 5.0));
    CHECK(r.coeff_estimate[0] == Approx(8.0));
    for (int i = 0; i < 4; ++i) CHECK(r.signal_estimate[i] == Approx(4.0));
    CHECK_FALSE(r.error_l2.has_value());
  }
  SUBCASE("noiseless bandlimited samples are reproduced") {
    auto b = rgg_basis(30, 1);
    std::mt19937_64 gen(2);
    Eigen::VectorXd coeffs = testutil::gaussian(6, 1, gen);
    Eigen::VectorXd f = spectral::synthesize_bandlimited(b, {6, coeffs});
    estimation::SamplingSequence s{{0, 3, 4, 7, 9, 12, 15, 15, 21, 28}};
    auto y = estimation::sample_with_noise(f, s, estimation::kNoiselessSnr, 0);
    auto r = estimation::blue_estimate(b, 6, s, y.values, &f);
    CHECK(*r.error_l2 <= 1e-10);
    CHECK((r.coeff_estimate - coeffs).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("the estimate lies in the span of the first K eigenvectors") {
    auto b = rgg_basis(25, 3);
    std::mt19937_64 gen(4);
    estimation::SamplingSequence s{{1, 2, 5, 8, 13, 21}};
    auto r = estimation::blue_estimate(b, 4, s, testutil::gaussian(6, 1, gen));
    const Eigen::MatrixXd V = b.eigenvectors.leftCols(4);
    CHECK((r.signal_estimate - V * (V.transpose() * r.signal_estimate)).norm() <= 1e-10);
  }
  SUBCASE("rank deficiency") {
    auto b = rgg_basis(20, 5);
    CHECK_THROWS_AS(estimation::blue_estimate(b, 3, {{0, 1}}, Eigen::Vector2d(1, 2)), RankDeficientSampling);
    CHECK_THROWS_AS(estimation::blue_estimate(b, 3, {{4, 4, 4, 4}}, Eigen::Vector4d(1, 2, 3, 4)),
                    RankDeficientSampling);
  }
}

TEST_CASE("error_covariance") {
  SUBCASE("K = 1") {
    auto b = rgg_basis(10, 6);
    auto rows = spectral::design_rows(b, 1);
    auto e = estimation::error_covariance(rows, std::vector<long>{0, 3, 0, 0, 2, 0, 0, 0, 1, 0});
    CHECK(e.trace == Approx(10.0 / 6.0));
  }
  SUBCASE("standard basis rows sampled once") {
    Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(2, 2);
    CHECK(estimation::error_covariance(rows, std::vector<long>{1, 1}).trace == Approx(2.0));
  }
  SUBCASE("repeating every sample r times divides the trace by r") {
    std::mt19937_64 gen(7);
    auto rows = testutil::orthonormal_rows(9, 3, gen);
    std::vector<long> m{1, 0, 2, 1, 0, 1, 0, 0, 1};
    const double base = estimation::error_covariance(rows, m).trace;
    for (long r : {2L, 3L, 7L}) {
      std::vector<long> mr;
      for (long x : m) mr.push_back(r * x);
      CHECK(estimation::error_covariance(rows, mr).trace == Approx(base / static_cast<double>(r)).epsilon(1e-12));
    }
  }
  SUBCASE("sequence and count overloads agree") {
    std::mt19937_64 gen(8);
    auto rows = testutil::orthonormal_rows(6, 2, gen);
    auto a = estimation::error_covariance(rows, estimation::SamplingSequence{{0, 0, 3, 5}});
    auto c = estimation::error_covariance(rows, std::vector<long>{2, 0, 0, 1, 0, 1});
    CHECK(a.trace == Approx(c.trace));
    CHECK(a.max_eigen == Approx(c.max_eigen));
    CHECK(a.log_det == Approx(c.log_det));
  }
}

TEST_CASE("Monte Carlo: MSE identity and unbiasedness") {
  auto b = rgg_basis(30, 9);
  const Eigen::Index K = 4;
  std::mt19937_64 gen(10);
  const Eigen::VectorXd coeffs = testutil::gaussian(K, 1, gen);
  const Eigen::VectorXd f = spectral::synthesize_bandlimited(b, {K, coeffs});
  estimation::SamplingSequence s{{0, 2, 2, 5, 11, 17, 23, 29}};
  const double tr = estimation::error_covariance(spectral::design_rows(b, K), s).trace;
  const int draws = 100000;
  double mse = 0.0;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(K), sq = Eigen::VectorXd::Zero(K);
  Eigen::VectorXd clean(static_cast<Eigen::Index>(s.size()));
  for (std::size_t t = 0; t < s.size(); ++t) clean[static_cast<Eigen::Index>(t)] = f[static_cast<Eigen::Index>(s.nodes[t])];
  for (int d = 0; d < draws; ++d) {
    const Eigen::VectorXd y = clean + estimation::standard_noise(s.size(), static_cast<std::uint64_t>(d));
    auto r = estimation::blue_estimate(b, K, s, y, &f);
    mse += *r.error_l2 * *r.error_l2;
    sum += r.coeff_estimate;
    sq += r.coeff_estimate.cwiseProduct(r.coeff_estimate);
  }
  CHECK(mse / draws == Approx(tr).epsilon(0.03));
  for (Eigen::Index k = 0; k < K; ++k) {
    const double mean = sum[k] / draws;
    const double var = sq[k] / draws - mean * mean;
    CHECK(std::abs(mean - coeffs[k]) <= 4.0 * std::sqrt(var / draws));
  }
}

TEST_CASE("reconstruction_error") {
  CHECK(estimation::reconstruction_error(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 2, 3)) == 0.0);
  CHECK(estimation::reconstruction_error(Eigen::Vector3d(3, 4, 0), Eigen::Vector3d::Zero()) == Approx(5.0));
  std::mt19937_64 gen(11);
  Eigen::VectorXd a = testutil::gaussian(50, 1, gen), c = testutil::gaussian(50, 1, gen);
  long double s = 0.0L;
  for (int i = 0; i < 50; ++i) s += static_cast<long double>(a[i] - c[i]) * (a[i] - c[i]);
  CHECK(estimation::reconstruction_error(a, c) == Approx(static_cast<double>(std::sqrt(s))).epsilon(1e-14));
  CHECK_THROWS(estimation::reconstruction_error(Eigen::Vector2d::Zero(), Eigen::Vector3d::Zero()));
}
