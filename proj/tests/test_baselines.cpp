#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "gsample/baselines.hpp"
#include "test_util.hpp"

using namespace gsample;

namespace {

double sigma_min_of(const Eigen::MatrixXd& rows, const std::vector<std::size_t>& chosen) {
  const Eigen::Index r = static_cast<Eigen::Index>(chosen.size());
  const Eigen::Index cols = std::min(r, rows.cols());
  Eigen::MatrixXd sub(r, cols);
  for (Eigen::Index t = 0; t < r; ++t) sub.row(t) = rows.row(static_cast<Eigen::Index>(chosen[static_cast<std::size_t>(t)])).head(cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
  return svd.singularValues()(cols - 1);
}

}  // namespace

TEST_CASE("greedy_sigma_min") {
  SUBCASE("picks the only full-rank pair") {
    Eigen::MatrixXd rows(3, 2);
    rows << 1, 0, 0, 1, 1, 0;
    CHECK(baselines::greedy_sigma_min(rows, 2).nodes == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("M = N returns every node") {
    std::mt19937_64 gen(1);
    auto rows = testutil::orthonormal_rows(7, 3, gen);
    CHECK(baselines::greedy_sigma_min(rows, 7).nodes == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});
  }
  SUBCASE("M > N") {
    CHECK_THROWS_AS(baselines::greedy_sigma_min(Eigen::MatrixXd::Identity(3, 2), 4), std::invalid_argument);
  }
  SUBCASE("every step matches the per-step enumeration oracle") {
    std::mt19937_64 gen(2);
    for (int t = 0; t < 20; ++t) {
      auto rows = testutil::orthonormal_rows(6, 2, gen);
      std::vector<std::size_t> chosen;
      for (int step = 0; step < 3; ++step) {
        std::size_t best = 6;
        double best_val = -1.0;
        for (std::size_t i = 0; i < 6; ++i) {
          if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) continue;
          auto trial = chosen;
          trial.push_back(i);
          const double v = sigma_min_of(rows, trial);
          CHECK(baselines::greedy_score(rows, trial) == doctest::Approx(v).epsilon(1e-12));
          if (v > best_val) {
            best_val = v;
            best = i;
          }
        }
        chosen.push_back(best);
      }
      std::sort(chosen.begin(), chosen.end());
      CHECK(baselines::greedy_sigma_min(rows, 3).nodes == chosen);
    }
  }
  SUBCASE("full rank whenever some subset of that size is") {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 20; ++t) {
      auto rows = testutil::orthonormal_rows(8, 3, gen);
      for (std::size_t M : {3u, 4u}) {
        auto s = baselines::greedy_sigma_min(rows, M);
        CHECK(sigma_min_of(rows, s.nodes) > 1e-10);
      }
    }
  }
}

TEST_CASE("top_m_selection") {
  CHECK(baselines::top_m_selection(design::DesignWeights::make(Eigen::Vector3d(0.5, 0.3, 0.2)), 2).nodes ==
        std::vector<std::size_t>{0, 1});
  CHECK(baselines::top_m_selection(design::DesignWeights::uniform(5), 3).nodes == std::vector<std::size_t>{0, 1, 2});
  CHECK_THROWS_AS(baselines::top_m_selection(design::DesignWeights::uniform(3), 4), std::invalid_argument);
  std::mt19937_64 gen(4);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd p = testutil::random_simplex(15, gen);
    std::vector<std::size_t> idx(15);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return p[static_cast<Eigen::Index>(a)] > p[static_cast<Eigen::Index>(b)]; });
    idx.resize(6);
    std::sort(idx.begin(), idx.end());
    CHECK(baselines::top_m_selection(design::DesignWeights::make(p), 6).nodes == idx);
  }
}
