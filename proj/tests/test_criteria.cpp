#include <doctest.h>

#include <cmath>

#include "gsample/design.hpp"
#include "gsample/errors.hpp"
#include "test_util.hpp"

using namespace gsample;
using design::Criterion;
using doctest::Approx;

TEST_CASE("information_matrix") {
  std::mt19937_64 rng(1);
  SUBCASE("uniform weights on orthonormal columns give I/N") {
    auto rows = testutil::orthonormal_rows(7, 3, rng);
    auto A = design::information_matrix(rows, design::DesignWeights::uniform(7));
    CHECK((A - Eigen::MatrixXd::Identity(3, 3) / 7.0).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("point mass gives a rank-one matrix") {
    auto rows = testutil::orthonormal_rows(5, 3, rng);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(5);
    p[2] = 1.0;
    auto A = design::information_matrix(rows, p);
    const Eigen::VectorXd u = rows.row(2).transpose();
    CHECK((A - u * u.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    CHECK((es.eigenvalues().array().abs() > 1e-12).count() == 1);
  }
  SUBCASE("matches naive extended-precision summation") {
    auto rows = testutil::orthonormal_rows(5, 2, rng);
    Eigen::VectorXd p = testutil::random_simplex(5, rng);
    auto A = design::information_matrix(rows, p);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        long double s = 0.0L;
        for (int i = 0; i < 5; ++i) s += static_cast<long double>(p[i]) * rows(i, a) * rows(i, b);
        CHECK(std::abs(A(a, b) - static_cast<double>(s)) <= 1e-15);
      }
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(design::information_matrix(Eigen::MatrixXd::Identity(3, 2), Eigen::VectorXd::Ones(4)),
                    std::invalid_argument);
  }
}

TEST_CASE("criterion_value") {
  SUBCASE("identity") {
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
    CHECK(design::criterion_value(I, Criterion::D) == Approx(0.0));
    CHECK(design::criterion_value(I, Criterion::E) == Approx(1.0));
    CHECK(design::criterion_value(I, Criterion::A) == Approx(4.0));
  }
  SUBCASE("diag(2, 0.5)") {
    Eigen::MatrixXd A = Eigen::Vector2d(2.0, 0.5).asDiagonal();
    CHECK(design::criterion_value(A, Criterion::D) == Approx(0.0));
    CHECK(design::criterion_value(A, Criterion::E) == Approx(2.0));
    CHECK(design::criterion_value(A, Criterion::A) == Approx(2.5));
  }
  SUBCASE("random SPD against the eigenvalue oracle") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
      Eigen::MatrixXd A = testutil::random_spd(3, rng);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
      const Eigen::ArrayXd lam = es.eigenvalues().array();
      CHECK(design::criterion_value(A, Criterion::D) == Approx(-lam.log().sum()).epsilon(1e-12));
      CHECK(design::criterion_value(A, Criterion::E) == Approx(1.0 / lam.minCoeff()).epsilon(1e-12));
      CHECK(design::criterion_value(A, Criterion::A) == Approx(lam.inverse().sum()).epsilon(1e-12));
    }
  }
  SUBCASE("singular matrices are rejected") {
    Eigen::MatrixXd A = Eigen::Vector2d(1.0, 0.0).asDiagonal();
    for (auto c : {Criterion::A, Criterion::D, Criterion::E})
      CHECK_THROWS_AS(design::criterion_value(A, c), SingularInformationMatrix);
    Eigen::MatrixXd tiny = Eigen::Vector2d(1.0, 1e-13).asDiagonal();
    CHECK_THROWS_AS(design::criterion_value(tiny, Criterion::A), SingularInformationMatrix);
  }
}

TEST_CASE("criterion_gradient") {
  SUBCASE("K = 1 gives a constant gradient") {
    Eigen::MatrixXd rows = Eigen::MatrixXd::Constant(5, 1, 1.0 / std::sqrt(5.0));
    std::mt19937_64 rng(2);
    Eigen::VectorXd p = testutil::random_simplex(5, rng);
    for (auto c : {Criterion::A, Criterion::D, Criterion::E}) {
      auto g = design::criterion_gradient(rows, p, c);
      CHECK(g.maxCoeff() - g.minCoeff() <= 1e-12 * std::abs(g[0]));
    }
  }
  SUBCASE("A-optimal, standard basis, p = (1/2, 1/2)") {
    Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(2, 2);
    auto g = design::criterion_gradient(rows, Eigen::Vector2d(0.5, 0.5), Criterion::A);
    CHECK(g[0] == Approx(-4.0));
    CHECK(g[1] == Approx(-4.0));
  }
  SUBCASE("central finite differences on 50 random instances") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 50; ++t) {
      auto rows = testutil::orthonormal_rows(9, 3, rng);
      Eigen::VectorXd p = testutil::random_simplex(9, rng);
      for (auto c : {Criterion::A, Criterion::D}) {
        auto g = design::criterion_gradient(rows, p, c);
        for (Eigen::Index i = 0; i < 9; ++i) {
          const double h = 1e-5;
          Eigen::VectorXd pp = p, pm = p;
          pp[i] += h;
          pm[i] -= h;
          const double fd = (design::criterion_value(design::information_matrix(rows, pp), c) -
                             design::criterion_value(design::information_matrix(rows, pm), c)) /
                            (2 * h);
          CHECK(std::abs(fd - g[i]) <= 1e-5 * std::max(std::abs(g[i]), 1e-3));
        }
      }
    }
  }
  SUBCASE("E gradient is the derivative of 1/lambda_min at a simple eigenvalue") {
    std::mt19937_64 rng(10);
    auto rows = testutil::orthonormal_rows(8, 3, rng);
    Eigen::VectorXd p = testutil::random_simplex(8, rng);
    auto g = design::criterion_gradient(rows, p, Criterion::E);
    for (Eigen::Index i = 0; i < 8; ++i) {
      const double h = 1e-6;
      Eigen::VectorXd pp = p, pm = p;
      pp[i] += h;
      pm[i] -= h;
      const double fd = (design::criterion_value(design::information_matrix(rows, pp), Criterion::E) -
                         design::criterion_value(design::information_matrix(rows, pm), Criterion::E)) /
                        (2 * h);
      CHECK(fd == Approx(g[i]).epsilon(1e-5));
    }
  }
}

TEST_CASE("duality_gap") {
  SUBCASE("closed-form optimum of the 2x2 standard basis") {
    Eigen::MatrixXd rows = Eigen::MatrixXd::Identity(2, 2);
    for (auto c : {Criterion::A, Criterion::D, Criterion::E})
      CHECK(std::abs(design::duality_gap(rows, Eigen::Vector2d(0.5, 0.5), c)) <= 1e-9);
  }
  SUBCASE("K = 1 has zero gap everywhere") {
    Eigen::MatrixXd rows = Eigen::MatrixXd::Constant(6, 1, 1.0 / std::sqrt(6.0));
    std::mt19937_64 rng(3);
    for (int t = 0; t < 10; ++t) {
      Eigen::VectorXd p = testutil::random_simplex(6, rng);
      CHECK(std::abs(design::duality_gap(rows, p, Criterion::A)) <= 1e-9);
      CHECK(std::abs(design::duality_gap(rows, p, Criterion::D)) <= 1e-12);
    }
  }
  SUBCASE("uniform start on a random instance is not stationary") {
    std::mt19937_64 rng(5);
    auto rows = testutil::orthonormal_rows(10, 3, rng);
    const Eigen::VectorXd p = design::DesignWeights::uniform(10).values();
    for (auto c : {Criterion::A, Criterion::D}) {
      const double gap = design::duality_gap(rows, p, c);
      CHECK(gap > 1e-3);
      // the gap upper-bounds the suboptimality of the start point
      auto sol = design::solve_relaxed(rows, c);
      const double start = design::criterion_value(design::information_matrix(rows, p), c);
      CHECK(start - sol.objective <= gap + 1e-9);
    }
  }
  SUBCASE("always nonnegative") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 30; ++t) {
      auto rows = testutil::orthonormal_rows(7, 2, rng);
      Eigen::VectorXd p = testutil::random_simplex(7, rng);
      for (auto c : {Criterion::A, Criterion::D, Criterion::E}) CHECK(design::duality_gap(rows, p, c) >= -1e-12);
    }
  }
}

TEST_CASE("convexity along segments") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    auto rows = testutil::orthonormal_rows(8, 3, rng);
    Eigen::VectorXd p = testutil::random_simplex(8, rng);
    Eigen::VectorXd q = testutil::random_simplex(8, rng);
    const double lam = unit(rng);
    for (auto c : {Criterion::A, Criterion::D, Criterion::E}) {
      auto val = [&](const Eigen::VectorXd& w) { return design::criterion_value(design::information_matrix(rows, w), c); };
      CHECK(val(lam * p + (1 - lam) * q) <= lam * val(p) + (1 - lam) * val(q) + 1e-9);
    }
  }
}

TEST_CASE("criteria are invariant under a rotation of the rows") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 10; ++t) {
    auto rows = testutil::orthonormal_rows(9, 3, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(testutil::gaussian(3, 3, rng));
    const Eigen::MatrixXd R = qr.householderQ();
    Eigen::VectorXd p = testutil::random_simplex(9, rng);
    for (auto c : {Criterion::A, Criterion::D, Criterion::E}) {
      const double v1 = design::criterion_value(design::information_matrix(rows, p), c);
      const double v2 = design::criterion_value(design::information_matrix(rows * R, p), c);
      CHECK(v1 == Approx(v2).epsilon(1e-10));
    }
  }
}

TEST_CASE("DesignWeights and SampleAllocation validation") {
  CHECK_THROWS_AS(design::DesignWeights::make(Eigen::Vector2d(0.5, 0.6)), std::invalid_argument);
  CHECK_THROWS_AS(design::DesignWeights::make(Eigen::Vector2d(1.5, -0.5)), std::invalid_argument);
  CHECK_NOTHROW(design::DesignWeights::make(Eigen::Vector2d(0.25, 0.75)));
  CHECK_THROWS_AS(design::SampleAllocation::make({1, 2}, 4), std::invalid_argument);
  CHECK_THROWS_AS(design::SampleAllocation::make({-1, 5}, 4), std::invalid_argument);
  CHECK(design::SampleAllocation::make({1, 3}, 4).proportions().isApprox(Eigen::Vector2d(0.25, 0.75)));
  CHECK(design::parse_criterion("A") == Criterion::A);
  CHECK(design::parse_criterion("d_opt") == Criterion::D);
  CHECK_THROWS_AS(design::parse_criterion("x"), std::invalid_argument);
}
