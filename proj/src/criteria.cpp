#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gsample/design.hpp"
#include "gsample/errors.hpp"

namespace gsample::design {

Criterion parse_criterion(std::string_view s) {
  std::string lower;
  for (char ch : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "a" || lower == "a_opt" || lower == "a-opt") return Criterion::A;
  if (lower == "d" || lower == "d_opt" || lower == "d-opt") return Criterion::D;
  if (lower == "e" || lower == "e_opt" || lower == "e-opt") return Criterion::E;
  throw std::invalid_argument("unknown criterion '" + std::string(s) + "' (expected a, d or e)");
}

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::A: return "a";
    case Criterion::D: return "d";
    case Criterion::E: return "e";
  }
  return "?";
}

DesignWeights DesignWeights::make(Eigen::VectorXd p) {
  if (p.size() == 0) throw std::invalid_argument("design weights must be nonempty");
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0) || !std::isfinite(p[i])) {
      throw std::invalid_argument("design weight " + std::to_string(i) + " is negative or not finite");
    }
  }
  if (std::abs(p.sum() - 1.0) > 1e-10) throw std::invalid_argument("design weights must sum to 1");
  return DesignWeights(std::move(p));
}

DesignWeights DesignWeights::uniform(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("design weights must be nonempty");
  return DesignWeights(Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)));
}

SampleAllocation SampleAllocation::make(std::vector<long> counts, long budget) {
  if (budget < 1) throw std::invalid_argument("sample budget must be positive");
  long total = 0;
  for (long m : counts) {
    if (m < 0) throw std::invalid_argument("sample quotas must be nonnegative");
    total += m;
  }
  if (total != budget) {
    throw std::invalid_argument("quotas sum to " + std::to_string(total) + ", budget is " +
                                std::to_string(budget));
  }
  return SampleAllocation{std::move(counts), budget};
}

Eigen::VectorXd SampleAllocation::proportions() const {
  Eigen::VectorXd q(static_cast<Eigen::Index>(counts.size()));
  for (std::size_t i = 0; i < counts.size(); ++i) {
    q[static_cast<Eigen::Index>(i)] = static_cast<double>(counts[i]) / static_cast<double>(budget);
  }
  return q;
}

InformationMatrix information_matrix(const DesignRows& rows, const Eigen::VectorXd& weights) {
  if (rows.rows() != weights.size()) throw std::invalid_argument("information_matrix: dimension mismatch");
  InformationMatrix A = rows.transpose() * weights.asDiagonal() * rows;
  return 0.5 * (A + A.transpose());
}

double sigma_min(const InformationMatrix& A) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

void require_invertible(const InformationMatrix& A, std::string_view what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (!(ev[0] > 1e-12 * top) || top == 0.0) {
    throw SingularInformationMatrix(std::string(what) + ": information matrix is singular (sigma_min = " +
                                    std::to_string(ev[0]) + ")");
  }
}

namespace {

Eigen::LLT<Eigen::MatrixXd> factor(const InformationMatrix& A) {
  require_invertible(A, "criterion");
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw SingularInformationMatrix("criterion: Cholesky factorization failed");
  return llt;
}

}  // namespace

double criterion_value(const InformationMatrix& A, Criterion c) {
  switch (c) {
    case Criterion::D: {
      auto llt = factor(A);
      return -2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    }
    case Criterion::A: {
      auto llt = factor(A);
      Eigen::MatrixXd Linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(A.rows(), A.cols()));
      return Linv.squaredNorm();
    }
    case Criterion::E: {
      require_invertible(A, "criterion");
      return 1.0 / sigma_min(A);
    }
  }
  throw std::logic_error("unreachable criterion");
}

Eigen::VectorXd criterion_gradient(const DesignRows& rows, const Eigen::VectorXd& p, Criterion c) {
  const InformationMatrix A = information_matrix(rows, p);
  switch (c) {
    case Criterion::D: {
      auto llt = factor(A);
      // d_i = u_i^T A^-1 u_i = ||L^-1 u_i||^2
      Eigen::MatrixXd X = llt.matrixL().solve(rows.transpose());
      return -X.colwise().squaredNorm().transpose();
    }
    case Criterion::A: {
      auto llt = factor(A);
      Eigen::MatrixXd Y = llt.solve(rows.transpose());
      return -Y.colwise().squaredNorm().transpose();
    }
    case Criterion::E: {
      require_invertible(A, "criterion");
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
      const Eigen::VectorXd& ev = es.eigenvalues();
      const double lam = ev[0];
      // Average over the lambda_min eigenspace when it is repeated; any convex
      // combination is a subgradient and the average is the symmetric one.
      Eigen::Index r = 1;
      while (r < ev.size() && ev[r] - lam <= 1e-9 * ev[ev.size() - 1]) ++r;
      const Eigen::MatrixXd proj = rows * es.eigenvectors().leftCols(r);
      return -(proj.rowwise().squaredNorm().array() / (static_cast<double>(r) * lam * lam)).matrix();
    }
  }
  throw std::logic_error("unreachable criterion");
}

double duality_gap(const DesignRows& rows, const Eigen::VectorXd& p, Criterion c) {
  const Eigen::VectorXd g = criterion_gradient(rows, p, c);
  return -g.minCoeff() + p.dot(g);
}

}  // namespace gsample::design
