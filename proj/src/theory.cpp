#include <cmath>
#include <stdexcept>

#include "gsample/design.hpp"

namespace gsample::design {

double uniform_cell_residual_variance(long budget) {
  if (budget < 1) throw std::invalid_argument("budget must be positive");
  const double M = static_cast<double>(budget);
  return 5.0 / (192.0 * M * M * M);
}

double invertibility_probability_bound(double sigma_min, std::span<const double> variances) {
  if (!(sigma_min > 0.0)) throw std::invalid_argument("sigma_min must be positive");
  const double s2 = sigma_min * sigma_min;
  double prod = 1.0;
  for (double v : variances) {
    const double factor = 1.0 - v / s2;
    if (factor <= 0.0) return 0.0;
    prod *= factor;
  }
  return std::clamp(prod, 0.0, 1.0);
}

double invertibility_probability_bound(double sigma_min, long budget, std::size_t n) {
  if (!(sigma_min > 0.0)) throw std::invalid_argument("sigma_min must be positive");
  if (n < 1) throw std::invalid_argument("node count must be positive");
  const double factor = 1.0 - uniform_cell_residual_variance(budget) / (sigma_min * sigma_min);
  if (factor <= 0.0) return 0.0;
  return std::clamp(std::pow(factor, static_cast<double>(n)), 0.0, 1.0);
}

long min_sample_size(double sigma_min, std::size_t n, double eta) {
  if (!(sigma_min > 0.0)) throw std::invalid_argument("sigma_min must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("eta must lie in (0, 1)");
  if (n < 1) throw std::invalid_argument("node count must be positive");
  // 1 - eta^(1/n) without cancellation for eta close to 1 or large n.
  const long double one_minus_root = -std::expm1(std::log(static_cast<long double>(eta)) / static_cast<long double>(n));
  const long double s = sigma_min;
  const long double arg = 5.0L / (192.0L * one_minus_root * s * s);
  const long double m = std::ceil(std::cbrt(arg));
  return std::max(1L, static_cast<long>(m));
}

Eigen::VectorXd empirical_residual_variance(const Eigen::VectorXd& p, long budget, int draws,
                                            std::uint64_t seed) {
  if (draws < 2) throw std::invalid_argument("need at least two draws");
  auto rng = make_rng(seed);
  const double M = static_cast<double>(budget);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(p.size());
  Eigen::VectorXd m2 = Eigen::VectorXd::Zero(p.size());
  for (int k = 1; k <= draws; ++k) {
    const auto raw = quantize_raw(p, budget, rng);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      const double x = static_cast<double>(raw[static_cast<std::size_t>(i)]) / M - p[i];
      const double dx = x - mean[i];
      mean[i] += dx / k;
      m2[i] += dx * (x - mean[i]);
    }
  }
  return m2 / static_cast<double>(draws - 1);
}

PerturbationNorm perturbation_norm(const DesignRows& rows, const QuantizationResidual& residual) {
  if (rows.rows() != residual.delta.size()) throw std::invalid_argument("perturbation_norm: dimension mismatch");
  PerturbationNorm out;
  if (residual.delta.size() == 0) return out;
  const Eigen::MatrixXd dA = rows.transpose() * residual.delta.asDiagonal() * rows;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (dA + dA.transpose()), Eigen::EigenvaluesOnly);
  out.spectral_norm = es.eigenvalues().cwiseAbs().maxCoeff();
  out.max_abs_delta = residual.delta.cwiseAbs().maxCoeff();
  // ||V^T diag(delta) V||_2 <= ||diag(delta)||_2 for orthonormal-column V.
  if (out.spectral_norm > out.max_abs_delta + 1e-10) {
    throw std::logic_error("perturbation norm exceeds max|delta|; rows are not orthonormal columns");
  }
  return out;
}

}  // namespace gsample::design
