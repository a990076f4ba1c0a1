#include "gsample/estimation.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "gsample/errors.hpp"
#include "gsample/rng.hpp"

namespace gsample::estimation {

std::vector<long> SamplingSequence::counts(std::size_t n) const {
  std::vector<long> m(n, 0);
  for (auto s : nodes) {
    if (s >= n) throw std::invalid_argument("sampled node index out of range");
    ++m[s];
  }
  return m;
}

SamplingSequence sequence_from_allocation(const design::SampleAllocation& alloc) {
  SamplingSequence seq;
  seq.nodes.reserve(static_cast<std::size_t>(alloc.budget));
  for (std::size_t i = 0; i < alloc.counts.size(); ++i) {
    for (long r = 0; r < alloc.counts[i]; ++r) seq.nodes.push_back(i);
  }
  return seq;
}

Eigen::VectorXd standard_noise(std::size_t length, std::uint64_t seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(static_cast<Eigen::Index>(length));
  for (Eigen::Index t = 0; t < z.size(); ++t) z[t] = normal(rng);
  return z;
}

NoisySamples sample_with_noise(const Eigen::VectorXd& signal, const SamplingSequence& seq, double snr_db,
                               std::uint64_t seed, SnrReference ref) {
  if (seq.size() == 0) throw std::invalid_argument("empty sampling sequence");
  NoisySamples out;
  out.values.resize(static_cast<Eigen::Index>(seq.size()));
  for (std::size_t t = 0; t < seq.size(); ++t) {
    if (seq.nodes[t] >= static_cast<std::size_t>(signal.size())) {
      throw std::invalid_argument("sampled node index out of range");
    }
    out.values[static_cast<Eigen::Index>(t)] = signal[static_cast<Eigen::Index>(seq.nodes[t])];
  }
  if (std::isinf(snr_db) && snr_db > 0) return out;
  const double power = ref == SnrReference::Samples
                           ? out.values.squaredNorm() / static_cast<double>(seq.size())
                           : signal.squaredNorm() / static_cast<double>(signal.size());
  if (power == 0.0) return out;
  out.noise_std = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  out.values += out.noise_std * standard_noise(seq.size(), seed);
  return out;
}

namespace {


// Eigendecomposition of B = sum_i m_i u_i u_i^T with the rank check.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> normal_matrix(const spectral::DesignRows& rows,
                                                              const std::vector<long>& counts) {
  if (static_cast<Eigen::Index>(counts.size()) != rows.rows()) {
    throw std::invalid_argument("sample counts do not match the number of nodes");
  }
  Eigen::VectorXd m(rows.rows());
  long total = 0;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m[i] = static_cast<double>(counts[static_cast<std::size_t>(i)]);
    total += counts[static_cast<std::size_t>(i)];
  }
  if (total < rows.cols()) {
    throw RankDeficientSampling("sampling " + std::to_string(total) + " values cannot determine " +
                                std::to_string(rows.cols()) + " coefficients");
  }
  Eigen::MatrixXd B = rows.transpose() * m.asDiagonal() * rows;
  B = 0.5 * (B + B.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  const auto& ev = es.eigenvalues();
  if (!(ev[0] > 1e-12 * ev.cwiseAbs().maxCoeff())) {
    throw RankDeficientSampling("sampled rows of V_K do not have full column rank");
  }
  return es;
}

}  // namespace

EstimateResult blue_estimate(const spectral::SpectralBasis& basis, Eigen::Index bandwidth,
                             const SamplingSequence& seq, const Eigen::VectorXd& samples,
                             const Eigen::VectorXd* truth) {
  if (static_cast<Eigen::Index>(seq.size()) != samples.size()) {
    throw std::invalid_argument("sample vector length does not match the sampling sequence");
  }
  const spectral::DesignRows rows = spectral::design_rows(basis, bandwidth);
  const auto es = normal_matrix(rows, seq.counts(static_cast<std::size_t>(rows.rows())));

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(bandwidth);
  for (std::size_t t = 0; t < seq.size(); ++t) {
    rhs += samples[static_cast<Eigen::Index>(t)] * rows.row(static_cast<Eigen::Index>(seq.nodes[t])).transpose();
  }
  const Eigen::MatrixXd& Q = es.eigenvectors();
  EstimateResult out;
  out.coeff_estimate = Q * (Q.transpose() * rhs).cwiseQuotient(es.eigenvalues());
  out.signal_estimate = rows * out.coeff_estimate;
  if (truth != nullptr) out.error_l2 = reconstruction_error(*truth, out.signal_estimate);
  return out;
}

CovarianceSummary error_covariance(const spectral::DesignRows& rows, const std::vector<long>& counts) {
  const auto es = normal_matrix(rows, counts);
  const Eigen::ArrayXd lam = es.eigenvalues().array();
  CovarianceSummary out;
  out.trace = lam.inverse().sum();
  out.max_eigen = 1.0 / lam[0];
  out.log_det = -lam.log().sum();
  return out;
}

CovarianceSummary error_covariance(const spectral::DesignRows& rows, const SamplingSequence& seq) {
  return error_covariance(rows, seq.counts(static_cast<std::size_t>(rows.rows())));
}

double reconstruction_error(const Eigen::VectorXd& truth, const Eigen::VectorXd& estimate) {
  if (truth.size() != estimate.size()) throw std::invalid_argument("reconstruction_error: length mismatch");
  return (estimate - truth).norm();
}

}  // namespace gsample::estimation
