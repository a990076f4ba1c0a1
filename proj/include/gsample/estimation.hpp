#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gsample/design.hpp"
#include "gsample/spectral.hpp"

namespace gsample::estimation {

/// Ordered node indices, repeats allowed.
struct SamplingSequence {
  std::vector<std::size_t> nodes;

  std::size_t size() const noexcept { return nodes.size(); }
  /// Per-node multiplicities over n nodes.
  std::vector<long> counts(std::size_t n) const;
};

struct NoisySamples {
  Eigen::VectorXd values;
  double noise_std = 0.0;
};

struct EstimateResult {
  Eigen::VectorXd coeff_estimate;   // length K
  Eigen::VectorXd signal_estimate;  // length N, = V_K coeff_estimate
  std::optional<double> error_l2;   // set when ground truth was supplied
};

struct CovarianceSummary {
  double trace = 0.0;       // tr(E)
  double max_eigen = 0.0;   // ||E||_2
  double log_det = 0.0;     // log det (V_MK^T V_MK)^-1
};

inline constexpr double kNoiselessSnr = std::numeric_limits<double>::infinity();

/// Signal power the SNR is measured against: the mean square of the sampled
/// values, or the mean square of the whole graph signal. With `Signal` the
/// noise level does not depend on which nodes are sampled.
enum class SnrReference { Samples, Signal };

/// Node i repeated m_i times, ascending node order.
SamplingSequence sequence_from_allocation(const design::SampleAllocation& alloc);

/// y_t = f[S_t] + sigma z_t with z standard normal drawn from `seed`, where
/// sigma^2 = P / 10^(snr_db / 10) and P = mean_t f[S_t]^2 (Samples) or
/// mean_i f_i^2 (Signal). snr_db = +inf or P = 0 gives sigma = 0. The same
/// seed and length always give the same z, whatever f and S are.
NoisySamples sample_with_noise(const Eigen::VectorXd& signal, const SamplingSequence& seq, double snr_db,
                               std::uint64_t seed, SnrReference ref = SnrReference::Samples);

/// Standard normal draws behind sample_with_noise for a given seed.
Eigen::VectorXd standard_noise(std::size_t length, std::uint64_t seed);

/// Least-squares (BLUE) estimate of the first K GFT coefficients. Throws
/// RankDeficientSampling when the sampled rows of V_K do not have rank K.
EstimateResult blue_estimate(const spectral::SpectralBasis& basis, Eigen::Index bandwidth,
                             const SamplingSequence& seq, const Eigen::VectorXd& samples,
                             const Eigen::VectorXd* truth = nullptr);

/// Scalarizations of E = V_K (sum_i m_i u_i u_i^T)^-1 V_K^T at unit noise.
CovarianceSummary error_covariance(const spectral::DesignRows& rows, const std::vector<long>& counts);
CovarianceSummary error_covariance(const spectral::DesignRows& rows, const SamplingSequence& seq);

double reconstruction_error(const Eigen::VectorXd& truth, const Eigen::VectorXd& estimate);

}  // namespace gsample::estimation
