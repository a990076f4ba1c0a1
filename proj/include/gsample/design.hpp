#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gsample/rng.hpp"
#include "gsample/spectral.hpp"

namespace gsample::design {

using spectral::DesignRows;

/// Scalarization of the error covariance minimized by a design.
///  A: tr(A^-1)   D: -log det A   E: 1 / lambda_min(A)
enum class Criterion { A, D, E };

Criterion parse_criterion(std::string_view s);
std::string_view to_string(Criterion c);

/// Point on the probability simplex: p_i >= 0, |sum p - 1| <= 1e-10.
class DesignWeights {
 public:
  static DesignWeights make(Eigen::VectorXd p);
  static DesignWeights uniform(Eigen::Index n);

  const Eigen::VectorXd& values() const noexcept { return p_; }
  Eigen::Index size() const noexcept { return p_.size(); }
  double operator[](Eigen::Index i) const { return p_[i]; }

 private:
  explicit DesignWeights(Eigen::VectorXd p) : p_(std::move(p)) {}
  Eigen::VectorXd p_;
};

/// Integer sample quotas with sum(counts) == budget.
struct SampleAllocation {
  std::vector<long> counts;
  long budget = 0;

  static SampleAllocation make(std::vector<long> counts, long budget);
  std::size_t size() const noexcept { return counts.size(); }
  Eigen::VectorXd proportions() const;
};

/// delta_i = m_i / M - p_i.
struct QuantizationResidual {
  Eigen::VectorXd delta;
};

using InformationMatrix = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Criteria

/// A = sum_i w_i u_i u_i^T for arbitrary nonnegative weights.
InformationMatrix information_matrix(const DesignRows& rows, const Eigen::VectorXd& weights);
inline InformationMatrix information_matrix(const DesignRows& rows, const DesignWeights& p) {
  return information_matrix(rows, p.values());
}

/// Smallest eigenvalue of a symmetric PSD matrix (= its smallest singular value).
double sigma_min(const InformationMatrix& A);

/// Throws SingularInformationMatrix unless sigma_min(A) > 1e-12 * ||A||_2.
void require_invertible(const InformationMatrix& A, std::string_view what);

double criterion_value(const InformationMatrix& A, Criterion c);

/// Partial derivatives of criterion_value(information_matrix(rows, p)) in p.
/// For E with a repeated lambda_min, the subgradient averaged over its eigenspace.
Eigen::VectorXd criterion_gradient(const DesignRows& rows, const Eigen::VectorXd& p, Criterion c);

/// Frank-Wolfe linear-minimization gap over the simplex:
/// max_i(-g_i) + sum_j p_j g_j.
double duality_gap(const DesignRows& rows, const Eigen::VectorXd& p, Criterion c);

// ---------------------------------------------------------------------------
// Relaxed problem

struct SolverOptions {
  int max_iter = 50000;
  double tol = 1e-6;
  bool away_steps = true;  // A and D only
};

struct SolverResult {
  DesignWeights weights = DesignWeights::uniform(1);
  double objective = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Euclidean projection onto the probability simplex (sort and threshold).
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// Minimizes the criterion over the simplex starting at p = 1/N.
/// A, D: away-step Frank-Wolfe with exact line search; stops when the
/// duality gap is <= tol. E: projected subgradient, best iterate returned.
SolverResult solve_relaxed(const DesignRows& rows, Criterion c, const SolverOptions& opts = {});

// ---------------------------------------------------------------------------
// Quantization

/// Independent two-point rounding of each p_i to the grid {k/M}; unbiased.
/// Returns raw quotas M * Q(p_i), which need not sum to M.
std::vector<long> quantize_raw(const Eigen::VectorXd& p, long budget, Rng& rng);

/// Moves raw quotas onto sum == M one grid step at a time, always adjusting
/// the entry whose residual is largest in the needed direction (lowest index
/// on ties).
SampleAllocation budget_repair(std::vector<long> raw, const Eigen::VectorXd& p, long budget);

struct QuantizationResult {
  SampleAllocation allocation;
  QuantizationResidual residual;      // after repair
  std::vector<long> raw_counts;       // before repair
  QuantizationResidual raw_residual;  // before repair; independent across i
};

QuantizationResult probabilistic_quantize(const DesignWeights& p, long budget, std::uint64_t seed);

/// A_hat = sum_i (m_i / M) u_i u_i^T; throws SingularInformationMatrix when
/// the quantized design lost rank.
InformationMatrix quantized_information_matrix(const DesignRows& rows, const SampleAllocation& alloc);

// ---------------------------------------------------------------------------
// Perturbation theory

/// Var[delta p_i] under the uniform-within-cell approximation: 5 / (192 M^3).
double uniform_cell_residual_variance(long budget);

/// prod_i (1 - Var_i / sigma^2), clamped to [0, 1], with the closed-form
/// variance above for every i.
double invertibility_probability_bound(double sigma_min, long budget, std::size_t n);

/// Same product with caller-supplied per-node variances.
double invertibility_probability_bound(double sigma_min, std::span<const double> variances);

/// Smallest M with invertibility_probability_bound(sigma_min, M, n) >= eta:
/// ceil((5 / (192 (1 - eta^(1/n)) sigma_min^2))^(1/3)), at least 1.
long min_sample_size(double sigma_min, std::size_t n, double eta);

/// Monte Carlo estimate of Var[delta p_i] for the unrepaired quantizer.
Eigen::VectorXd empirical_residual_variance(const Eigen::VectorXd& p, long budget, int draws,
                                            std::uint64_t seed);

struct PerturbationNorm {
  double spectral_norm = 0.0;  // ||sum_i delta_i u_i u_i^T||_2
  double max_abs_delta = 0.0;  // max_i |delta_i|, an upper bound on the above
};

PerturbationNorm perturbation_norm(const DesignRows& rows, const QuantizationResidual& residual);

// ---------------------------------------------------------------------------
// End to end

struct DesignDiagnostics {
  double relaxed_objective = 0.0;
  double quantized_objective = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
  bool converged = false;
  double sigma_min = 0.0;        // of the relaxed information matrix
  double invertibility_bound = 0.0;  // invertibility_probability_bound(sigma_min, M, N)
  int fallback_steps = 0;
  std::optional<std::string> warning;
};

struct DesignOutcome {
  DesignWeights weights = DesignWeights::uniform(1);
  SampleAllocation allocation;
  DesignDiagnostics diagnostics;
};

/// Quantizes an already solved relaxation. If the quantized matrix is
/// singular, moves one unit at a time from the largest quota (> 1) to the
/// unsampled node of largest p, at most K times.
DesignOutcome quantize_design(const DesignRows& rows, const SolverResult& relaxed, long budget,
                              Criterion c, std::uint64_t seed);

DesignOutcome design_pipeline(const spectral::SpectralBasis& basis, Eigen::Index bandwidth, long budget,
                              Criterion c, std::uint64_t seed, const SolverOptions& opts = {});

}  // namespace gsample::design
