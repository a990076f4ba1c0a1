#include <stdexcept>

#include "gsample/design.hpp"
#include "gsample/errors.hpp"

namespace gsample::design {

namespace {

bool is_invertible(const DesignRows& rows, const SampleAllocation& alloc) {
  try {
    quantized_information_matrix(rows, alloc);
    return true;
  } catch (const SingularInformationMatrix&) {
    return false;
  }
}

// Moves one unit from the largest quota (> 1) to the unsampled node with the
// largest relaxed weight. Returns false when no such move exists.
bool shift_one_unit(SampleAllocation& alloc, const Eigen::VectorXd& p) {
  const auto n = alloc.counts.size();
  std::size_t to = n, from = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (alloc.counts[i] == 0 && (to == n || p[static_cast<Eigen::Index>(i)] > p[static_cast<Eigen::Index>(to)])) to = i;
    if (alloc.counts[i] > 1 && (from == n || alloc.counts[i] > alloc.counts[from])) from = i;
  }
  if (to == n || from == n) return false;
  --alloc.counts[from];
  ++alloc.counts[to];
  return true;
}

}  // namespace

DesignOutcome quantize_design(const DesignRows& rows, const SolverResult& relaxed, long budget, Criterion c,
                              std::uint64_t seed) {
  const auto K = rows.cols();
  if (budget < K) throw std::invalid_argument("design needs a budget of at least K samples");
  DesignOutcome out;
  out.weights = relaxed.weights;
  auto& diag = out.diagnostics;
  diag.relaxed_objective = relaxed.objective;
  diag.duality_gap = relaxed.gap;
  diag.iterations = relaxed.iterations;
  diag.converged = relaxed.converged;
  diag.sigma_min = sigma_min(information_matrix(rows, relaxed.weights));
  diag.invertibility_bound = diag.sigma_min > 0.0
                           ? invertibility_probability_bound(diag.sigma_min, budget, static_cast<std::size_t>(rows.rows()))
                           : 0.0;

  auto q = probabilistic_quantize(relaxed.weights, budget, seed);
  out.allocation = std::move(q.allocation);
  while (!is_invertible(rows, out.allocation)) {
    if (diag.fallback_steps >= K || !shift_one_unit(out.allocation, relaxed.weights.values())) {
      throw FallbackExhausted("quantized design stays singular after " + std::to_string(diag.fallback_steps) +
                              " fallback steps");
    }
    ++diag.fallback_steps;
  }
  diag.quantized_objective = criterion_value(quantized_information_matrix(rows, out.allocation), c);
  return out;
}

DesignOutcome design_pipeline(const spectral::SpectralBasis& basis, Eigen::Index bandwidth, long budget,
                              Criterion c, std::uint64_t seed, const SolverOptions& opts) {
  const DesignRows rows = spectral::design_rows(basis, bandwidth);
  const SolverResult relaxed = solve_relaxed(rows, c, opts);
  DesignOutcome out = quantize_design(rows, relaxed, budget, c, seed);
  out.diagnostics.warning = spectral::bandwidth_warning(basis, bandwidth);
  return out;
}

}  // namespace gsample::design
