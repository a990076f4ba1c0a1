#include <cmath>
#include <stdexcept>

#include "gsample/design.hpp"
#include "gsample/errors.hpp"

namespace gsample::design {

std::vector<long> quantize_raw(const Eigen::VectorXd& p, long budget, Rng& rng) {
  if (budget < 1) throw std::invalid_argument("quantize: budget must be positive");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double M = static_cast<double>(budget);
  std::vector<long> raw(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double x = std::clamp(p[i], 0.0, 1.0) * M;
    double cell = std::floor(x);
    double frac = x - cell;
    // Points on the grid (up to rounding in p_i * M) quantize to themselves.
    if (frac < 1e-9) {
      frac = 0.0;
    } else if (frac > 1.0 - 1e-9) {
      cell += 1.0;
      frac = 0.0;
    }
    const double draw = unit(rng);  // consumed for every node to keep streams aligned
    raw[static_cast<std::size_t>(i)] = static_cast<long>(cell) + (draw < frac ? 1 : 0);
  }
  return raw;
}

SampleAllocation budget_repair(std::vector<long> raw, const Eigen::VectorXd& p, long budget) {
  if (static_cast<Eigen::Index>(raw.size()) != p.size()) {
    throw std::invalid_argument("budget_repair: dimension mismatch");
  }
  if (budget < 1) throw std::invalid_argument("budget_repair: budget must be positive");
  const double M = static_cast<double>(budget);
  long total = 0;
  for (long m : raw) {
    if (m < 0) throw std::invalid_argument("budget_repair: negative quota");
    total += m;
  }
  const auto n = raw.size();
  while (total > budget) {
    std::size_t arg = n;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (raw[i] < 1) continue;
      const double r = static_cast<double>(raw[i]) / M - p[static_cast<Eigen::Index>(i)];
      if (arg == n || r > best) {
        arg = i;
        best = r;
      }
    }
    --raw[arg];
    --total;
  }
  while (total < budget) {
    std::size_t arg = 0;
    double best = p[0] - static_cast<double>(raw[0]) / M;
    for (std::size_t i = 1; i < n; ++i) {
      const double r = p[static_cast<Eigen::Index>(i)] - static_cast<double>(raw[i]) / M;
      if (r > best) {
        arg = i;
        best = r;
      }
    }
    ++raw[arg];
    ++total;
  }
  return SampleAllocation::make(std::move(raw), budget);
}

namespace {

QuantizationResidual residual_of(const std::vector<long>& counts, const Eigen::VectorXd& p, long budget) {
  QuantizationResidual r{Eigen::VectorXd(p.size())};
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    r.delta[i] = static_cast<double>(counts[static_cast<std::size_t>(i)]) / static_cast<double>(budget) - p[i];
  }
  return r;
}

}  // namespace

QuantizationResult probabilistic_quantize(const DesignWeights& p, long budget, std::uint64_t seed) {
  auto rng = make_rng(seed);
  auto raw = quantize_raw(p.values(), budget, rng);
  QuantizationResult out;
  out.raw_residual = residual_of(raw, p.values(), budget);
  out.raw_counts = raw;
  out.allocation = budget_repair(std::move(raw), p.values(), budget);
  out.residual = residual_of(out.allocation.counts, p.values(), budget);
  return out;
}

InformationMatrix quantized_information_matrix(const DesignRows& rows, const SampleAllocation& alloc) {
  if (static_cast<Eigen::Index>(alloc.size()) != rows.rows()) {
    throw std::invalid_argument("quantized_information_matrix: dimension mismatch");
  }
  InformationMatrix A = information_matrix(rows, alloc.proportions());
  require_invertible(A, "quantized design");
  return A;
}

}  // namespace gsample::design
