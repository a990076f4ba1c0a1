#include "gsample/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gsample::baselines {

double greedy_score(const spectral::DesignRows& rows, const std::vector<std::size_t>& chosen) {
  const auto r = static_cast<Eigen::Index>(chosen.size());
  const Eigen::Index cols = std::min(r, rows.cols());
  if (r == 0) return 0.0;
  Eigen::MatrixXd sub(r, cols);
  for (Eigen::Index k = 0; k < r; ++k) sub.row(k) = rows.row(static_cast<Eigen::Index>(chosen[k])).head(cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
  return svd.singularValues()[cols - 1];
}

estimation::SamplingSequence greedy_sigma_min(const spectral::DesignRows& rows, std::size_t budget) {
  const auto n = static_cast<std::size_t>(rows.rows());
  if (budget > n) throw std::invalid_argument("greedy_sigma_min: budget exceeds node count");
  std::vector<std::size_t> chosen;
  std::vector<bool> taken(n, false);
  chosen.reserve(budget);
  while (chosen.size() < budget) {
    std::size_t best = n;
    double best_score = 0.0;
    chosen.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      chosen.back() = i;
      const double s = greedy_score(rows, chosen);
      if (best == n || s > best_score + 1e-12 * std::max(1.0, best_score)) {
        best = i;
        best_score = s;
      }
    }
    chosen.back() = best;
    taken[best] = true;
  }
  std::sort(chosen.begin(), chosen.end());
  return {std::move(chosen)};
}

estimation::SamplingSequence top_m_selection(const design::DesignWeights& p, std::size_t budget) {
  const auto n = static_cast<std::size_t>(p.size());
  if (budget > n) throw std::invalid_argument("top_m_selection: budget exceeds node count");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p[static_cast<Eigen::Index>(a)] > p[static_cast<Eigen::Index>(b)];
  });
  order.resize(budget);
  std::sort(order.begin(), order.end());
  return {std::move(order)};
}

}  // namespace gsample::baselines
