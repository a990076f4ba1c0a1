#pragma once

#include "gsample/design.hpp"
#include "gsample/estimation.hpp"

namespace gsample::baselines {

/// Greedy sigma_min selection of M distinct nodes. Each step adds the node
/// maximizing the smallest singular value of the chosen rows; while r <= K
/// rows are chosen only the first r columns are used. Ties go to the lowest
/// index. Returned nodes are sorted ascending.
estimation::SamplingSequence greedy_sigma_min(const spectral::DesignRows& rows, std::size_t budget);

/// Smallest singular value of the given rows of V_K restricted to the first
/// min(r, K) columns: the score greedy_sigma_min maximizes.
double greedy_score(const spectral::DesignRows& rows, const std::vector<std::size_t>& chosen);

/// The M largest design weights, each sampled once (ties to the lowest index),
/// sorted ascending.
estimation::SamplingSequence top_m_selection(const design::DesignWeights& p, std::size_t budget);

}  // namespace gsample::baselines
