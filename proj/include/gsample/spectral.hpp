#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "gsample/graph.hpp"

namespace gsample::spectral {

/// Laplacian eigenpairs, eigenvalues ascending, column k of `eigenvectors`
/// paired with `eigenvalues[k]`. Each column is sign-normalized so that its
/// largest-magnitude entry (lowest index on ties) is nonnegative.
struct SpectralBasis {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
};

struct BandlimitedSpec {
  Eigen::Index bandwidth = 1;
  Eigen::VectorXd coefficients;  // length == bandwidth
};

/// Rows u_i^T of the first K eigenvectors, one row per node (N x K).
using DesignRows = Eigen::MatrixXd;

SpectralBasis eigendecompose(const graph::LaplacianMatrix& L);

Eigen::VectorXd gft(const SpectralBasis& basis, const Eigen::VectorXd& signal);
Eigen::VectorXd igft(const SpectralBasis& basis, const Eigen::VectorXd& coeffs);

Eigen::VectorXd synthesize_bandlimited(const SpectralBasis& basis, const BandlimitedSpec& spec);

DesignRows design_rows(const SpectralBasis& basis, Eigen::Index bandwidth);

/// Non-empty when lambda_{K-1} and lambda_K coincide within 1e-8, i.e. the
/// K-dimensional bandlimited subspace is not uniquely determined.
std::optional<std::string> bandwidth_warning(const SpectralBasis& basis, Eigen::Index bandwidth);

}  // namespace gsample::spectral
