#include "gsample/spectral.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gsample/errors.hpp"

namespace gsample::spectral {

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (v[arg] < 0.0) v = -v;
}

void require_bandwidth(const SpectralBasis& basis, Eigen::Index k) {
  if (k < 1 || k > basis.size()) {
    throw std::invalid_argument("bandwidth " + std::to_string(k) + " outside [1, " +
                                std::to_string(basis.size()) + "]");
  }
}

}  // namespace

SpectralBasis eigendecompose(const graph::LaplacianMatrix& L) {
  if (L.rows() != L.cols() || L.rows() == 0) throw std::invalid_argument("Laplacian must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  if (es.info() != Eigen::Success) throw EigenSolverError("symmetric eigensolver did not converge");
  SpectralBasis basis{es.eigenvalues(), es.eigenvectors()};
  for (Eigen::Index k = 0; k < basis.eigenvectors.cols(); ++k) fix_sign(basis.eigenvectors.col(k));
  return basis;
}

Eigen::VectorXd gft(const SpectralBasis& basis, const Eigen::VectorXd& signal) {
  if (signal.size() != basis.size()) throw std::invalid_argument("gft: dimension mismatch");
  return basis.eigenvectors.transpose() * signal;
}

Eigen::VectorXd igft(const SpectralBasis& basis, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != basis.size()) throw std::invalid_argument("igft: dimension mismatch");
  return basis.eigenvectors * coeffs;
}

Eigen::VectorXd synthesize_bandlimited(const SpectralBasis& basis, const BandlimitedSpec& spec) {
  require_bandwidth(basis, spec.bandwidth);
  if (spec.coefficients.size() != spec.bandwidth) {
    throw std::invalid_argument("coefficient vector length must equal the bandwidth");
  }
  return basis.eigenvectors.leftCols(spec.bandwidth) * spec.coefficients;
}

DesignRows design_rows(const SpectralBasis& basis, Eigen::Index bandwidth) {
  require_bandwidth(basis, bandwidth);
  return basis.eigenvectors.leftCols(bandwidth);
}

std::optional<std::string> bandwidth_warning(const SpectralBasis& basis, Eigen::Index bandwidth) {
  require_bandwidth(basis, bandwidth);
  if (bandwidth == basis.size()) return std::nullopt;
  const double gap = basis.eigenvalues[bandwidth] - basis.eigenvalues[bandwidth - 1];
  if (std::abs(gap) > 1e-8) return std::nullopt;
  std::ostringstream os;
  os << "eigenvalues " << bandwidth - 1 << " and " << bandwidth << " coincide (" << basis.eigenvalues[bandwidth - 1]
     << "); the bandwidth-" << bandwidth << " subspace is not unique";
  return os.str();
}

}  // namespace gsample::spectral
