#include "qiopa/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "qiopa/errors.hpp"

namespace qiopa {

std::string to_string(Bell b) {
  switch (b) {
    case Bell::phi_plus: return "phi+";
    case Bell::phi_minus: return "phi-";
    case Bell::psi_plus: return "psi+";
    case Bell::psi_minus: return "psi-";
  }
  return "?";
}

Eigen::Vector4cd bell_vector(Bell b) {
  const double s = 1.0 / std::sqrt(2.0);
  switch (b) {
    case Bell::phi_plus: return {s, 0, 0, s};
    case Bell::phi_minus: return {s, 0, 0, -s};
    case Bell::psi_plus: return {0, s, s, 0};
    case Bell::psi_minus: return {0, s, -s, 0};
  }
  throw std::invalid_argument("unknown Bell state");
}

Matrix werner_matrix(Bell b, double weight) {
  const Eigen::Vector4cd v = bell_vector(b);
  return weight * (v * v.adjoint()) + (1.0 - weight) / 4.0 * Matrix::Identity(4, 4);
}

namespace {

void require_square(const Matrix& m, Eigen::Index dim = -1) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix must be square");
  if (dim >= 0 && m.rows() != dim) {
    std::ostringstream os;
    os << "expected a " << dim << "x" << dim << " matrix, got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(os.str());
  }
}

void require_same_dim(const Matrix& a, const Matrix& b) {
  require_square(a);
  require_square(b);
  if (a.rows() != b.rows()) throw std::invalid_argument("dimension mismatch");
}

Eigen::VectorXd clamped_eigenvalues(const Eigen::VectorXd& ev) {
  Eigen::VectorXd out = ev;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (out(i) < -kPsdTolerance) {
      std::ostringstream os;
      os << "matrix is not positive semidefinite (eigenvalue " << out(i) << ")";
      throw PositivityFault(os.str());
    }
    out(i) = std::max(out(i), 0.0);
  }
  return out;
}

}  // namespace

void require_physical(const Matrix& rho, double hermitian_tol) {
  require_square(rho);
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > hermitian_tol)
    throw std::invalid_argument("matrix is not Hermitian");
  const Matrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  clamped_eigenvalues(es.eigenvalues());
}

Matrix psd_sqrt(const Matrix& rho) {
  require_square(rho);
  const Matrix h = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd ev = clamped_eigenvalues(es.eigenvalues()).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double concurrence(const Matrix& rho) {
  require_square(rho, 4);
  require_physical(rho);
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix tilde = yy * rho.conjugate() * yy;
  const Matrix s = psd_sqrt(rho);
  const Matrix r = s * tilde * s;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) {
    const double e = es.eigenvalues()(i);
    lam[i] = e < 1e-14 ? 0.0 : std::sqrt(e);
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double concurrence(const DensityMatrix& rho) { return concurrence(rho.matrix()); }

WernerFit werner_fit(const Matrix& rho) {
  require_square(rho, 4);
  std::array<WernerFit, 4> fits;
  const std::array<Bell, 4> all{Bell::phi_plus, Bell::phi_minus, Bell::psi_plus, Bell::psi_minus};
  for (std::size_t k = 0; k < all.size(); ++k) {
    const Eigen::Vector4cd v = bell_vector(all[k]);
    const double overlap = (v.adjoint() * rho * v)(0, 0).real();
    const double w = (4.0 * overlap - 1.0) / 3.0;
    fits[k] = {all[k], w, (rho - werner_matrix(all[k], w)).norm(), false};
  }
  auto best = std::min_element(fits.begin(), fits.end(), [](const auto& a, const auto& b) {
    return a.residual < b.residual;
  });
  WernerFit out = *best;
  for (const auto& f : fits)
    if (&f != &*best && std::abs(f.residual - best->residual) < 1e-12) out.ambiguous = true;
  return out;
}

WernerFit werner_fit(const DensityMatrix& rho) { return werner_fit(rho.matrix()); }

double fidelity_pure(const PolarizationQubit& psi, const Matrix& rho) {
  require_square(rho, 2);
  const Eigen::Vector2cd v = psi.vector();
  return (v.adjoint() * rho * v)(0, 0).real();
}

double fidelity_pure(const PolarizationQubit& psi, const DensityMatrix& rho) {
  return fidelity_pure(psi, rho.matrix());
}

double uhlmann_fidelity(const Matrix& rho, const Matrix& sigma) {
  require_same_dim(rho, sigma);
  const Matrix s = psd_sqrt(rho);
  const Matrix inner = s * sigma * s;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (inner + inner.adjoint()),
                                           Eigen::EigenvaluesOnly);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    tr += std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  return std::min(tr * tr, 1.0);
}

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return uhlmann_fidelity(rho.matrix(), sigma.matrix());
}

double hs_distance(const Matrix& a, const Matrix& b) {
  require_same_dim(a, b);
  const Matrix diff = a - b;
  return (diff * diff).trace().real();
}

double hs_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.basis() != b.basis()) throw std::invalid_argument("density matrices use different bases");
  return hs_distance(a.matrix(), b.matrix());
}

double hs_distance(const SparseKet& a, const SparseKet& b) {
  const double na = a.norm2(), nb = b.norm2();
  return na * na + nb * nb - 2.0 * std::norm(inner(a, b));
}

}  // namespace qiopa
