#pragma once

// Two-qubit entanglement and state-distance measures.

#include <string>

#include "qiopa/fock.hpp"
#include "qiopa/gain.hpp"

namespace qiopa {

enum class Bell { phi_plus, phi_minus, psi_plus, psi_minus };

std::string to_string(Bell b);
/// Over |HH>, |HV>, |VH>, |VV>.
Eigen::Vector4cd bell_vector(Bell b);
/// w |bell><bell| + (1 - w) I/4.
Matrix werner_matrix(Bell b, double weight);

struct WernerFit {
  Bell bell = Bell::psi_minus;
  double weight = 0.0;
  /// Frobenius norm of rho - werner_matrix(bell, weight).
  double residual = 0.0;
  /// Another Bell state fits within 1e-12 of the chosen residual.
  bool ambiguous = false;
  bool entangled() const { return weight > 1.0 / 3.0; }
};

/// Tolerance for negative eigenvalues accepted as round-off.
inline constexpr double kPsdTolerance = 1e-10;

/// Throws PositivityFault when the Hermitian part has an eigenvalue below
/// -kPsdTolerance, std::invalid_argument when not square or not Hermitian.
void require_physical(const Matrix& rho, double hermitian_tol = 1e-10);

/// Hermitian square root with eigenvalues in [-kPsdTolerance, 0) clamped.
Matrix psd_sqrt(const Matrix& rho);

/// Wootters concurrence of a 4x4 two-qubit state.
double concurrence(const Matrix& rho);
double concurrence(const DensityMatrix& rho);

/// Werner decomposition with weight (4 <bell|rho|bell> - 1)/3; the Bell state
/// is the one with the smallest residual.
WernerFit werner_fit(const Matrix& rho);
WernerFit werner_fit(const DensityMatrix& rho);

double fidelity_pure(const PolarizationQubit& psi, const Matrix& rho);
double fidelity_pure(const PolarizationQubit& psi, const DensityMatrix& rho);

/// [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2.
double uhlmann_fidelity(const Matrix& rho, const Matrix& sigma);
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Tr[(a - b)^2].
double hs_distance(const Matrix& a, const Matrix& b);
double hs_distance(const DensityMatrix& a, const DensityMatrix& b);
/// Between the (unnormalized) projectors |a><a| and |b><b| of two kets on
/// the same register: <a|a>^2 + <b|b>^2 - 2 |<a|b>|^2. Truncated series
/// states therefore show their missing norm.
double hs_distance(const SparseKet& a, const SparseKet& b);

}  // namespace qiopa
