#pragma once

// Analytic pair-extracted density matrices and the maps and scalar formulas
// quoted alongside them. Everything here is a function of t = tanh(g)(1 - eta^2)
// (or of g where a formula is stated in g). Qubit matrices use the basis
// order HH, HV, VH, VV (HHH ... VVV with the trigger first).

#include <string>

#include "qiopa/fock.hpp"
#include "qiopa/gain.hpp"
#include "qiopa/metrics.hpp"

namespace qiopa::closed_form {

/// As printed, including its 1/(3d) prefactor (trace 2) and the transposed
/// alpha-beta coherences. Kept for comparison; use pair() for the state.
Matrix pair_printed(double t, const PolarizationQubit& q);

/// Pair-extracted (k1, k2) state for input alpha|H> + beta|V>, unit trace.
DensityMatrix pair(double t, const PolarizationQubit& q);
DensityMatrix pair(const GainParams& gain, const PolarizationQubit& q);

/// The |H>-input matrix (1/3d)[[d/2,0,0,0],[0,2+t^2,-1,0],[0,-1,d/2,0],[0,0,0,t^2]].
DensityMatrix h_input(double t);

/// Pair-extracted state expressed in the input's own basis
/// {phi phi, phi phi_perp, phi_perp phi, phi_perp phi_perp}: equal to
/// h_input(t) for every input by universality.
DensityMatrix in_input_basis(const DensityMatrix& rho_pair, const PolarizationQubit& q);

/// (U (x) U) rho (U (x) U)^dagger for a 2x2 U on both qubits.
Matrix rotate_pair(const Matrix& rho, const Eigen::Matrix2cd& u);

/// Single-mode marginals for |H> input.
DensityMatrix clone_marginal(double t);
DensityMatrix anticlone_marginal();
/// Clone marginal for |V> input (H <-> V mirror of clone_marginal).
DensityMatrix clone_marginal_v(double t);

double clone_fidelity(double t);
double anticlone_fidelity();
/// d(rho_k1^H, rho_k1^V) = 2 (2 / (3 (1 + t^2)))^2.
double clone_marginal_hs_distance(double t);

/// Three-qubit (trigger, k1, k2) matrix.
DensityMatrix three_qubit(double t);

enum class ReducedPair { k1k2, kTk1, kTk2 };
std::string to_string(ReducedPair sel);

/// The printed 4x4 reduced matrices (trigger first where present).
DensityMatrix reduced_pair(double t, ReducedPair sel);

/// Werner weights as printed: p = q = (2/3)/(1 + t^2), l = 1/3.
double werner_p(double t);
double werner_q(double t);
double werner_l();

/// Concurrence of h_input(t): printed with (t/2) sqrt(1+t^2) and corrected
/// with (t/sqrt 2) sqrt(1+t^2).
double pair_concurrence_printed(double t);
double pair_concurrence(double t);
/// Werner concurrence max(0, (3w - 1)/2).
double werner_concurrence(double weight);
/// 1/2 (sinh^2 g + cosh^2 g)^-1 and the variant printed with cos^2 g.
double werner_concurrence_cosh(double g);
double werner_concurrence_cos(double g);

/// Tangle as concurrence squared, plus the two printed high-gain readings
/// 1/C^2 and C^2 (both claimed to equal 1/nbar^2).
struct TangleReadings {
  double tangle;
  double inverse_reading;
  double square_reading;
  double inverse_nbar2;
};
TangleReadings tangle_readings(double g);

/// (1/3)(X rho X + Y rho Y + Z rho Z); rejects non-PSD input.
Matrix unot_channel(const Matrix& rho);
/// Identity on the first qubit, UNOT on the second.
Matrix unot_on_pair(const Matrix& rho);

}  // namespace qiopa::closed_form
