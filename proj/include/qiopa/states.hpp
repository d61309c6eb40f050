#pragma once

// QIOPA output states, built two independent ways: the closed series for the
// amplified single photon, and direct numerical evolution under the
// down-conversion Hamiltonian on a truncated Fock space.

#include <numbers>
#include <optional>
#include <string>

#include "qiopa/fock.hpp"
#include "qiopa/gain.hpp"

namespace qiopa {

namespace slot {
inline const std::string k1H = "1H";
inline const std::string k1V = "1V";
inline const std::string k2H = "2H";
inline const std::string k2V = "2V";
inline const std::string trigger = "T";
}  // namespace slot

/// Cloning mode k1 and anticloning mode k2 as (H, V) slot pairs.
inline const ModeGroup kMode1{slot::k1H, slot::k1V};
inline const ModeGroup kMode2{slot::k2H, slot::k2V};

/// Four bosonic slots (1H, 1V, 2H, 2V) with per-slot cutoff `n_max`.
Register amplifier_register(int n_max);
/// Trigger qubit followed by the four amplifier slots.
Register trigger_register(int n_max);

struct CatStateSpec {
  GainParams gain;
  PolarizationQubit qubit;
  /// Truncation order of the double series: 0 <= i, j <= n_max.
  int n_max;
  /// Norm-deficit level above which a truncation warning is attached.
  double tolerance = 1e-12;
};

struct SeriesState {
  SparseKet ket;
  /// Exact norm missing from the truncated series (1 - <psi|psi> for a
  /// normalized qubit), evaluated in closed form.
  double norm_deficit = 0.0;
  std::optional<std::string> warning;
};

/// Norm deficit of either cat component truncated at order `n_max`.
double series_norm_deficit(const GainParams& gain, int n_max);

/// alpha |Psi>^H + beta |Psi>^V on the amplifier register. The register
/// cutoff is 2 n_max + 1 so that polarization rotations never truncate.
SeriesState cat_state(const CatStateSpec& spec);

/// 2^-1/2 (|H>_T |Psi>^H - |V>_T |Psi>^V): the amplified half of |Phi->.
SeriesState sigma_state(const GainParams& gain, int n_max, double tolerance = 1e-12);

struct EvolveOptions {
  /// Target infidelity; the leakage guard requires the estimated population
  /// beyond the cutoff to stay below it.
  double tolerance = 1e-8;
  /// Phase of the pump (coupling kappa -> kappa e^{i phase}). The default pi
  /// reproduces the sign convention of the closed series; phase 0 differs from
  /// it by the parity operator (-1)^{n_2H + n_2V}.
  double pump_phase = std::numbers::pi;
  /// Largest gain accepted; beyond it use the series.
  double max_gain = 0.5;
};

/// Estimated population pushed above `n_max` when `input` is evolved to gain
/// g (negative-binomial tail of the stimulated pair distribution).
double evolution_leakage_estimate(const GainParams& gain, const SparseKet& input, int n_max);

/// exp(-i H t) |input> with H = i kappa (a+_1H a+_2V - a+_1V a+_2H) + h.c.,
/// kappa t = g, on the space truncated at `n_max` photons per amplifier slot.
/// Non-amplifier slots (e.g. the trigger) are carried along untouched.
/// Throws TruncationFault naming the required cutoff when the leakage guard
/// fails, and std::invalid_argument when g exceeds options.max_gain.
SparseKet evolve_numeric(const GainParams& gain, const SparseKet& input, int n_max,
                         const EvolveOptions& options = {});

/// Linear-optics transform of one (H, V) slot pair: a+_H -> u00 a+_H + u10 a+_V,
/// a+_V -> u01 a+_H + u11 a+_V.
SparseKet apply_mode_unitary(const SparseKet& psi, const ModeGroup& mode,
                             const Eigen::Matrix2cd& u);

/// Applies the SU(2) polarization rotation to both spatial modes at once.
SparseKet su2_rotate(const SparseKet& psi, const Eigen::Matrix2cd& u);
PolarizationQubit su2_rotate(const PolarizationQubit& q, const Eigen::Matrix2cd& u);

}  // namespace qiopa
