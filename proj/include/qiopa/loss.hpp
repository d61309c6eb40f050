#pragma once

// Propagation loss as dummy beam splitters on the amplifier output modes,
// followed by pair extraction: postselecting one transmitted photon per
// spatial mode and reading its polarization as a qubit.

#include <complex>
#include <optional>
#include <string>

#include "qiopa/fock.hpp"
#include "qiopa/gain.hpp"

namespace qiopa {

/// Amplitude conventions for the lossy beam splitter.
///  a: transmit sqrt(eta), reflect phase * sqrt(1 - eta)   (eta = intensity)
///  b: transmit eta,       reflect phase * sqrt(1 - eta^2) (eta = amplitude)
/// Convention b gives t = tanh(g) (1 - eta^2) exactly for the pair-extracted
/// state; convention a gives t = tanh(g) (1 - eta).
enum class LossConvention { a, b };

struct LossSpec {
  double eta = 0.0;
  LossConvention convention = LossConvention::b;
  /// Unit-modulus factor on the reflected amplitude.
  Complex reflect_phase{0.0, -1.0};

  /// Validates the fields; throws std::invalid_argument.
  void validate() const;
  double transmit() const;
  Complex reflect() const;
  /// |transmit|^2 and |reflect|^2.
  double transmit_probability() const;
  double reflect_probability() const;
  /// Effective t = tanh(g) |r|^2 entering the pair-extracted matrix.
  double effective_t(const GainParams& gain) const;
};

/// Name of the reflected partner of `slot` ("1H" -> "r1H").
std::string reflected_slot(const std::string& slot);

/// Splits each creation operator of `mode` into transmit/reflect parts:
/// |n> -> Sum_l sqrt(C(n,l)) tau^l r^(n-l) |l>_a |n-l>_b. Appends vacuum
/// reflected slots when absent; existing reflected slots must be vacuum.
SparseKet apply_beamsplitter(const SparseKet& psi, const LossSpec& loss, const ModeGroup& mode);
/// Spatial mode 1 or 2.
SparseKet apply_beamsplitter(const SparseKet& psi, const LossSpec& loss, int spatial_mode);

/// Lossy cat state traced over the reflected modes; density matrix on the
/// four transmitted slots, unit trace.
DensityMatrix lossy_reduced_density(const GainParams& gain, const PolarizationQubit& qubit,
                                    const LossSpec& loss, int n_max);

enum class PairPath {
  /// Factorized double series over (i, j); reaches large gain.
  series,
  /// Full sparse ket through the beam splitters and projection; small gain.
  full_ket,
};

struct PairOptions {
  PairPath path = PairPath::series;
  /// Truncation order for the full-ket path.
  int n_max = 12;
  /// Target accuracy of the series path; each one-dimensional sum stops once
  /// its tail bound drops below 1e-3 x tolerance (relative).
  double tolerance = 1e-12;
};

struct PairExtraction {
  DensityMatrix rho;
  /// Probability of the postselected event per input state.
  double success_probability = 0.0;
  /// Longest one-dimensional series evaluated (series path), or the number
  /// of kept ket components (full-ket path).
  long long terms = 0;
  std::optional<std::string> warning;
};

/// Pair extraction of an arbitrary state on the amplifier register (plus
/// optional qubit slots listed in `qubit_slots`, kept in front).
PairExtraction pair_extract_ket(const SparseKet& psi, const LossSpec& loss,
                                std::span<const std::string> qubit_slots = {});

/// 4x4 matrix over |HH>, |HV>, |VH>, |VV> of (k1, k2).
PairExtraction pair_extracted_rho(const GainParams& gain, const PolarizationQubit& qubit,
                                  const LossSpec& loss, const PairOptions& options = {});

/// 8x8 matrix over trigger (x) k1 (x) k2 for the entangled injection; losses
/// act on k1 and k2 only.
PairExtraction pair_extracted_rho3(const GainParams& gain, const LossSpec& loss,
                                   const PairOptions& options = {});

}  // namespace qiopa
