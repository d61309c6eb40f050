#pragma once

// Sparse multimode Fock-space kernel.
//
// A Register names the slots of a state. Most slots are bosonic modes
// ("1H", "1V", ...) holding a photon count; a slot may also be a
// polarization qubit (value 0 = H, 1 = V), which is how the trigger photon
// and the pair-extracted qubits are represented.

#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qiopa {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

enum class SlotKind { fock, qubit };

struct Slot {
  std::string name;
  SlotKind kind = SlotKind::fock;

  friend bool operator==(const Slot&, const Slot&) = default;
};

class Register {
 public:
  Register() = default;
  /// All slots bosonic with a common cutoff `n_max`.
  Register(std::vector<std::string> fock_slots, int n_max);
  Register(std::initializer_list<std::string> fock_slots, int n_max)
      : Register(std::vector<std::string>(fock_slots), n_max) {}
  Register(std::vector<Slot> slots, int n_max);

  /// Qubit-only register, e.g. qubits({"k1", "k2"}).
  static Register qubits(std::vector<std::string> names);

  std::size_t size() const { return slots_.size(); }
  const Slot& slot(std::size_t i) const { return slots_.at(i); }
  const std::vector<Slot>& slots() const { return slots_; }
  int n_max() const { return n_max_; }
  /// Largest value slot `i` may hold: 1 for qubits, n_max otherwise.
  int bound(std::size_t i) const;

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws std::invalid_argument for an unknown slot.
  std::size_t index(std::string_view name) const;

  /// Disjoint union; throws std::invalid_argument on a shared slot name.
  /// The cutoff of the result is the larger of the two.
  Register concat(const Register& other) const;
  Register subset(std::span<const std::size_t> indices) const;
  Register with_n_max(int n_max) const;

  bool is_all_qubits() const;

  friend bool operator==(const Register&, const Register&) = default;

 private:
  std::vector<Slot> slots_;
  int n_max_ = 0;
};

/// Fock basis label: one count per register slot.
class ModeOccupation {
 public:
  ModeOccupation() = default;
  explicit ModeOccupation(std::size_t slots) : counts_(slots, 0) {}
  ModeOccupation(std::initializer_list<int> counts);
  explicit ModeOccupation(std::vector<std::uint16_t> counts)
      : counts_(std::move(counts)) {}

  std::size_t size() const { return counts_.size(); }
  int operator[](std::size_t i) const { return counts_[i]; }
  void set(std::size_t i, int n);
  int total() const;

  ModeOccupation concat(const ModeOccupation& other) const;
  ModeOccupation select(std::span<const std::size_t> indices) const;

  const std::vector<std::uint16_t>& counts() const { return counts_; }

  friend auto operator<=>(const ModeOccupation&, const ModeOccupation&) = default;
  friend bool operator==(const ModeOccupation&, const ModeOccupation&) = default;

 private:
  std::vector<std::uint16_t> counts_;
};

/// "HV" for qubit-only registers, "1,0,0,1" otherwise; qubit slots inside a
/// mixed register print as H/V.
std::string label(const Register& reg, const ModeOccupation& occ);

/// Pure multimode state as a sparse map from occupations to amplitudes.
class SparseKet {
 public:
  static constexpr double kDefaultDropThreshold = 1e-300;
  using Storage = std::map<ModeOccupation, Complex>;

  SparseKet() = default;
  explicit SparseKet(Register reg, double drop_threshold = kDefaultDropThreshold)
      : reg_(std::move(reg)), drop_(drop_threshold) {}

  static SparseKet basis(Register reg, ModeOccupation occ, Complex amp = 1.0);

  const Register& reg() const { return reg_; }
  double drop_threshold() const { return drop_; }

  /// Accumulates `amp` onto `occ`. Throws TruncationFault when a count
  /// exceeds the register bound.
  void add(const ModeOccupation& occ, Complex amp);

  Complex amplitude(const ModeOccupation& occ) const;
  std::size_t size() const { return amps_.size(); }
  bool empty() const { return amps_.empty(); }
  Storage::const_iterator begin() const { return amps_.begin(); }
  Storage::const_iterator end() const { return amps_.end(); }

  double norm2() const;
  SparseKet scaled(Complex factor) const;
  /// Throws PostselectionFailure for the zero ket.
  SparseKet normalized() const;

  /// Same state on a register with a different cutoff (counts rechecked).
  SparseKet with_register(Register reg) const;

  friend SparseKet operator+(const SparseKet& a, const SparseKet& b);
  friend SparseKet operator-(const SparseKet& a, const SparseKet& b);

 private:
  Register reg_;
  double drop_ = kDefaultDropThreshold;
  Storage amps_;
};

/// <a|b>; registers must match.
Complex inner(const SparseKet& a, const SparseKet& b);

/// |<a|b>|^2 / (<a|a><b|b>).
double overlap_fidelity(const SparseKet& a, const SparseKet& b);

SparseKet tensor_product(const SparseKet& a, const SparseKet& b);

/// Ladder operators. Creation past the register bound throws TruncationFault.
SparseKet create(const SparseKet& psi, std::string_view slot);
SparseKet annihilate(const SparseKet& psi, std::string_view slot);
/// Photon-number expectation <psi|n_slot|psi> / <psi|psi>.
double mean_count(const SparseKet& psi, std::string_view slot);

/// A spatial mode given as its (H, V) slot pair.
struct ModeGroup {
  std::string h;
  std::string v;
};

/// Keeps components with exactly one photon in each group. The result is not
/// renormalized; its norm^2 is the postselection probability.
SparseKet project_single_photon_per_mode(const SparseKet& psi,
                                         std::span<const ModeGroup> groups);

/// Density matrix over an ordered list of basis labels of a register.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  DensityMatrix(Register reg, std::vector<ModeOccupation> basis, Matrix entries);

  /// Full computational basis of a qubit register, ordered lexicographically
  /// (HH, HV, VH, VV for two qubits; the first name is the leading qubit).
  static DensityMatrix qubits(std::vector<std::string> names, Matrix entries);

  const Register& reg() const { return reg_; }
  const std::vector<ModeOccupation>& basis() const { return basis_; }
  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }
  std::vector<std::string> labels() const;
  std::optional<Eigen::Index> find(const ModeOccupation& occ) const;

  Complex trace() const { return m_.trace(); }
  bool is_hermitian(double tol = 1e-12) const;
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;

  DensityMatrix with_matrix(Matrix m) const;

 private:
  Register reg_;
  std::vector<ModeOccupation> basis_;
  Matrix m_;
};

/// |psi><psi| over the support of psi (basis in occupation order).
DensityMatrix density_from_ket(const SparseKet& psi);

struct Normalized {
  DensityMatrix rho;
  double trace_before = 0.0;
};

/// Divides by the trace. Throws PostselectionFailure when the trace vanishes.
Normalized normalize(const DensityMatrix& rho);

/// Keeps the named slots and traces out the rest; the kept slots come out in
/// register order. An empty `keep` traces everything and returns [Tr rho].
/// Unknown slot names throw std::invalid_argument.
DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::span<const std::string> keep);
DensityMatrix partial_trace(const DensityMatrix& rho,
                            std::initializer_list<std::string> keep);

/// Tr over everything except `keep` of |psi><psi|, computed directly from the
/// sparse amplitudes without forming the full outer product.
DensityMatrix reduced_density(const SparseKet& psi,
                              std::span<const std::string> keep);

/// Relabels a single-photon-per-group Fock density matrix (plus any qubit
/// slots, listed by name in `qubit_slots`) as a polarization-qubit matrix on
/// the full product basis. Output qubit order: `qubit_slots` first, then one
/// qubit per group named `names` (same length as groups). Basis elements
/// missing from `rho` are zero rows/columns.
DensityMatrix to_polarization_qubits(const DensityMatrix& rho,
                                     std::span<const std::string> qubit_slots,
                                     std::span<const ModeGroup> groups,
                                     std::span<const std::string> names);

}  // namespace qiopa
