#include "qiopa/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qiopa/errors.hpp"

namespace qiopa {

// ---------------------------------------------------------------- Register

namespace {

std::vector<Slot> as_fock_slots(std::vector<std::string> names) {
  std::vector<Slot> slots;
  slots.reserve(names.size());
  for (auto& n : names) slots.push_back({std::move(n), SlotKind::fock});
  return slots;
}

}  // namespace

Register::Register(std::vector<std::string> fock_slots, int n_max)
    : Register(as_fock_slots(std::move(fock_slots)), n_max) {}

Register::Register(std::vector<Slot> slots, int n_max)
    : slots_(std::move(slots)), n_max_(n_max) {
  if (n_max_ < 0) throw std::invalid_argument("register cutoff must be non-negative");
  std::set<std::string> seen;
  for (const auto& s : slots_) {
    if (s.name.empty()) throw std::invalid_argument("empty slot name");
    if (!seen.insert(s.name).second)
      throw std::invalid_argument("duplicate slot name '" + s.name + "'");
  }
}

Register Register::qubits(std::vector<std::string> names) {
  std::vector<Slot> slots;
  for (auto& n : names) slots.push_back({std::move(n), SlotKind::qubit});
  return Register(std::move(slots), 1);
}

int Register::bound(std::size_t i) const {
  return slots_.at(i).kind == SlotKind::qubit ? 1 : n_max_;
}

std::optional<std::size_t> Register::find(std::string_view name) const {
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (slots_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Register::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw std::invalid_argument("unknown slot '" + std::string(name) + "'");
}

Register Register::concat(const Register& other) const {
  std::vector<Slot> all = slots_;
  for (const auto& s : other.slots_) {
    if (find(s.name))
      throw std::invalid_argument("registers overlap on slot '" + s.name + "'");
    all.push_back(s);
  }
  return Register(std::move(all), std::max(n_max_, other.n_max_));
}

Register Register::subset(std::span<const std::size_t> indices) const {
  std::vector<Slot> picked;
  for (auto i : indices) picked.push_back(slots_.at(i));
  return Register(std::move(picked), n_max_);
}

Register Register::with_n_max(int n_max) const { return Register(slots_, n_max); }

bool Register::is_all_qubits() const {
  return !slots_.empty() && std::all_of(slots_.begin(), slots_.end(), [](const Slot& s) {
    return s.kind == SlotKind::qubit;
  });
}

// ---------------------------------------------------------- ModeOccupation

ModeOccupation::ModeOccupation(std::initializer_list<int> counts) {
  counts_.reserve(counts.size());
  for (int n : counts) {
    if (n < 0) throw std::invalid_argument("negative occupation");
    counts_.push_back(static_cast<std::uint16_t>(n));
  }
}

void ModeOccupation::set(std::size_t i, int n) {
  if (n < 0) throw std::invalid_argument("negative occupation");
  if (n > 0xFFFF) throw TruncationFault("occupation overflows 16-bit storage");
  counts_.at(i) = static_cast<std::uint16_t>(n);
}

int ModeOccupation::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), 0);
}

ModeOccupation ModeOccupation::concat(const ModeOccupation& other) const {
  auto c = counts_;
  c.insert(c.end(), other.counts_.begin(), other.counts_.end());
  return ModeOccupation(std::move(c));
}

ModeOccupation ModeOccupation::select(std::span<const std::size_t> indices) const {
  std::vector<std::uint16_t> c;
  c.reserve(indices.size());
  for (auto i : indices) c.push_back(counts_.at(i));
  return ModeOccupation(std::move(c));
}

std::string label(const Register& reg, const ModeOccupation& occ) {
  std::ostringstream os;
  const bool qubit_only = reg.is_all_qubits();
  for (std::size_t i = 0; i < occ.size(); ++i) {
    const bool q = i < reg.size() && reg.slot(i).kind == SlotKind::qubit;
    if (!qubit_only && i > 0) os << ',';
    if (q)
      os << (occ[i] == 0 ? 'H' : 'V');
    else
      os << occ[i];
  }
  return os.str();
}

// --------------------------------------------------------------- SparseKet

SparseKet SparseKet::basis(Register reg, ModeOccupation occ, Complex amp) {
  SparseKet k(std::move(reg));
  k.add(occ, amp);
  return k;
}

void SparseKet::add(const ModeOccupation& occ, Complex amp) {
  if (occ.size() != reg_.size())
    throw std::invalid_argument("occupation length does not match register");
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (occ[i] > reg_.bound(i)) {
      std::ostringstream os;
      os << "occupation " << occ[i] << " of slot '" << reg_.slot(i).name
         << "' exceeds cutoff " << reg_.bound(i);
      throw TruncationFault(os.str());
    }
  }
  auto [it, inserted] = amps_.try_emplace(occ, amp);
  if (!inserted) it->second += amp;
  if (std::abs(it->second) < drop_ || it->second == Complex{}) amps_.erase(it);
}

Complex SparseKet::amplitude(const ModeOccupation& occ) const {
  auto it = amps_.find(occ);
  return it == amps_.end() ? Complex{} : it->second;
}

double SparseKet::norm2() const {
  double s = 0.0;
  for (const auto& [occ, a] : amps_) s += std::norm(a);
  return s;
}

SparseKet SparseKet::scaled(Complex factor) const {
  SparseKet out(reg_, drop_);
  for (const auto& [occ, a] : amps_) out.add(occ, a * factor);
  return out;
}

SparseKet SparseKet::normalized() const {
  const double n2 = norm2();
  if (!(n2 > 0.0)) throw PostselectionFailure("cannot normalize the zero ket");
  return scaled(1.0 / std::sqrt(n2));
}

SparseKet SparseKet::with_register(Register reg) const {
  if (reg.size() != reg_.size())
    throw std::invalid_argument("register size mismatch");
  SparseKet out(std::move(reg), drop_);
  for (const auto& [occ, a] : amps_) out.add(occ, a);
  return out;
}

SparseKet operator+(const SparseKet& a, const SparseKet& b) {
  if (!(a.reg() == b.reg())) throw std::invalid_argument("register mismatch in ket sum");
  SparseKet out = a;
  for (const auto& [occ, amp] : b) out.add(occ, amp);
  return out;
}

SparseKet operator-(const SparseKet& a, const SparseKet& b) { return a + b.scaled(-1.0); }

Complex inner(const SparseKet& a, const SparseKet& b) {
  if (a.reg().size() != b.reg().size())
    throw std::invalid_argument("register mismatch in inner product");
  Complex s{};
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  for (const auto& [occ, amp] : small) {
    const Complex other = large.amplitude(occ);
    if (other == Complex{}) continue;
    s += &small == &a ? std::conj(amp) * other : std::conj(other) * amp;
  }
  return s;
}

double overlap_fidelity(const SparseKet& a, const SparseKet& b) {
  const double d = a.norm2() * b.norm2();
  if (!(d > 0.0)) throw std::invalid_argument("fidelity with a zero ket");
  return std::norm(inner(a, b)) / d;
}

SparseKet tensor_product(const SparseKet& a, const SparseKet& b) {
  SparseKet out(a.reg().concat(b.reg()), std::min(a.drop_threshold(), b.drop_threshold()));
  for (const auto& [x, ax] : a)
    for (const auto& [y, by] : b) out.add(x.concat(y), ax * by);
  return out;
}

SparseKet create(const SparseKet& psi, std::string_view slot) {
  const auto s = psi.reg().index(slot);
  if (psi.reg().slot(s).kind != SlotKind::fock)
    throw std::invalid_argument("ladder operator on a qubit slot");
  SparseKet out(psi.reg(), psi.drop_threshold());
  for (const auto& [occ, a] : psi) {
    ModeOccupation next = occ;
    next.set(s, occ[s] + 1);
    out.add(next, a * std::sqrt(static_cast<double>(occ[s] + 1)));
  }
  return out;
}

SparseKet annihilate(const SparseKet& psi, std::string_view slot) {
  const auto s = psi.reg().index(slot);
  if (psi.reg().slot(s).kind != SlotKind::fock)
    throw std::invalid_argument("ladder operator on a qubit slot");
  SparseKet out(psi.reg(), psi.drop_threshold());
  for (const auto& [occ, a] : psi) {
    if (occ[s] == 0) continue;
    ModeOccupation next = occ;
    next.set(s, occ[s] - 1);
    out.add(next, a * std::sqrt(static_cast<double>(occ[s])));
  }
  return out;
}

double mean_count(const SparseKet& psi, std::string_view slot) {
  const auto s = psi.reg().index(slot);
  double num = 0.0;
  for (const auto& [occ, a] : psi) num += occ[s] * std::norm(a);
  const double n2 = psi.norm2();
  if (!(n2 > 0.0)) throw std::invalid_argument("mean count of the zero ket");
  return num / n2;
}

SparseKet project_single_photon_per_mode(const SparseKet& psi,
                                         std::span<const ModeGroup> groups) {
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (const auto& g : groups) idx.emplace_back(psi.reg().index(g.h), psi.reg().index(g.v));
  SparseKet out(psi.reg(), psi.drop_threshold());
  for (const auto& [occ, a] : psi) {
    const bool keep = std::all_of(idx.begin(), idx.end(), [&occ](const auto& p) {
      return occ[p.first] + occ[p.second] == 1;
    });
    if (keep) out.add(occ, a);
  }
  return out;
}

// ----------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(Register reg, std::vector<ModeOccupation> basis, Matrix entries)
    : reg_(std::move(reg)), basis_(std::move(basis)), m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("density matrix must be square");
  if (static_cast<std::size_t>(m_.rows()) != basis_.size())
    throw std::invalid_argument("basis size does not match matrix dimension");
  for (const auto& b : basis_)
    if (b.size() != reg_.size())
      throw std::invalid_argument("basis label length does not match register");
}

DensityMatrix DensityMatrix::qubits(std::vector<std::string> names, Matrix entries) {
  const std::size_t n = names.size();
  std::vector<ModeOccupation> basis;
  for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) {
    ModeOccupation occ(n);
    for (std::size_t q = 0; q < n; ++q) occ.set(q, (k >> (n - 1 - q)) & 1U);
    basis.push_back(std::move(occ));
  }
  return DensityMatrix(Register::qubits(std::move(names)), std::move(basis), std::move(entries));
}

std::vector<std::string> DensityMatrix::labels() const {
  std::vector<std::string> out;
  for (const auto& b : basis_) out.push_back(label(reg_, b));
  return out;
}

std::optional<Eigen::Index> DensityMatrix::find(const ModeOccupation& occ) const {
  auto it = std::find(basis_.begin(), basis_.end(), occ);
  if (it == basis_.end()) return std::nullopt;
  return static_cast<Eigen::Index>(it - basis_.begin());
}

bool DensityMatrix::is_hermitian(double tol) const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double DensityMatrix::min_eigenvalue() const {
  if (dim() == 0) return 0.0;
  const Matrix h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

DensityMatrix DensityMatrix::with_matrix(Matrix m) const {
  return DensityMatrix(reg_, basis_, std::move(m));
}

DensityMatrix density_from_ket(const SparseKet& psi) {
  std::vector<ModeOccupation> basis;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
  Eigen::Index i = 0;
  for (const auto& [occ, a] : psi) {
    basis.push_back(occ);
    v(i++) = a;
  }
  return DensityMatrix(psi.reg(), std::move(basis), v * v.adjoint());
}

Normalized normalize(const DensityMatrix& rho) {
  const double tr = rho.trace().real();
  if (!(tr > 0.0))
    throw PostselectionFailure("density matrix has vanishing trace (postselection probability 0)");
  return {rho.with_matrix(rho.matrix() / tr), tr};
}

namespace {

struct TraceSplit {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
};

TraceSplit split_slots(const Register& reg, std::span<const std::string> keep) {
  std::vector<bool> is_kept(reg.size(), false);
  for (const auto& name : keep) is_kept[reg.index(name)] = true;
  TraceSplit s;
  for (std::size_t i = 0; i < reg.size(); ++i) (is_kept[i] ? s.kept : s.traced).push_back(i);
  return s;
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::string> keep) {
  const auto split = split_slots(rho.reg(), keep);

  std::map<ModeOccupation, Eigen::Index> kept_index;
  for (const auto& b : rho.basis()) kept_index.emplace(b.select(split.kept), 0);
  std::vector<ModeOccupation> out_basis;
  for (auto& [occ, idx] : kept_index) {
    idx = static_cast<Eigen::Index>(out_basis.size());
    out_basis.push_back(occ);
  }

  std::map<ModeOccupation, std::vector<std::pair<Eigen::Index, Eigen::Index>>> groups;
  for (Eigen::Index i = 0; i < rho.dim(); ++i) {
    const auto& b = rho.basis()[static_cast<std::size_t>(i)];
    groups[b.select(split.traced)].emplace_back(i, kept_index.at(b.select(split.kept)));
  }

  const auto n = static_cast<Eigen::Index>(out_basis.size());
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [env, members] : groups)
    for (const auto& [i, ki] : members)
      for (const auto& [j, kj] : members) out(ki, kj) += rho(i, j);

  return DensityMatrix(rho.reg().subset(split.kept), std::move(out_basis), std::move(out));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<std::string> keep) {
  std::vector<std::string> k(keep);
  return partial_trace(rho, std::span<const std::string>(k));
}

DensityMatrix reduced_density(const SparseKet& psi, std::span<const std::string> keep) {
  const auto split = split_slots(psi.reg(), keep);

  std::map<ModeOccupation, Eigen::Index> kept_index;
  for (const auto& [occ, a] : psi) kept_index.emplace(occ.select(split.kept), 0);
  std::vector<ModeOccupation> out_basis;
  for (auto& [occ, idx] : kept_index) {
    idx = static_cast<Eigen::Index>(out_basis.size());
    out_basis.push_back(occ);
  }

  std::map<ModeOccupation, std::vector<std::pair<Eigen::Index, Complex>>> groups;
  for (const auto& [occ, a] : psi)
    groups[occ.select(split.traced)].emplace_back(kept_index.at(occ.select(split.kept)), a);

  const auto n = static_cast<Eigen::Index>(out_basis.size());
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [env, members] : groups)
    for (const auto& [i, ai] : members)
      for (const auto& [j, aj] : members) out(i, j) += ai * std::conj(aj);

  return DensityMatrix(psi.reg().subset(split.kept), std::move(out_basis), std::move(out));
}

DensityMatrix to_polarization_qubits(const DensityMatrix& rho,
                                     std::span<const std::string> qubit_slots,
                                     std::span<const ModeGroup> groups,
                                     std::span<const std::string> names) {
  if (names.size() != groups.size())
    throw std::invalid_argument("one qubit name per mode group required");
  const auto& reg = rho.reg();

  std::vector<std::size_t> qidx;
  for (const auto& q : qubit_slots) {
    qidx.push_back(reg.index(q));
    if (reg.slot(qidx.back()).kind != SlotKind::qubit)
      throw std::invalid_argument("slot '" + q + "' is not a qubit slot");
  }
  std::vector<std::pair<std::size_t, std::size_t>> gidx;
  for (const auto& g : groups) gidx.emplace_back(reg.index(g.h), reg.index(g.v));

  std::vector<std::string> out_names(qubit_slots.begin(), qubit_slots.end());
  out_names.insert(out_names.end(), names.begin(), names.end());
  const std::size_t nq = out_names.size();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << nq);

  // Map each input basis label to a qubit index, rejecting anything that is
  // not one photon per group.
  std::vector<Eigen::Index> target(rho.basis().size());
  for (std::size_t b = 0; b < rho.basis().size(); ++b) {
    const auto& occ = rho.basis()[b];
    std::size_t k = 0;
    for (auto q : qidx) k = (k << 1) | static_cast<std::size_t>(occ[q]);
    for (const auto& [h, v] : gidx) {
      if (occ[h] + occ[v] != 1)
        throw std::invalid_argument("basis label " + label(reg, occ) +
                                    " is not single-photon per mode");
      k = (k << 1) | static_cast<std::size_t>(occ[v]);
    }
    target[b] = static_cast<Eigen::Index>(k);
  }

  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < target.size(); ++i)
    for (std::size_t j = 0; j < target.size(); ++j)
      out(target[i], target[j]) +=
          rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return DensityMatrix::qubits(std::move(out_names), std::move(out));
}

}  // namespace qiopa
