#include "qiopa/loss.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qiopa/errors.hpp"
#include "qiopa/states.hpp"

namespace qiopa {

void LossSpec::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  if (!(std::abs(std::abs(reflect_phase) - 1.0) <= 1e-12))
    throw std::invalid_argument("reflection phase factor must have unit modulus");
}

double LossSpec::transmit() const {
  return convention == LossConvention::a ? std::sqrt(eta) : eta;
}

Complex LossSpec::reflect() const {
  const double mag = convention == LossConvention::a ? std::sqrt(1.0 - eta)
                                                     : std::sqrt(1.0 - eta * eta);
  return reflect_phase * mag;
}

double LossSpec::transmit_probability() const {
  return convention == LossConvention::a ? eta : eta * eta;
}

double LossSpec::reflect_probability() const { return 1.0 - transmit_probability(); }

double LossSpec::effective_t(const GainParams& gain) const {
  return gain.tanh_g() * reflect_probability();
}

std::string reflected_slot(const std::string& slot) { return "r" + slot; }

// ------------------------------------------------------------ full ket path

SparseKet apply_beamsplitter(const SparseKet& psi, const LossSpec& loss, const ModeGroup& mode) {
  loss.validate();
  Register reg = psi.reg();
  std::vector<Slot> extra;
  for (const auto* name : {&mode.h, &mode.v}) {
    reg.index(*name);
    if (!reg.find(reflected_slot(*name))) extra.push_back({reflected_slot(*name), SlotKind::fock});
  }
  const std::size_t old_size = reg.size();
  if (!extra.empty()) reg = reg.concat(Register(extra, reg.n_max()));

  const std::array<std::size_t, 2> src{reg.index(mode.h), reg.index(mode.v)};
  const std::array<std::size_t, 2> dst{reg.index(reflected_slot(mode.h)),
                                       reg.index(reflected_slot(mode.v))};
  const double tau = loss.transmit();
  const Complex r = loss.reflect();

  SparseKet out(reg, psi.drop_threshold());
  for (const auto& [occ0, amp0] : psi) {
    ModeOccupation occ = occ0.concat(ModeOccupation(reg.size() - old_size));
    for (auto d : dst)
      if (occ[d] != 0)
        throw std::invalid_argument("reflected slot " + reg.slot(d).name + " is not vacuum");

    // Expand the two slots independently; binomial splitting per slot.
    std::vector<std::pair<ModeOccupation, Complex>> partial{{occ, amp0}};
    for (int k = 0; k < 2; ++k) {
      std::vector<std::pair<ModeOccupation, Complex>> next;
      for (const auto& [o, a] : partial) {
        const int n = o[src[k]];
        double binom = 1.0;  // C(n, l), updated incrementally
        for (int l = 0; l <= n; ++l) {
          if (l > 0) binom *= static_cast<double>(n - l + 1) / l;
          const Complex c = std::sqrt(binom) * std::pow(tau, l) * std::pow(r, n - l);
          if (c == Complex{}) continue;
          ModeOccupation split = o;
          split.set(src[k], l);
          split.set(dst[k], n - l);
          next.emplace_back(std::move(split), a * c);
        }
      }
      partial = std::move(next);
    }
    for (const auto& [o, a] : partial) out.add(o, a);
  }
  return out;
}

SparseKet apply_beamsplitter(const SparseKet& psi, const LossSpec& loss, int spatial_mode) {
  if (spatial_mode == 1) return apply_beamsplitter(psi, loss, kMode1);
  if (spatial_mode == 2) return apply_beamsplitter(psi, loss, kMode2);
  throw std::invalid_argument("spatial mode must be 1 or 2");
}

namespace {

std::vector<std::string> transmitted_slots() {
  return {slot::k1H, slot::k1V, slot::k2H, slot::k2V};
}

std::optional<std::string> high_loss_warning(const GainParams& gain, const LossSpec& loss) {
  const double load = loss.transmit_probability() * gain.nbar();
  if (load <= 0.1) return std::nullopt;
  std::ostringstream os;
  os << "transmitted photons per mode " << load
     << " is not << 1; pair extraction is outside the high-loss regime";
  return os.str();
}

}  // namespace

DensityMatrix lossy_reduced_density(const GainParams& gain, const PolarizationQubit& qubit,
                                    const LossSpec& loss, int n_max) {
  const auto cat = cat_state({gain, qubit, n_max});
  const SparseKet lossy =
      apply_beamsplitter(apply_beamsplitter(cat.ket, loss, kMode1), loss, kMode2);
  const auto keep = transmitted_slots();
  return normalize(reduced_density(lossy, keep)).rho;
}

PairExtraction pair_extract_ket(const SparseKet& psi, const LossSpec& loss,
                                std::span<const std::string> qubit_slots) {
  const double input_norm2 = psi.norm2();
  if (!(input_norm2 > 0.0)) throw std::invalid_argument("pair extraction of the zero ket");
  // Projection on mode 1 commutes with the beam splitter on mode 2, so each
  // mode is split and postselected in turn.
  const std::array<ModeGroup, 1> m1{kMode1};
  const std::array<ModeGroup, 1> m2{kMode2};
  SparseKet s = project_single_photon_per_mode(apply_beamsplitter(psi, loss, kMode1), m1);
  s = project_single_photon_per_mode(apply_beamsplitter(s, loss, kMode2), m2);
  if (s.empty()) throw PostselectionFailure("no component survives pair extraction");

  std::vector<std::string> keep(qubit_slots.begin(), qubit_slots.end());
  for (auto& n : transmitted_slots()) keep.push_back(n);
  const DensityMatrix reduced = reduced_density(s, keep);

  const std::array<ModeGroup, 2> groups{kMode1, kMode2};
  const std::array<std::string, 2> names{"k1", "k2"};
  const DensityMatrix qubits = to_polarization_qubits(reduced, qubit_slots, groups, names);
  auto [rho, tr] = normalize(qubits);
  return {std::move(rho), tr / input_norm2, static_cast<long long>(s.size()), std::nullopt};
}

// ------------------------------------------------------------ series path
//
// The amplified state is Sum_{i,j} gamma (-Gamma)^i Gamma^j |i+e,j+e',j,i>
// with one stimulated photon in 1H (H component) or 1V (V component). The
// slot pair (1H, 2V) depends only on i and (1V, 2H) only on j, and so do the
// beam-splitter amplitudes. A pair-extracted matrix element therefore
// factorizes into an i-series times a j-series, each matching the reflected
// occupations of the two contributions.

namespace {

struct Component {
  int label;      // row block (trigger value, or 0)
  bool vertical;  // stimulated photon in 1V instead of 1H
  Complex weight;
};

// Pattern p = 2*b1 + b2, bk = 1 when mode k's transmitted photon is V.
struct Pattern {
  int l1H, l1V, l2H, l2V;
};

Pattern pattern(int p) {
  const int b1 = (p >> 1) & 1, b2 = p & 1;
  return {1 - b1, b1, 1 - b2, b2};
}

// One factor of the amplitude along a slot pair: `pump` photons in the slot
// that may hold the stimulated photon, `idler` in its partner.
struct SeriesArm {
  int extra;     // stimulated photon in the pump slot (0 or 1)
  int lp;        // transmitted photons required in the pump slot
  int li;        // transmitted photons required in the idler slot
  bool root;     // amplitude carries sqrt(k + 1) (stimulated arm)
};

SeriesArm arm_i(const Component& c, const Pattern& p) {
  return {c.vertical ? 0 : 1, p.l1H, p.l2V, !c.vertical};
}

SeriesArm arm_j(const Component& c, const Pattern& p) {
  return {c.vertical ? 1 : 0, p.l1V, p.l2H, c.vertical};
}

// Reflected occupations: (k + extra - lp, k - li); they match between arms
// iff extra - lp + li agrees, and then k' = k - li + li'.
int arm_offset(const SeriesArm& a) { return a.extra - a.lp + a.li; }

double sqrt_binom_small(int n, int l) {
  // l is 0 or 1 for pair extraction.
  if (l < 0 || n < l) return 0.0;
  if (l == 0) return 1.0;
  if (l == 1) return std::sqrt(static_cast<double>(n));
  double b = 1.0;
  for (int k = 1; k <= l; ++k) b *= static_cast<double>(n - l + k) / k;
  return std::sqrt(b);
}

double arm_poly(const SeriesArm& a, int k) {
  if (k < 0) return 0.0;
  double v = sqrt_binom_small(k + a.extra, a.lp) * sqrt_binom_small(k, a.li);
  if (a.root) v *= std::sqrt(static_cast<double>(k + 1));
  return v;
}

struct SeriesResult {
  /// Sum divided by base^power.
  double value = 0.0;
  /// Power of base carried by the first non-vanishing term.
  int power = 0;
  long long terms = 0;
};

// Sum_k base^(k + k') R^refl(k) poly_a(k) poly_b(k') with k' = k + shift and
// R = |r|^2; refl(k) = 2k + extra - lp - li is the reflected photon count of
// either contribution (equal by matching). All terms share one sign and
// behave like poly(k) x^k with x = base^2 R^2, so the sum stops once the
// geometric tail bound falls below eps relative to the partial sum. The
// leading base power is factored out so that base = 0 yields the limit.
SeriesResult arm_series(const SeriesArm& a, const SeriesArm& b, double base, double R,
                        double eps) {
  const int shift = b.li - a.li;
  const int k0 = std::max(0, -shift);
  const double b2 = base * base, r2 = R * R;
  double rpart = std::pow(R, 2 * k0 + a.extra - a.lp - a.li);
  double bpart = 1.0;
  bool started = false;

  SeriesResult res;
  double prev = 0.0;
  for (long long k = k0;; ++k) {
    ++res.terms;
    const double poly =
        arm_poly(a, static_cast<int>(k)) * arm_poly(b, static_cast<int>(k + shift));
    if (!started) {
      if (poly == 0.0) {
        if (k > k0 + 4) break;  // the polynomials vanish at small k only
        rpart *= r2;
        continue;
      }
      started = true;
      res.power = static_cast<int>(2 * k + shift);
    }
    const double term = bpart * rpart * poly;
    res.value += term;
    if (prev > 0.0 && term < prev) {
      const double ratio = term / prev;
      if (term * ratio / (1.0 - ratio) <= eps * res.value) break;
    }
    if (res.terms > 400'000'000LL) throw NumericFault("pair-extraction series failed to converge");
    prev = term;
    bpart *= b2;
    rpart *= r2;
    if (bpart * rpart == 0.0) break;  // every later term vanishes too
  }
  return res;
}

PairExtraction series_extract(const std::vector<Component>& comps, int labels,
                              const GainParams& gain, const LossSpec& loss, double tolerance,
                              std::vector<std::string> qubit_names) {
  loss.validate();
  const double G = gain.tanh_g();
  const double R = loss.reflect_probability();
  const double T = loss.transmit_probability();
  const double eps = std::max(1e-3 * tolerance, 1e-17);
  const Eigen::Index dim = 4 * labels;

  struct Element {
    Eigen::Index row, col;
    Complex value;  // times G^power
    int power;
  };
  std::vector<Element> elements;
  long long longest = 0;

  for (const auto& c : comps) {
    for (const auto& c2 : comps) {
      const Complex w = c.weight * std::conj(c2.weight);
      if (w == Complex{}) continue;
      for (int p = 0; p < 4; ++p) {
        const Pattern pp = pattern(p);
        const SeriesArm ai = arm_i(c, pp), aj = arm_j(c, pp);
        for (int q = 0; q < 4; ++q) {
          const Pattern pq = pattern(q);
          const SeriesArm bi = arm_i(c2, pq), bj = arm_j(c2, pq);
          if (arm_offset(ai) != arm_offset(bi) || arm_offset(aj) != arm_offset(bj)) continue;
          const auto si = arm_series(ai, bi, G, R, eps);
          const auto sj = arm_series(aj, bj, G, R, eps);
          longest = std::max({longest, si.terms, sj.terms});
          if (si.value == 0.0 || sj.value == 0.0) continue;
          // The i arm carries (-Gamma)^(k + k'), whose sign is that of the
          // shift between k and k'.
          const double sign_i = ((bi.li - ai.li) % 2 == 0) ? 1.0 : -1.0;
          elements.push_back({4 * c.label + p, 4 * c2.label + q,
                              w * (sign_i * si.value * sj.value), si.power + sj.power});
        }
      }
    }
  }
  if (elements.empty()) throw PostselectionFailure("no contribution survives pair extraction");

  int lead = elements.front().power;
  for (const auto& e : elements) lead = std::min(lead, e.power);
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& e : elements) m(e.row, e.col) += e.value * std::pow(G, e.power - lead);

  // gamma^2 = sech^6. The leading Gamma power and the transmit factor tau^4
  // (two photons in the ket, two in the bra) are common to all elements and
  // only enter the success probability; g = 0 or eta = 0 yield the limits.
  const double gamma2 = gain.sech2() * gain.sech2() * gain.sech2();
  auto [rho, tr] = normalize(DensityMatrix::qubits(std::move(qubit_names), m));
  const double success = tr * gamma2 * std::pow(G, lead) * T * T;
  return {std::move(rho), success, longest, high_loss_warning(gain, loss)};
}

}  // namespace

PairExtraction pair_extracted_rho(const GainParams& gain, const PolarizationQubit& qubit,
                                  const LossSpec& loss, const PairOptions& options) {
  if (options.path == PairPath::full_ket) {
    const auto cat = cat_state({gain, qubit, options.n_max, options.tolerance});
    auto res = pair_extract_ket(cat.ket, loss);
    res.warning = cat.warning ? cat.warning : high_loss_warning(gain, loss);
    return res;
  }
  const std::vector<Component> comps{{0, false, qubit.alpha()}, {0, true, qubit.beta()}};
  return series_extract(comps, 1, gain, loss, options.tolerance, {"k1", "k2"});
}

PairExtraction pair_extracted_rho3(const GainParams& gain, const LossSpec& loss,
                                   const PairOptions& options) {
  if (options.path == PairPath::full_ket) {
    const auto sigma = sigma_state(gain, options.n_max, options.tolerance);
    const std::array<std::string, 1> trig{slot::trigger};
    auto res = pair_extract_ket(sigma.ket, loss, trig);
    res.warning = sigma.warning ? sigma.warning : high_loss_warning(gain, loss);
    return res;
  }
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<Component> comps{{0, false, s}, {1, true, -s}};
  return series_extract(comps, 2, gain, loss, options.tolerance, {"T", "k1", "k2"});
}

}  // namespace qiopa
