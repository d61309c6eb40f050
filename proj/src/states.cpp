#include "qiopa/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qiopa/errors.hpp"

namespace qiopa {

Register amplifier_register(int n_max) {
  return Register({slot::k1H, slot::k1V, slot::k2H, slot::k2V}, n_max);
}

Register trigger_register(int n_max) {
  return Register::qubits({slot::trigger}).with_n_max(n_max).concat(amplifier_register(n_max));
}

double series_norm_deficit(const GainParams& gain, int n_max) {
  // Sum_{i<=N} (i+1) x^i and Sum_{j<=N} x^j normalized by (1-x)^3 give
  // (1 - a)(1 - u) with u = x^{N+1}, a = u (1 + (N+1)(1-x)).
  const double x = gain.tanh_g() * gain.tanh_g();
  const double one_minus_x = gain.sech2();
  const double u = std::pow(x, n_max + 1);
  const double a = u * (1.0 + (n_max + 1) * one_minus_x);
  return a + u - a * u;
}

namespace {

void check_order(int n_max) {
  if (n_max < 1) throw std::invalid_argument("series truncation order n_max must be >= 1");
}

std::optional<std::string> tail_warning(double deficit, double tol, int n_max) {
  if (deficit <= tol) return std::nullopt;
  std::ostringstream os;
  os << "series truncated at n_max=" << n_max << " misses norm " << deficit
     << " (> tolerance " << tol << ")";
  return os.str();
}

// Adds c * gamma (-Gamma)^{i+j} (-1)^j sqrt(i+1) |i+1,j,j,i> (H component) or
// the sqrt(j+1) |i,j+1,j,i> V component, with `prefix` slots in front.
void add_component(SparseKet& out, const GainParams& gain, int n_max, bool vertical,
                   Complex c, const ModeOccupation& prefix) {
  if (c == Complex{}) return;
  const double G = gain.tanh_g();
  const double gam = gain.gamma();
  double pow_i = 1.0;  // (-Gamma)^i
  for (int i = 0; i <= n_max; ++i, pow_i *= -G) {
    double pow_j = 1.0;  // Gamma^j, since (-Gamma)^j (-1)^j = Gamma^j
    for (int j = 0; j <= n_max; ++j, pow_j *= G) {
      const double w = gam * pow_i * pow_j;
      if (w == 0.0 && (i > 0 || j > 0)) break;
      const ModeOccupation fock =
          vertical ? ModeOccupation{i, j + 1, j, i} : ModeOccupation{i + 1, j, j, i};
      const double root = std::sqrt(static_cast<double>(vertical ? j + 1 : i + 1));
      out.add(prefix.concat(fock), c * w * root);
    }
  }
}

}  // namespace

SeriesState cat_state(const CatStateSpec& spec) {
  check_order(spec.n_max);
  SparseKet ket(amplifier_register(2 * spec.n_max + 1));
  const ModeOccupation none(0);
  add_component(ket, spec.gain, spec.n_max, false, spec.qubit.alpha(), none);
  add_component(ket, spec.gain, spec.n_max, true, spec.qubit.beta(), none);
  const double deficit = series_norm_deficit(spec.gain, spec.n_max);
  return {std::move(ket), deficit, tail_warning(deficit, spec.tolerance, spec.n_max)};
}

SeriesState sigma_state(const GainParams& gain, int n_max, double tolerance) {
  check_order(n_max);
  SparseKet ket(trigger_register(2 * n_max + 1));
  const double s = 1.0 / std::sqrt(2.0);
  add_component(ket, gain, n_max, false, s, ModeOccupation{0});
  add_component(ket, gain, n_max, true, -s, ModeOccupation{1});
  const double deficit = series_norm_deficit(gain, n_max);
  return {std::move(ket), deficit, tail_warning(deficit, tolerance, n_max)};
}

// ------------------------------------------------------------ evolution

namespace {

struct AmpSlots {
  std::size_t h1, v1, h2, v2;
};

AmpSlots amp_slots(const Register& reg) {
  return {reg.index(slot::k1H), reg.index(slot::k1V), reg.index(slot::k2H),
          reg.index(slot::k2V)};
}

// Upper tail P(K >= k0) of the negative binomial with r "failures" and
// success ratio x: P(K = k) = C(k + r - 1, k) x^k (1 - x)^r.
double negative_binomial_tail(int r, double x, double one_minus_x, int k0) {
  if (k0 <= 0) return 1.0;
  if (x == 0.0) return 0.0;
  // Term at k0 via logs, then the decreasing tail summed directly.
  double log_term = std::lgamma(k0 + r) - std::lgamma(k0 + 1.0) - std::lgamma(r) +
                    k0 * std::log(x) + r * std::log(one_minus_x);
  double term = std::exp(log_term);
  double sum = 0.0;
  for (int k = k0; k < k0 + 100000; ++k) {
    sum += term;
    const double ratio = x * (k + r) / (k + 1.0);
    term *= ratio;
    if (ratio < 1.0 && term * ratio / (1.0 - ratio) < 1e-3 * sum) {
      sum += term / (1.0 - ratio);
      break;
    }
  }
  return std::min(sum, 1.0);
}

// Applies the anti-Hermitian generator K = e^{i phi} A - e^{-i phi} A^dagger,
// A = a+_1H a+_2V - a+_1V a+_2H, dropping components beyond the cutoff (the
// generator projected onto the truncated space).
SparseKet apply_generator(const SparseKet& psi, const AmpSlots& s, Complex phase, int n_max) {
  SparseKet out(psi.reg(), psi.drop_threshold());
  const Complex minus_conj = -std::conj(phase);
  for (const auto& [occ, amp] : psi) {
    auto pair_term = [&](std::size_t a, std::size_t b, double sign) {
      const int na = occ[a];
      const int nb = occ[b];
      if (na < n_max && nb < n_max) {
        ModeOccupation up = occ;
        up.set(a, na + 1);
        up.set(b, nb + 1);
        out.add(up, sign * phase * std::sqrt(double(na + 1) * double(nb + 1)) * amp);
      }
      if (na > 0 && nb > 0) {
        ModeOccupation down = occ;
        down.set(a, na - 1);
        down.set(b, nb - 1);
        out.add(down, sign * minus_conj * std::sqrt(double(na) * double(nb)) * amp);
      }
    };
    pair_term(s.h1, s.v2, 1.0);
    pair_term(s.v1, s.h2, -1.0);
  }
  return out;
}

}  // namespace

double evolution_leakage_estimate(const GainParams& gain, const SparseKet& input, int n_max) {
  const auto s = amp_slots(input.reg());
  const double x = gain.tanh_g() * gain.tanh_g();
  double worst = 0.0;
  for (const auto& [occ, amp] : input) {
    if (std::norm(amp) == 0.0) continue;
    double tail = 0.0;
    for (auto [a, b] : {std::pair{s.h1, s.v2}, std::pair{s.v1, s.h2}}) {
      const int r = occ[a] + occ[b] + 1;
      tail += negative_binomial_tail(r, x, gain.sech2(), n_max - std::max(occ[a], occ[b]) + 1);
    }
    worst = std::max(worst, tail);
  }
  return worst;
}

SparseKet evolve_numeric(const GainParams& gain, const SparseKet& input, int n_max,
                         const EvolveOptions& options) {
  if (n_max < 1) throw std::invalid_argument("evolution cutoff n_max must be >= 1");
  if (gain.g() > options.max_gain) {
    std::ostringstream os;
    os << "numeric evolution is limited to g <= " << options.max_gain << " (got " << gain.g()
       << "); use the series construction";
    throw std::invalid_argument(os.str());
  }
  const auto s = amp_slots(input.reg());
  for (const auto& [occ, amp] : input)
    for (auto i : {s.h1, s.v1, s.h2, s.v2})
      if (occ[i] > n_max) throw TruncationFault("input state already exceeds the evolution cutoff");

  const double leak = evolution_leakage_estimate(gain, input, n_max);
  if (leak > options.tolerance) {
    int need = n_max;
    while (need < 4096 && evolution_leakage_estimate(gain, input, need) > options.tolerance) ++need;
    std::ostringstream os;
    os << "leakage estimate " << leak << " above tolerance " << options.tolerance
       << " at n_max=" << n_max << "; requires n_max >= " << need;
    throw TruncationFault(os.str());
  }

  // Work on a register whose amplifier slots are capped at n_max.
  std::vector<Slot> slots = input.reg().slots();
  SparseKet psi = input.with_register(Register(slots, std::max(n_max, input.reg().n_max())));
  if (gain.g() == 0.0) return psi;

  const Complex phase = std::polar(1.0, options.pump_phase);
  // ||K|| <= 2 (n_max + 1) on the truncated space; keep each step's
  // exponent below 1/2.
  const double bound = 2.0 * (n_max + 1);
  const int steps = std::max(1, static_cast<int>(std::ceil(gain.g() * bound / 0.5)));
  const double h = gain.g() / steps;

  for (int step = 0; step < steps; ++step) {
    SparseKet sum = psi;
    SparseKet term = psi;
    const double scale = std::sqrt(psi.norm2());
    for (int k = 1; k <= 200; ++k) {
      term = apply_generator(term, s, phase, n_max).scaled(h / k);
      sum = sum + term;
      if (std::sqrt(term.norm2()) < 1e-17 * scale) break;
    }
    psi = std::move(sum);
  }
  return psi;
}

// ---------------------------------------------------------- rotations

namespace {

std::vector<double> log_factorials(int n) {
  std::vector<double> lf(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k) lf[k] = lf[k - 1] + std::log(static_cast<double>(k));
  return lf;
}

std::vector<Complex> powers(Complex z, int n) {
  std::vector<Complex> p(static_cast<std::size_t>(n) + 1, 1.0);
  for (int k = 1; k <= n; ++k) p[k] = p[k - 1] * z;
  return p;
}

}  // namespace

SparseKet apply_mode_unitary(const SparseKet& psi, const ModeGroup& mode,
                             const Eigen::Matrix2cd& u) {
  const auto ih = psi.reg().index(mode.h);
  const auto iv = psi.reg().index(mode.v);
  int top = 0;
  for (const auto& [occ, amp] : psi) top = std::max(top, occ[ih] + occ[iv]);
  const auto lf = log_factorials(top);
  const auto p00 = powers(u(0, 0), top), p10 = powers(u(1, 0), top);
  const auto p01 = powers(u(0, 1), top), p11 = powers(u(1, 1), top);

  SparseKet out(psi.reg(), psi.drop_threshold());
  for (const auto& [occ, amp] : psi) {
    const int nh = occ[ih], nv = occ[iv], total = nh + nv;
    std::vector<Complex> acc(static_cast<std::size_t>(total) + 1, 0.0);
    for (int k = 0; k <= nh; ++k) {
      const Complex ck = p00[k] * p10[nh - k];
      for (int m = 0; m <= nv; ++m) {
        const int p = k + m;
        const double log_mag = (lf[nh] - lf[k] - lf[nh - k]) + (lf[nv] - lf[m] - lf[nv - m]) +
                               0.5 * (lf[p] + lf[total - p] - lf[nh] - lf[nv]);
        acc[p] += std::exp(log_mag) * ck * p01[m] * p11[nv - m];
      }
    }
    for (int p = 0; p <= total; ++p) {
      if (acc[p] == Complex{}) continue;
      ModeOccupation next = occ;
      next.set(ih, p);
      next.set(iv, total - p);
      out.add(next, amp * acc[p]);
    }
  }
  return out;
}

SparseKet su2_rotate(const SparseKet& psi, const Eigen::Matrix2cd& u) {
  require_su2(u);
  return apply_mode_unitary(apply_mode_unitary(psi, kMode1, u), kMode2, u);
}

PolarizationQubit su2_rotate(const PolarizationQubit& q, const Eigen::Matrix2cd& u) {
  require_su2(u);
  const Eigen::Vector2cd v = u * q.vector();
  const double n = v.norm();
  return {v(0) / n, v(1) / n};
}

}  // namespace qiopa
