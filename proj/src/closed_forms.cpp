#include "qiopa/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace qiopa::closed_form {

namespace {

DensityMatrix pair_qubits(Matrix m) { return DensityMatrix::qubits({"k1", "k2"}, std::move(m)); }

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd s;
  const Complex i{0.0, 1.0};
  switch (k) {
    case 0: s << 0, 1, 1, 0; break;
    case 1: s << 0, -i, i, 0; break;
    default: s << 1, 0, 0, -1; break;
  }
  return s;
}

}  // namespace

Matrix pair_printed(double t, const PolarizationQubit& q) {
  const Complex a = q.alpha(), b = q.beta();
  const double A = std::norm(a), B = std::norm(b);
  const double d = 1.0 + t * t;
  const Complex ba = b * std::conj(a), ab = a * std::conj(b);
  Matrix m(4, 4);
  m << A * d + B * 2 * t * t, ba * d, -ba * 2.0, 0.0,
       ab * d, A * 2 * (1 + d) + B * d, -A * 2 - B * 2, ba * 2.0,
       -ab * 2.0, -A * 2 - B * 2, A * d + B * 2 * (1 + d), -ba * d,
       0.0, ab * 2.0, -ab * d, A * 2 * t * t + B * d;
  return m / (3.0 * d);
}

DensityMatrix pair(double t, const PolarizationQubit& q) {
  // The printed coherences are listed transposed and carry the opposite
  // sign on the |HH> row and column; the printed prefactor is twice too large.
  Matrix m = pair_printed(t, q).transpose() / 2.0;
  m.row(0) *= -1.0;
  m.col(0) *= -1.0;
  return pair_qubits(std::move(m));
}

DensityMatrix pair(const GainParams& gain, const PolarizationQubit& q) { return pair(gain.t(), q); }

DensityMatrix h_input(double t) {
  const double d = 1.0 + t * t;
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = d / 2;
  m(1, 1) = 2 + t * t;
  m(1, 2) = m(2, 1) = -1.0;
  m(2, 2) = d / 2;
  m(3, 3) = t * t;
  return pair_qubits(m / (3.0 * d));
}

Matrix rotate_pair(const Matrix& rho, const Eigen::Matrix2cd& u) {
  const Matrix uu = Eigen::kroneckerProduct(u, u).eval();
  return uu * rho * uu.adjoint();
}

DensityMatrix in_input_basis(const DensityMatrix& rho_pair, const PolarizationQubit& q) {
  if (rho_pair.dim() != 4) throw std::invalid_argument("expected a two-qubit matrix");
  return rho_pair.with_matrix(rotate_pair(rho_pair.matrix(), q.rotation_from_h().adjoint()));
}

DensityMatrix clone_marginal(double t) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 5 + 3 * t * t;
  m(1, 1) = 1 + 3 * t * t;
  return DensityMatrix::qubits({"k1"}, m / (6.0 * (1 + t * t)));
}

DensityMatrix clone_marginal_v(double t) {
  const Matrix h = clone_marginal(t).matrix();
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = h(1, 1);
  m(1, 1) = h(0, 0);
  return DensityMatrix::qubits({"k1"}, m);
}

DensityMatrix anticlone_marginal() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0 / 3.0;
  m(1, 1) = 2.0 / 3.0;
  return DensityMatrix::qubits({"k2"}, m);
}

double clone_fidelity(double t) { return (5 + 3 * t * t) / (6 * (1 + t * t)); }
double anticlone_fidelity() { return 2.0 / 3.0; }

double clone_marginal_hs_distance(double t) {
  const double x = 2.0 / (3.0 * (1 + t * t));
  return 2.0 * x * x;
}

DensityMatrix three_qubit(double t) {
  const double den = 6 + 6 * t * t;
  const double a = 1.0 / 12, b = -1.0 / den, c = (2 + t * t) / den, e = t * t / den;
  Matrix m(8, 8);
  m << a, 0, 0, 0, 0, a, b, 0,
       0, c, b, 0, 0, 0, 0, b,
       0, b, a, 0, 0, 0, 0, a,
       0, 0, 0, e, 0, 0, 0, 0,
       0, 0, 0, 0, e, 0, 0, 0,
       a, 0, 0, 0, 0, a, b, 0,
       b, 0, 0, 0, 0, b, c, 0,
       0, b, a, 0, 0, 0, 0, a;
  return DensityMatrix::qubits({"T", "k1", "k2"}, m);
}

std::string to_string(ReducedPair sel) {
  switch (sel) {
    case ReducedPair::k1k2: return "k1k2";
    case ReducedPair::kTk1: return "kTk1";
    case ReducedPair::kTk2: return "kTk2";
  }
  return "?";
}

DensityMatrix reduced_pair(double t, ReducedPair sel) {
  Matrix m = Matrix::Zero(4, 4);
  switch (sel) {
    case ReducedPair::k1k2: {
      const double p = werner_p(t);
      m(0, 0) = m(3, 3) = (1 - p) / 4;
      m(1, 1) = m(2, 2) = (1 + p) / 4;
      m(1, 2) = m(2, 1) = -p / 2;
      return DensityMatrix::qubits({"k1", "k2"}, m);
    }
    case ReducedPair::kTk1: {
      const double q = werner_q(t);
      m(0, 0) = m(3, 3) = (1 + q) / 4;
      m(1, 1) = m(2, 2) = (1 - q) / 4;
      m(0, 3) = m(3, 0) = -q / 2;
      return DensityMatrix::qubits({"T", "k1"}, m);
    }
    case ReducedPair::kTk2: {
      m(0, 0) = m(3, 3) = 1.0 / 6;
      m(0, 3) = m(3, 0) = 1.0 / 6;
      m(1, 1) = m(2, 2) = 1.0 / 3;
      return DensityMatrix::qubits({"T", "k2"}, m);
    }
  }
  throw std::invalid_argument("unknown reduced pair");
}

double werner_p(double t) { return (2.0 / 3.0) / (1 + t * t); }
double werner_q(double t) { return werner_p(t); }
double werner_l() { return 1.0 / 3.0; }

double pair_concurrence_printed(double t) {
  const double d = 1 + t * t;
  return 2.0 / (3.0 * d) * (1.0 - t / 2.0 * std::sqrt(d));
}

double pair_concurrence(double t) {
  const double d = 1 + t * t;
  return 2.0 / (3.0 * d) * (1.0 - t / std::sqrt(2.0) * std::sqrt(d));
}

double werner_concurrence(double weight) { return std::max(0.0, (3 * weight - 1) / 2); }

double werner_concurrence_cosh(double g) {
  const double s = std::sinh(g), c = std::cosh(g);
  return 0.5 / (s * s + c * c);
}

double werner_concurrence_cos(double g) {
  const double s = std::sinh(g), c = std::cos(g);
  return 0.5 / (s * s + c * c);
}

TangleReadings tangle_readings(double g) {
  const double c = werner_concurrence_cosh(g);
  const double nbar = std::sinh(g) * std::sinh(g);
  return {c * c, 1.0 / (c * c), c * c, nbar > 0 ? 1.0 / (nbar * nbar) : INFINITY};
}

Matrix unot_channel(const Matrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw std::invalid_argument("expected a 2x2 matrix");
  require_physical(rho);
  Matrix out = Matrix::Zero(2, 2);
  for (int k = 0; k < 3; ++k) out += pauli(k) * rho * pauli(k);
  return out / 3.0;
}

Matrix unot_on_pair(const Matrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) throw std::invalid_argument("expected a 4x4 matrix");
  require_physical(rho);
  Matrix out = Matrix::Zero(4, 4);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  for (int k = 0; k < 3; ++k) {
    const Matrix kraus = Eigen::kroneckerProduct(id, pauli(k)).eval();
    out += kraus * rho * kraus.adjoint();
  }
  return out / 3.0;
}

}  // namespace qiopa::closed_form
