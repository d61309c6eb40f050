#include "qiopa/gain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qiopa {

GainParams::GainParams(double g, double eta) : g_(g), eta_(eta) {
  if (!std::isfinite(g) || g < 0.0) throw std::invalid_argument("gain g must be finite and >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  tanh_ = std::tanh(g);
  const double sech = 1.0 / std::cosh(g);
  sech2_ = sech * sech;
}

double GainParams::gamma() const { return sech2_ * std::sqrt(sech2_); }

double GainParams::nbar() const {
  const double s = std::sinh(g_);
  return s * s;
}

PolarizationQubit::PolarizationQubit(std::complex<double> alpha, std::complex<double> beta)
    : alpha_(alpha), beta_(beta) {
  const double n = std::norm(alpha) + std::norm(beta);
  if (!(std::abs(n - 1.0) <= 1e-12))
    throw std::invalid_argument("qubit amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
}

PolarizationQubit PolarizationQubit::plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, s};
}

PolarizationQubit PolarizationQubit::minus() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, -s};
}

PolarizationQubit PolarizationQubit::preset(std::string_view name) {
  if (name == "H") return H();
  if (name == "V") return V();
  if (name == "+") return plus();
  if (name == "-") return minus();
  throw std::invalid_argument("unknown qubit preset '" + std::string(name) +
                              "' (expected H, V, +, -)");
}

PolarizationQubit PolarizationQubit::orthogonal() const {
  return {-std::conj(beta_), std::conj(alpha_)};
}

Eigen::Matrix2cd PolarizationQubit::rotation_from_h() const {
  Eigen::Matrix2cd u;
  u << alpha_, -std::conj(beta_), beta_, std::conj(alpha_);
  return u;
}

void require_su2(const Eigen::Matrix2cd& u, double tol) {
  const double unit_err = (u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
  if (!(unit_err <= tol)) throw std::invalid_argument("rotation is not unitary");
  if (!(std::abs(u.determinant() - 1.0) <= tol))
    throw std::invalid_argument("rotation determinant is not 1");
}

}  // namespace qiopa
