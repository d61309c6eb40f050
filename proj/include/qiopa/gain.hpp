#pragma once

#include <cmath>
#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace qiopa {

/// Parametric gain g and the quantities derived from it. `eta` is the
/// amplitude-domain beam-splitter parameter that enters t = tanh(g)(1 - eta^2).
class GainParams {
 public:
  explicit GainParams(double g, double eta = 0.0);

  double g() const { return g_; }
  double eta() const { return eta_; }

  double cosh_g() const { return std::cosh(g_); }
  /// Gamma = tanh g.
  double tanh_g() const { return tanh_; }
  /// gamma = cosh^-3 g, computed as sech^3 so that it underflows gracefully.
  double gamma() const;
  /// 1 - Gamma^2 = sech^2 g without cancellation.
  double sech2() const { return sech2_; }
  /// Mean photon number per mode, sinh^2 g.
  double nbar() const;
  double t() const { return tanh_ * (1.0 - eta_ * eta_); }
  double d() const { return 1.0 + t() * t(); }

 private:
  double g_;
  double eta_;
  double tanh_;
  double sech2_;
};

/// alpha|H> + beta|V>.
class PolarizationQubit {
 public:
  PolarizationQubit(std::complex<double> alpha, std::complex<double> beta);

  static PolarizationQubit H() { return {1.0, 0.0}; }
  static PolarizationQubit V() { return {0.0, 1.0}; }
  static PolarizationQubit plus();
  static PolarizationQubit minus();
  /// Presets "H", "V", "+", "-".
  static PolarizationQubit preset(std::string_view name);

  std::complex<double> alpha() const { return alpha_; }
  std::complex<double> beta() const { return beta_; }
  Eigen::Vector2cd vector() const { return {alpha_, beta_}; }

  /// (-beta*, alpha*): the state sent to by the SU(2) element whose first
  /// column is this qubit.
  PolarizationQubit orthogonal() const;
  /// SU(2) matrix [[alpha, -beta*], [beta, alpha*]] mapping |H> to this qubit.
  Eigen::Matrix2cd rotation_from_h() const;

 private:
  std::complex<double> alpha_;
  std::complex<double> beta_;
};

/// Throws std::invalid_argument unless `u` is unitary with unit determinant
/// (both to `tol`).
void require_su2(const Eigen::Matrix2cd& u, double tol = 1e-12);

}  // namespace qiopa
