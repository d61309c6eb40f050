#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qiopa/errors.hpp"
#include "qiopa/metrics.hpp"
#include "qiopa/states.hpp"

using namespace qiopa;

namespace {

Matrix random_density(std::mt19937_64& rng, Eigen::Index dim, Eigen::Index rank) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix a(dim, rank);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < rank; ++j) a(i, j) = Complex(n(rng), n(rng));
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

Matrix projector(const Eigen::Vector4cd& v) { return v * v.adjoint(); }

}  // namespace

TEST(Bell, VectorsOrthonormal) {
  const Bell all[] = {Bell::phi_plus, Bell::phi_minus, Bell::psi_plus, Bell::psi_minus};
  for (Bell a : all)
    for (Bell b : all)
      EXPECT_NEAR(std::abs(bell_vector(a).dot(bell_vector(b))), a == b ? 1.0 : 0.0, 1e-15);
  EXPECT_EQ(to_string(Bell::psi_minus), "psi-");
}

TEST(Concurrence, PureStates) {
  EXPECT_NEAR(concurrence(projector(bell_vector(Bell::phi_plus))), 1.0, 1e-10);
  Eigen::Vector4cd prod(1.0, 0.0, 0.0, 0.0);
  EXPECT_NEAR(concurrence(projector(prod)), 0.0, 1e-7);
  // a|HH> + b|VV> has concurrence 2|ab|.
  const double a = std::cos(0.3), b = std::sin(0.3);
  Eigen::Vector4cd v(a, 0.0, 0.0, b);
  EXPECT_NEAR(concurrence(projector(v)), 2 * a * b, 1e-10);
}

TEST(Concurrence, WernerThreshold) {
  for (double w : {0.0, 0.2, 0.5, 0.8, 1.0})
    EXPECT_NEAR(concurrence(werner_matrix(Bell::phi_minus, w)), std::max(0.0, (3 * w - 1) / 2), 1e-7);
}

TEST(Concurrence, BoundedAndLocalUnitaryInvariant) {
  std::mt19937_64 rng(211);
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix rho = random_density(rng, 4, 1 + trial % 4);
    const double c = concurrence(rho);
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0 + 1e-12);
    const Eigen::Matrix2cd u = PolarizationQubit(Complex(0.6, 0.1), Complex(0.0, std::sqrt(1 - 0.37)))
                                   .rotation_from_h();
    Eigen::Matrix4cd uu = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) uu.block(2 * i, 2 * j, 2, 2) = u(i, j) * Eigen::Matrix2cd::Identity();
    EXPECT_NEAR(concurrence(Matrix(uu * rho * uu.adjoint())), c, 1e-8);
  }
}

TEST(Physical, RejectsBadInput) {
  Matrix neg = Matrix::Identity(4, 4) / 4.0;
  neg(0, 0) = -0.1;
  EXPECT_THROW(require_physical(neg), PositivityFault);
  EXPECT_THROW(concurrence(neg), PositivityFault);
  Matrix nonherm = Matrix::Identity(4, 4) / 4.0;
  nonherm(0, 1) = 0.2;
  EXPECT_THROW(require_physical(nonherm), std::invalid_argument);
  EXPECT_THROW(concurrence(Matrix::Identity(2, 2)), std::invalid_argument);
}

TEST(PsdSqrt, SquaresBack) {
  std::mt19937_64 rng(223);
  const Matrix rho = random_density(rng, 4, 2);
  const Matrix s = psd_sqrt(rho);
  EXPECT_LE((s * s - rho).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(WernerFit, RecoversEachBellState) {
  for (Bell b : {Bell::phi_plus, Bell::phi_minus, Bell::psi_plus, Bell::psi_minus}) {
    for (double w : {-0.2, 0.25, 0.9}) {
      const auto f = werner_fit(werner_matrix(b, w));
      EXPECT_EQ(f.bell, b);
      EXPECT_NEAR(f.weight, w, 1e-14);
      EXPECT_LT(f.residual, 1e-14);
      EXPECT_FALSE(f.ambiguous);
    }
  }
  const auto mixed = werner_fit(Matrix(Matrix::Identity(4, 4) / 4.0));
  EXPECT_TRUE(mixed.ambiguous);
  EXPECT_NEAR(mixed.weight, 0.0, 1e-15);
}

TEST(WernerFit, NegativeWeightOverComplement) {
  // Negative weight on phi- is a legitimate Werner-family member.
  const auto f = werner_fit(werner_matrix(Bell::phi_minus, -1.0 / 3.0));
  EXPECT_EQ(f.bell, Bell::phi_minus);
  EXPECT_NEAR(f.weight, -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(bell_vector(Bell::phi_plus).dot(werner_matrix(Bell::phi_minus, -1.0 / 3.0) *
                                              bell_vector(Bell::phi_plus)).real(),
              1.0 / 3.0, 1e-15);
}

TEST(Fidelity, PureAndUhlmann) {
  const PolarizationQubit plus = PolarizationQubit::plus();
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = 1.0;
  EXPECT_NEAR(fidelity_pure(plus, h), 0.5, 1e-15);
  EXPECT_NEAR(uhlmann_fidelity(h, Matrix(plus.vector() * plus.vector().adjoint())), 0.5, 1e-12);

  std::mt19937_64 rng(227);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix a = random_density(rng, 4, 3), b = random_density(rng, 4, 2);
    const double f = uhlmann_fidelity(a, b);
    // Rank-deficient square roots limit the symmetry to about sqrt(eps).
    EXPECT_NEAR(f, uhlmann_fidelity(b, a), 1e-7);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
    EXPECT_NEAR(uhlmann_fidelity(a, a), 1.0, 1e-9);
  }
}

TEST(HsDistance, MatricesAndKets) {
  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  EXPECT_NEAR(hs_distance(a, b), 2.0, 1e-15);
  EXPECT_THROW(hs_distance(a, Matrix(Matrix::Zero(4, 4))), std::invalid_argument);

  const Register q = Register::qubits({"k1"});
  const DensityMatrix x(q, {ModeOccupation{0}, ModeOccupation{1}}, a);
  const DensityMatrix y(q, {ModeOccupation{1}, ModeOccupation{0}}, a);
  EXPECT_THROW(hs_distance(x, y), std::invalid_argument);

  const Register reg({"a", "b"}, 2);
  SparseKet u(reg), v(reg);
  u.add(ModeOccupation{1, 0}, 1.0);
  v.add(ModeOccupation{1, 0}, std::sqrt(0.5));
  v.add(ModeOccupation{0, 1}, std::sqrt(0.5));
  // Oracle: Frobenius norm of the projector difference, formed densely.
  Eigen::Vector3cd du(0, 1, 0), dv(std::sqrt(0.5), std::sqrt(0.5), 0);
  const Eigen::Matrix3cd diff = du * du.adjoint() - dv * dv.adjoint();
  EXPECT_NEAR(hs_distance(u, v), (diff * diff).trace().real(), 1e-15);

  SparseKet w(reg);
  w.add(ModeOccupation{1, 0}, std::sqrt(0.9));
  EXPECT_NEAR(hs_distance(u, w), (1 - 0.9) * (1 - 0.9), 1e-15);
}
