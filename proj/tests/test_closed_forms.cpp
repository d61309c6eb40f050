#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qiopa/closed_forms.hpp"
#include "qiopa/errors.hpp"
#include "qiopa/metrics.hpp"

using namespace qiopa;
namespace cf = qiopa::closed_form;

namespace {

double max_abs(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

PolarizationQubit random_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Complex a(n(rng), n(rng)), b(n(rng), n(rng));
  const double s = std::sqrt(std::norm(a) + std::norm(b));
  return {a / s, b / s};
}

const double kTs[] = {0.0, 0.1, 0.462, 0.76, 0.995, 1.0};

}  // namespace

TEST(PairMatrix, PhysicalForRandomInputs) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const auto q = random_qubit(rng);
    for (double t : kTs) {
      const auto rho = cf::pair(t, q);
      EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
      EXPECT_TRUE(rho.is_hermitian(1e-15));
      EXPECT_GT(rho.min_eigenvalue(), -1e-14);
    }
  }
}

TEST(PairMatrix, HInputSpecialCase) {
  for (double t : kTs)
    EXPECT_LE(max_abs(cf::pair(t, PolarizationQubit::H()).matrix(), cf::h_input(t).matrix()), 1e-16);
}

TEST(PairMatrix, UniversalInInputBasis) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    const auto q = random_qubit(rng);
    for (double t : kTs) {
      const auto rho = cf::in_input_basis(cf::pair(t, q), q);
      EXPECT_LE(max_abs(rho.matrix(), cf::h_input(t).matrix()), 1e-14);
    }
  }
}

TEST(PairMatrix, CovariantUnderCommonRotation) {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 20; ++trial) {
    const auto q = random_qubit(rng);
    const Eigen::Matrix2cd u = random_qubit(rng).rotation_from_h();
    const PolarizationQubit uq(u(0, 0) * q.alpha() + u(0, 1) * q.beta(),
                               u(1, 0) * q.alpha() + u(1, 1) * q.beta());
    const Matrix lhs = cf::pair(0.6, uq).matrix();
    const Matrix rhs = cf::rotate_pair(cf::pair(0.6, q).matrix(), u);
    EXPECT_LE(max_abs(lhs, rhs), 1e-14);
  }
}

TEST(PairMatrix, PrintedFormHasTraceTwo) {
  std::mt19937_64 rng(109);
  const auto q = random_qubit(rng);
  EXPECT_NEAR(cf::pair_printed(0.4, q).trace().real(), 2.0, 1e-14);
  // Diagonals agree up to the factor two; only coherences were misprinted.
  const Matrix p = cf::pair_printed(0.4, q), c = cf::pair(0.4, q).matrix();
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(p(i, i).real(), 2.0 * c(i, i).real(), 1e-15);
}

TEST(Marginals, PartialTracesOfHInput) {
  for (double t : kTs) {
    const auto rho = cf::h_input(t);
    EXPECT_LE(max_abs(partial_trace(rho, {"k1"}).matrix(), cf::clone_marginal(t).matrix()), 1e-15);
    EXPECT_LE(max_abs(partial_trace(rho, {"k2"}).matrix(), cf::anticlone_marginal().matrix()),
              1e-15);
    EXPECT_NEAR(cf::clone_fidelity(t), cf::clone_marginal(t)(0, 0).real(), 1e-15);
  }
  EXPECT_NEAR(cf::clone_fidelity(0.0), 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(cf::clone_fidelity(1.0), 2.0 / 3.0, 1e-15);
}

TEST(Marginals, VInputMirror) {
  for (double t : kTs) {
    const auto rho = cf::pair(t, PolarizationQubit::V());
    EXPECT_LE(max_abs(partial_trace(rho, {"k1"}).matrix(), cf::clone_marginal_v(t).matrix()),
              1e-15);
    EXPECT_NEAR(cf::clone_marginal_hs_distance(t),
                hs_distance(cf::clone_marginal(t), cf::clone_marginal_v(t)), 1e-15);
  }
}

TEST(Marginals, AntiCloneFidelityIndependentOfInput) {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 10; ++trial) {
    const auto q = random_qubit(rng);
    const auto k2 = partial_trace(cf::pair(0.3, q), {"k2"});
    EXPECT_NEAR(fidelity_pure(q.orthogonal(), k2), cf::anticlone_fidelity(), 1e-14);
  }
}

TEST(ThreeQubit, PhysicalAndConsistentReductions) {
  for (double t : kTs) {
    const auto rho = cf::three_qubit(t);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-15);
    EXPECT_GT(rho.min_eigenvalue(), -1e-14);
    EXPECT_LE(max_abs(partial_trace(rho, {"k1", "k2"}).matrix(),
                      cf::reduced_pair(t, cf::ReducedPair::k1k2).matrix()), 1e-15);
    EXPECT_LE(max_abs(partial_trace(rho, {"T", "k1"}).matrix(),
                      cf::reduced_pair(t, cf::ReducedPair::kTk1).matrix()), 1e-15);
    EXPECT_LE(max_abs(partial_trace(rho, {"T", "k2"}).matrix(),
                      cf::reduced_pair(t, cf::ReducedPair::kTk2).matrix()), 1e-15);
  }
  EXPECT_EQ(cf::to_string(cf::ReducedPair::kTk2), "kTk2");
}

TEST(ThreeQubit, TriggerBlocksAreSingleInputPairs) {
  const double t = 0.55;
  const Matrix m = cf::three_qubit(t).matrix();
  EXPECT_LE(max_abs(2.0 * m.block(0, 0, 4, 4), cf::pair(t, PolarizationQubit::H()).matrix()), 1e-15);
  EXPECT_LE(max_abs(2.0 * m.block(4, 4, 4, 4), cf::pair(t, PolarizationQubit::V()).matrix()), 1e-15);
}

TEST(Werner, Weights) {
  for (double t : kTs) {
    EXPECT_NEAR(cf::werner_p(t), 2.0 / 3.0 / (1 + t * t), 1e-16);
    const auto f = werner_fit(cf::reduced_pair(t, cf::ReducedPair::k1k2));
    EXPECT_EQ(f.bell, Bell::psi_minus);
    EXPECT_NEAR(f.weight, cf::werner_p(t), 1e-15);
    EXPECT_LT(f.residual, 1e-15);
    const auto l = werner_fit(cf::reduced_pair(t, cf::ReducedPair::kTk2));
    // Exactly Werner-form over phi- with weight -1/3; the phi+ overlap is l.
    EXPECT_EQ(l.bell, Bell::phi_minus);
    EXPECT_NEAR(l.weight, -1.0 / 3.0, 1e-15);
    EXPECT_LT(l.residual, 1e-15);
    EXPECT_FALSE(l.entangled());
    const Eigen::Vector4cd phi = bell_vector(Bell::phi_plus);
    const Matrix r = cf::reduced_pair(t, cf::ReducedPair::kTk2).matrix();
    EXPECT_NEAR((phi.adjoint() * r * phi)(0, 0).real(), cf::werner_l(), 1e-15);
  }
}

TEST(Concurrence, FormulasAgainstWootters) {
  for (double t : {0.0, 0.2, 0.5, 0.7}) {
    const double c = concurrence(cf::h_input(t));
    EXPECT_NEAR(cf::pair_concurrence(t), c, 1e-12) << t;
  }
  EXPECT_GT(std::abs(cf::pair_concurrence_printed(0.5) - concurrence(cf::h_input(0.5))), 1e-3);
  for (double w : {0.0, 0.2, 1.0 / 3.0, 0.6, 1.0})
    EXPECT_NEAR(cf::werner_concurrence(w), concurrence(werner_matrix(Bell::psi_minus, w)), 1e-12);
}

TEST(Concurrence, HyperbolicWernerForm) {
  for (double g : {0.0, 0.3, 1.0, 2.5}) {
    const double w = cf::werner_p(std::tanh(g));
    EXPECT_NEAR(cf::werner_concurrence_cosh(g), cf::werner_concurrence(w), 1e-14);
  }
  EXPECT_GT(std::abs(cf::werner_concurrence_cos(1.0) - cf::werner_concurrence_cosh(1.0)), 0.01);
}

TEST(Concurrence, TangleReadings) {
  const auto r = cf::tangle_readings(3.0);
  EXPECT_NEAR(r.tangle, r.square_reading, 1e-15);
  EXPECT_NEAR(r.inverse_reading * r.square_reading, 1.0, 1e-12);
  EXPECT_TRUE(std::isinf(cf::tangle_readings(0.0).inverse_nbar2));
}

TEST(Unot, DepolarizedFlip) {
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 10; ++trial) {
    const auto q = random_qubit(rng);
    const Matrix rho = q.vector() * q.vector().adjoint();
    const Matrix expected = (2.0 * Matrix::Identity(2, 2) - rho) / 3.0;
    EXPECT_LE(max_abs(cf::unot_channel(rho), expected), 1e-15);
    EXPECT_NEAR(fidelity_pure(q.orthogonal(), cf::unot_channel(rho)), 2.0 / 3.0, 1e-15);
  }
}

TEST(Unot, OnPairIsTracePreserving) {
  const Matrix rho = cf::h_input(0.4).matrix();
  const Matrix out = cf::unot_on_pair(rho);
  EXPECT_NEAR(out.trace().real(), 1.0, 1e-15);
  const auto a = partial_trace(DensityMatrix::qubits({"k1", "k2"}, out), {"k1"});
  const auto b = partial_trace(cf::h_input(0.4), {"k1"});
  EXPECT_LE(max_abs(a.matrix(), b.matrix()), 1e-15);
  Matrix bad = Matrix::Identity(4, 4);
  bad(0, 0) = -1.0;
  EXPECT_THROW(cf::unot_on_pair(bad), PositivityFault);
  EXPECT_THROW(cf::unot_channel(Matrix::Identity(3, 3)), std::invalid_argument);
}
