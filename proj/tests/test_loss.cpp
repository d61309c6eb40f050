#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qiopa/closed_forms.hpp"
#include "qiopa/errors.hpp"
#include "qiopa/loss.hpp"
#include "qiopa/states.hpp"

using namespace qiopa;

namespace {

double max_abs(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

PairOptions full(int n_max) {
  PairOptions o;
  o.path = PairPath::full_ket;
  o.n_max = n_max;
  return o;
}

}  // namespace

TEST(LossSpec, Conventions) {
  const LossSpec b{0.3};
  EXPECT_NEAR(b.transmit(), 0.3, 1e-15);
  EXPECT_NEAR(b.transmit_probability() + b.reflect_probability(), 1.0, 1e-15);
  EXPECT_NEAR(b.effective_t(GainParams(1.0)), std::tanh(1.0) * (1 - 0.09), 1e-15);

  const LossSpec a{0.3, LossConvention::a};
  EXPECT_NEAR(a.transmit(), std::sqrt(0.3), 1e-15);
  EXPECT_NEAR(a.effective_t(GainParams(1.0)), std::tanh(1.0) * 0.7, 1e-15);

  EXPECT_THROW((LossSpec{1.2}.validate()), std::invalid_argument);
  LossSpec bad{0.2};
  bad.reflect_phase = 2.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EXPECT_EQ(reflected_slot("2V"), "r2V");
}

TEST(BeamSplitter, UnitaryAndNumberConserving) {
  const auto s = cat_state({GainParams(0.5), PolarizationQubit::plus(), 5});
  for (double eta : {0.0, 0.4, 1.0}) {
    const LossSpec loss{eta};
    const auto out = apply_beamsplitter(apply_beamsplitter(s.ket, loss, 1), loss, 2);
    EXPECT_NEAR(out.norm2(), s.ket.norm2(), 1e-12);
    for (const auto& [occ, amp] : out) {
      (void)amp;
      EXPECT_EQ(occ.total() % 2, 1);
    }
    const double n_in = mean_count(s.ket, "1H");
    const double n_out = mean_count(out, "1H") + mean_count(out, "r1H");
    EXPECT_NEAR(n_in, n_out, 1e-10);
    EXPECT_NEAR(mean_count(out, "1H"), loss.transmit_probability() * n_in, 1e-10);
  }
}

TEST(BeamSplitter, RejectsOccupiedReflectedSlot) {
  const auto s = cat_state({GainParams(0.3), PolarizationQubit::H(), 3});
  const LossSpec loss{0.5};
  const auto once = apply_beamsplitter(s.ket, loss, 1);
  // Reflected slots that are already in use only admit vacuum there.
  const auto moved = create(once, "r1H");
  EXPECT_THROW(apply_beamsplitter(moved, loss, 1), std::invalid_argument);
  EXPECT_THROW(apply_beamsplitter(s.ket, loss, 3), std::invalid_argument);
}

TEST(PairExtraction, SeriesMatchesFullKet) {
  const PolarizationQubit q({0.6, 0.0}, {0.0, 0.8});
  for (double g : {0.05, 0.2, 0.35}) {
    for (double eta : {0.1, 0.5, 0.9}) {
      const GainParams p(g);
      const auto a = pair_extracted_rho(p, q, LossSpec{eta});
      const auto b = pair_extracted_rho(p, q, LossSpec{eta}, full(16));
      EXPECT_LE(max_abs(a.rho.matrix(), b.rho.matrix()), 1e-10) << g << " " << eta;
      EXPECT_NEAR(a.success_probability, b.success_probability,
                  1e-9 * b.success_probability);
    }
  }
}

TEST(PairExtraction, ConventionAMatchesFullKet) {
  const LossSpec loss{0.6, LossConvention::a};
  const GainParams p(0.25);
  const auto a = pair_extracted_rho(p, PolarizationQubit::H(), loss);
  const auto b = pair_extracted_rho(p, PolarizationQubit::H(), loss, full(12));
  EXPECT_LE(max_abs(a.rho.matrix(), b.rho.matrix()), 1e-10);
  EXPECT_LE(max_abs(a.rho.matrix(), closed_form::h_input(loss.effective_t(p)).matrix()), 1e-3);
}

TEST(PairExtraction, LosslessHInputMatchesClosedForm) {
  for (double g : {0.1, 1.0, 3.0}) {
    const GainParams p(g);
    const auto r = pair_extracted_rho(p, PolarizationQubit::H(), LossSpec{});
    EXPECT_LE(max_abs(r.rho.matrix(), closed_form::h_input(p.t()).matrix()), 1e-11) << g;
    EXPECT_NEAR(r.rho.trace().real(), 1.0, 1e-14);
    EXPECT_TRUE(r.rho.is_hermitian(1e-14));
  }
}

TEST(PairExtraction, ConventionBIsExactAtFiniteLoss) {
  const GainParams p(1.3);
  const LossSpec loss{0.45};
  const auto r = pair_extracted_rho(p, PolarizationQubit::minus(), loss);
  const auto cf = closed_form::pair(loss.effective_t(p), PolarizationQubit::minus());
  EXPECT_LE(max_abs(r.rho.matrix(), cf.matrix()), 1e-11);
}

TEST(PairExtraction, ZeroGainLimit) {
  const auto r = pair_extracted_rho(GainParams(0.0), PolarizationQubit::H(), LossSpec{});
  EXPECT_EQ(r.success_probability, 0.0);
  EXPECT_LE(max_abs(r.rho.matrix(), closed_form::h_input(0.0).matrix()), 1e-14);
}

TEST(PairExtraction, SuccessProbabilityRisesWithTransmission) {
  const GainParams p(0.4);
  double last = 0.0;
  for (double eta : {0.1, 0.3, 0.6, 0.9}) {
    const auto r = pair_extracted_rho(p, PolarizationQubit::H(), LossSpec{eta});
    EXPECT_GT(r.success_probability, last);
    last = r.success_probability;
  }
  EXPECT_EQ(pair_extracted_rho(p, PolarizationQubit::H(), LossSpec{}).success_probability, 0.0);
}

TEST(PairExtraction, FullKetHighLossWarns) {
  const auto r = pair_extracted_rho(GainParams(0.45), PolarizationQubit::H(), LossSpec{0.98}, full(8));
  EXPECT_TRUE(r.warning.has_value());
}

TEST(PairExtraction, ThreeQubitMatchesClosedForm) {
  for (double g : {0.2, 1.5}) {
    for (double eta : {0.0, 0.5}) {
      const GainParams p(g);
      const LossSpec loss{eta};
      const auto r = pair_extracted_rho3(p, loss);
      ASSERT_EQ(r.rho.dim(), 8);
      EXPECT_LE(max_abs(r.rho.matrix(), closed_form::three_qubit(loss.effective_t(p)).matrix()),
                1e-11);
    }
  }
}

TEST(PairExtraction, ThreeQubitFullKetAgrees) {
  const GainParams p(0.2);
  const auto a = pair_extracted_rho3(p, LossSpec{0.3});
  const auto b = pair_extracted_rho3(p, LossSpec{0.3}, full(10));
  EXPECT_LE(max_abs(a.rho.matrix(), b.rho.matrix()), 1e-9);
  EXPECT_NEAR(a.success_probability, b.success_probability, 1e-8 * b.success_probability);
}

TEST(PairExtraction, ExtractKetRequiresSomething) {
  SparseKet vac(amplifier_register(2));
  vac.add(ModeOccupation{0, 0, 0, 0}, 1.0);
  EXPECT_THROW(pair_extract_ket(vac, LossSpec{}), PostselectionFailure);
}

TEST(LossyReducedDensity, UnitTraceAndPhysical) {
  const auto rho = lossy_reduced_density(GainParams(0.3), PolarizationQubit::plus(), LossSpec{0.5}, 6);
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  EXPECT_TRUE(rho.is_hermitian(1e-12));
  EXPECT_GT(rho.min_eigenvalue(), -1e-12);
}

TEST(PairExtraction, PumpPhaseDoesNotChangeExtractedPair) {
  const int n = 12;
  const GainParams p(0.3);
  SparseKet in(amplifier_register(n));
  in.add(ModeOccupation{1, 0, 0, 0}, 1.0 / std::sqrt(2.0));
  in.add(ModeOccupation{0, 1, 0, 0}, 1.0 / std::sqrt(2.0));
  EvolveOptions zero{1e-9};
  zero.pump_phase = 0.0;
  const LossSpec loss{0.4};
  const auto a = pair_extract_ket(evolve_numeric(p, in, n, {1e-9}), loss);
  const auto b = pair_extract_ket(evolve_numeric(p, in, n, zero), loss);
  EXPECT_LE(max_abs(a.rho.matrix(), b.rho.matrix()), 1e-14);
  EXPECT_NEAR(a.success_probability, b.success_probability, 1e-16);
}
