#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "repeaterc/channels.hpp"

using namespace repeaterc;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

constexpr ChannelKind kTracePreserving[] = {
    ChannelKind::AmplitudeDamping, ChannelKind::BitFlip,      ChannelKind::PhaseFlip,
    ChannelKind::BitPhaseFlip,     ChannelKind::PhaseDamping, ChannelKind::Depolarizing};

constexpr ChannelKind kFlips[] = {ChannelKind::BitFlip, ChannelKind::PhaseFlip,
                                  ChannelKind::BitPhaseFlip};

double expectation(const ComplexMatrix& rho, const std::array<cplx, 4>& v) {
  const auto rv = rho.apply(v);
  cplx s = 0.0;
  for (int i = 0; i < 4; ++i) s += std::conj(v[i]) * rv[i];
  return s.real();
}

const std::array<cplx, 4> kPsiPlus{0.0, kInvSqrt2, kInvSqrt2, 0.0};
const std::array<cplx, 4> kPsiMinus{0.0, kInvSqrt2, -kInvSqrt2, 0.0};
const std::array<cplx, 4> kPhiPlus{kInvSqrt2, 0.0, 0.0, kInvSqrt2};
const std::array<cplx, 4> kPhiMinus{kInvSqrt2, 0.0, 0.0, -kInvSqrt2};

}  // namespace

TEST(Tokens, RoundTripAndRejectUnknown) {
  for (auto k : kAllChannelKinds) EXPECT_EQ(parse_channel_kind(to_token(k)), k);
  EXPECT_EQ(parse_bell_input("psi-plus"), BellInput::PsiPlus);
  EXPECT_EQ(parse_bell_input("phi-plus"), BellInput::PhiPlus);
  EXPECT_THROW(parse_channel_kind("Amplitude-Damping"), std::invalid_argument);
  EXPECT_THROW(parse_channel_kind("erasure"), std::invalid_argument);
  EXPECT_THROW(parse_bell_input("psi-minus"), std::invalid_argument);
}

TEST(ParamFromGamma, Table) {
  EXPECT_EQ(param_from_gamma(ChannelKind::AmplitudeDamping, 0.0), 0.0);
  EXPECT_NEAR(param_from_gamma(ChannelKind::AmplitudeDamping, 0.7), 1.0 - std::exp(-1.4), 1e-15);
  EXPECT_NEAR(param_from_gamma(ChannelKind::WatchedAmplitudeDamping, 0.7), 1.0 - std::exp(-1.4),
              1e-15);
  EXPECT_NEAR(param_from_gamma(ChannelKind::PhaseDamping, 0.7), 1.0 - std::exp(-0.7), 1e-15);
  EXPECT_NEAR(param_from_gamma(ChannelKind::Depolarizing, 0.7), 0.75 * (1.0 - std::exp(-0.7)),
              1e-15);
  EXPECT_NEAR(param_from_gamma(ChannelKind::Depolarizing, 1e3), 0.75, 1e-15);
}

TEST(ParamFromGamma, FlipProbabilityComposesToLambda) {
  const double q = param_from_gamma(ChannelKind::BitFlip, 1.5);
  EXPECT_NEAR(q, 0.26381672362949266, 1e-15);
  EXPECT_NEAR((1 - q) * (1 - q) + q * q, 0.611565080074215, 1e-15);
  EXPECT_NEAR((1 - q) * (1 - q) + q * q, bell_mixture_lambda(ChannelKind::BitFlip, 1.5), 1e-15);
}

TEST(ParamFromGamma, RejectsBadGamma) {
  EXPECT_THROW(param_from_gamma(ChannelKind::BitFlip, -0.1), std::invalid_argument);
  EXPECT_THROW(param_from_gamma(ChannelKind::BitFlip, std::nan("")), std::invalid_argument);
  EXPECT_THROW(param_from_gamma(ChannelKind::BitFlip, INFINITY), std::invalid_argument);
}

TEST(KrausOps, NoiselessIsIdentity) {
  for (auto k : kAllChannelKinds) {
    const auto ops = kraus_ops(k, 0.0);
    ASSERT_EQ(ops.size(), 1u);
    EXPECT_LT(max_abs_diff(ops[0], ComplexMatrix::identity(2)), 1e-15);
  }
}

TEST(KrausOps, RejectsOutOfRange) {
  EXPECT_THROW(kraus_ops(ChannelKind::Depolarizing, -0.01), std::invalid_argument);
  EXPECT_THROW(kraus_ops(ChannelKind::Depolarizing, 1.01), std::invalid_argument);
}

TEST(KrausOps, PhaseDampingScalesCoherence) {
  std::mt19937_64 rng(3);
  const double p = 0.37;
  const auto ops = kraus_ops(ChannelKind::PhaseDamping, p);
  ASSERT_EQ(ops.size(), 3u);
  const auto rho = oracle::random_density(rng, 2, 2);
  ComplexMatrix out(2, 2);
  for (const auto& k : ops) out += k * rho * k.adjoint();
  EXPECT_NEAR(std::abs(out(0, 0) - rho(0, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out(1, 1) - rho(1, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out(0, 1) - (1 - p) * rho(0, 1)), 0.0, 1e-15);
}

TEST(KrausOps, DepolarizingMatchesPauliTwirlForm) {
  std::mt19937_64 rng(4);
  const double p = 0.3;
  const auto ops = kraus_ops(ChannelKind::Depolarizing, p);
  ASSERT_EQ(ops.size(), 4u);
  const auto rho = oracle::random_density(rng, 2, 2);
  ComplexMatrix out(2, 2);
  for (const auto& k : ops) out += k * rho * k.adjoint();
  const auto x = pauli::x(), y = pauli::y(), z = pauli::z();
  const auto direct = (1 - p) * rho + (p / 3) * (x * rho * x + y * rho * y + z * rho * z);
  EXPECT_LT(max_abs_diff(out, direct), 1e-15);
}

TEST(KrausOps, CompletenessForRandomStrengths) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto kind : kTracePreserving) {
    for (int t = 0; t < 100; ++t) {
      ComplexMatrix sum(2, 2);
      for (const auto& k : kraus_ops(kind, u(rng))) sum += k.adjoint() * k;
      EXPECT_LT(max_abs_diff(sum, ComplexMatrix::identity(2)), 1e-12) << to_token(kind);
    }
  }
}

TEST(KrausOps, WatchedOperatorIsContraction) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto ops = kraus_ops(ChannelKind::WatchedAmplitudeDamping, u(rng));
    ASSERT_EQ(ops.size(), 1u);
    const auto gap = ComplexMatrix::identity(2) - ops[0].adjoint() * ops[0];
    for (double l : oracle::eigenvalues(gap)) EXPECT_GE(l, -1e-15);
  }
}

TEST(PropagateBell, NoiselessKeepsBellState) {
  for (auto kind : kTracePreserving)
    for (auto bell : {BellInput::PsiPlus, BellInput::PhiPlus}) {
      const auto rho = propagate_bell(kind, bell, 0.0);
      EXPECT_LT(max_abs_diff(rho.matrix(), ComplexMatrix::outer(bell_vector(bell))), 1e-15);
    }
}

TEST(PropagateBell, DepolarizingGivesWernerState) {
  for (double g : {0.1, 0.545, 1.0, 2.5}) {
    const auto rho = propagate_bell(ChannelKind::Depolarizing, BellInput::PhiPlus, g);
    const double f = (1.0 + 3.0 * std::exp(-2.0 * g)) / 4.0;
    EXPECT_NEAR(expectation(rho.matrix(), kPhiPlus), f, 1e-14);
    for (const auto& other : {kPhiMinus, kPsiPlus, kPsiMinus})
      EXPECT_NEAR(expectation(rho.matrix(), other), (1.0 - f) / 3.0, 1e-14);
  }
}

TEST(PropagateBell, AmplitudeDampedPsiPlusClosedForm) {
  for (double g : {0.2, 1.0, 0.4}) {
    const double a = std::exp(-2.0 * g);
    const auto expected = a * ComplexMatrix::outer(kPsiPlus) +
                          (1.0 - a) * ComplexMatrix::diagonal({1.0, 0.0, 0.0, 0.0});
    const auto rho = propagate_bell(ChannelKind::AmplitudeDamping, BellInput::PsiPlus, g);
    EXPECT_LT(max_abs_diff(rho.matrix(), expected), 1e-15);
  }
}

TEST(PropagateBell, RejectsWatchedChannel) {
  EXPECT_THROW(propagate_bell(ChannelKind::WatchedAmplitudeDamping, BellInput::PsiPlus, 1.0),
               std::invalid_argument);
}

TEST(PropagateBell, OutputsAreValidStates) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ug(0.0, 6.0);
  for (int t = 0; t < 300; ++t) {
    const auto kind = kTracePreserving[rng() % std::size(kTracePreserving)];
    const auto bell = (rng() & 1) ? BellInput::PsiPlus : BellInput::PhiPlus;
    const auto rho = propagate_bell(kind, bell, ug(rng));
    EXPECT_LE(rho.matrix().hermitian_deviation(), 1e-10);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-10);
    EXPECT_GE(oracle::eigenvalues(rho.matrix()).front(), -1e-10);
  }
}

TEST(FlipChannels, KrausRealizationEqualsBellMixture) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ug(0.0, 8.0);
  for (auto kind : kFlips)
    for (auto bell : {BellInput::PsiPlus, BellInput::PhiPlus})
      for (int t = 0; t < 50; ++t) {
        const double g = ug(rng);
        const auto rho = propagate_bell(kind, bell, g);
        const auto mix = two_bell_mixture(kind, bell, bell_mixture_lambda(kind, g));
        EXPECT_LT(max_abs_diff(rho.matrix(), mix.matrix()), 1e-12) << to_token(kind);
      }
}

TEST(FlipChannels, BitFlipPsiPlusHandWrittenMixture) {
  const double g = 1.5;
  const double lambda = (1.0 + std::exp(-g)) / 2.0;
  const auto expected =
      lambda * ComplexMatrix::outer(kPsiPlus) + (1.0 - lambda) * ComplexMatrix::outer(kPhiPlus);
  EXPECT_LT(max_abs_diff(propagate_bell(ChannelKind::BitFlip, BellInput::PsiPlus, g).matrix(),
                         expected),
            1e-12);
}

TEST(BellMixtureLambda, Values) {
  EXPECT_EQ(bell_mixture_lambda(ChannelKind::BitFlip, 0.0), 1.0);
  EXPECT_NEAR(bell_mixture_lambda(ChannelKind::PhaseFlip, 1e3), 0.5, 1e-15);
  EXPECT_NEAR(bell_mixture_lambda(ChannelKind::BitPhaseFlip, 1.5), 0.611565, 1e-6);
  EXPECT_THROW(bell_mixture_lambda(ChannelKind::Depolarizing, 1.0), std::invalid_argument);
}

TEST(WatchedConditional, PsiPlus) {
  const auto w0 = watched_conditional(BellInput::PsiPlus, 0.0);
  EXPECT_NEAR(w0.survival_probability, 1.0, 1e-15);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(w0.conditional_state[i] - kPsiPlus[i]), 0, 1e-15);

  for (double g : {0.3, 1.0, 1.5, 4.0}) {
    const auto w = watched_conditional(BellInput::PsiPlus, g);
    EXPECT_NEAR(w.survival_probability, std::exp(-2.0 * g), 1e-15);
    for (int i = 0; i < 4; ++i)
      EXPECT_NEAR(std::abs(w.conditional_state[i] - kPsiPlus[i]), 0, 1e-15);
  }
}

TEST(WatchedConditional, PhiPlusConditionalState) {
  for (double g : {0.0, 0.5 * std::log(2.0), 1.0, 3.0}) {
    const auto w = watched_conditional(BellInput::PhiPlus, g);
    const double e4 = std::exp(-4.0 * g);
    EXPECT_NEAR(w.survival_probability, 0.5 * (1.0 + e4), 1e-15);
    const double n = 1.0 / std::sqrt(1.0 + e4);
    EXPECT_NEAR(w.conditional_state[0].real(), n, 1e-15);
    EXPECT_NEAR(w.conditional_state[3].real(), std::exp(-2.0 * g) * n, 1e-15);
    EXPECT_EQ(std::abs(w.conditional_state[1]), 0.0);
    double norm2 = 0;
    for (auto z : w.conditional_state) norm2 += std::norm(z);
    EXPECT_NEAR(norm2, 1.0, 1e-12);
  }
}

TEST(Monotonicity, SurvivalAndLambdaStrictlyDecrease) {
  double prev_psi = 2, prev_phi = 2, prev_lambda = 2;
  for (int i = 0; i <= 100; ++i) {
    const double g = 0.05 * i;
    const double psi = watched_conditional(BellInput::PsiPlus, g).survival_probability;
    const double phi = watched_conditional(BellInput::PhiPlus, g).survival_probability;
    const double lambda = bell_mixture_lambda(ChannelKind::BitFlip, g);
    EXPECT_LT(psi, prev_psi);
    EXPECT_LT(phi, prev_phi);
    EXPECT_LT(lambda, prev_lambda);
    prev_psi = psi;
    prev_phi = phi;
    prev_lambda = lambda;
  }
}

TEST(DensityMatrix, ValidationRejectsBadStates) {
  EXPECT_THROW(DensityMatrix(ComplexMatrix::diagonal({0.5, 0.4})), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(ComplexMatrix::diagonal({1.2, -0.2})), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(ComplexMatrix{{0.5, 0.3}, {0.0, 0.5}}), std::invalid_argument);
  EXPECT_THROW(DensityMatrix(ComplexMatrix::identity(3) * (1.0 / 3)), std::invalid_argument);
}
