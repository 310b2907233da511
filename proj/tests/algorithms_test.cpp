#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdivlab/algorithms.hpp"
#include "qdivlab/divergences.hpp"
#include "qdivlab/errors.hpp"

namespace qdivlab {
namespace {

double overlap(const StatePair& pair) { return (pair.rho0().matrix() * pair.rho1().matrix()).trace().real(); }

StatePair random_pair(std::size_t d, std::uint64_t s) {
  return StatePair(random_mixed(d, 1 + s % d, derive_seed(s, {0})), random_mixed(d, 1 + (s / d) % d, derive_seed(s, {1})));
}

TEST(SwapTest, Examples) {
  const DensityMatrix psi = from_pure(random_unitary(3, 1).col(0));
  const SwapTestResult same = swap_test_prob(StatePair(psi, psi));
  EXPECT_NEAR(same.overlap, 1.0, 1e-14);
  EXPECT_NEAR(same.p0_outcome, 1.0, 1e-14);
  const SwapTestResult orth = swap_test_prob(StatePair(basis_state(2, 0), basis_state(2, 1)));
  EXPECT_NEAR(orth.overlap, 0.0, 1e-15);
  EXPECT_NEAR(orth.p0_outcome, 0.5, 1e-15);
  for (std::size_t n = 1; n <= 4; ++n) {
    const DensityMatrix mixed = maximally_mixed(std::size_t{1} << n);
    const SwapTestResult r = swap_test_prob(StatePair(mixed, mixed));
    EXPECT_NEAR(r.overlap, std::exp2(-static_cast<double>(n)), 1e-15);
    EXPECT_NEAR(r.p0_outcome, 0.5 + std::exp2(-static_cast<double>(n) - 1), 1e-15);
  }
}

TEST(Purify, Examples) {
  Vector psi(2);
  psi << std::sqrt(0.3), Complex(0, std::sqrt(0.7));
  const Purification pure = purify(from_pure(psi));
  EXPECT_EQ(pure.env_dim, 1u);
  EXPECT_NEAR(std::abs(pure.vector.dot(psi)), 1.0, 1e-12);

  const Purification bell = purify(maximally_mixed(2));
  EXPECT_EQ(bell.env_dim, 2u);
  EXPECT_NEAR(bell.vector.norm(), 1.0, 1e-14);
  // Maximally entangled: the coefficient matrix is a unitary over sqrt 2.
  Matrix coeff(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) coeff(i, j) = bell.vector(2 * i + j);
  EXPECT_LT((coeff * coeff.adjoint() - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((coeff.adjoint() * coeff - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Purify, RoundTrip) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t d = 2 + s % 6, r = 1 + s % d;
    const DensityMatrix rho = random_mixed(d, r, s);
    const Purification p = purify(rho);
    EXPECT_EQ(p.env_dim, r);
    EXPECT_NEAR(p.vector.norm(), 1.0, 1e-12);
    EXPECT_LT((reduced_state(p).matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SwapStatevector, Examples) {
  const Purification a = purify(basis_state(2, 0)), b = purify(basis_state(2, 1));
  EXPECT_NEAR(swap_test_statevector(a, a), 1.0, 1e-14);
  EXPECT_NEAR(swap_test_statevector(a, b), 0.5, 1e-14);
}

TEST(SwapStatevector, MatchesOverlapFormula) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const StatePair pair = random_pair(2 + s % 2, s);
    const double sim = swap_test_statevector(purify(pair.rho0()), purify(pair.rho1()));
    EXPECT_NEAR(sim, 0.5 * (1 + overlap(pair)), 1e-10) << "seed " << s;
    EXPECT_NEAR(sim, swap_test_prob(pair).p0_outcome, 1e-10);
  }
}

TEST(SwapStatevector, DimensionOverflow) {
  Tolerances tol;
  tol.dimension_cap = 64;
  const Purification p = purify(maximally_mixed(4));
  try {
    swap_test_statevector(p, p, tol);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionOverflow);
  }
}

TEST(Grover, Examples) {
  const AmplificationState half = grover_single_iteration(0.5);
  EXPECT_NEAR(half.theta, std::numbers::pi / 6, 1e-15);
  EXPECT_NEAR(half.success_trig, 1.0, 1e-15);
  EXPECT_NEAR(half.p_acc, 0.0, 1e-12);
  const AmplificationState zero = grover_single_iteration(0.0);
  EXPECT_EQ(zero.success_poly, 0.0);
  EXPECT_EQ(zero.p_acc, 1.0);
  const AmplificationState one = grover_single_iteration(1.0);
  EXPECT_NEAR(one.theta, std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(one.success_trig, 0.5, 1e-15);
  EXPECT_NEAR(one.p_acc, 0.5, 1e-15);
  EXPECT_THROW(grover_single_iteration(1.1), Error);
  EXPECT_THROW(grover_single_iteration(-0.1), Error);
}

TEST(Grover, PolynomialMatchesTrig) {
  double worst = 0;
  for (int i = 0; i <= 10000; ++i) {
    const double p = i / 10000.0;
    const AmplificationState a = grover_single_iteration(p);
    const double trig = std::pow(std::sin(3 * std::asin(std::sqrt(p / 2))), 2);
    const double poly = 2 * p * p * p - 6 * p * p + 4.5 * p;
    worst = std::max({worst, std::abs(trig - poly), std::abs(a.success_poly - a.success_trig)});
    EXPECT_NEAR(a.p_acc, 1 - poly, 1e-12);
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Grover, StatevectorMatchesLemma) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const StatePair pair = random_pair(2, s);
    const double p = swap_test_prob(pair).p0_outcome;
    const double sim = grover_statevector_success(purify(pair.rho0()), purify(pair.rho1()));
    EXPECT_NEAR(sim, grover_single_iteration(p).success_trig, 1e-10) << "seed " << s;
  }
  // Orthogonal inputs give p = 1/2 and the amplified success is certain.
  EXPECT_NEAR(grover_statevector_success(purify(basis_state(2, 0)), purify(basis_state(2, 1))), 1.0, 1e-12);
}

TEST(Nqp, Examples) {
  const NqpDecision mixed = nqp_decide(StatePair(maximally_mixed(2), maximally_mixed(2)));
  EXPECT_GE(mixed.p_acc, std::exp2(-4.0));
  EXPECT_TRUE(mixed.accept);
  EXPECT_EQ(mixed.verdict, "close");
  EXPECT_NEAR(mixed.lower_bound_yes, std::pow(0.75 - 0.5, 2), 1e-15);

  const NqpDecision orth = nqp_decide(StatePair(basis_state(2, 0), basis_state(2, 1)));
  EXPECT_NEAR(orth.p_acc, 0.0, 1e-12);
  EXPECT_FALSE(orth.accept);
  EXPECT_EQ(orth.verdict, "far");

  const DensityMatrix psi = from_pure(random_unitary(2, 3).col(0));
  const NqpDecision pure = nqp_decide(StatePair(psi, psi));
  EXPECT_NEAR(pure.p, 1.0, 1e-12);
  EXPECT_NEAR(pure.p_acc, 0.5, 1e-12);
}

TEST(Nqp, PerfectSoundnessOnOrthogonalSupports) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t d = 4;
    const Matrix u = random_unitary(d, s);
    // Split the basis of u between the two states.
    const std::vector<double> w0 = diagonal_distribution(random_mixed(2, 2, s));
    const std::vector<double> w1 = diagonal_distribution(random_mixed(2, 2, s + 1));
    const DensityMatrix a = conjugate(from_distribution({w0[0], w0[1], 0, 0}), u);
    const DensityMatrix b = conjugate(from_distribution({0, 0, w1[0], w1[1]}), u);
    ASSERT_LE(std::abs(overlap(StatePair(a, b))), 1e-14);
    const NqpDecision r = nqp_decide(StatePair(a, b));
    EXPECT_LE(r.p_acc, 1e-12);
    EXPECT_FALSE(r.accept);
  }
}

TEST(Nqp, CompletenessFloor) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t n = 1 + s % 3;
    const DensityMatrix rho = random_mixed(std::size_t{1} << n, 1 + s % 4 % (std::size_t{1} << n), s);
    const NqpDecision r = nqp_decide(StatePair(rho, rho));
    const double p = 0.5 * (1 + (rho.matrix() * rho.matrix()).trace().real());
    EXPECT_NEAR(r.p, p, 1e-12);
    EXPECT_GE(p, 0.5 + std::exp2(-static_cast<double>(n) - 1) - 1e-15);
    EXPECT_GE(r.p_acc, std::pow(p - 0.5, 2) - 1e-15);
    EXPECT_GE(r.p_acc, std::exp2(-2.0 * n - 2) - 1e-15);
    EXPECT_TRUE(r.accept);
  }
}

TEST(Pp, Examples) {
  const DensityMatrix psi = from_pure(random_unitary(4, 2).col(0));
  EXPECT_NEAR(pp_hybrid_accept(StatePair(psi, psi)).acceptance, 0.5, 1e-14);
  const PpDecision orth = pp_hybrid_accept(StatePair(basis_state(2, 0), basis_state(2, 1)));
  EXPECT_NEAR(orth.acceptance, 0.25, 1e-15);
  EXPECT_NEAR(orth.acceptance_mixture, 0.25, 1e-15);
  EXPECT_THROW(pp_hybrid_accept(StatePair(maximally_mixed(3), maximally_mixed(3))), Error);
}

TEST(Pp, BothPathsAgree) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const StatePair pair = random_pair(std::size_t{1} << (1 + s % 3), s);
    const PpDecision d = pp_hybrid_accept(pair);
    EXPECT_NEAR(d.acceptance, 0.5 - hs_distance_sq(pair) / 8, 1e-12);
    EXPECT_NEAR(d.acceptance, d.acceptance_mixture, 1e-12);
  }
}

TEST(Pp, Thresholds) {
  for (int n = 1; n <= 20; ++n) {
    const PpThresholds t = pp_thresholds(n);
    const double nd = n;
    EXPECT_DOUBLE_EQ(t.yes_floor, 0.5 - std::exp2(-nd - 4));
    EXPECT_NEAR(t.no_ceiling, 0.5 - std::exp2(-nd - 2) * std::pow(1 - std::exp2(-nd / 2 - 1), 2), 1e-16);
    EXPECT_DOUBLE_EQ(t.gap_floor, std::exp2(-2 * nd - 4));
    const double gap = t.yes_floor - t.no_ceiling;
    EXPECT_NEAR(gap, std::exp2(-2 * nd - 4) + std::exp2(-nd - 2) * (0.75 - std::exp2(-nd / 2)), 1e-15);
    EXPECT_GE(gap, t.gap_floor);
  }
}

TEST(Pp, PromiseRegimes) {
  // n = 1: a close pair with td <= 2^(-3/2) and a far pair with td >= 1 - 2^(-3/2).
  const double edge = std::exp2(-1.5);
  const StatePair close(from_bloch({0, 0, 0.5 * edge}), from_bloch({0, 0, -0.5 * edge}));
  ASSERT_LE(trace_distance(close), edge + 1e-15);
  EXPECT_GE(pp_hybrid_accept(close).acceptance, pp_thresholds(1).yes_floor);
  const StatePair far(basis_state(2, 0), from_bloch({0, 0, -(1 - 2 * edge)}));
  ASSERT_GE(trace_distance(far), 1 - edge - 1e-15);
  EXPECT_LE(pp_hybrid_accept(far).acceptance, pp_thresholds(1).no_ceiling);
}

TEST(HsTd, Examples) {
  const DensityMatrix rho = random_mixed(3, 2, 4);
  const HsTdBounds same = hs_td_bounds(StatePair(rho, rho));
  EXPECT_NEAR(same.hs, 0.0, 1e-15);
  EXPECT_NEAR(same.td, 0.0, 1e-15);
  EXPECT_NEAR(same.upper, 0.0, 1e-15);
  const HsTdBounds orth = hs_td_bounds(StatePair(basis_state(2, 0), basis_state(2, 1)));
  EXPECT_NEAR(orth.hs, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(orth.td, 1.0, 1e-15);
  EXPECT_NEAR(orth.lower, orth.td, 1e-15);
  EXPECT_TRUE(orth.holds(1e-12));
}

TEST(HsTd, RandomPairs) {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const std::size_t d = 2 + s % 7;
    const HsTdBounds b = hs_td_bounds(random_pair(d, s));
    EXPECT_TRUE(b.holds(1e-9)) << "seed " << s;
    EXPECT_LE(b.lower, b.td + 1e-9);
    EXPECT_LE(b.td, b.rank_aware_upper + 1e-9);
    EXPECT_LE(b.rank_aware_upper, b.upper + 1e-9);
    EXPECT_NEAR(b.upper, std::sqrt(d / 2.0) * b.hs, 1e-12);
  }
}

}  // namespace
}  // namespace qdivlab
