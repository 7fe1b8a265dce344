#include <cmath>

#include <gtest/gtest.h>

#include "pruefer/potential.hpp"

using namespace pruefer;

TEST(Evaluate, ConstantHasZeroSlope) {
  const Potential p(ConstantPotential{5.0});
  const PotentialValue v = p.evaluate(0.3);
  EXPECT_EQ(v.q, 5.0);
  EXPECT_EQ(v.dq, 0.0);
}

TEST(Evaluate, SineBumpAtMidpoint) {
  const Potential p(SineBump{0.8, 0.03});
  const PotentialValue v = p.evaluate(0.5);
  EXPECT_NEAR(v.q, 0.83, 1e-15);
  EXPECT_NEAR(v.dq, 0.0, 1e-15);
}

TEST(Evaluate, PiecewiseLinearInterpolates) {
  const Potential p(PiecewiseLinear{{{0.0, 1.0}, {0.5, 1.05}, {1.0, 1.0}}});
  const PotentialValue v = p.evaluate(0.25);
  EXPECT_NEAR(v.q, 1.025, 1e-15);
  EXPECT_NEAR(v.dq, 0.1, 1e-14);
}

TEST(Evaluate, PiecewiseLinearNodeSlopes) {
  const Potential p(PiecewiseLinear{{{0.0, 1.0}, {0.5, 1.05}, {1.0, 1.0}}});
  EXPECT_NEAR(p.evaluate(0.5).dq, -0.1, 1e-14);  // right-hand slope
  EXPECT_NEAR(p.evaluate(1.0).dq, -0.1, 1e-14);  // left-hand slope at the end
}

TEST(Evaluate, PolynomialValueAndDerivative) {
  const Potential p(Polynomial{{1.0, 2.0, 3.0}});
  const PotentialValue v = p.evaluate(0.5);
  EXPECT_NEAR(v.q, 1.0 + 1.0 + 0.75, 1e-15);
  EXPECT_NEAR(v.dq, 2.0 + 3.0, 1e-15);
}

TEST(Evaluate, OutsideUnitIntervalThrows) {
  const Potential p(ConstantPotential{1.0});
  EXPECT_THROW(p.evaluate(-0.01), DomainError);
  EXPECT_THROW(p.evaluate(1.01), DomainError);
}

TEST(Construction, RejectsInvalidSpecs) {
  EXPECT_THROW(Potential(ConstantPotential{-1.0}), InputError);
  EXPECT_THROW(Potential(SineBump{0.1, -0.5}), InputError);
  EXPECT_THROW(Potential(PiecewiseLinear{{{0.0, 1.0}, {0.5, 1.0}}}), InputError);
  EXPECT_THROW(Potential(PiecewiseLinear{{{0.0, 1.0}, {0.6, 1.0}, {0.4, 1.0}, {1.0, 1.0}}}), InputError);
  EXPECT_THROW(Potential(Polynomial{{}}), InputError);
  EXPECT_THROW(Potential(ConstantPotential{std::nan("")}), InputError);
}

TEST(Classify, SineBumpIsSingleBarrier) {
  const ShapeReport s = classify(Potential(SineBump{0.8, 0.03}));
  EXPECT_EQ(s.shape, Shape::single_barrier);
  EXPECT_NEAR(s.x0, 0.5, 1e-12);
  EXPECT_NEAR(s.q_sup, 0.83, 1e-15);
  EXPECT_NEAR(s.qmin, 0.8, 1e-15);
}

TEST(Classify, ConstantConvention) {
  const ShapeReport s = classify(Potential(ConstantPotential{5.0}));
  EXPECT_EQ(s.shape, Shape::constant);
  EXPECT_EQ(s.x0, 0.5);
  EXPECT_EQ(s.q_sup, 5.0);
}

TEST(Classify, NegativeBumpIsSingleWell) {
  EXPECT_EQ(classify(Potential(SineBump{0.8, -0.03})).shape, Shape::single_well);
}

TEST(Classify, TwoBumpsAreOther) {
  const Potential zigzag(PiecewiseLinear{{{0.0, 1.0}, {0.3, 2.0}, {0.5, 1.5}, {0.7, 2.0}, {1.0, 1.0}}});
  EXPECT_EQ(classify(zigzag).shape, Shape::other);
}

TEST(Classify, PlateauMidpoint) {
  const Potential p(PiecewiseLinear{{{0.0, 1.0}, {0.25, 2.0}, {0.75, 2.0}, {1.0, 1.0}}});
  const ShapeReport s = classify(p);
  EXPECT_EQ(s.shape, Shape::single_barrier);
  EXPECT_NEAR(s.x0, 0.5, 1e-12);
}

TEST(Hypotheses, AdmissibleBump) {
  const HypothesisReport h = check_hypotheses(Potential(SineBump{0.8, 0.03}));
  EXPECT_NEAR(h.qstar, 2.0 / 15.0 * 0.8, 1e-15);
  EXPECT_NEAR(h.qstar, 0.10667, 5e-6);
  EXPECT_NEAR(h.sup_abs_dq, 0.03 * kPi, 1e-15);
  EXPECT_TRUE(h.deriv_bound_ok);
  EXPECT_NEAR(h.q_x0, 0.83, 1e-15);
  EXPECT_NEAR(kAllPairsLimit, 0.8972, 5e-5);
  EXPECT_TRUE(h.all_pairs_condition);
  EXPECT_TRUE(h.all_hold());
}

TEST(Hypotheses, HighBumpNeedsThreshold) {
  const HypothesisReport h = check_hypotheses(Potential(SineBump{1.0, 0.04}));
  EXPECT_NEAR(h.qstar, 0.13333, 5e-6);
  EXPECT_NEAR(h.sup_abs_dq, 0.04 * kPi, 1e-15);
  EXPECT_TRUE(h.deriv_bound_ok);
  EXPECT_FALSE(h.all_pairs_condition);
  EXPECT_NEAR(h.eligibility_threshold, 11.44, 1e-12);
}

TEST(Hypotheses, ZeroPotential) {
  const HypothesisReport h = check_hypotheses(Potential(ConstantPotential{0.0}));
  EXPECT_EQ(h.qstar, 0.0);
  EXPECT_TRUE(h.deriv_bound_ok);
  EXPECT_EQ(h.deriv_margin, 0.0);
  EXPECT_EQ(h.eligibility_threshold, 0.0);
  EXPECT_TRUE(h.all_pairs_condition);
}

TEST(Hypotheses, SteepBumpFailsDerivativeBound) {
  const HypothesisReport h = check_hypotheses(Potential(SineBump{1.0, 3.0}));
  EXPECT_FALSE(h.deriv_bound_ok);
  EXPECT_LT(h.deriv_margin, 0.0);
  EXPECT_FALSE(h.all_hold());
}

TEST(Reverse, ConstantAndBumpInvariant) {
  const Potential c(ConstantPotential{5.0});
  EXPECT_EQ(reverse(c).spec(), c.spec());
  const Potential b(SineBump{0.8, 0.03});
  const Potential rb = reverse(b);
  for (std::size_t i = 0; i < b.eval_grid_n(); i += 64) {
    const double x = b.grid_point(i);
    EXPECT_NEAR(rb.q(x), b.q(x), 1e-15);
  }
}

TEST(Reverse, PiecewiseLinearTransitionMoves) {
  const Potential p(PiecewiseLinear{{{0.0, 1.0}, {0.25, 1.05}, {1.0, 1.0}}});
  const Potential r = reverse(p);
  EXPECT_NEAR(classify(r).x0, 0.75, 1e-12);
  EXPECT_NEAR(classify(p).x0, 0.25, 1e-12);
}

TEST(Reverse, ValuesAndSlopesReflect) {
  const Potential p(Polynomial{{0.5, 0.3, -0.2, 0.1}});
  const Potential r = reverse(p);
  for (double x : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(r.q(x), p.q(1.0 - x), 1e-14);
    EXPECT_NEAR(r.dq(x), -p.dq(1.0 - x), 1e-14);
  }
}

TEST(Reverse, IsAnInvolution) {
  const Potential p(sample_admissible(7));
  const Potential rr = reverse(reverse(p));
  for (std::size_t i = 0; i < p.eval_grid_n(); ++i) {
    const double x = p.grid_point(i);
    ASSERT_NEAR(rr.q(x), p.q(x), 1e-13);
  }
}

TEST(Reverse, TransitionPointMirrorsAndDerivativeBoundSymmetric) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Potential p(sample_admissible(seed));
    const Potential r = reverse(p);
    EXPECT_NEAR(classify(r).x0, 1.0 - classify(p).x0, 1.0 / 4096);
    EXPECT_EQ(check_hypotheses(r).deriv_bound_ok, check_hypotheses(p).deriv_bound_ok);
  }
}

TEST(Sampler, DeterministicAndAdmissible) {
  EXPECT_EQ(sample_admissible(1), sample_admissible(1));
  EXPECT_NE(sample_admissible(1), sample_admissible(2));
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Potential p(sample_admissible(seed));
    const HypothesisReport h = check_hypotheses(p);
    ASSERT_TRUE(h.nonnegative) << seed;
    ASSERT_TRUE(h.deriv_bound_ok) << seed;
    ASSERT_EQ(h.shape, Shape::single_barrier) << seed;
  }
}

TEST(Sampler, ZeroCapGivesConstant) {
  FamilyParams fp;
  fp.amplitude_cap = 0.0;
  EXPECT_TRUE(std::holds_alternative<ConstantPotential>(sample_admissible(3, fp)));
}

TEST(Sampler, InfeasibleRangesThrow) {
  FamilyParams fp;
  fp.base_range = {2.0, 1.0};
  EXPECT_THROW(sample_admissible(1, fp), InputError);
  fp = FamilyParams{};
  fp.amplitude_cap = 1.5;
  EXPECT_THROW(sample_admissible(1, fp), InputError);
}

TEST(Sampler, SingleWellFamily) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Potential p(sample_single_well(seed));
    EXPECT_EQ(classify(p).shape, Shape::single_well) << seed;
    EXPECT_GE(classify(p).qmin, 0.0);
  }
}

TEST(IncreasingSide, AdmissibleBump) {
  const Potential p(SineBump{0.8, 0.03});
  const IncreasingSideReport r = check_increasing_side(p, 0.5);
  EXPECT_TRUE(r.monotone);
  EXPECT_TRUE(r.all_hold());
  EXPECT_NEAR(r.sup_dq, 0.03 * kPi, 1e-12);
}
