#include <cmath>

#include <gtest/gtest.h>

#include "pruefer/lemma_audit.hpp"

using namespace pruefer;

namespace {

std::optional<AngleBlock> block(const Potential& p, double z, int i, double D, double x0) {
  auto traj = std::make_shared<const PruferTrajectory>(integrate(p, z, x0));
  return make_block(traj, i, D, x0, describe(p.spec()));
}

}  // namespace

TEST(Scalar, EndpointsAndGrid) {
  EXPECT_EQ(scalar_G(0.0), 0.0);
  EXPECT_EQ(scalar_quarter(0.0), 0.0);
  for (double s : {1.0 / 22.0, 1.0 / 11.0}) {
    EXPECT_GT(scalar_G(s) - s / 10.0, 0.0) << s;
    EXPECT_GT(scalar_quarter(s) + 0.25, 0.0) << s;
  }
  const auto r = audit_scalar_inequalities(10000);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].lemma_id, LemmaId::scalarG);
  EXPECT_TRUE(r[0].pass);
  EXPECT_EQ(r[0].margin, 0.0);  // attained at s = 0
  EXPECT_TRUE(r[1].pass);
  EXPECT_GT(r[1].margin, 0.0);
}

TEST(Oscillation, ZeroIsEqualityConstantIsStrict) {
  for (const AuditResult& r : audit_oscillation_bound(Potential(ConstantPotential{0.0}), 8)) {
    EXPECT_NEAR(r.margin, 0.0, 1e-12);
    EXPECT_TRUE(r.pass);
  }
  for (const AuditResult& r : audit_oscillation_bound(Potential(ConstantPotential{5.0}), 8)) {
    EXPECT_GT(r.margin, 0.0);
  }
  for (const AuditResult& r : audit_oscillation_bound(Potential(SineBump{0.8, 0.03}), 8)) {
    EXPECT_TRUE(r.pass);
  }
}

TEST(Block, SkippedWhenAngleTooSmall) {
  std::string reason;
  const Potential p(ConstantPotential{1.0});
  auto traj = std::make_shared<const PruferTrajectory>(integrate(p, 3.0, 0.5));
  EXPECT_FALSE(make_block(traj, 2, kPi, 0.5, "c", &reason).has_value());
  EXPECT_FALSE(reason.empty());
}

TEST(Block, ZeroPotentialEverythingVanishes) {
  const Potential p(ConstantPotential{0.0});
  const auto blk = block(p, 5 * kPi, 0, kPi, 0.5);
  ASSERT_TRUE(blk.has_value());
  EXPECT_NEAR(blk->audit_case().a, 0.1, 1e-12);
  EXPECT_NEAR(blk->audit_case().b, 0.3, 1e-12);
  for (const AuditResult& r : {audit_lemma32(*blk), audit_lemma33_substitution(*blk), audit_lemma35(*blk)}) {
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
    EXPECT_EQ(r.margin, 0.0);
  }
  for (const AuditResult& r : audit_lemma34(*blk)) EXPECT_EQ(r.margin, 0.0);
}

TEST(Block, ConstantPotentialFullBlock) {
  const double c = 10.0;
  const Potential p(ConstantPotential{c});
  const auto blk = block(p, std::sqrt(11 * c), 0, kPi, 0.5);
  ASSERT_TRUE(blk.has_value());
  EXPECT_GE(audit_lemma32(*blk).margin, -kAuditTol);
  EXPECT_LE(-audit_lemma33_substitution(*blk).margin, kAuditTol);
  const auto l34 = audit_lemma34(*blk);
  for (const AuditResult& r : l34) EXPECT_TRUE(r.pass) << lemma_name(r.lemma_id);
  // q' = 0: the part (iii) bound is zero and the t-integral vanishes over a full block.
  EXPECT_EQ(l34[2].rhs, 0.0);
  EXPECT_NEAR(l34[2].lhs, 0.0, 1e-12);
  EXPECT_GE(audit_lemma35(*blk).margin, -kAuditTol);
  EXPECT_GE(audit_combined(*blk).margin, -kAuditTol);
}

TEST(Block, SineBumpCases) {
  const Potential p(SineBump{0.8, 0.03});
  for (const auto& [z, i, D] : {std::tuple{std::sqrt(11 * 0.83), 0, kPi}, std::tuple{20.0, 1, 0.75 * kPi},
                               std::tuple{20.0, 0, kPi}, std::tuple{25.0, 2, 0.5 * kPi}}) {
    const auto blk = block(p, z, i, D, 0.5);
    if (z < 4) {
      EXPECT_FALSE(blk.has_value());  // phi(1/2) < 3 pi / 2 at the threshold
      continue;
    }
    ASSERT_TRUE(blk.has_value()) << z << " " << i;
    EXPECT_TRUE(audit_lemma32(*blk).pass);
    EXPECT_LE(-audit_lemma33_substitution(*blk).margin, kAuditTol);
    for (const AuditResult& r : audit_lemma34(*blk)) EXPECT_TRUE(r.pass) << lemma_name(r.lemma_id);
    EXPECT_TRUE(audit_lemma35(*blk).pass);
  }
}

TEST(Block, Lemma34RequiresLongBlock) {
  const Potential p(SineBump{0.8, 0.03});
  const auto blk = block(p, 20.0, 0, 0.25 * kPi, 0.5);
  ASSERT_TRUE(blk.has_value());
  EXPECT_TRUE(audit_lemma32(*blk).pass);
  EXPECT_THROW(audit_lemma34(*blk), InputError);
  EXPECT_THROW(audit_lemma35(*blk), InputError);
}

TEST(Grid, ZeroPotentialAllMarginsZero) {
  const AuditReport r = audit_potential(Potential(ConstantPotential{0.0}));
  EXPECT_GT(r.cases_run, 0u);
  for (const AuditResult& a : r.results) EXPECT_NEAR(a.margin, 0.0, 1e-12) << lemma_name(a.lemma_id);
  EXPECT_TRUE(r.all_pass());
}

TEST(Grid, AdmissibleBump) {
  const AuditReport r = audit_potential(Potential(SineBump{0.8, 0.03}));
  EXPECT_TRUE(r.all_pass(true));
  EXPECT_LE(r.max_equality_residual(), kAuditTol);
  EXPECT_GE(r.cases_run, 10u);
  EXPECT_FALSE(r.skipped.empty());
}
