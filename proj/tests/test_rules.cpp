#include <gtest/gtest.h>

#include "anyonsim/fusion_rules.hpp"
#include "anyonsim/theories.hpp"

using namespace anyonsim;

TEST(ValidateRules, IsingAndTyPass) {
  EXPECT_TRUE(validate_fusion_rules(build_ising(+1, false).rules).ok());
  EXPECT_TRUE(validate_fusion_rules(build_tambara_yamagami(2, +1, std::nullopt, false).rules).ok());
  EXPECT_TRUE(validate_fusion_rules(build_tambara_yamagami_cyclic(3, +1, false).rules).ok());
}

TEST(ValidateRules, BrokenVacuumRuleReported) {
  FusionRules rules = build_ising(+1, false).rules;
  // q x 0 -> 1 violates N^{a0}_b = delta_ab
  rules.set_fuses(2, 0, 1);
  ValidationReport rep = validate_fusion_rules(rules);
  ASSERT_FALSE(rep.ok());
  bool mentions_vacuum = false;
  for (const auto& v : rep.violations)
    if (v.find("vacuum rule") != std::string::npos) mentions_vacuum = true;
  EXPECT_TRUE(mentions_vacuum);
}

TEST(QuantumDimensions, IsingValues) {
  SkeletalData ising = build_ising(+1, false);
  auto d = quantum_dimensions(ising.rules);
  EXPECT_NEAR(d[0], 1.0, 1e-9);                 // vacuum
  EXPECT_NEAR(d[1], 1.0, 1e-9);                 // abelian 1
  EXPECT_NEAR(d[2], std::sqrt(2.0), 1e-9);      // d_q = sqrt(2)
  EXPECT_NEAR(total_quantum_dimension(d), 2.0, 1e-9);
  EXPECT_LT(qdim_product_residual(ising.rules, d), 1e-9);
}

TEST(QuantumDimensions, TyValues) {
  for (int n = 1; n <= 3; ++n) {
    SkeletalData ty = build_tambara_yamagami(n, +1, std::nullopt, false);
    auto d = quantum_dimensions(ty.rules);
    double dq = std::sqrt((double)(1 << n));
    for (int g = 0; g < (1 << n); ++g) EXPECT_NEAR(d[g], 1.0, 1e-9);
    EXPECT_NEAR(d[q_label(ty)], dq, 1e-9);  // d_q = sqrt(d)
    EXPECT_LT(qdim_product_residual(ty.rules, d), 1e-9);
  }
}

TEST(QuantumDimensions, CyclicRing) {
  SkeletalData ty3 = build_tambara_yamagami_cyclic(3, +1, false);
  auto d = quantum_dimensions(ty3.rules);
  EXPECT_NEAR(d[q_label(ty3)], std::sqrt(3.0), 1e-9);
  EXPECT_LT(qdim_product_residual(ty3.rules, d), 1e-9);
}
