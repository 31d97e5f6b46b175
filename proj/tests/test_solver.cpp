#include <gtest/gtest.h>

#include "anyonsim/consistency.hpp"
#include "anyonsim/solver.hpp"
#include "anyonsim/theories.hpp"

using namespace anyonsim;

TEST(Solver, EightIsingClassesPooled) {
  std::map<std::vector<long long>, BraidingSolution> pooled;
  int plus = 0, minus = 0;
  for (double kappa : {+1.0, -1.0}) {
    auto sols = solve_hexagon(build_ising(kappa), 2024, 120);
    for (auto& s : sols) {
      pooled.emplace(s.key, s);
      (kappa > 0 ? plus : minus)++;
    }
  }
  EXPECT_EQ((int)pooled.size(), 8);
  EXPECT_EQ(plus, 4);
  EXPECT_EQ(minus, 4);
  for (auto& [k, s] : pooled) {
    // independent checker, separate code path from the solver residual
    EXPECT_LT(check_hexagon(s.theory).max_residual, 1e-7);
    EXPECT_NEAR(std::abs(s.spins[1] + cplx(1, 0)), 0, 1e-7);  // theta_1 = -1
  }
}

TEST(Solver, IsingCountStableAcrossSeeds) {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto sols = solve_hexagon(build_ising(+1), seed, 80);
    EXPECT_EQ((int)sols.size(), 4) << "seed " << seed;
  }
}

TEST(Solver, MonodromyAndConjugationIdentities) {
  // M^{qq} = theta_q^-2 diag(1,-1) and F (M^{qq})^{+-1} F = theta_q^{-+2} X
  for (double kappa : {+1.0, -1.0}) {
    auto sols = solve_hexagon(build_ising(kappa), 5, 80);
    ASSERT_EQ(sols.size(), 4u);
    for (auto& s : sols) {
      const SkeletalData& th = s.theory;
      cplx tq = s.spins[2];
      CMatrix m(2, 2);
      m(0, 0) = th.r(2, 2, 0) * th.r(2, 2, 0);
      m(1, 1) = th.r(2, 2, 1) * th.r(2, 2, 1);
      CMatrix expected(2, 2);
      expected(0, 0) = 1.0 / (tq * tq);
      expected(1, 1) = -expected(0, 0);
      EXPECT_LT(m.max_abs_diff(expected), 1e-7);

      const CMatrix& f = th.fblock(2, 2, 2, 2).m;
      CMatrix x(2, 2);
      x(0, 1) = 1;
      x(1, 0) = 1;
      CMatrix lhs_plus = f * m * f;
      CMatrix lhs_minus = f * m.dagger() * f;  // M^{-1} = M^dagger for unit phases
      EXPECT_LT(lhs_plus.max_abs_diff(x * (1.0 / (tq * tq))), 1e-7);
      EXPECT_LT(lhs_minus.max_abs_diff(x * (tq * tq)), 1e-7);
    }
  }
}

TEST(Solver, BraidingExistenceBoundary) {
  // TY(Z_2), TY(Z_2^2) admit braidings; TY(Z_3), TY(Z_4) rings do not.
  EXPECT_GE(solve_hexagon(build_tambara_yamagami(1, +1), 7, 60).size(), 1u);
  EXPECT_GE(solve_hexagon(build_tambara_yamagami(2, +1), 7, 60).size(), 1u);
  EXPECT_EQ(solve_hexagon(build_tambara_yamagami_cyclic(3, +1), 7, 120).size(), 0u);
  EXPECT_EQ(solve_hexagon(build_tambara_yamagami_cyclic(4, +1), 7, 120).size(), 0u);
}

TEST(Solver, SolutionsSatisfyModuliAndIndependentHexagon) {
  auto sols = solve_hexagon(build_tambara_yamagami(2, -1), 99, 80);
  ASSERT_GE(sols.size(), 1u);
  for (auto& s : sols) {
    EXPECT_LT(s.theory.max_r_modulus_defect(), 1e-9);
    EXPECT_LT(check_hexagon(s.theory).max_residual, 1e-7);
    EXPECT_EQ(s.kappa_q, -1.0);
  }
}
