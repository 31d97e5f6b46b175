#include <gtest/gtest.h>

#include "anyonsim/consistency.hpp"
#include "anyonsim/theories.hpp"

using namespace anyonsim;

TEST(Pentagon, ViolatedInstanceHasLargeResidual) {
  SkeletalData th = build_ising(+1);
  // flip the sign of the (1,1) entry of F^{qqq}_q
  th.f_blocks.at(FKey{2, 2, 2, 2}).m(1, 1) *= -1.0;
  ResidualReport rep = check_pentagon(th);
  EXPECT_GE(rep.max_residual, 0.1);
}

TEST(Pentagon, MissingBlockIsStructuralError) {
  SkeletalData th = build_ising(+1);
  th.f_blocks.erase(FKey{2, 2, 2, 2});
  EXPECT_THROW(check_pentagon(th), StructuralError);
}

TEST(Hexagon, RequiresRData) {
  SkeletalData th = build_ising(+1);
  EXPECT_THROW(check_hexagon(th), UnsupportedOperationError);
}

TEST(Hexagon, TrivialROnIsingFails) {
  // all R = 1 satisfies neither hexagon: the monodromy would be trivial
  SkeletalData th = build_ising(+1);
  th.has_r = true;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c : th.rules.product(a, b)) th.r_symbols[{a, b}][c] = cplx(1, 0);
  ResidualReport rep = check_hexagon(th);
  EXPECT_GE(rep.max_residual, 0.1);
}

TEST(Hexagon, AbelianZ2TheoryWithConsistentR) {
  // Z_2 fusion ring (semion-free assignment): all F = 1, R^{11}_0 = +-1 both
  // satisfy the hexagons exactly.
  FusionRules ru = FusionRules::empty(2);
  ru.labels = {"0", "1"};
  ru.dual = {0, 1};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) ru.set_fuses(a, b, a ^ b);
  SkeletalData th;
  th.name = "z2";
  th.rules = ru;
  init_f_blocks_identity(th);
  th.has_r = true;
  for (double sign : {+1.0, -1.0}) {
    th.r_symbols.clear();
    th.r_symbols[{1, 1}][0] = cplx(sign, 0);
    th.r_symbols[{1, 0}][1] = cplx(1, 0);
    th.r_symbols[{0, 1}][1] = cplx(1, 0);
    th.r_symbols[{0, 0}][0] = cplx(1, 0);
    EXPECT_LT(check_hexagon(th).max_residual, 1e-12);
  }
}
