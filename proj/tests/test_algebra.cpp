#include <gtest/gtest.h>

#include "anyonsim/core.hpp"
#include "anyonsim/group.hpp"
#include "anyonsim/rng.hpp"

using namespace anyonsim;

TEST(GroupElement, MulIsXor) {
  GroupElement zero(0b00, 2), one(0b01, 2), two(0b10, 2), three(0b11, 2);
  EXPECT_EQ(group_mul(zero, zero), zero);
  EXPECT_EQ(group_mul(one, one), zero);   // self-inverse
  EXPECT_EQ(group_mul(one, two), three);  // componentwise xor
}

TEST(GroupElement, MismatchedLengthsThrow) {
  EXPECT_THROW(group_mul(GroupElement(0, 1), GroupElement(0, 2)), std::invalid_argument);
  EXPECT_THROW(standard_bicharacter(GroupElement(0, 1), GroupElement(0, 2)),
               std::invalid_argument);
}

TEST(GroupElement, ExhaustiveGroupLaws) {
  for (int n = 1; n <= 4; ++n) {
    const int d = 1 << n;
    for (int a = 0; a < d; ++a) {
      GroupElement ga(a, n);
      EXPECT_TRUE(group_mul(ga, ga).is_identity());
      for (int b = 0; b < d; ++b) {
        GroupElement gb(b, n);
        EXPECT_EQ(group_mul(ga, gb), group_mul(gb, ga));
        for (int c = 0; c < d; ++c) {
          GroupElement gc(c, n);
          EXPECT_EQ(group_mul(group_mul(ga, gb), gc), group_mul(ga, group_mul(gb, gc)));
        }
      }
    }
  }
}

TEST(Bicharacter, TrivialElementAndZ2) {
  for (int h = 0; h < 8; ++h)
    EXPECT_EQ(standard_bicharacter(GroupElement(0, 3), GroupElement(h, 3)), cplx(1, 0));
  // the unique nondegenerate symmetric bicharacter on Z_2 pairs (1,1) to -1
  EXPECT_EQ(standard_bicharacter(GroupElement(1, 1), GroupElement(1, 1)), cplx(-1, 0));
  EXPECT_EQ(standard_bicharacter(GroupElement(0b11, 2), GroupElement(0b10, 2)), cplx(-1, 0));
}

TEST(Bicharacter, SymmetricAndNondegenerate) {
  for (int n = 1; n <= 3; ++n) {
    const int d = 1 << n;
    CMatrix table(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        cplx v = standard_bicharacter(GroupElement(a, n), GroupElement(b, n));
        EXPECT_EQ(v, standard_bicharacter(GroupElement(b, n), GroupElement(a, n)));
        table(a, b) = v;
      }
    EXPECT_GT(table.abs_det(), 0.5);  // invertible character table
    EXPECT_NO_THROW(BicharacterTable{table});
  }
}

TEST(BicharacterTable, RejectsDegenerateOrAsymmetric) {
  CMatrix ones(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ones(i, j) = 1.0;
  EXPECT_THROW(BicharacterTable{ones}, std::invalid_argument);  // degenerate
  CMatrix asym = CMatrix::identity(2);
  asym(0, 1) = 1.0;
  asym(1, 0) = -1.0;
  EXPECT_THROW(BicharacterTable{asym}, std::invalid_argument);
}

TEST(CMatrix, UnitarityChecks) {
  Tolerance tol(1e-9);
  EXPECT_TRUE(is_unitary(CMatrix::identity(2), tol));

  CMatrix had(2, 2);
  double r = 1.0 / std::sqrt(2.0);
  had(0, 0) = r;
  had(0, 1) = r;
  had(1, 0) = r;
  had(1, 1) = -r;
  EXPECT_TRUE(is_unitary(had, tol));

  CMatrix ones(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) ones(i, j) = 1.0;
  EXPECT_FALSE(is_unitary(ones, tol));

  CMatrix rect(2, 3);
  EXPECT_THROW(is_unitary(rect, tol), std::invalid_argument);
}

TEST(CMatrix, UnitarityInvariantUnderUnitScalar) {
  Rng rng(7);
  CMatrix had(2, 2);
  double r = 1.0 / std::sqrt(2.0);
  had(0, 0) = r;
  had(0, 1) = r;
  had(1, 0) = r;
  had(1, 1) = -r;
  for (int k = 0; k < 25; ++k) {
    cplx phase = std::polar(1.0, 2 * kPi * rng.uniform());
    EXPECT_TRUE(is_unitary(had * phase, Tolerance(1e-9)));
  }
}

TEST(Tolerance, Range) {
  EXPECT_THROW(Tolerance(0.0), std::invalid_argument);
  EXPECT_THROW(Tolerance(1.0), std::invalid_argument);
  EXPECT_THROW(Tolerance(-1e-3), std::invalid_argument);
  EXPECT_NO_THROW(Tolerance(1e-9));
}
