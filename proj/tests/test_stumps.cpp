#include <gtest/gtest.h>

#include "anyonsim/solver.hpp"
#include "anyonsim/state.hpp"
#include "anyonsim/theories.hpp"

using namespace anyonsim;

namespace {

FusionState random_pair_state(const SkeletalData& th, Rng& rng) {
  int q = q_label(th);
  FusionBasis basis = enumerate_basis(th, {q, q});
  std::vector<cplx> amps(basis.dim());
  double norm = 0;
  for (auto& a : amps) {
    a = cplx(rng.gaussian(), rng.gaussian());
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return state_from_pairwise(th, {q, q}, amps);
}

// Applies a channel-diagonal matrix to a 2-leaf state's pairwise amplitudes.
FusionState apply_diagonal(const FusionState& s, const CMatrix& m) {
  auto [basis, amps] = pairwise_amplitudes(s);
  for (int k = 0; k < (int)amps.size(); ++k) amps[k] *= m(k, k);
  return state_from_pairwise(s.theory(), s.leaves(), amps);
}

}  // namespace

TEST(Stump, IdentityAtVacuumCharge) {
  for (int n = 1; n <= 3; ++n) {
    SkeletalData th = build_tambara_yamagami(n, +1);
    for (StumpSide side : {StumpSide::A, StumpSide::B}) {
      CMatrix m = stump_matrix(th, 0, side);
      EXPECT_LT(m.max_abs_diff(CMatrix::identity(m.rows())), 1e-12);
    }
  }
}

TEST(Stump, IsingChargeOneIsPauliZ) {
  // A_1 = B_1 = Z in the built Ising gauge
  for (double kappa : {+1.0, -1.0}) {
    SkeletalData th = build_ising(kappa);
    CMatrix z(2, 2);
    z(0, 0) = 1;
    z(1, 1) = -1;
    EXPECT_LT(stump_matrix(th, 1, StumpSide::A).max_abs_diff(z), 1e-12);
    EXPECT_LT(stump_matrix(th, 1, StumpSide::B).max_abs_diff(z), 1e-12);
  }
}

TEST(Stump, GaugeGCoefficientsMatchFSymbols) {
  // in the constructed gauge the B_h diagonal equals kappa_q d_q f_{kh}
  for (int n = 1; n <= 3; ++n)
    for (double kappa : {+1.0, -1.0}) {
      SkeletalData th = build_tambara_yamagami(n, kappa);
      int q = q_label(th);
      double dq = std::sqrt((double)(1 << n));
      const FBlock& fq = th.fblock(q, q, q, q);
      for (int h = 0; h < (1 << n); ++h) {
        CMatrix b = stump_matrix(th, h, StumpSide::B);
        for (int k = 0; k < (1 << n); ++k)
          EXPECT_NEAR(std::abs(b(k, k) - kappa * dq * fq.m(k, h)), 0, 1e-12);
      }
    }
}

TEST(Stump, InverseLawUnderRandomGauges) {
  Rng rng(2718);
  for (int n = 1; n <= 3; ++n) {
    SkeletalData base = build_tambara_yamagami(n, n % 2 ? +1.0 : -1.0);
    for (int trial = 0; trial < 50; ++trial) {
      SkeletalData th = gauge_transform(base, random_gauge(base.rules, rng));
      for (int h = 0; h < (1 << n); ++h) {
        CMatrix prod = stump_matrix(th, h, StumpSide::A) * stump_matrix(th, h, StumpSide::B);
        EXPECT_LT(prod.max_abs_diff(CMatrix::identity(prod.rows())), 1e-9);
      }
    }
  }
  // also for the cyclic (unbraidable) ring: the lemma holds in any gauge
  SkeletalData z3 = build_tambara_yamagami_cyclic(3, +1);
  SkeletalData tz3 = gauge_transform(z3, random_gauge(z3.rules, rng));
  for (int h = 0; h < 3; ++h) {
    CMatrix prod = stump_matrix(tz3, h, StumpSide::A) * stump_matrix(tz3, h, StumpSide::B);
    EXPECT_LT(prod.max_abs_diff(CMatrix::identity(prod.rows())), 1e-12);
  }
}

TEST(Stump, UnitaryAndHermitianInGaugeG) {
  for (int n = 1; n <= 3; ++n) {
    SkeletalData th = build_tambara_yamagami(n, +1);
    for (int h = 0; h < (1 << n); ++h) {
      CMatrix a = stump_matrix(th, h, StumpSide::A);
      CMatrix b = stump_matrix(th, h, StumpSide::B);
      EXPECT_LT(a.unitarity_defect(), 1e-12);
      EXPECT_LT(a.max_abs_diff(a.dagger()), 1e-12);  // Hermitian in gauge G
      EXPECT_LT(a.max_abs_diff(b), 1e-12);           // A_h = B_hbar = B_h over Z_2^n
    }
  }
}

TEST(Stump, MatrixMatchesTransferScript) {
  // the pair-create/fuse realisation acts as the stump matrix up to a global
  // phase, in the built gauge and in random gauges
  Rng rng(99);
  for (int n = 1; n <= 2; ++n) {
    SkeletalData base = build_tambara_yamagami(n, -1);
    for (int variant = 0; variant < 3; ++variant) {
      SkeletalData th =
          variant == 0 ? base : gauge_transform(base, random_gauge(base.rules, rng));
      for (int h = 0; h < (1 << n); ++h) {
        FusionState s = random_pair_state(th, rng);
        FusionState script = transfer_charge(s, 0, h);
        FusionState via_a = apply_diagonal(s, stump_matrix(th, h, StumpSide::A));
        FusionState via_b = apply_diagonal(s, stump_matrix(th, h, StumpSide::B));
        bool matches = phase_equal(script, via_a, Tolerance(1e-9)) ||
                       phase_equal(script, via_b, Tolerance(1e-9));
        EXPECT_TRUE(matches) << "n=" << n << " h=" << h << " variant=" << variant;
      }
    }
  }
}

TEST(Stump, BraidedUnitarityFromSolver) {
  auto sols = solve_hexagon(build_tambara_yamagami(2, +1), 13, 60);
  ASSERT_GE(sols.size(), 1u);
  for (int h = 0; h < 4; ++h) {
    CMatrix a = stump_matrix(sols.front().theory, h, StumpSide::A);
    EXPECT_LT(a.unitarity_defect(), 1e-9);
  }
}

TEST(Stump, RejectsNonGroupLabels) {
  SkeletalData th = build_tambara_yamagami(2, +1);
  EXPECT_THROW(stump_matrix(th, q_label(th), StumpSide::A), StructuralError);
  EXPECT_THROW(stump_matrix(th, -1, StumpSide::A), StructuralError);
}
