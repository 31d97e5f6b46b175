#include <gtest/gtest.h>

#include "anyonsim/protocols.hpp"
#include "anyonsim/solver.hpp"
#include "anyonsim/theories.hpp"

using namespace anyonsim;

namespace {

const SkeletalData& ising() {
  static SkeletalData th = solve_hexagon(build_ising(+1), 31, 60).front().theory;
  return th;
}

const SkeletalData& ty(int n) {
  static std::map<int, SkeletalData> cache;
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, solve_hexagon(build_tambara_yamagami(n, +1), 31, 80).front().theory)
             .first;
  return it->second;
}

std::vector<cplx> random_amps(int dim, Rng& rng) {
  std::vector<cplx> v(dim);
  double norm = 0;
  for (auto& a : v) {
    a = cplx(rng.gaussian(), rng.gaussian());
    norm += std::norm(a);
  }
  for (auto& a : v) a /= std::sqrt(norm);
  return v;
}

std::vector<int> digits(int value, int base, int count) {
  std::vector<int> out(count);
  for (int k = count - 1; k >= 0; --k) {
    out[k] = value % base;
    value /= base;
  }
  return out;
}

}  // namespace

TEST(MakeEdit, BellAmplitudes) {
  // Ising in the built gauge: (|00> + |11>)/sqrt(2)
  FusionState bell = make_edit(ising());
  auto [basis, amps] = pairwise_amplitudes(bell);
  int nonzero = 0;
  for (const cplx& a : amps)
    if (std::abs(a) > 1e-12) {
      EXPECT_NEAR(std::abs(a - cplx(1 / std::sqrt(2.0), 0)), 0, 1e-12);
      ++nonzero;
    }
  EXPECT_EQ(nonzero, 2);

  // TY(Z_2^2): 4 channels, each |eta_g| = 1/2, and uniform reduced outcome
  // distribution of either half
  FusionState bell2 = make_edit(ty(2));
  auto [b2, a2] = pairwise_amplitudes(bell2);
  int nz = 0;
  for (const cplx& a : a2)
    if (std::abs(a) > 1e-12) {
      EXPECT_NEAR(std::abs(a), 0.5, 1e-12);
      ++nz;
    }
  EXPECT_EQ(nz, 4);
  for (int pos : {0, 2}) {
    auto masses = fusion_masses(bell2, pos);
    for (auto& [c, m] : masses)
      if (c < 4) EXPECT_NEAR(m, 0.25, 1e-12);
  }
}

TEST(TeleportBraided, SingleQubitAllOutcomes) {
  Rng rng(404);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> phi = random_amps(2, rng);
    double mass = 0;
    for (int rec = 0; rec < 4; ++rec) {
      ForcedRecord fr{digits(rec, 2, 2)};  // (z_1, x_1)
      TeleportTranscript tr = teleport_braided(ising(), 1, phi, fr);
      EXPECT_NEAR(tr.record_probability, 0.25, 1e-12);
      EXPECT_LT(tr.pre_correction_deviation, 1e-9);
      EXPECT_GE(tr.fidelity, 1.0 - 1e-9);
      mass += tr.record_probability;
    }
    EXPECT_NEAR(mass, 1.0, 1e-12);
  }
}

TEST(TeleportBraided, NoCorrectionNeededForZeroOutcomes) {
  Rng rng(7);
  std::vector<cplx> phi = random_amps(2, rng);
  TeleportTranscript tr = teleport_braided(ising(), 1, phi, ForcedRecord{{0, 0}});
  EXPECT_TRUE(tr.correction.empty());
  EXPECT_GE(tr.fidelity, 1.0 - 1e-9);
}

TEST(TeleportBraided, TwoQubitsExhaustive) {
  Rng rng(1234);
  const int p = 2;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<cplx> phi = random_amps(1 << p, rng);
    double mass = 0;
    for (int rec = 0; rec < (1 << (2 * p)); ++rec) {
      ForcedRecord fr{digits(rec, 2, 2 * p)};
      TeleportTranscript tr = teleport_braided(ising(), p, phi, fr);
      EXPECT_NEAR(tr.record_probability, std::pow(4.0, -p), 1e-12);
      EXPECT_LT(tr.pre_correction_deviation, 1e-9) << "record " << rec;
      EXPECT_GE(tr.fidelity, 1.0 - 1e-9) << "record " << rec;
      mass += tr.record_probability;
    }
    EXPECT_NEAR(mass, 1.0, 1e-12);
  }
}

TEST(TeleportBraided, WorksForAllEightTheories) {
  Rng rng(5150);
  std::vector<cplx> phi = random_amps(2, rng);
  for (double kappa : {+1.0, -1.0}) {
    auto sols = solve_hexagon(build_ising(kappa), 17, 60);
    ASSERT_EQ(sols.size(), 4u);
    for (const auto& sol : sols)
      for (int rec = 0; rec < 4; ++rec) {
        TeleportTranscript tr = teleport_braided(sol.theory, 1, phi, ForcedRecord{digits(rec, 2, 2)});
        EXPECT_GE(tr.fidelity, 1.0 - 1e-9);
        EXPECT_LT(tr.pre_correction_deviation, 1e-9);
      }
  }
}

TEST(TeleportBraided, SeededRunsAreReproducible) {
  Rng rng(888);
  std::vector<cplx> phi = random_amps(4, rng);
  TeleportTranscript a = teleport_braided(ising(), 2, phi, std::nullopt, 42);
  TeleportTranscript b = teleport_braided(ising(), 2, phi, std::nullopt, 42);
  EXPECT_EQ(a.outcomes, b.outcomes);
  EXPECT_EQ(a.fidelity, b.fidelity);
  EXPECT_GE(a.fidelity, 1.0 - 1e-9);
}

TEST(TeleportBraided, RequiresBraiding) {
  SkeletalData funly = build_ising(+1);
  Rng rng(1);
  std::vector<cplx> phi = random_amps(2, rng);
  EXPECT_THROW(teleport_braided(funly, 1, phi, ForcedRecord{{0, 0}}),
               UnsupportedOperationError);
}

TEST(TeleportBraidfree, SingleQuditAllOutcomes) {
  for (int n : {1, 2}) {
    const SkeletalData& th = build_tambara_yamagami(n, +1);
    const int d = 1 << n;
    Rng rng(606 + n);
    std::vector<cplx> phi = random_amps(d, rng);
    double mass = 0;
    for (int rec = 0; rec < d * d; ++rec) {
      ForcedRecord fr{digits(rec, d, 2)};
      TeleportTranscript tr = teleport_braidfree(th, 2, phi, fr);
      EXPECT_NEAR(tr.record_probability, 1.0 / (d * d), 1e-12);
      for (double pr : tr.outcome_probabilities) EXPECT_NEAR(pr, 1.0 / d, 1e-12);
      EXPECT_GE(tr.fidelity, 1.0 - 1e-9) << "n=" << n << " rec=" << rec;
      EXPECT_EQ(tr.braid_calls, 0);
      mass += tr.record_probability;
    }
    EXPECT_NEAR(mass, 1.0, 1e-12);
  }
}

TEST(TeleportBraidfree, ZeroOutcomesNeedNoCorrection) {
  const SkeletalData& th = build_tambara_yamagami(1, +1);
  Rng rng(11);
  std::vector<cplx> phi = random_amps(2, rng);
  TeleportTranscript tr = teleport_braidfree(th, 2, phi, ForcedRecord{{0, 0}});
  EXPECT_TRUE(tr.correction.empty());
  EXPECT_GE(tr.fidelity, 1.0 - 1e-9);
}

TEST(TeleportBraidfree, FourAnyonsExhaustive) {
  const SkeletalData& th = build_tambara_yamagami(1, +1);
  Rng rng(77);
  std::vector<cplx> phi = random_amps(4, rng);
  double mass = 0;
  for (int rec = 0; rec < 16; ++rec) {
    ForcedRecord fr{digits(rec, 2, 4)};
    TeleportTranscript tr = teleport_braidfree(th, 4, phi, fr);
    EXPECT_NEAR(tr.record_probability, 1.0 / 16, 1e-12);
    EXPECT_GE(tr.fidelity, 1.0 - 1e-9) << "rec=" << rec;
    EXPECT_EQ(tr.braid_calls, 0);
    mass += tr.record_probability;
  }
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(TeleportBraidfree, RejectsOddN) {
  const SkeletalData& th = build_tambara_yamagami(1, +1);
  EXPECT_THROW(teleport_braidfree(th, 3, {}, std::nullopt), std::invalid_argument);
}

TEST(SdcBraided, AllFourEncodings) {
  for (int i : {0, 1})
    for (int j : {0, 1}) {
      SdcTranscript tr = sdc_braided(ising(), i, j);
      EXPECT_TRUE(tr.success) << "i=" << i << " j=" << j << " got (" << tr.decoded_i << ","
                              << tr.decoded_j << ")";
      EXPECT_NEAR(tr.branch_probability, 1.0, 1e-12);
      // footnote: the right-fusion decode differs by exactly (-1)^{ij}
      cplx want = (i && j) ? cplx(-1, 0) : cplx(1, 0);
      EXPECT_NEAR(std::abs(tr.alt_decode_phase - want), 0, 1e-9);
    }
}

TEST(SdcBraided, EncodedStateMatchesPaperForm) {
  // after encoding (i,j) the e-dit is (1/sqrt2) sum_k (-1)^{jk} |k, k+i>
  for (int i : {0, 1})
    for (int j : {0, 1}) {
      OpCounters counters;
      const SkeletalData& th = ising();
      FusionState s = make_edit(th, &counters);
      if (j) s = monodromy_pair(s, 2, +1, &counters);
      if (i) {
        s = pair_create(s, 4, 2, &counters);
        s = monodromy_pair(s, 3, +1, &counters);
        s = fuse_outcome(s, 4, 1, &counters).state;
      }
      // expected over pairwise labelings of (q,q,q,q[,1]): a = channel(0,1),
      // b = channel(2,3) with b = a + i and coefficient (-1)^{ja}
      std::vector<int> leaves = s.leaves();
      auto [basis, amps] = pairwise_amplitudes(s);
      auto canon = basis.shape.canonical_order();
      std::vector<cplx> expect(amps.size(), cplx(0, 0));
      for (int idx = 0; idx < (int)amps.size(); ++idx) {
        const Labeling& lab = basis.basis.labelings[idx];
        int a = lab[canon[0]];
        int b = -1;
        for (size_t slot = 0; slot < lab.size(); ++slot) {
          auto sp = basis.shape.spans()[slot];
          if (sp == std::make_pair(2, 3)) b = lab[slot];
        }
        if (b == (a ^ i)) expect[idx] = (a && j) ? cplx(-1, 0) : cplx(1, 0);
      }
      double n2 = 0;
      for (auto& e : expect) n2 += std::norm(e);
      for (auto& e : expect) e /= std::sqrt(n2);
      FusionState expect_state = state_from_pairwise(th, leaves, expect);
      EXPECT_TRUE(phase_equal(s, expect_state, Tolerance(1e-9))) << "i=" << i << " j=" << j;
    }
}

TEST(SdcBraidfree, ExhaustiveDitsAndSingleBranch) {
  for (int n : {1, 2}) {
    const SkeletalData& th = build_tambara_yamagami(n, +1);
    const int d = 1 << n;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        SdcTranscript tr = sdc_braidfree(th, i, j);
        EXPECT_TRUE(tr.success) << "n=" << n << " i=" << i << " j=" << j;
        EXPECT_NEAR(tr.branch_probability, 1.0, 1e-12);
        EXPECT_EQ(tr.braid_calls, 0);
        // the only permissible labelling is (x,y) = (i,j)
        FusionState enc = encode_braidfree(th, i, j);
        for (auto& [x, y, mass] : sdc_branch_masses(enc, th)) {
          if (x == i && y == j)
            EXPECT_NEAR(mass, 1.0, 1e-12);
          else
            EXPECT_LT(mass, 1e-12);
        }
      }
  }
}

TEST(PauliBraidfree, TraceCriterion) {
  const SkeletalData& th = build_ising(+1);
  CMatrix paulis[4] = {CMatrix::identity(2), CMatrix(2, 2), CMatrix(2, 2), CMatrix(2, 2)};
  paulis[1](0, 1) = 1;
  paulis[1](1, 0) = 1;  // X
  paulis[2](0, 1) = cplx(0, -1);
  paulis[2](1, 0) = cplx(0, 1);  // Y
  paulis[3](0, 0) = 1;
  paulis[3](1, 1) = -1;  // Z
  std::set<int> matched;
  for (int g1 : {0, 1})
    for (int g2 : {0, 1}) {
      CMatrix u = pauli_braidfree(th, g1, g2);
      int hits = 0, which = -1;
      for (int k = 0; k < 4; ++k) {
        CMatrix prod = u.dagger() * paulis[k];
        cplx tr_val = prod(0, 0) + prod(1, 1);
        if (std::abs(std::abs(tr_val) - 2.0) < 1e-9) {
          ++hits;
          which = k;
        } else {
          EXPECT_LT(std::abs(tr_val), 1e-9);
        }
      }
      EXPECT_EQ(hits, 1);
      matched.insert(which);
    }
  EXPECT_EQ(matched.size(), 4u);  // bijection onto {I,X,Y,Z}

  // anchor individual cases: (0,0) -> I, (1,0) -> Z, (0,1) -> X
  EXPECT_LT(pauli_braidfree(th, 0, 0).max_abs_diff(paulis[0]), 1e-12);
  EXPECT_LT(pauli_braidfree(th, 1, 0).max_abs_diff(paulis[3]), 1e-12);
  EXPECT_LT(pauli_braidfree(th, 0, 1).max_abs_diff(paulis[1]), 1e-12);
}

TEST(GaugeInvariance, ProtocolsSurviveRandomGauges) {
  Rng rng(3141);
  std::vector<cplx> phi = random_amps(2, rng);
  for (int trial = 0; trial < 5; ++trial) {
    GaugeTransform g = random_gauge(ising().rules, rng);
    SkeletalData th = gauge_transform(ising(), g);
    for (int rec = 0; rec < 4; ++rec) {
      TeleportTranscript tr = teleport_braided(th, 1, phi, ForcedRecord{digits(rec, 2, 2)});
      EXPECT_NEAR(tr.record_probability, 0.25, 1e-12);
      EXPECT_GE(tr.fidelity, 1.0 - 1e-9);
    }
    for (int i : {0, 1})
      for (int j : {0, 1}) EXPECT_TRUE(sdc_braided(th, i, j).success);
  }
  for (int trial = 0; trial < 5; ++trial) {
    SkeletalData base = build_tambara_yamagami(2, +1);
    SkeletalData th = gauge_transform(base, random_gauge(base.rules, rng));
    std::vector<cplx> phi4 = random_amps(4, rng);
    for (int rec = 0; rec < 16; ++rec) {
      TeleportTranscript tr = teleport_braidfree(th, 2, phi4, ForcedRecord{digits(rec, 4, 2)});
      EXPECT_NEAR(tr.record_probability, 1.0 / 16, 1e-12);
      EXPECT_GE(tr.fidelity, 1.0 - 1e-9);
    }
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) EXPECT_TRUE(sdc_braidfree(th, i, j).success);
  }
}

TEST(BasisIndependence, AliceDistributionViaTwoFMovePaths) {
  // the outcome distribution of the first decode measurement is the same
  // whether computed in the canonical basis or after a detour through a
  // different fusion basis
  const SkeletalData& th = ising();
  Rng rng(99);
  std::vector<cplx> phi = random_amps(2, rng);
  FusionState joint = state_from_pairwise(th, {2, 2}, phi);
  joint = detail::insert_edit(joint, 2, nullptr);
  auto direct = fusion_masses(joint, 1);
  // detour: recouple (0..2) forward and back before measuring
  FusionState detour = f_move(joint, 0, 2, true);
  detour = f_move(detour, 0, 2, false);
  auto via = fusion_masses(detour, 1);
  for (auto& [c, m] : direct) EXPECT_NEAR(m, via.at(c), 1e-9);
}
