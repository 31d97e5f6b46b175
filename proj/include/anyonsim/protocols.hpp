#pragma once

// Protocol layer: e-dit generation, braided Ising teleportation (single and
// multi qubit) with the noughts-and-crosses correction model, braided
// superdense coding, and the braid-free Tambara-Yamagami counterparts.
//
// Conventions used throughout (leaves are 0-based):
//   * Alice's state anyons start at the left; e-dits are created between her
//     block and Bob's accumulated block, rightmost qudit first.
//   * Each teleportation round fuses Alice's rightmost anyon with the first
//     e-dit anyon (outcome z_j resp. g_{2m}), absorbs it leftward, then fuses
//     with the second e-dit anyon (outcome x_j resp. g_{2m-1}), which is
//     absorbed into the next state anyon except in the final round.
//   * Dits are sent through the lexicographic bijection f(g) = word value.

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "anyonsim/state.hpp"

namespace anyonsim {

// ---------------------------------------------------------------------------
// e-dit generation (Charlie)
// ---------------------------------------------------------------------------

// Four anyons (q,q,q,q) at total charge 0: two nested pair creations followed
// by recoupling into the pairwise basis, giving sum_e eta_e |e,e> with
// |eta_e| = d^{-1/2}.
inline FusionState make_edit(const SkeletalData& th, OpCounters* counters = nullptr) {
  int q = q_label(th);
  FusionState outer = pair_create(FusionState::vacuum(th), 0, q, counters);
  return pair_create(outer, 1, q, counters);
}

// Measures an adjacent pair whose outcome the protocol proves deterministic:
// takes the maximum-mass channel and returns it with its exact probability.
inline MeasureResult fuse_dominant(const FusionState& s, int i, OpCounters* counters = nullptr) {
  auto masses = fusion_masses(s, i);
  int best = -1;
  double bm = -1;
  for (auto& [ch, m] : masses)
    if (m > bm) {
      bm = m;
      best = ch;
    }
  return fuse_outcome(s, i, best, counters);
}

// ---------------------------------------------------------------------------
// Noughts-and-crosses model for X-error bookkeeping
// ---------------------------------------------------------------------------

struct OxDiagram {
  int p = 0;
  std::set<int> crosses;  // sites 1..p carrying an X-error
  bool edge_error = false;
};

// Diagram of X-errors accumulated by the measurement record x_1..x_p, by the
// substring rules: an interior run of 1s over x_j..x_{j+l} (j > 1) puts
// crosses at sites j-1 and j+l; a run starting at x_1 puts a single cross
// (the edge error) at its final site.
inline OxDiagram ox_from_bits(const std::vector<int>& x) {
  OxDiagram d;
  d.p = (int)x.size();
  d.edge_error = !x.empty() && x[0] == 1;
  int j = 0;  // 0-based scan
  while (j < d.p) {
    if (x[j] == 0) {
      ++j;
      continue;
    }
    int end = j;
    while (end + 1 < d.p && x[end + 1] == 1) ++end;
    if (j == 0) {
      d.crosses.insert(end + 1);  // edge case: single cross at the run's end
    } else {
      d.crosses.insert(j);  // site j-1 in 1-based numbering
      d.crosses.insert(end + 1);
    }
    j = end + 1;
  }
  return d;
}

// Vertex operator v_j = X_{j-1} X_j on the diagram; sites 0 and p+1 are
// ancillary and lie outside the picture.
inline void ox_apply_vertex(OxDiagram& d, int j) {
  for (int site : {j - 1, j}) {
    if (site < 1 || site > d.p) continue;
    if (d.crosses.count(site))
      d.crosses.erase(site);
    else
      d.crosses.insert(site);
  }
}

// Independent oracle: accumulate the diagram by applying v_j for every set
// bit right to left (the time order of hat-x_1 ... hat-x_p).
inline OxDiagram ox_toggle_oracle(const std::vector<int>& x) {
  OxDiagram d;
  d.p = (int)x.size();
  d.edge_error = !x.empty() && x[0] == 1;
  for (int j = d.p; j >= 1; --j)
    if (x[j - 1]) ox_apply_vertex(d, j);
  return d;
}

// ---------------------------------------------------------------------------
// Correction braidwords
// ---------------------------------------------------------------------------

struct BraidwordOp {
  enum Kind { sigma_squared, ancilla_create_left } kind = sigma_squared;
  int index = 0;  // sigma index in the paper's numbering over Bob's anyons

  std::string to_string() const {
    if (kind == ancilla_create_left) return "a_l+";
    std::ostringstream os;
    os << "sigma_" << index << "^2";
    return os.str();
  }
};

// Generic prescription (hat-x_1..hat-x_p)(hat-z_1..hat-z_p) in application
// order: the z-layer first, then the x-layer right to left, with a
// left-boundary pair creation inserted before any use of sigma_0.
inline std::vector<BraidwordOp> correction_braidword(const std::vector<int>& x,
                                                     const std::vector<int>& z) {
  if (x.size() != z.size()) throw std::invalid_argument("correction_braidword: length mismatch");
  const int p = (int)x.size();
  std::vector<BraidwordOp> word;
  for (int j = p; j >= 1; --j)
    if (z[j - 1]) word.push_back({BraidwordOp::sigma_squared, 2 * j - 1});
  for (int j = p; j >= 1; --j) {
    if (!x[j - 1]) continue;
    if (j == 1) word.push_back({BraidwordOp::ancilla_create_left, 0});
    word.push_back({BraidwordOp::sigma_squared, 2 * j - 2});
  }
  return word;
}

// ---------------------------------------------------------------------------
// Transcripts
// ---------------------------------------------------------------------------

struct TeleportTranscript {
  std::uint64_t seed = 0;
  bool seeded = false;  // false when the outcome record was forced
  bool braided = true;
  int n_qudits = 0;  // p (braided) or N/2 (braid-free)
  std::vector<cplx> input_pairwise;
  std::vector<int> outcomes;  // z_p,x_p,..,z_1,x_1 (braided) or g_N..g_1
  std::vector<int> dits_sent;
  std::vector<std::string> correction;
  std::vector<double> outcome_probabilities;  // per measurement, in order
  double record_probability = 1.0;
  double pre_correction_deviation = -1.0;  // braided mode only
  std::vector<cplx> output_pairwise;       // Bob's block after correction
  double fidelity = 0.0;
  long braid_calls = 0;
};

struct SdcTranscript {
  std::uint64_t seed = 0;
  bool braided = true;
  int dit_i = 0, dit_j = 0;
  int decoded_i = -1, decoded_j = -1;
  bool success = false;
  double branch_probability = 0.0;
  cplx alt_decode_phase = cplx(0, 0);  // braided: phase of the right-fusion decode
  long braid_calls = 0;
};

// ---------------------------------------------------------------------------
// Shared cascade (Alice's operations)
// ---------------------------------------------------------------------------

struct ForcedRecord {
  std::vector<int> outcomes;  // temporal order: first measurement first
};

namespace detail {

// One e-dit with Alice's halves at positions gap, gap+1 and Bob's at gap+2,
// gap+3.
inline FusionState insert_edit(const FusionState& s, int gap, OpCounters* counters) {
  int q = q_label(s.theory());
  FusionState t = pair_create(s, gap, q, counters);
  return pair_create(t, gap + 1, q, counters);
}

struct CascadeResult {
  FusionState state;  // leaves: [leftover abelian][Bob's anyons]
  std::vector<int> outcomes;
  std::vector<double> probabilities;
  double record_probability = 1.0;
};

// Alice's measurement cascade for an N-anyon input (N even).  `forced`
// supplies the outcome record in temporal order; otherwise the rng samples.
// Returns nullopt when a forced branch carries no mass.
inline std::optional<CascadeResult> run_cascade(FusionState s, int n_anyons,
                                                const std::vector<int>* forced, Rng* rng,
                                                OpCounters* counters) {
  const int q = q_label(s.theory());
  CascadeResult res{std::move(s), {}, {}, 1.0};
  int next_forced = 0;
  auto measure = [&](int pos) -> bool {
    if (forced) {
      int want = (*forced)[next_forced++];
      auto [prob, state] = fuse_forced(res.state, pos, want, counters);
      res.outcomes.push_back(want);
      res.probabilities.push_back(prob);
      res.record_probability *= prob;
      if (!state) return false;
      res.state = std::move(*state);
      return true;
    }
    MeasureResult m = fuse_measure(res.state, pos, *rng, counters);
    res.outcomes.push_back(m.outcome);
    res.probabilities.push_back(m.probability);
    res.record_probability *= m.probability;
    res.state = std::move(m.state);
    return true;
  };
  for (int m = n_anyons / 2; m >= 1; --m) {
    int r = 2 * m;  // Alice's remaining anyon count
    res.state = insert_edit(res.state, r, counters);
    if (!measure(r - 1)) return std::nullopt;  // z-type outcome
    res.state = fuse_outcome(res.state, r - 2, q, counters).state;
    if (!measure(r - 2)) return std::nullopt;  // x-type outcome
    if (m > 1) res.state = fuse_outcome(res.state, r - 3, q, counters).state;
  }
  return res;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Braided Ising teleportation
// ---------------------------------------------------------------------------

// Expected pre-correction state (x)_j Z^{z_j} X^{x_j + x_{j+1}} |phi> in the
// pairwise basis of 2p Ising anyons.
inline std::vector<cplx> apply_pauli_layer(const SkeletalData& th, int p,
                                           const std::vector<cplx>& phi,
                                           const std::vector<int>& xbits,
                                           const std::vector<int>& zbits) {
  std::vector<int> leaves(2 * p, q_label(th));
  FusionBasis basis = enumerate_basis(th, leaves);
  auto canon = basis.shape.canonical_order();
  // canonical slot order: pair 1, spine 2..p, pair 2..p
  auto pair_slot = [&](int j) { return j == 1 ? canon[0] : canon[p + j - 2]; };
  auto spine_slot = [&](int s) { return canon[s - 1]; };
  std::vector<cplx> out(basis.dim(), cplx(0, 0));
  for (int idx = 0; idx < basis.dim(); ++idx) {
    const Labeling& lab = basis.basis.labelings[idx];
    Labeling img = lab;
    double sign = 1.0;
    int shift_acc = 0;
    for (int j = 1; j <= p; ++j) {
      int e = xbits[j - 1] ^ (j < p ? xbits[j] : 0);
      int kj = lab[pair_slot(j)] ^ e;
      img[pair_slot(j)] = (std::uint8_t)kj;
      if (zbits[j - 1] && kj) sign = -sign;
      shift_acc ^= e;
      if (j >= 2) img[spine_slot(j)] = (std::uint8_t)(lab[spine_slot(j)] ^ shift_acc);
    }
    int pos = basis.basis.find(pack_labeling(basis.shape, canon, img));
    if (pos < 0) throw StructuralError("apply_pauli_layer: image left the basis");
    out[pos] += sign * phi[idx];
  }
  return out;
}

inline TeleportTranscript teleport_braided(const SkeletalData& th, int p,
                                           const std::vector<cplx>& input_pairwise,
                                           const std::optional<ForcedRecord>& forced,
                                           std::uint64_t seed = 0) {
  if (!th.has_r) throw UnsupportedOperationError("teleport_braided: theory has no R-symbols");
  if (p < 1) throw std::invalid_argument("teleport_braided: p must be >= 1");
  const int q = q_label(th);
  OpCounters counters;
  TeleportTranscript tr;
  tr.braided = true;
  tr.n_qudits = p;
  tr.seed = seed;
  tr.seeded = !forced.has_value();
  tr.input_pairwise = input_pairwise;

  std::vector<int> leaves(2 * p, q);
  FusionState phi = state_from_pairwise(th, leaves, input_pairwise);
  Rng rng(seed);
  auto cascade = detail::run_cascade(phi, 2 * p, forced ? &forced->outcomes : nullptr,
                                     forced ? nullptr : &rng, &counters);
  if (!cascade) {
    tr.outcomes = forced->outcomes;
    tr.record_probability = 0.0;
    return tr;
  }
  tr.outcomes = cascade->outcomes;
  tr.outcome_probabilities = cascade->probabilities;
  tr.record_probability = cascade->record_probability;
  tr.dits_sent = tr.outcomes;

  // record layout: z_p, x_p, ..., z_1, x_1
  std::vector<int> zbits(p), xbits(p);
  for (int m = 0; m < p; ++m) {
    zbits[p - 1 - m] = tr.outcomes[2 * m];
    xbits[p - 1 - m] = tr.outcomes[2 * m + 1];
  }

  FusionState sys = cascade->state;  // leaves: [x_1 leftover][2p q's]
  {
    auto [lead, bob] = detach_leading_abelian(sys);
    (void)lead;
    std::vector<cplx> expect = apply_pauli_layer(th, p, input_pairwise, xbits, zbits);
    FusionState expect_state = state_from_pairwise(th, leaves, expect);
    // phase-minimised distance, computed entrywise to avoid cancellation
    cplx ip = inner_product(expect_state, bob);
    cplx lambda = std::abs(ip) > 1e-15 ? std::conj(ip) / std::abs(ip) : cplx(1, 0);
    FusionState bob_left = engine::to_left_nested(bob);
    FusionState exp_left = engine::to_left_nested(expect_state);
    double dev2 = 0;
    for (int k = 0; k < exp_left.dim(); ++k)
      dev2 += std::norm(exp_left.amplitudes()[k] - lambda * bob_left.amplitudes()[k]);
    tr.pre_correction_deviation = std::sqrt(dev2);
  }

  // correction step: execute the generic braidword on Bob's block
  std::vector<BraidwordOp> word = correction_braidword(xbits, zbits);
  bool have_ancilla = false;
  for (const BraidwordOp& op : word) {
    tr.correction.push_back(op.to_string());
    if (op.kind == BraidwordOp::ancilla_create_left) {
      sys = pair_create(sys, 1, q, &counters);
      have_ancilla = true;
      continue;
    }
    int offset = have_ancilla ? 3 : 1;  // position of Bob's anyon b_1
    sys = monodromy_pair(sys, offset + op.index - 1, +1, &counters);
  }

  FusionState reference = state_from_pairwise(th, leaves, input_pairwise);
  if (have_ancilla) {
    sys = fuse_outcome(sys, 1, 1, &counters).state;  // ancilla pair carries charge 1
    FusionState ref_full = pair_create(reference, 0, 1);
    tr.fidelity = std::abs(inner_product(ref_full, sys));
    auto [l1, rest] = detach_leading_abelian(sys);
    auto [l2, bob] = detach_leading_abelian(rest);
    tr.output_pairwise = pairwise_amplitudes(bob).second;
  } else {
    auto [lead, bob] = detach_leading_abelian(sys);
    if (lead != 0) throw InconsistentDataError("teleport_braided: unexpected leftover charge");
    tr.fidelity = std::abs(inner_product(reference, bob));
    tr.output_pairwise = pairwise_amplitudes(bob).second;
  }
  tr.braid_calls = counters.braids;
  return tr;
}

// ---------------------------------------------------------------------------
// Braid-free Tambara-Yamagami teleportation
// ---------------------------------------------------------------------------

inline TeleportTranscript teleport_braidfree(const SkeletalData& th, int n_anyons,
                                             const std::vector<cplx>& input_pairwise,
                                             const std::optional<ForcedRecord>& forced,
                                             std::uint64_t seed = 0) {
  if (n_anyons < 2 || n_anyons % 2 != 0)
    throw std::invalid_argument("teleport_braidfree: N must be even and >= 2");
  const int q = q_label(th);
  OpCounters counters;
  TeleportTranscript tr;
  tr.braided = false;
  tr.n_qudits = n_anyons / 2;
  tr.seed = seed;
  tr.seeded = !forced.has_value();
  tr.input_pairwise = input_pairwise;

  std::vector<int> leaves(n_anyons, q);
  FusionState phi = state_from_pairwise(th, leaves, input_pairwise);
  Rng rng(seed);
  auto cascade = detail::run_cascade(phi, n_anyons, forced ? &forced->outcomes : nullptr,
                                     forced ? nullptr : &rng, &counters);
  if (!cascade) {
    tr.outcomes = forced->outcomes;
    tr.record_probability = 0.0;
    return tr;
  }
  tr.outcomes = cascade->outcomes;  // g_N, g_{N-1}, ..., g_1
  tr.outcome_probabilities = cascade->probabilities;
  tr.record_probability = cascade->record_probability;
  tr.dits_sent = tr.outcomes;  // f(g) = word value of g

  auto g = [&](int k) { return tr.outcomes[n_anyons - k]; };
  const int p = n_anyons / 2;
  auto bob_pos = [&](int local) { return 1 + local; };

  FusionState sys = cascade->state;  // leaves: [g_1 leftover][Bob's N q's]

  // z-layer: cancel the pair-channel stump on qudit m (charge g_{2m})
  for (int m = 1; m <= p; ++m) {
    int h = g(2 * m);
    if (h == 0) continue;
    std::ostringstream os;
    os << "transfer g=" << h << " across qudit " << m;
    tr.correction.push_back(os.str());
    sys = transfer_charge(sys, bob_pos(2 * (m - 1)), h, &counters);
  }
  // x-layer: telescope the channel-shift errors leftward, then eject g_1
  for (int m = p; m >= 2; --m) {
    int h = g(2 * m - 1);
    if (h == 0) continue;
    std::ostringstream os;
    os << "transfer g=" << h << " across qudits " << m - 1 << "|" << m;
    tr.correction.push_back(os.str());
    sys = transfer_charge(sys, bob_pos(2 * m - 3), h, &counters);
  }
  bool have_ancilla = false;
  if (g(1) != 0) {
    std::ostringstream os;
    os << "boundary pair g=" << g(1) << ", absorb right half into b_1";
    tr.correction.push_back(os.str());
    sys = pair_create(sys, 1, g(1), &counters);  // leaves: [g1][g1 g1][N]
    sys = fuse_outcome(sys, 2, q, &counters).state;
    have_ancilla = true;
  }

  FusionState reference = state_from_pairwise(th, leaves, input_pairwise);
  if (have_ancilla) {
    FusionState ref_full = pair_create(reference, 0, g(1));
    tr.fidelity = std::abs(inner_product(ref_full, sys));
    auto [l1, rest] = detach_leading_abelian(sys);
    auto [l2, bob] = detach_leading_abelian(rest);
    tr.output_pairwise = pairwise_amplitudes(bob).second;
  } else {
    auto [lead, bob] = detach_leading_abelian(sys);
    if (lead != 0) throw InconsistentDataError("teleport_braidfree: unexpected leftover charge");
    tr.fidelity = std::abs(inner_product(reference, bob));
    tr.output_pairwise = pairwise_amplitudes(bob).second;
  }
  tr.braid_calls = counters.braids;
  return tr;
}

// ---------------------------------------------------------------------------
// Superdense coding
// ---------------------------------------------------------------------------

// Braided Ising superdense coding of bits (i, j).  Bob holds the left pair
// (0,1), Alice the right pair (2,3).  Encoding: M^j = monodromy of her pair
// (Pauli-Z layer), then M^i = monodromy through an ancilla pair at the right
// boundary (Pauli-X layer).  Decoding fuses (1,2) -> j, absorbs the outcome
// and fuses again -> i; the right-fusion variant differs by (-1)^{ij}.
inline SdcTranscript sdc_braided(const SkeletalData& th, int i, int j) {
  if (!th.has_r) throw UnsupportedOperationError("sdc_braided: theory has no R-symbols");
  OpCounters counters;
  SdcTranscript tr;
  tr.braided = true;
  tr.dit_i = i;
  tr.dit_j = j;
  const int q = q_label(th);

  FusionState s = make_edit(th, &counters);
  if (j) s = monodromy_pair(s, 2, +1, &counters);
  if (i) {
    s = pair_create(s, 4, q, &counters);
    s = monodromy_pair(s, 3, +1, &counters);
    s = fuse_outcome(s, 4, 1, &counters).state;  // ancilla pair carries charge 1
  }

  auto decode = [&](bool fuse_right) {
    MeasureResult m1 = fuse_dominant(s, 1, &counters);
    int oj = m1.outcome;
    double prob = m1.probability;
    FusionState t = fuse_outcome(m1.state, fuse_right ? 1 : 0, q, &counters).state;
    MeasureResult m2 = fuse_dominant(t, 0, &counters);
    return std::tuple<int, int, double, FusionState>(m2.outcome, oj, prob * m2.probability,
                                                     m2.state);
  };
  auto [oi, oj, prob, final_std] = decode(false);
  tr.decoded_i = oi;
  tr.decoded_j = oj;
  tr.branch_probability = prob;
  tr.success = (oi == i && oj == j);

  auto [ai, aj, aprob, final_alt] = decode(true);
  if (ai == oi && aj == oj) tr.alt_decode_phase = relative_phase(final_alt, final_std);
  tr.braid_calls = counters.braids;
  return tr;
}

// Exact mass of every decode branch (y from the first fusion, x from the
// second); the protocols guarantee a single nonzero branch.
inline std::vector<std::tuple<int, int, double>> sdc_branch_masses(const FusionState& encoded,
                                                                   const SkeletalData& th) {
  const int q = q_label(th);
  std::vector<std::tuple<int, int, double>> out;
  for (int y = 0; y < q; ++y) {
    auto [py, sy] = fuse_forced(encoded, 1, y);
    if (!sy) {
      for (int x = 0; x < q; ++x) out.emplace_back(x, y, 0.0);
      continue;
    }
    FusionState t = fuse_outcome(*sy, 0, q).state;
    for (int x = 0; x < q; ++x) {
      auto [px, sx] = fuse_forced(t, 0, x);
      out.emplace_back(x, y, py * px);
    }
  }
  return out;
}

// Alice's braid-free encoding: transfer charge j across her pair, then attach
// charge i from a boundary pair creation.
inline FusionState encode_braidfree(const SkeletalData& th, int i, int j,
                                    OpCounters* counters = nullptr) {
  const int q = q_label(th);
  FusionState s = make_edit(th, counters);
  if (j) s = transfer_charge(s, 2, j, counters);
  if (i) {
    s = pair_create(s, 4, i, counters);          // (i, ibar) at the right boundary
    s = fuse_outcome(s, 3, q, counters).state;   // absorb i into her right anyon
  }
  return s;
}

// Braid-free d-ary superdense coding of dits (i, j) in G: the encoding uses
// only pair creations and fusions, the decode cascade lands on (i, j) with
// certainty.
inline SdcTranscript sdc_braidfree(const SkeletalData& th, int i, int j) {
  OpCounters counters;
  SdcTranscript tr;
  tr.braided = false;
  tr.dit_i = i;
  tr.dit_j = j;
  const int q = q_label(th);

  FusionState s = encode_braidfree(th, i, j, &counters);
  MeasureResult m1 = fuse_dominant(s, 1, &counters);
  tr.decoded_j = m1.outcome;
  FusionState t = fuse_outcome(m1.state, 0, q, &counters).state;
  MeasureResult m2 = fuse_dominant(t, 0, &counters);
  tr.decoded_i = m2.outcome;
  tr.branch_probability = m1.probability * m2.probability;
  tr.success = (tr.decoded_i == i && tr.decoded_j == j);
  tr.braid_calls = counters.braids;
  return tr;
}

// ---------------------------------------------------------------------------
// Braid-free Pauli gates
// ---------------------------------------------------------------------------

// U_{g1,g2} = F A_{g2} G A_{g1} on the Ising pair space; over
// (g1,g2) in Z_2 x Z_2 these realise {I, Z, X, Y} up to global phases.
inline CMatrix pauli_braidfree(const SkeletalData& th, int g1, int g2) {
  const int q = q_label(th);
  const CMatrix& f = th.fblock(q, q, q, q).m;
  CMatrix u = CMatrix::identity(f.rows());
  if (g1) u = stump_matrix(th, g1, StumpSide::A) * u;
  if (g2) u = f * stump_matrix(th, g2, StumpSide::A) * f.dagger() * u;
  return u;
}

}  // namespace anyonsim
