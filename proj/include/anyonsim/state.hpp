#pragma once

// Multi-anyon fusion states and the operations the protocols are built from:
// recoupling (F-moves), braiding, pair creation, fusion/measurement, stump
// operators and global-phase comparison.
//
// States are immutable values; every operation returns a new state.  After
// each public operation the state is held in the left-nested canonical tree
// unless the operation is itself a change of basis.

#include <cmath>
#include <optional>
#include <vector>

#include "anyonsim/rng.hpp"
#include "anyonsim/theories.hpp"
#include "anyonsim/tree.hpp"

namespace anyonsim {

// Instrumentation shared by a protocol run; the braid counter backs the
// "no braiding was used" assertions for the braid-free protocols.
struct OpCounters {
  long braids = 0;
  long fusions = 0;
  long pair_creations = 0;
  long f_moves = 0;
};

class FusionState {
 public:
  FusionState() = default;
  FusionState(const SkeletalData& th, std::vector<int> leaves, TreeShape shape,
              int total_charge = -1)
      : theory_(&th), leaves_(std::move(leaves)), shape_(std::move(shape)) {
    basis_ = TreeBasis::enumerate(th.rules, shape_, leaves_, total_charge);
    amp_.assign(basis_.labelings.size(), cplx(0, 0));
  }

  // Scalar state with no anyons.
  static FusionState vacuum(const SkeletalData& th) {
    FusionState s(th, {}, TreeShape{}, -1);
    s.amp_.assign(1, cplx(1, 0));
    return s;
  }

  const SkeletalData& theory() const { return *theory_; }
  const std::vector<int>& leaves() const { return leaves_; }
  int n_leaves() const { return (int)leaves_.size(); }
  const TreeShape& shape() const { return shape_; }
  const TreeBasis& basis() const { return basis_; }
  int dim() const { return (int)amp_.size(); }
  const std::vector<cplx>& amplitudes() const { return amp_; }
  std::vector<cplx>& amplitudes() { return amp_; }

  double norm() const {
    double s = 0;
    for (const cplx& a : amp_) s += std::norm(a);
    return std::sqrt(s);
  }

  int label_of(int enc_ref, const Labeling& lab) const {
    return shape_.is_leaf_ref(enc_ref) ? leaves_[enc_ref] : (int)lab[shape_.node_id(enc_ref)];
  }

 private:
  const SkeletalData* theory_ = nullptr;
  std::vector<int> leaves_;
  TreeShape shape_;
  TreeBasis basis_;
  std::vector<cplx> amp_;
};

namespace engine {

// One re-association move at internal node id v.
//   f_direction:  ((A B) C) -> (A (B C))   amp'_f = sum_e [F^{abc}_d]_{fe} amp_e
//   !f_direction: (A (B C)) -> ((A B) C)   amp'_e = sum_f [F^{abc}_d]*_{fe} amp_f
inline FusionState recouple(const FusionState& s, int v, bool f_direction,
                            OpCounters* counters = nullptr) {
  const TreeShape& sh = s.shape();
  const SkeletalData& th = s.theory();
  TreeShape ns = sh;
  int changed;  // node id whose channel meaning changes
  int a_enc, b_enc, c_enc;
  if (f_direction) {
    int l_enc = sh.nodes[v].left;
    if (sh.is_leaf_ref(l_enc)) throw StructuralError("recouple: left child is a leaf");
    int l = sh.node_id(l_enc);
    a_enc = sh.nodes[l].left;
    b_enc = sh.nodes[l].right;
    c_enc = sh.nodes[v].right;
    ns.nodes[v] = {a_enc, l_enc};
    ns.nodes[l] = {b_enc, c_enc};
    changed = l;
  } else {
    int r_enc = sh.nodes[v].right;
    if (sh.is_leaf_ref(r_enc)) throw StructuralError("recouple: right child is a leaf");
    int r = sh.node_id(r_enc);
    a_enc = sh.nodes[v].left;
    b_enc = sh.nodes[r].left;
    c_enc = sh.nodes[r].right;
    ns.nodes[v] = {r_enc, c_enc};
    ns.nodes[r] = {a_enc, b_enc};
    changed = r;
  }
  FusionState out(th, s.leaves(), ns);
  auto old_canon = sh.canonical_order();
  for (size_t i = 0; i < out.basis().labelings.size(); ++i) {
    const Labeling& nl = out.basis().labelings[i];
    int a = out.label_of(a_enc, nl);
    int b = out.label_of(b_enc, nl);
    int c = out.label_of(c_enc, nl);
    int d = (int)nl[v];
    cplx acc(0, 0);
    Labeling ol = nl;
    for (int other = 0; other < th.rules.rank(); ++other) {
      ol[changed] = (std::uint8_t)other;
      int pos = s.basis().find(pack_labeling(sh, old_canon, ol));
      if (pos < 0) continue;
      cplx coef = f_direction ? th.f(a, b, c, d, (int)nl[changed], other)
                              : std::conj(th.f(a, b, c, d, other, (int)nl[changed]));
      acc += coef * s.amplitudes()[pos];
    }
    out.amplitudes()[i] = acc;
  }
  if (counters) ++counters->f_moves;
  return out;
}

inline std::vector<int> subtree_ids(const TreeShape& sh, int enc_ref) {
  std::vector<int> ids, stack = {enc_ref};
  while (!stack.empty()) {
    int e = stack.back();
    stack.pop_back();
    if (sh.is_leaf_ref(e)) continue;
    int id = sh.node_id(e);
    ids.push_back(id);
    stack.push_back(sh.nodes[id].left);
    stack.push_back(sh.nodes[id].right);
  }
  return ids;
}

// Rewrites the subtree under node id v (the whole tree when v < 0) to the
// left comb; terminates because each move strictly shrinks a right subtree.
inline FusionState to_left_nested(FusionState s, int v_id = -1) {
  for (;;) {
    int root_enc = v_id < 0 ? s.shape().root : s.shape().enc(v_id);
    if (s.n_leaves() <= 1 || s.shape().is_leaf_ref(root_enc)) return s;
    bool moved = false;
    for (int id : subtree_ids(s.shape(), root_enc)) {
      if (!s.shape().is_leaf_ref(s.shape().nodes[id].right)) {
        s = recouple(s, id, false);
        moved = true;
        break;
      }
    }
    if (!moved) return s;
  }
}

inline int leaf_count(const TreeShape& sh, int enc_ref) {
  if (sh.is_leaf_ref(enc_ref)) return 1;
  return leaf_count(sh, sh.nodes[sh.node_id(enc_ref)].left) +
         leaf_count(sh, sh.nodes[sh.node_id(enc_ref)].right);
}

inline FusionState reshape_rec(FusionState s, int v_enc, const TreeShape& target, int t_enc) {
  if (target.is_leaf_ref(t_enc)) {
    if (!s.shape().is_leaf_ref(v_enc)) throw StructuralError("reshape: structure mismatch");
    return s;
  }
  int v = s.shape().node_id(v_enc);
  s = to_left_nested(std::move(s), v);
  int want_left = leaf_count(target, target.nodes[target.node_id(t_enc)].left);
  while (leaf_count(s.shape(), s.shape().nodes[v].left) > want_left) s = recouple(s, v, true);
  if (leaf_count(s.shape(), s.shape().nodes[v].left) != want_left)
    throw StructuralError("reshape: split mismatch");
  const auto tnode = target.nodes[target.node_id(t_enc)];
  s = reshape_rec(std::move(s), s.shape().nodes[v].left, target, tnode.left);
  s = reshape_rec(std::move(s), s.shape().nodes[v].right, target, tnode.right);
  return s;
}

// Change of fusion basis to an arbitrary target tree over the same leaves.
inline FusionState reshape(FusionState s, const TreeShape& target) {
  if (s.n_leaves() != target.n_leaves) throw StructuralError("reshape: leaf count mismatch");
  if (s.n_leaves() <= 1) return s;
  return reshape_rec(std::move(s), s.shape().root, target, target.root);
}

// Internal node id with the given leaf span, or -1.
inline int node_with_span(const TreeShape& sh, int first, int last) {
  auto sp = sh.spans();
  for (size_t id = 0; id < sp.size(); ++id)
    if (sp[id] == std::make_pair(first, last)) return (int)id;
  return -1;
}

// Left-nested state with the sibling pair (i, i+1) explicit; returns the pair
// node id alongside.
inline std::pair<FusionState, int> with_pair_explicit(FusionState s, int i) {
  s = to_left_nested(std::move(s));
  if (i < 0 || i + 1 >= s.n_leaves()) throw StructuralError("pair position out of range");
  if (i > 0) {
    int v = node_with_span(s.shape(), 0, i + 1);
    s = recouple(std::move(s), v, true);
  }
  int pair_node = node_with_span(s.shape(), i, i + 1);
  return {std::move(s), pair_node};
}

inline FusionState project_pair(const FusionState& st, int pair_node, int i, int outcome,
                                double mass) {
  const SkeletalData& th = st.theory();
  std::vector<int> leaves;
  leaves.insert(leaves.end(), st.leaves().begin(), st.leaves().begin() + i);
  leaves.push_back(outcome);
  leaves.insert(leaves.end(), st.leaves().begin() + i + 2, st.leaves().end());
  FusionState out(th, leaves, TreeShape::left_nested((int)leaves.size()));
  auto old_spans = st.shape().spans();
  auto new_canon = out.shape().canonical_order();
  // old internal id -> new internal id (pair node dropped)
  std::vector<int> id_map(old_spans.size(), -1);
  for (int id = 0; id < (int)old_spans.size(); ++id) {
    if (id == pair_node) continue;
    auto [lo, hi] = old_spans[id];
    int nlo = lo <= i ? lo : lo - 1;
    int nhi = hi <= i ? hi : hi - 1;
    id_map[id] = node_with_span(out.shape(), nlo, nhi);
    if (id_map[id] < 0) throw StructuralError("fuse: span transfer failed");
  }
  double root_mass = std::sqrt(mass);
  for (size_t k = 0; k < st.basis().labelings.size(); ++k) {
    const Labeling& ol = st.basis().labelings[k];
    if ((int)ol[pair_node] != outcome) continue;
    Labeling nl(out.shape().n_internal(), 0);
    for (int id = 0; id < (int)old_spans.size(); ++id)
      if (id != pair_node) nl[id_map[id]] = ol[id];
    int pos = out.basis().find(pack_labeling(out.shape(), new_canon, nl));
    if (pos < 0) throw StructuralError("fuse: labeling transfer failed");
    out.amplitudes()[pos] = st.amplitudes()[k] / root_mass;
  }
  return out;
}

}  // namespace engine

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

// Canonical protocol basis over the given leaves: the pairwise caterpillar.
struct FusionBasis {
  TreeShape shape;
  std::vector<int> leaves;
  TreeBasis basis;

  int dim() const { return (int)basis.labelings.size(); }
};

inline FusionBasis enumerate_basis(const SkeletalData& th, const std::vector<int>& leaves,
                                   int total_charge = -1) {
  FusionBasis b;
  b.leaves = leaves;
  b.shape = TreeShape::pairwise_caterpillar((int)leaves.size());
  b.basis = TreeBasis::enumerate(th.rules, b.shape, leaves, total_charge);
  return b;
}

// Independent dimension oracle: dim V^{a1..ak}_c from products of fusion
// matrices, no tree enumeration involved.
inline long fusion_space_dim(const FusionRules& rules, const std::vector<int>& leaves,
                             int total_charge = -1) {
  if (leaves.empty()) return total_charge <= 0 ? 1 : 0;
  std::vector<long> v(rules.rank(), 0);
  v[leaves[0]] = 1;
  for (size_t i = 1; i < leaves.size(); ++i) {
    std::vector<long> w(rules.rank(), 0);
    for (int x = 0; x < rules.rank(); ++x)
      if (v[x])
        for (int c : rules.product(x, leaves[i])) w[c] += v[x];
    v = std::move(w);
  }
  if (total_charge >= 0) return v[total_charge];
  long s = 0;
  for (long x : v) s += x;
  return s;
}

// State from amplitudes over the pairwise-caterpillar basis.
inline FusionState state_from_pairwise(const SkeletalData& th, const std::vector<int>& leaves,
                                       const std::vector<cplx>& amplitudes,
                                       int total_charge = -1) {
  FusionBasis basis = enumerate_basis(th, leaves, total_charge);
  if ((int)amplitudes.size() != basis.dim())
    throw StructuralError("state_from_pairwise: amplitude count does not match basis");
  FusionState s(th, leaves, basis.shape, total_charge);
  s.amplitudes() = amplitudes;
  return engine::to_left_nested(std::move(s));
}

// Amplitudes of the state in the pairwise-caterpillar basis (all totals).
inline std::pair<FusionBasis, std::vector<cplx>> pairwise_amplitudes(const FusionState& s) {
  FusionBasis basis = enumerate_basis(s.theory(), s.leaves());
  FusionState r = engine::reshape(s, basis.shape);
  auto canon_r = r.shape().canonical_order();
  std::vector<cplx> out(basis.dim(), cplx(0, 0));
  for (size_t i = 0; i < r.basis().labelings.size(); ++i) {
    PackedKey key = pack_labeling(r.shape(), canon_r, r.basis().labelings[i]);
    int pos = basis.basis.find(key);
    if (pos < 0) throw StructuralError("pairwise_amplitudes: basis mismatch");
    out[pos] = r.amplitudes()[i];
  }
  return {std::move(basis), std::move(out)};
}

// Exposed F-move: re-associates at the internal node whose subtree spans
// leaves [span_first, span_last].  direction=true: ((A B) C) -> (A (B C)).
inline FusionState f_move(const FusionState& s, int span_first, int span_last, bool direction,
                          OpCounters* counters = nullptr) {
  int v = engine::node_with_span(s.shape(), span_first, span_last);
  if (v < 0) throw StructuralError("f_move: no internal node with that span");
  return engine::recouple(s, v, direction, counters);
}

// Clockwise (orientation=+1) or anticlockwise (orientation=-1) exchange of
// leaves i and i+1.
inline FusionState braid_generator(const FusionState& s, int i, int orientation,
                                   OpCounters* counters = nullptr) {
  if (!s.theory().has_r)
    throw UnsupportedOperationError("braid_generator: theory has no R-symbols");
  auto [st, pair_node] = engine::with_pair_explicit(s, i);
  int a = st.leaves()[i], b = st.leaves()[i + 1];
  for (size_t k = 0; k < st.basis().labelings.size(); ++k) {
    int c = st.basis().labelings[k][pair_node];
    cplx phase = orientation >= 0 ? st.theory().r(a, b, c) : st.theory().r_inv(a, b, c);
    st.amplitudes()[k] *= phase;
  }
  // leaf labels swap; the labeling set is unchanged since fuse(a,b) = fuse(b,a)
  std::vector<int> new_leaves = st.leaves();
  std::swap(new_leaves[i], new_leaves[i + 1]);
  FusionState out(st.theory(), new_leaves, st.shape());
  auto canon = st.shape().canonical_order();
  for (size_t k = 0; k < st.basis().labelings.size(); ++k) {
    int pos = out.basis().find(pack_labeling(st.shape(), canon, st.basis().labelings[k]));
    if (pos < 0) throw StructuralError("braid_generator: basis mismatch");
    out.amplitudes()[pos] = st.amplitudes()[k];
  }
  if (counters) ++counters->braids;
  return engine::to_left_nested(std::move(out));
}

// Monodromy (double exchange) of leaves i, i+1.
inline FusionState monodromy_pair(const FusionState& s, int i, int orientation = +1,
                                  OpCounters* counters = nullptr) {
  return braid_generator(braid_generator(s, i, orientation, counters), i, orientation, counters);
}

// Inserts a pair (label, dual label) fused from the vacuum so that the new
// leaves occupy positions gap and gap+1.
inline FusionState pair_create(const FusionState& s, int gap, int label,
                               OpCounters* counters = nullptr) {
  const SkeletalData& th = s.theory();
  int abar = th.rules.dual[label];
  if (counters) ++counters->pair_creations;
  if (s.n_leaves() == 0) {
    FusionState out(th, {label, abar}, TreeShape::single_pair());
    out.amplitudes()[out.basis().find(pack_labeling(
        out.shape(), out.shape().canonical_order(), Labeling{0}))] = s.amplitudes()[0];
    return out;
  }
  if (gap < 0 || gap > s.n_leaves()) throw StructuralError("pair_create: gap out of range");
  FusionState base = engine::to_left_nested(s);
  const int n = base.n_leaves();

  std::vector<int> leaves;
  leaves.insert(leaves.end(), base.leaves().begin(), base.leaves().begin() + gap);
  leaves.push_back(label);
  leaves.push_back(abar);
  leaves.insert(leaves.end(), base.leaves().begin() + gap, base.leaves().end());

  // Target: the created pair as an explicit subtree in channel 0, spliced into
  // the left comb at the insertion point.
  TreeShape ns;
  ns.n_leaves = n + 2;
  ns.nodes.push_back({gap, gap + 1});
  const int pair_enc = ns.enc(0);
  int acc;
  if (gap == 0) {
    acc = pair_enc;
  } else {
    acc = 0;  // leaf 0
    for (int j = 1; j < gap; ++j) {
      ns.nodes.push_back({acc, j});
      acc = ns.enc((int)ns.nodes.size() - 1);
    }
    ns.nodes.push_back({acc, pair_enc});
    acc = ns.enc((int)ns.nodes.size() - 1);
  }
  for (int j = gap + 2; j < n + 2; ++j) {
    ns.nodes.push_back({acc, j});
    acc = ns.enc((int)ns.nodes.size() - 1);
  }
  ns.root = acc;

  FusionState out(th, leaves, ns);
  auto new_canon = ns.canonical_order();
  auto old_spans = n >= 2 ? base.shape().spans() : std::vector<std::pair<int, int>>{};
  // base is left-nested, so every old internal span is (0, m); the spine node
  // absorbs the inserted pair exactly when m >= gap.
  std::vector<int> id_map(old_spans.size(), -1);
  for (int id = 0; id < (int)old_spans.size(); ++id) {
    auto [lo, hi] = old_spans[id];
    if (lo != 0) throw StructuralError("pair_create: expected a left-nested base");
    int nhi = hi < gap ? hi : hi + 2;
    id_map[id] = engine::node_with_span(ns, 0, nhi);
    if (id_map[id] < 0) throw StructuralError("pair_create: span transfer failed");
  }
  // the spine node directly above the inserted pair has no old counterpart:
  // its channel is the prefix channel (gap >= 1) or the first old leaf (gap 0)
  const int bridge = engine::node_with_span(ns, 0, gap > 0 ? gap + 1 : 2);
  const int old_prefix_node =
      gap >= 2 ? engine::node_with_span(base.shape(), 0, gap - 1) : -1;
  for (size_t i = 0; i < base.basis().labelings.size(); ++i) {
    const Labeling& ol = base.basis().labelings[i];
    Labeling nl(ns.n_internal(), 0);
    for (int id = 0; id < (int)old_spans.size(); ++id) nl[id_map[id]] = ol[id];
    // pair slot stays 0
    nl[0] = 0;
    if (bridge >= 0) {
      int prefix_label = gap == 0   ? base.leaves()[0]
                         : gap == 1 ? base.leaves()[0]
                                    : (int)ol[old_prefix_node];
      nl[bridge] = (std::uint8_t)prefix_label;
    }
    int pos = out.basis().find(pack_labeling(ns, new_canon, nl));
    if (pos < 0) throw StructuralError("pair_create: labeling transfer failed");
    out.amplitudes()[pos] = base.amplitudes()[i];
  }
  return engine::to_left_nested(std::move(out));
}

struct MeasureResult {
  int outcome = -1;
  double probability = 0.0;
  FusionState state;  // collapsed and renormalised; leaves i,i+1 replaced by the outcome
};

// Born-rule masses of the fusion channels of adjacent leaves (i, i+1).
inline std::map<int, double> fusion_masses(const FusionState& s, int i) {
  auto [st, pair_node] = engine::with_pair_explicit(s, i);
  std::map<int, double> masses;
  for (int c : s.theory().rules.product(s.leaves()[i], s.leaves()[i + 1])) masses[c] = 0.0;
  for (size_t k = 0; k < st.basis().labelings.size(); ++k)
    masses[st.basis().labelings[k][pair_node]] += std::norm(st.amplitudes()[k]);
  return masses;
}

// Forced-outcome fusion: returns the exact Born probability, and the collapsed
// state when the probability is nonzero.
inline std::pair<double, std::optional<FusionState>> fuse_forced(const FusionState& s, int i,
                                                                 int outcome,
                                                                 OpCounters* counters = nullptr) {
  if (!s.theory().rules.fuses(s.leaves()[i], s.leaves()[i + 1], outcome))
    throw StructuralError("fuse_forced: inadmissible outcome channel");
  auto [st, pair_node] = engine::with_pair_explicit(s, i);
  double mass = 0;
  for (size_t k = 0; k < st.basis().labelings.size(); ++k)
    if ((int)st.basis().labelings[k][pair_node] == outcome) mass += std::norm(st.amplitudes()[k]);
  if (counters) ++counters->fusions;
  if (mass < 1e-24) return {mass, std::nullopt};
  return {mass, engine::project_pair(st, pair_node, i, outcome, mass)};
}

// Sampled fusion of adjacent leaves (i, i+1) by the Born rule.
inline MeasureResult fuse_measure(const FusionState& s, int i, Rng& rng,
                                  OpCounters* counters = nullptr) {
  auto masses = fusion_masses(s, i);
  double u = rng.uniform(), acc = 0;
  int outcome = -1;
  for (auto& [c, m] : masses) {
    if (m < 1e-24) continue;
    acc += m;
    outcome = c;
    if (u < acc) break;
  }
  if (outcome < 0) throw NumericalError("fuse_measure: no channel carries mass");
  auto [prob, state] = fuse_forced(s, i, outcome, counters);
  return MeasureResult{outcome, prob, std::move(*state)};
}

// Strict forced fusion; throws if the requested outcome carries no mass.
inline MeasureResult fuse_outcome(const FusionState& s, int i, int outcome,
                                  OpCounters* counters = nullptr) {
  auto [prob, state] = fuse_forced(s, i, outcome, counters);
  if (!state) throw NumericalError("fuse_outcome: zero-mass outcome requested in forced mode");
  return MeasureResult{outcome, prob, std::move(*state)};
}

// Unique fusion channel of adjacent leaves (i, i+1); throws if not unique.
inline int fuse_channel(const FusionState& s, int i) {
  auto prods = s.theory().rules.product(s.leaves()[i], s.leaves()[i + 1]);
  if (prods.size() != 1) throw StructuralError("fuse_channel: channel is not unique");
  return prods[0];
}

// Factors off a leading abelian leaf through the categorical isomorphism
// V^{g,a2..aN} = g x V^{a2..aN}; returns (g, state on the remaining leaves).
inline std::pair<int, FusionState> detach_leading_abelian(const FusionState& s) {
  if (s.n_leaves() < 2) throw StructuralError("detach_leading_abelian: need at least 2 leaves");
  int g = s.leaves()[0];
  if (!s.theory().rules.is_abelian(g))
    throw StructuralError("detach_leading_abelian: leading leaf is not abelian");
  const int n = s.n_leaves();
  // target: (leaf0, left-nested rest)
  TreeShape target;
  target.n_leaves = n;
  if (n == 2) {
    target = TreeShape::single_pair();
  } else {
    int acc = 1;
    for (int j = 2; j < n; ++j) {
      target.nodes.push_back({acc, j});
      acc = target.enc((int)target.nodes.size() - 1);
    }
    target.nodes.push_back({0, acc});
    target.root = target.enc((int)target.nodes.size() - 1);
  }
  FusionState r = engine::reshape(s, target);
  std::vector<int> rest(s.leaves().begin() + 1, s.leaves().end());
  FusionState out(s.theory(), rest, TreeShape::left_nested(n - 1));
  auto old_spans = r.shape().spans();
  auto new_canon = out.shape().canonical_order();
  int root_id = r.shape().node_id(r.shape().root);
  std::vector<int> id_map(old_spans.size(), -1);
  for (int id = 0; id < (int)old_spans.size(); ++id) {
    if (id == root_id) continue;
    auto [lo, hi] = old_spans[id];
    id_map[id] = engine::node_with_span(out.shape(), lo - 1, hi - 1);
    if (id_map[id] < 0) throw StructuralError("detach: span transfer failed");
  }
  for (size_t k = 0; k < r.basis().labelings.size(); ++k) {
    const Labeling& ol = r.basis().labelings[k];
    Labeling nl(out.shape().n_internal(), 0);
    for (int id = 0; id < (int)old_spans.size(); ++id)
      if (id != root_id) nl[id_map[id]] = ol[id];
    if (n == 2) nl.clear();
    int pos = out.basis().find(pack_labeling(out.shape(), new_canon, nl));
    if (pos < 0) throw StructuralError("detach: labeling transfer failed");
    out.amplitudes()[pos] = r.amplitudes()[k];
  }
  return {g, std::move(out)};
}

// True iff there is a unit phase lambda with ||s1 - lambda s2|| <= tol.  The
// phase reference is s1's largest-magnitude component (lowest index on ties).
inline bool phase_equal(const FusionState& s1, const FusionState& s2, Tolerance tol) {
  if (s1.leaves() != s2.leaves()) throw StructuralError("phase_equal: basis mismatch");
  FusionState a = engine::to_left_nested(s1);
  FusionState b = engine::to_left_nested(s2);
  if (a.dim() != b.dim()) throw StructuralError("phase_equal: basis mismatch");
  int kref = 0;
  double best = -1;
  for (int k = 0; k < a.dim(); ++k)
    if (std::abs(a.amplitudes()[k]) > best + 1e-15) {
      best = std::abs(a.amplitudes()[k]);
      kref = k;
    }
  if (std::abs(b.amplitudes()[kref]) < 1e-15) return best <= tol.eps;
  cplx lambda = a.amplitudes()[kref] / b.amplitudes()[kref];
  lambda /= std::abs(lambda);
  double err = 0;
  for (int k = 0; k < a.dim(); ++k)
    err += std::norm(a.amplitudes()[k] - lambda * b.amplitudes()[k]);
  return std::sqrt(err) <= tol.eps;
}

// Relative phase lambda with s1 ~= lambda s2 (same convention as phase_equal).
inline cplx relative_phase(const FusionState& s1, const FusionState& s2) {
  FusionState a = engine::to_left_nested(s1);
  FusionState b = engine::to_left_nested(s2);
  int kref = 0;
  double best = -1;
  for (int k = 0; k < a.dim(); ++k)
    if (std::abs(a.amplitudes()[k]) > best + 1e-15) {
      best = std::abs(a.amplitudes()[k]);
      kref = k;
    }
  return a.amplitudes()[kref] / b.amplitudes()[kref];
}

// <s1|s2>; both states must live over the same leaves.
inline cplx inner_product(const FusionState& s1, const FusionState& s2) {
  if (s1.leaves() != s2.leaves()) throw StructuralError("inner_product: basis mismatch");
  FusionState a = engine::to_left_nested(s1);
  FusionState b = engine::to_left_nested(s2);
  cplx acc(0, 0);
  for (int k = 0; k < a.dim(); ++k) acc += std::conj(a.amplitudes()[k]) * b.amplitudes()[k];
  return acc;
}

// ---------------------------------------------------------------------------
// Stump operators
// ---------------------------------------------------------------------------

enum class StumpSide { A, B };

// Matrix of the stump operator on the pair space V^{qq}, diagonal in the pair
// channel:  [B_h]_kk = [F^{qhq}_k]_{qq}  and  A_h = B_h^dagger.
// The entry [F^{qhq}_k]_{qq} transforms by the channel-independent phase
// u^{hq}_q / u^{qh}_q under a gauge change, so A_h and B_h pick up opposite
// global phases and A_h B_h = id holds in any gauge; each is unitary because
// the block is 1x1 in a unitary F-matrix.
inline CMatrix stump_matrix(const SkeletalData& th, int h, StumpSide side) {
  const FusionRules& ru = th.rules;
  int q = q_label(th);
  if (h < 0 || h >= q || !ru.is_abelian(h))
    throw StructuralError("stump_matrix: h is not a group label");
  auto channels = ru.product(q, q);
  CMatrix m((int)channels.size(), (int)channels.size());
  for (size_t k = 0; k < channels.size(); ++k) {
    cplx v = th.f(q, h, q, channels[k], q, q);
    m((int)k, (int)k) = side == StumpSide::B ? v : std::conj(v);
  }
  return m;
}

struct StumpOp {
  int h;
  StumpSide side;
  CMatrix matrix;
};

inline StumpOp make_stump(const SkeletalData& th, int h, StumpSide side) {
  return StumpOp{h, side, stump_matrix(th, h, side)};
}

// Physical realisation of a charge transfer across adjacent leaves (i, i+1)
// using only a pair creation and two deterministic fusions: create (h, hbar)
// between the leaves, fuse h into the left one and hbar into the right one.
inline FusionState transfer_charge(const FusionState& s, int i, int h,
                                   OpCounters* counters = nullptr) {
  if (h == 0) return s;
  FusionState st = pair_create(s, i + 1, h, counters);
  // leaves: ... a_i, h, hbar, a_{i+1} ...
  st = fuse_outcome(st, i, fuse_channel(st, i), counters).state;
  st = fuse_outcome(st, i + 1, fuse_channel(st, i + 1), counters).state;
  return st;
}

}  // namespace anyonsim
