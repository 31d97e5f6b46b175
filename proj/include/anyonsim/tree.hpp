#pragma once

// Fusion-tree machinery: binary tree shapes over an ordered list of leaves,
// enumeration of admissible internal labellings, and the elementary
// recoupling move that re-associates one internal node.

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "anyonsim/skeletal.hpp"

namespace anyonsim {

// Child references are encoded: values < n_leaves are leaf positions, larger
// values are n_leaves + internal node id.  Internal node ids are stable under
// recoupling moves, which lets labellings be transferred slot by slot.
struct TreeShape {
  struct Node {
    int left = -1, right = -1;
  };

  int n_leaves = 0;
  std::vector<Node> nodes;  // n_leaves - 1 internal nodes for n_leaves >= 2
  int root = -1;            // encoded reference

  bool is_leaf_ref(int enc) const { return enc < n_leaves; }
  int node_id(int enc) const { return enc - n_leaves; }
  int enc(int id) const { return n_leaves + id; }
  int n_internal() const { return (int)nodes.size(); }

  static TreeShape single_pair() {
    TreeShape s;
    s.n_leaves = 2;
    s.nodes.push_back({0, 1});
    s.root = s.enc(0);
    return s;
  }

  // (((a0 a1) a2) a3) ...
  static TreeShape left_nested(int n) {
    TreeShape s;
    s.n_leaves = n;
    if (n == 1) {
      s.root = 0;
      return s;
    }
    for (int k = 0; k < n - 1; ++k) s.nodes.push_back({k == 0 ? 0 : s.enc(k - 1), k + 1});
    s.root = s.enc(n - 2);
    return s;
  }

  // ((a0 a1)(a2 a3))... : leaves (2j, 2j+1) pair up, pair channels fuse
  // left-to-right; a trailing unpaired leaf joins the spine for odd n.
  static TreeShape pairwise_caterpillar(int n) {
    TreeShape s;
    s.n_leaves = n;
    if (n == 1) {
      s.root = 0;
      return s;
    }
    std::vector<int> groups;  // encoded refs of pair nodes / trailing leaf
    for (int j = 0; j + 1 < n; j += 2) {
      s.nodes.push_back({j, j + 1});
      groups.push_back(s.enc((int)s.nodes.size() - 1));
    }
    if (n % 2 == 1) groups.push_back(n - 1);
    int acc = groups[0];
    for (size_t j = 1; j < groups.size(); ++j) {
      s.nodes.push_back({acc, groups[j]});
      acc = s.enc((int)s.nodes.size() - 1);
    }
    s.root = acc;
    return s;
  }

  // (first leaf, last leaf) of the subtree under each internal node.  Spans
  // are unique per node and serve as the structural identity of a slot.
  std::vector<std::pair<int, int>> spans() const {
    std::vector<std::pair<int, int>> sp(nodes.size(), {-1, -1});
    compute_span(root, sp);
    return sp;
  }

  // Internal ids sorted by span; this fixes the canonical slot order used for
  // packing labellings and comparing states.
  std::vector<int> canonical_order() const {
    auto sp = spans();
    std::vector<int> ids(nodes.size());
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = (int)i;
    std::sort(ids.begin(), ids.end(), [&](int a, int b) { return sp[a] < sp[b]; });
    return ids;
  }

  bool structurally_equal(const TreeShape& o) const {
    if (n_leaves != o.n_leaves) return false;
    if (n_leaves <= 1) return true;
    return split_sizes(root) == o.split_sizes(o.root);
  }

 private:
  std::pair<int, int> compute_span(int enc_ref, std::vector<std::pair<int, int>>& sp) const {
    if (is_leaf_ref(enc_ref)) return {enc_ref, enc_ref};
    int id = node_id(enc_ref);
    auto l = compute_span(nodes[id].left, sp);
    auto r = compute_span(nodes[id].right, sp);
    sp[id] = {l.first, r.second};
    return sp[id];
  }

  std::vector<int> split_sizes(int enc_ref) const {
    // preorder list of left-subtree leaf counts; identifies the structure
    if (is_leaf_ref(enc_ref)) return {0};
    int id = node_id(enc_ref);
    std::vector<int> out = {leaf_count(nodes[id].left)};
    for (int v : split_sizes(nodes[id].left)) out.push_back(v);
    for (int v : split_sizes(nodes[id].right)) out.push_back(v);
    return out;
  }

  int leaf_count(int enc_ref) const {
    if (is_leaf_ref(enc_ref)) return 1;
    int id = node_id(enc_ref);
    return leaf_count(nodes[id].left) + leaf_count(nodes[id].right);
  }
};

using Labeling = std::vector<std::uint8_t>;  // label per internal node id

using PackedKey = unsigned __int128;

// Packs a labelling by reading slots in canonical order, 5 bits per slot.
inline PackedKey pack_labeling(const TreeShape& shape, const std::vector<int>& canon,
                               const Labeling& lab) {
  PackedKey key = 0;
  for (int id : canon) key = (key << 5) | (PackedKey)(lab[id] & 0x1f);
  return key;
}

// Admissible labellings of a shape with given leaf labels, optionally with the
// total charge pinned.  Order is lexicographic in the canonical slot order;
// lookups binary-search the parallel sorted key vector.
struct TreeBasis {
  std::vector<Labeling> labelings;  // sorted by packed key
  std::vector<PackedKey> keys;      // parallel to labelings

  // Position of the labelling with this packed key, or -1.
  int find(PackedKey key) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) return -1;
    return (int)(it - keys.begin());
  }

  static TreeBasis enumerate(const FusionRules& rules, const TreeShape& shape,
                             const std::vector<int>& leaves, int total_charge = -1) {
    if (rules.rank() > 31) throw StructuralError("TreeBasis: label count exceeds packing width");
    if (shape.n_internal() > 25) throw StructuralError("TreeBasis: tree too large to pack");
    TreeBasis basis;
    if (shape.n_leaves <= 1) {
      bool ok = shape.n_leaves == 0 ? (total_charge <= 0)
                                    : (total_charge < 0 || leaves[0] == total_charge);
      if (ok) {
        basis.labelings.push_back({});
        basis.keys.push_back(0);
      }
      return basis;
    }
    // assignment order: children before parents
    std::vector<int> order;
    std::vector<int> stack = {shape.root};
    std::vector<int> rev;
    while (!stack.empty()) {
      int enc_ref = stack.back();
      stack.pop_back();
      if (shape.is_leaf_ref(enc_ref)) continue;
      rev.push_back(shape.node_id(enc_ref));
      stack.push_back(shape.nodes[shape.node_id(enc_ref)].left);
      stack.push_back(shape.nodes[shape.node_id(enc_ref)].right);
    }
    order.assign(rev.rbegin(), rev.rend());

    Labeling lab(shape.n_internal(), 0);
    auto label_of = [&](int enc_ref) {
      return shape.is_leaf_ref(enc_ref) ? leaves[enc_ref] : (int)lab[shape.node_id(enc_ref)];
    };
    int root_id = shape.node_id(shape.root);
    std::vector<Labeling> found;
    auto rec = [&](auto&& self, size_t pos) -> void {
      if (pos == order.size()) {
        found.push_back(lab);
        return;
      }
      int id = order[pos];
      int a = label_of(shape.nodes[id].left);
      int b = label_of(shape.nodes[id].right);
      for (int c : rules.product(a, b)) {
        if (id == root_id && total_charge >= 0 && c != total_charge) continue;
        lab[id] = (std::uint8_t)c;
        self(self, pos + 1);
      }
    };
    rec(rec, 0);

    auto canon = shape.canonical_order();
    std::vector<std::pair<PackedKey, int>> order_keys(found.size());
    for (size_t i = 0; i < found.size(); ++i)
      order_keys[i] = {pack_labeling(shape, canon, found[i]), (int)i};
    std::sort(order_keys.begin(), order_keys.end());
    basis.labelings.reserve(found.size());
    basis.keys.reserve(found.size());
    for (auto& [key, idx] : order_keys) {
      basis.labelings.push_back(std::move(found[idx]));
      basis.keys.push_back(key);
    }
    return basis;
  }
};

}  // namespace anyonsim
