#pragma once

// Skeletal data of a theory of anyons: fusion rules plus F-symbols and
// (optionally) R-symbols, with gauge transformations acting on both.

#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "anyonsim/core.hpp"
#include "anyonsim/fusion_rules.hpp"
#include "anyonsim/rng.hpp"

namespace anyonsim {

struct FKey {
  int a, b, c, d;
  auto operator<=>(const FKey&) const = default;
};

// Dense block of [F^{abc}_d]_{fe}: rows indexed by the intermediate f (channel
// of b,c), columns by e (channel of a,b).  Only admissible labels appear.
struct FBlock {
  std::vector<int> row_labels;  // f
  std::vector<int> col_labels;  // e
  CMatrix m;

  int row_of(int f) const {
    for (int i = 0; i < (int)row_labels.size(); ++i)
      if (row_labels[i] == f) return i;
    return -1;
  }
  int col_of(int e) const {
    for (int i = 0; i < (int)col_labels.size(); ++i)
      if (col_labels[i] == e) return i;
    return -1;
  }
};

struct SkeletalData {
  std::string name;  // e.g. "ising(+1)", "ty(n=2,kappa=+1)"
  FusionRules rules;
  std::map<FKey, FBlock> f_blocks;
  bool has_r = false;
  std::map<std::pair<int, int>, std::map<int, cplx>> r_symbols;  // (a,b) -> c -> R^{ab}_c

  bool admissible_fkey(const FKey& k) const {
    for (int e = 0; e < rules.rank(); ++e)
      if (rules.fuses(k.a, k.b, e) && rules.fuses(e, k.c, k.d)) return true;
    return false;
  }

  const FBlock& fblock(int a, int b, int c, int d) const {
    auto it = f_blocks.find(FKey{a, b, c, d});
    if (it == f_blocks.end()) {
      std::ostringstream os;
      os << "missing F block for (" << rules.labels[a] << "," << rules.labels[b] << ","
         << rules.labels[c] << ";" << rules.labels[d] << ")";
      throw StructuralError(os.str());
    }
    return it->second;
  }

  // [F^{abc}_d]_{fe}.  Zero at inadmissible entries or for inadmissible
  // 4-tuples; a block that is admissible but absent is a structural error.
  cplx f(int a, int b, int c, int d, int f_lab, int e_lab) const {
    auto it = f_blocks.find(FKey{a, b, c, d});
    if (it == f_blocks.end()) {
      if (admissible_fkey(FKey{a, b, c, d})) fblock(a, b, c, d);  // throws with the tuple
      return cplx(0, 0);
    }
    const FBlock& blk = it->second;
    int i = blk.row_of(f_lab), j = blk.col_of(e_lab);
    if (i < 0 || j < 0) return cplx(0, 0);
    return blk.m(i, j);
  }

  // [G^{abc}_d]_{ef} = conj([F^{abc}_d]_{fe}); valid because every F block is
  // unitary, so the inverse is never stored separately.
  cplx g(int a, int b, int c, int d, int e_lab, int f_lab) const {
    return std::conj(f(a, b, c, d, f_lab, e_lab));
  }

  cplx r(int a, int b, int c) const {
    if (!has_r) throw UnsupportedOperationError("theory has no R-symbols");
    if (a == 0 || b == 0) return cplx(1, 0);
    auto it = r_symbols.find({a, b});
    if (it != r_symbols.end()) {
      auto jt = it->second.find(c);
      if (jt != it->second.end()) return jt->second;
    }
    std::ostringstream os;
    os << "missing R symbol R^{" << rules.labels[a] << "," << rules.labels[b] << "}_"
       << rules.labels[c];
    throw StructuralError(os.str());
  }

  // Inverse (anticlockwise) exchange: (R^{-1})^{ab}_c = (R^{ba}_c)^{-1}.
  cplx r_inv(int a, int b, int c) const { return std::conj(r(b, a, c)); }

  double max_f_unitarity_defect() const {
    double worst = 0;
    for (const auto& [k, blk] : f_blocks) worst = std::max(worst, blk.m.unitarity_defect());
    return worst;
  }

  double max_r_modulus_defect() const {
    double worst = 0;
    for (const auto& [ab, m] : r_symbols)
      for (const auto& [c, v] : m) worst = std::max(worst, std::abs(std::abs(v) - 1.0));
    return worst;
  }
};

// Populates every admissible F block with the identity on matched (sorted)
// row/column label lists.  Triangle-axiom blocks (a, b or c = 0) are exactly
// the identity and stay that way.
inline void init_f_blocks_identity(SkeletalData& data) {
  const FusionRules& ru = data.rules;
  const int n = ru.rank();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          std::vector<int> cols, rows;
          for (int e = 0; e < n; ++e)
            if (ru.fuses(a, b, e) && ru.fuses(e, c, d)) cols.push_back(e);
          for (int f = 0; f < n; ++f)
            if (ru.fuses(b, c, f) && ru.fuses(a, f, d)) rows.push_back(f);
          if (cols.empty() && rows.empty()) continue;
          if (cols.size() != rows.size()) {
            std::ostringstream os;
            os << "fusion rules are not associative at (" << ru.labels[a] << "," << ru.labels[b]
               << "," << ru.labels[c] << ";" << ru.labels[d] << ")";
            throw StructuralError(os.str());
          }
          FBlock blk;
          blk.row_labels = rows;
          blk.col_labels = cols;
          blk.m = CMatrix::identity((int)rows.size());
          data.f_blocks.emplace(FKey{a, b, c, d}, std::move(blk));
        }
}

// Unit phases u^{ab}_c on admissible triples, with all vacuum triples pinned
// to 1.
struct GaugeTransform {
  std::map<std::tuple<int, int, int>, cplx> phases;

  cplx u(int a, int b, int c) const {
    if (a == 0 || b == 0) return cplx(1, 0);
    auto it = phases.find({a, b, c});
    return it == phases.end() ? cplx(1, 0) : it->second;
  }

  void validate() const {
    for (const auto& [key, v] : phases) {
      if (std::abs(std::abs(v) - 1.0) > 1e-12)
        throw std::invalid_argument("GaugeTransform: non-unit phase");
      auto [a, b, c] = key;
      if ((a == 0 || b == 0) && std::abs(v - cplx(1, 0)) > 1e-12)
        throw std::invalid_argument("GaugeTransform: vacuum-triple phase must be 1");
    }
  }
};

inline GaugeTransform identity_gauge() { return {}; }

inline GaugeTransform random_gauge(const FusionRules& rules, Rng& rng) {
  GaugeTransform g;
  for (int a = 1; a < rules.rank(); ++a)
    for (int b = 1; b < rules.rank(); ++b)
      for (int c : rules.product(a, b)) {
        double th = 2.0 * kPi * rng.uniform();
        g.phases[{a, b, c}] = std::polar(1.0, th);
      }
  return g;
}

// [(F')^{abc}_d]_{fe} = u^{af}_d u^{bc}_f / (u^{ab}_e u^{ec}_d) [F^{abc}_d]_{fe}
// (R')^{ab}_c = u^{ba}_c / u^{ab}_c R^{ab}_c
inline SkeletalData gauge_transform(const SkeletalData& data, const GaugeTransform& gt) {
  gt.validate();
  SkeletalData out = data;
  for (auto& [key, blk] : out.f_blocks) {
    for (int i = 0; i < (int)blk.row_labels.size(); ++i)
      for (int j = 0; j < (int)blk.col_labels.size(); ++j) {
        int f = blk.row_labels[i], e = blk.col_labels[j];
        cplx num = gt.u(key.a, f, key.d) * gt.u(key.b, key.c, f);
        cplx den = gt.u(key.a, key.b, e) * gt.u(e, key.c, key.d);
        blk.m(i, j) *= num / den;
      }
  }
  if (out.has_r) {
    for (auto& [ab, m] : out.r_symbols)
      for (auto& [c, v] : m) v *= gt.u(ab.second, ab.first, c) / gt.u(ab.first, ab.second, c);
  }
  return out;
}

}  // namespace anyonsim
