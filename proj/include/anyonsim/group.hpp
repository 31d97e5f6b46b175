#pragma once

// Exact arithmetic in Z_2^n and the standard bicharacter used to build
// Tambara-Yamagami F-data.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "anyonsim/core.hpp"

namespace anyonsim {

// An element of Z_2^n as a fixed-length bit word.  Elements are ordered by
// their word value; that ordering fixes all basis orderings downstream.
struct GroupElement {
  std::uint32_t bits = 0;
  int n = 1;

  GroupElement() = default;
  GroupElement(std::uint32_t b, int word_len) : bits(b), n(word_len) {
    if (word_len < 1 || word_len > 16) throw std::invalid_argument("GroupElement: word length out of range");
    if (b >> word_len) throw std::invalid_argument("GroupElement: bits exceed word length");
  }

  bool is_identity() const { return bits == 0; }
  bool operator==(const GroupElement& o) const = default;

  std::string to_string() const {
    std::string s(n, '0');
    for (int i = 0; i < n; ++i)
      if (bits >> (n - 1 - i) & 1u) s[i] = '1';
    return s;
  }
};

inline GroupElement group_mul(const GroupElement& g, const GroupElement& h) {
  if (g.n != h.n) throw std::invalid_argument("group_mul: elements from incompatible groups");
  return GroupElement(g.bits ^ h.bits, g.n);
}

// (-1)^{sum_i g_i h_i}: the standard symmetric nondegenerate bicharacter on Z_2^n.
inline cplx standard_bicharacter(const GroupElement& g, const GroupElement& h) {
  if (g.n != h.n) throw std::invalid_argument("standard_bicharacter: elements from incompatible groups");
  int parity = __builtin_popcount(g.bits & h.bits) & 1;
  return parity ? cplx(-1, 0) : cplx(1, 0);
}

// Optional override for the bicharacter: an explicit |G| x |G| sign table,
// validated for symmetry and nondegeneracy before use.
struct BicharacterTable {
  CMatrix table;  // entries +-1

  explicit BicharacterTable(CMatrix t) : table(std::move(t)) {
    const int d = table.rows();
    if (d != table.cols()) throw std::invalid_argument("BicharacterTable: table must be square");
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        cplx v = table(i, j);
        if (std::abs(v - cplx(1, 0)) > 1e-12 && std::abs(v + cplx(1, 0)) > 1e-12)
          throw std::invalid_argument("BicharacterTable: entries must be +-1");
        if (std::abs(v - table(j, i)) > 1e-12)
          throw std::invalid_argument("BicharacterTable: table must be symmetric");
      }
    if (table.abs_det() < 1e-9) throw std::invalid_argument("BicharacterTable: table must be nondegenerate");
  }

  cplx operator()(std::uint32_t g, std::uint32_t h) const { return table((int)g, (int)h); }
};

}  // namespace anyonsim
