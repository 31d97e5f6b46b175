#pragma once

// Concrete skeletal data: Ising theories and Tambara-Yamagami TY(G) for
// G = Z_2^n (protocol grade) and G = Z_m cyclic (fusion-ring catalogue, used
// for the no-braiding boundary checks).

#include <optional>
#include <sstream>
#include <string>

#include "anyonsim/consistency.hpp"
#include "anyonsim/derived.hpp"
#include "anyonsim/group.hpp"
#include "anyonsim/skeletal.hpp"

namespace anyonsim {

enum class RingKind { ising, tambara_yamagami, cyclic_ty };

struct FusionRingSpec {
  RingKind kind = RingKind::ising;
  int n = 1;          // Z_2^n rank for ising/tambara_yamagami, group order for cyclic_ty
  double kappa = 1.0; // Frobenius-Schur indicator of q
  std::optional<BicharacterTable> bicharacter;  // override for tambara_yamagami

  void validate() const {
    if (kappa != 1.0 && kappa != -1.0) throw std::invalid_argument("FusionRingSpec: kappa must be +-1");
    if (kind == RingKind::tambara_yamagami && (n < 1 || n > 4))
      throw std::invalid_argument("FusionRingSpec: tambara_yamagami needs 1 <= n <= 4");
    if (kind == RingKind::cyclic_ty && n < 2)
      throw std::invalid_argument("FusionRingSpec: cyclic_ty needs group order >= 2");
  }
};

namespace detail {

// TY fusion rules on d group labels (indices 0..d-1, group product given by
// `mul`) plus the nonabelian label q at index d.
inline FusionRules ty_rules(int d, auto mul, auto inv, auto name) {
  FusionRules ru = FusionRules::empty(d + 1);
  const int q = d;
  for (int g = 0; g < d; ++g) {
    ru.labels[g] = name(g);
    ru.dual[g] = inv(g);
  }
  ru.labels[q] = "q";
  ru.dual[q] = q;
  for (int g1 = 0; g1 < d; ++g1)
    for (int g2 = 0; g2 < d; ++g2) ru.set_fuses(g1, g2, mul(g1, g2));
  for (int g = 0; g < d; ++g) {
    ru.set_fuses(g, q, q);
    ru.set_fuses(q, g, q);
    ru.set_fuses(q, q, g);
  }
  return ru;
}

// Shared F-data construction.  chi must be a symmetric nondegenerate
// bicharacter; the nontrivial blocks are
//   F^{gqh}_q = chi(g,h) , F^{qgq}_h = chi(g,h) , [F^{qqq}_q]_{fe} = kappa chi(f,e)^* / sqrt(d)
// and every other admissible block is the identity.  The assignment is
// validated against the pentagon checker rather than trusted.
inline SkeletalData ty_skeletal(FusionRules rules, int d, double kappa, auto chi,
                                const std::string& name, bool validate) {
  SkeletalData data;
  data.name = name;
  data.rules = std::move(rules);
  init_f_blocks_identity(data);
  const int q = d;
  for (int g1 = 0; g1 < d; ++g1)
    for (int g2 = 0; g2 < d; ++g2) {
      data.f_blocks.at(FKey{g1, q, g2, q}).m(0, 0) = chi(g1, g2);
      data.f_blocks.at(FKey{q, g1, q, g2}).m(0, 0) = chi(g1, g2);
    }
  FBlock& fq = data.f_blocks.at(FKey{q, q, q, q});
  const double root = std::sqrt((double)d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) fq.m(i, j) = kappa * std::conj(chi(fq.row_labels[i], fq.col_labels[j])) / root;
  if (validate) {
    ResidualReport rep = check_pentagon(data);
    if (rep.max_residual > 1e-9)
      throw StructuralError("ty_skeletal: construction failed the pentagon check, residual " +
                            std::to_string(rep.max_residual));
  }
  return data;
}

}  // namespace detail

// TY(Z_2^n) with the standard dot-product bicharacter (or a validated
// override table).  F-only; R-data comes from the hexagon solver.
inline SkeletalData build_tambara_yamagami(int n, double kappa,
                                           const std::optional<BicharacterTable>& table = std::nullopt,
                                           bool validate = true) {
  if (n < 1 || n > 4) throw std::invalid_argument("build_tambara_yamagami: need 1 <= n <= 4");
  if (kappa != 1.0 && kappa != -1.0)
    throw std::invalid_argument("build_tambara_yamagami: kappa must be +-1");
  const int d = 1 << n;
  if (table && table->table.rows() != d)
    throw std::invalid_argument("build_tambara_yamagami: override table has wrong size");
  auto name = [&](int g) {
    if (n == 1) return std::string(g ? "1" : "0");
    return g == 0 ? std::string("0") : "g:" + GroupElement((std::uint32_t)g, n).to_string();
  };
  FusionRules ru = detail::ty_rules(
      d, [](int a, int b) { return a ^ b; }, [](int a) { return a; }, name);
  auto chi = [&](int g, int h) -> cplx {
    if (table) return (*table)((std::uint32_t)g, (std::uint32_t)h);
    return standard_bicharacter(GroupElement((std::uint32_t)g, n), GroupElement((std::uint32_t)h, n));
  };
  std::ostringstream nm;
  nm << "ty(n=" << n << ",kappa=" << (kappa > 0 ? "+1" : "-1") << ")";
  return detail::ty_skeletal(std::move(ru), d, kappa, chi, nm.str(), validate);
}

// Ising = TY(Z_2): labels {0,1,q}, F^{qqq}_q = kappa/sqrt(2) [[1,1],[1,-1]],
// F^{1q1}_q = F^{q1q}_1 = -1.
inline SkeletalData build_ising(double kappa, bool validate = true) {
  SkeletalData data = build_tambara_yamagami(1, kappa, std::nullopt, validate);
  data.name = std::string("ising(") + (kappa > 0 ? "+1" : "-1") + ")";
  return data;
}

// TY(Z_m) fusion ring with bicharacter chi(j,k) = exp(2 pi i jk / m).  Valid
// fusion-category data for any m, but admits a braiding only when m == 2.
inline SkeletalData build_tambara_yamagami_cyclic(int m, double kappa, bool validate = true) {
  if (m < 2 || m > 8) throw std::invalid_argument("build_tambara_yamagami_cyclic: need 2 <= m <= 8");
  auto name = [&](int g) { return g == 0 ? std::string("0") : "g:" + std::to_string(g); };
  FusionRules ru = detail::ty_rules(
      m, [m](int a, int b) { return (a + b) % m; }, [m](int a) { return (m - a) % m; }, name);
  auto chi = [m](int j, int k) { return std::polar(1.0, 2.0 * kPi * j * k / m); };
  std::ostringstream nm;
  nm << "ty-z" << m << "(kappa=" << (kappa > 0 ? "+1" : "-1") << ")";
  return detail::ty_skeletal(std::move(ru), m, kappa, chi, nm.str(), validate);
}

inline SkeletalData build_theory(const FusionRingSpec& spec, bool validate = true) {
  spec.validate();
  switch (spec.kind) {
    case RingKind::ising:
      return build_ising(spec.kappa, validate);
    case RingKind::tambara_yamagami:
      return build_tambara_yamagami(spec.n, spec.kappa, spec.bicharacter, validate);
    case RingKind::cyclic_ty:
      return build_tambara_yamagami_cyclic(spec.n, spec.kappa, validate);
  }
  throw std::invalid_argument("build_theory: unknown kind");
}

// Index of the nonabelian label q (always last for TY-style theories).
inline int q_label(const SkeletalData& data) { return data.rules.rank() - 1; }

}  // namespace anyonsim
