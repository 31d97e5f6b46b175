#pragma once

// Quantities computed from skeletal data: quantum dimensions, leg-bending
// operators, pivotal coefficients / Frobenius-Schur indicators, topological
// spins, monodromies and the S-matrix.

#include <map>
#include <optional>
#include <vector>

#include "anyonsim/consistency.hpp"
#include "anyonsim/skeletal.hpp"

namespace anyonsim {

enum class Bend { K, L };

// K^{ab}_c = sqrt(d_a d_b / d_c) [F^{abar,a,b}_b]*_{c,0}
// L^{ab}_c = sqrt(d_a d_b / d_c) [F^{a,b,bbar}_a]_{0,c}
// In the multiplicity-free scope these are 1x1; the lowered-index versions
// K^c_{ab}, L^c_{ab} are their complex conjugates.
inline CMatrix leg_bending(const SkeletalData& data, Bend which, int a, int b, int c,
                           const std::vector<double>& dims) {
  const FusionRules& ru = data.rules;
  if (!ru.fuses(a, b, c)) throw StructuralError("leg_bending: inadmissible triple");
  double pref = std::sqrt(dims[a] * dims[b] / dims[c]);
  CMatrix m(1, 1);
  if (which == Bend::K)
    m(0, 0) = pref * std::conj(data.f(ru.dual[a], a, b, b, c, 0));
  else
    m(0, 0) = pref * data.f(a, b, ru.dual[b], a, 0, c);
  return m;
}

inline CMatrix leg_bending_lowered(const SkeletalData& data, Bend which, int a, int b, int c,
                                   const std::vector<double>& dims) {
  CMatrix m = leg_bending(data, which, a, b, c, dims);
  m(0, 0) = std::conj(m(0, 0));
  return m;
}

struct PivotalData {
  std::vector<cplx> t;                 // pivotal coefficient per label
  std::map<int, double> fs_indicator;  // self-dual labels -> +-1
};

// t_a = d_a [F^{a,abar,a}_a]*_{00}; for self-dual a this is the
// Frobenius-Schur indicator kappa_a in {+1,-1}.
inline PivotalData pivotal_and_fs(const SkeletalData& data, const std::vector<double>& dims,
                                  Tolerance tol = consistency_tol()) {
  const FusionRules& ru = data.rules;
  PivotalData out;
  out.t.resize(ru.rank());
  for (int a = 0; a < ru.rank(); ++a) {
    cplx ta = dims[a] * std::conj(data.f(a, ru.dual[a], a, a, 0, 0));
    if (std::abs(std::abs(ta) - 1.0) > tol.eps)
      throw InconsistentDataError("pivotal_and_fs: |t_a| deviates from 1 at label " +
                                  ru.labels[a]);
    out.t[a] = ta;
    if (ru.is_self_dual(a)) {
      double kappa = ta.real() >= 0 ? 1.0 : -1.0;
      if (std::abs(ta - cplx(kappa, 0)) > tol.eps)
        throw InconsistentDataError("pivotal_and_fs: FS indicator not +-1 at label " +
                                    ru.labels[a]);
      out.fs_indicator[a] = kappa;
    }
  }
  return out;
}

// theta_a = (1/d_a) sum_c d_c R^{aa}_c, cross-checked against
// theta_a = t_a (R^{abar,a}_0)^*.
inline std::vector<cplx> topological_spins(const SkeletalData& data,
                                           const std::vector<double>& dims,
                                           Tolerance tol = consistency_tol()) {
  if (!data.has_r) throw UnsupportedOperationError("topological_spins: theory has no R-symbols");
  const FusionRules& ru = data.rules;
  PivotalData piv = pivotal_and_fs(data, dims, tol);
  std::vector<cplx> spins(ru.rank());
  for (int a = 0; a < ru.rank(); ++a) {
    cplx s(0, 0);
    for (int c : ru.product(a, a)) s += dims[c] * data.r(a, a, c);
    s /= dims[a];
    cplx cross = piv.t[a] * std::conj(data.r(ru.dual[a], a, 0));
    if (std::abs(s - cross) > tol.eps)
      throw InconsistentDataError("topological_spins: cross-check failed at label " +
                                  ru.labels[a]);
    spins[a] = s;
  }
  return spins;
}

// M^{ab}_c = R^{ba}_c R^{ab}_c, equal to theta_c / (theta_a theta_b).
inline std::map<int, cplx> monodromy(const SkeletalData& data, int a, int b,
                                     Tolerance tol = consistency_tol()) {
  const FusionRules& ru = data.rules;
  auto dims = quantum_dimensions(ru);
  auto spins = topological_spins(data, dims, tol);
  std::map<int, cplx> out;
  for (int c : ru.product(a, b)) {
    cplx m = data.r(b, a, c) * data.r(a, b, c);
    cplx expect = spins[c] / (spins[a] * spins[b]);
    if (std::abs(m - expect) > tol.eps)
      throw InconsistentDataError("monodromy: spin identity failed at channel " + ru.labels[c]);
    out[c] = m;
  }
  return out;
}

struct SMatrixResult {
  CMatrix s;
  bool modular;
};

// [S]_{ab} = D^{-1} sum_c (theta_c / theta_a theta_b) N^{a,bbar}_c d_c; the
// theory is modular iff S is unitary.
inline SMatrixResult s_matrix(const SkeletalData& data, Tolerance tol = consistency_tol()) {
  const FusionRules& ru = data.rules;
  auto dims = quantum_dimensions(ru);
  auto spins = topological_spins(data, dims, tol);
  double total = total_quantum_dimension(dims);
  CMatrix s(ru.rank(), ru.rank());
  for (int a = 0; a < ru.rank(); ++a)
    for (int b = 0; b < ru.rank(); ++b) {
      cplx acc(0, 0);
      for (int c : ru.product(a, ru.dual[b])) acc += spins[c] / (spins[a] * spins[b]) * dims[c];
      s(a, b) = acc / total;
    }
  return SMatrixResult{s, is_unitary(s, tol)};
}

struct DerivedData {
  std::vector<double> qdim;
  double total_dim = 0;
  std::vector<cplx> pivotal;
  std::map<int, double> fs;
  std::vector<cplx> spin;        // empty when the theory has no R-symbols
  std::optional<CMatrix> smatrix;
  bool modular = false;
  bool spins_root_of_unity = true;
};

// Vafa: every topological spin is a root of unity; checked up to order 64.
inline bool is_root_of_unity(cplx z, int max_order = 64, double eps = 1e-9) {
  cplx p(1, 0);
  for (int k = 1; k <= max_order; ++k) {
    p *= z;
    if (std::abs(p - cplx(1, 0)) <= eps) return true;
  }
  return false;
}

inline DerivedData compute_derived(const SkeletalData& data, Tolerance tol = consistency_tol()) {
  DerivedData out;
  out.qdim = quantum_dimensions(data.rules);
  out.total_dim = total_quantum_dimension(out.qdim);
  PivotalData piv = pivotal_and_fs(data, out.qdim, tol);
  out.pivotal = piv.t;
  out.fs = piv.fs_indicator;
  if (data.has_r) {
    out.spin = topological_spins(data, out.qdim, tol);
    for (const cplx& th : out.spin)
      if (!is_root_of_unity(th, 64, std::max(tol.eps, 1e-7))) out.spins_root_of_unity = false;
    SMatrixResult sm = s_matrix(data, tol);
    out.smatrix = sm.s;
    out.modular = sm.modular;
  }
  return out;
}

}  // namespace anyonsim
