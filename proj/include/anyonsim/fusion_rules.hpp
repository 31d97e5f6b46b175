#pragma once

// Fusion rules of a multiplicity-free theory: label set, duality and the
// fusion tensor N^{ab}_c with values in {0,1}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "anyonsim/core.hpp"

namespace anyonsim {

struct FusionRules {
  std::vector<std::string> labels;  // index 0 is always the vacuum "0"
  std::vector<int> dual;
  std::vector<std::uint8_t> n_tensor;  // N^{ab}_c, rank^3, row-major (a,b,c)

  int rank() const { return (int)labels.size(); }

  bool fuses(int a, int b, int c) const { return n_tensor[idx(a, b, c)] != 0; }

  void set_fuses(int a, int b, int c) { n_tensor[idx(a, b, c)] = 1; }

  std::vector<int> product(int a, int b) const {
    std::vector<int> out;
    for (int c = 0; c < rank(); ++c)
      if (fuses(a, b, c)) out.push_back(c);
    return out;
  }

  bool is_abelian(int a) const {
    // a x abar = 0 exactly (sum_c N^{a abar}_c = 1)
    return product(a, dual[a]).size() == 1;
  }

  bool is_self_dual(int a) const { return dual[a] == a; }

  static FusionRules empty(int rank) {
    FusionRules r;
    r.labels.assign(rank, "");
    r.dual.assign(rank, 0);
    r.n_tensor.assign((size_t)rank * rank * rank, 0);
    return r;
  }

 private:
  size_t idx(int a, int b, int c) const { return ((size_t)a * rank() + b) * rank() + c; }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every FusionRules invariant and reports each violation with the
// offending triple.  An empty report means the rules are valid.
inline ValidationReport validate_fusion_rules(const FusionRules& rules) {
  ValidationReport rep;
  const int n = rules.rank();
  auto name = [&](int a) { return rules.labels[a]; };

  if (n < 1 || rules.labels[0] != "0")
    rep.violations.push_back("label 0 must be the vacuum named \"0\"");
  if ((int)rules.dual.size() != n) {
    rep.violations.push_back("dual map has wrong size");
    return rep;
  }
  for (int a = 0; a < n; ++a) {
    int ab = rules.dual[a];
    if (ab < 0 || ab >= n || rules.dual[ab] != a)
      rep.violations.push_back("dual map is not an involution at " + name(a));
  }
  if (rules.dual[0] != 0) rep.violations.push_back("vacuum must be self-dual");

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      // N^{a0}_b = N^{0a}_b = delta_ab
      if (rules.fuses(a, 0, b) != (a == b))
        rep.violations.push_back("vacuum rule N^{a0}_b violated at (" + name(a) + ",0," + name(b) + ")");
      if (rules.fuses(0, a, b) != (a == b))
        rep.violations.push_back("vacuum rule N^{0a}_b violated at (0," + name(a) + "," + name(b) + ")");
    }

  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      bool want = (b == rules.dual[a]);
      if (rules.fuses(a, b, 0) != want)
        rep.violations.push_back("dual pairing N^{ab}_0 violated at (" + name(a) + "," + name(b) + ")");
    }
  }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        bool v = rules.fuses(a, b, c);
        if (v != rules.fuses(b, a, c))
          rep.violations.push_back("symmetry (i) fails at (" + name(a) + "," + name(b) + "," + name(c) + ")");
        if (v != rules.fuses(b, rules.dual[c], rules.dual[a]))
          rep.violations.push_back("symmetry (ii) fails at (" + name(a) + "," + name(b) + "," + name(c) + ")");
        if (v != rules.fuses(rules.dual[b], rules.dual[a], rules.dual[c]))
          rep.violations.push_back("symmetry (iii) fails at (" + name(a) + "," + name(b) + "," + name(c) + ")");
      }
  return rep;
}

// Frobenius-Perron eigenvalue of [N^a]_{bc} = N^{ab}_c per label, by power
// iteration on N^a + I (the shift removes periodicity).
inline std::vector<double> quantum_dimensions(const FusionRules& rules, int max_iter = 20000,
                                              double tol = 1e-14) {
  const int n = rules.rank();
  std::vector<double> dims(n, 0.0);
  for (int a = 0; a < n; ++a) {
    std::vector<double> v(n, 1.0), w(n, 0.0);
    double lambda = 0.0, prev = -1.0;
    int it = 0;
    for (; it < max_iter; ++it) {
      for (int b = 0; b < n; ++b) {
        double s = v[b];
        for (int c = 0; c < n; ++c)
          if (rules.fuses(a, b, c)) s += v[c];
        w[b] = s;
      }
      double num = 0, den = 0;
      for (int b = 0; b < n; ++b) {
        num += w[b] * v[b];
        den += v[b] * v[b];
      }
      lambda = num / den;
      double norm = 0;
      for (double x : w) norm += x * x;
      norm = std::sqrt(norm);
      for (int b = 0; b < n; ++b) v[b] = w[b] / norm;
      if (std::abs(lambda - prev) < tol) break;
      prev = lambda;
    }
    if (it == max_iter) throw NumericalError("quantum_dimensions: power iteration did not converge");
    dims[a] = lambda - 1.0;
  }
  return dims;
}

inline double total_quantum_dimension(const std::vector<double>& dims) {
  double s = 0;
  for (double d : dims) s += d * d;
  return std::sqrt(s);
}

// Max residual of d_a d_b = sum_c N^{ab}_c d_c over all label pairs.
inline double qdim_product_residual(const FusionRules& rules, const std::vector<double>& dims) {
  double worst = 0;
  for (int a = 0; a < rules.rank(); ++a)
    for (int b = 0; b < rules.rank(); ++b) {
      double s = 0;
      for (int c = 0; c < rules.rank(); ++c)
        if (rules.fuses(a, b, c)) s += dims[c];
      worst = std::max(worst, std::abs(dims[a] * dims[b] - s));
    }
  return worst;
}

}  // namespace anyonsim
