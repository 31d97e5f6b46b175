#pragma once

// Numerical enumeration of braidings: treats every unknown R^{ab}_c as a unit
// phase e^{i angle}, minimises the total squared hexagon residual with damped
// least squares from many random starts, and deduplicates converged solutions
// by their gauge-invariant signature (topological spins and R^{aa}_b).
//
// The residual evaluation here is written independently of
// consistency.hpp::check_hexagon, which acts as the second route for
// validating every returned solution.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "anyonsim/derived.hpp"
#include "anyonsim/rng.hpp"
#include "anyonsim/skeletal.hpp"

namespace anyonsim {

struct BraidingSolution {
  SkeletalData theory;        // input F-data plus the solved R-symbols
  std::vector<cplx> spins;    // theta per label, trace formula
  double kappa_q = 1.0;       // FS indicator of the last label
  double residual = 0.0;      // max |hexagon residual| at the solution
  std::vector<long long> key; // rounded invariant tuple used for dedup
};

namespace detail {

struct RSlots {
  std::vector<std::array<int, 3>> slots;  // (a,b,c) with a,b nonzero
  std::map<std::tuple<int, int, int>, int> index;

  explicit RSlots(const FusionRules& ru) {
    for (int a = 1; a < ru.rank(); ++a)
      for (int b = 1; b < ru.rank(); ++b)
        for (int c : ru.product(a, b)) {
          index[{a, b, c}] = (int)slots.size();
          slots.push_back({a, b, c});
        }
  }

  // -1 encodes a vacuum slot fixed to R = 1.
  int slot(int a, int b, int c) const {
    if (a == 0 || b == 0) return -1;
    return index.at({a, b, c});
  }
};

class HexagonSystem {
 public:
  explicit HexagonSystem(const SkeletalData& data) : data_(data), slots_(data.rules) {
    const FusionRules& ru = data.rules;
    const int n = ru.rank();
    for (int variant = 0; variant < 2; ++variant)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            for (int x : ru.product(a, b)) {
              for (int d : ru.product(x, c))
                for (int z : ru.product(a, c)) {
                  if (!ru.fuses(b, z, d)) continue;
                  Instance inst;
                  inst.variant = variant;
                  for (int y : ru.product(b, c)) {
                    if (!ru.fuses(a, y, d)) continue;
                    cplx coef = data.f(b, c, a, d, z, y) * data.f(a, b, c, d, y, x);
                    inst.lhs.push_back({coef, rslot(variant, a, y, d)});
                  }
                  inst.rhs_coef = data.f(b, a, c, d, z, x);
                  inst.rhs_slot1 = rslot(variant, a, c, z);
                  inst.rhs_slot2 = rslot(variant, a, b, x);
                  instances_.push_back(std::move(inst));
                }
            }
  }

  int n_unknowns() const { return (int)slots_.slots.size(); }
  int n_residuals() const { return 2 * (int)instances_.size(); }
  const RSlots& slots() const { return slots_; }

  // Residuals stacked (re, im) per instance; angles parametrise R = e^{i t}.
  void eval(const std::vector<double>& angles, std::vector<double>& out) const {
    std::vector<cplx> rv(angles.size()), rc(angles.size());
    for (size_t k = 0; k < angles.size(); ++k) {
      rv[k] = std::polar(1.0, angles[k]);
      rc[k] = std::conj(rv[k]);
    }
    auto value = [&](int signed_slot) -> cplx {
      if (signed_slot == kOne) return cplx(1, 0);
      if (signed_slot >= 0) return rv[signed_slot];
      return rc[-signed_slot - 2];
    };
    out.resize(n_residuals());
    for (size_t i = 0; i < instances_.size(); ++i) {
      const Instance& inst = instances_[i];
      cplx lhs(0, 0);
      for (const auto& [coef, slot] : inst.lhs) lhs += coef * value(slot);
      cplx r = lhs - inst.rhs_coef * value(inst.rhs_slot1) * value(inst.rhs_slot2);
      out[2 * i] = r.real();
      out[2 * i + 1] = r.imag();
    }
  }

  double max_abs_residual(const std::vector<double>& angles) const {
    std::vector<double> r;
    eval(angles, r);
    double m = 0;
    for (size_t i = 0; i < r.size(); i += 2) m = std::max(m, std::hypot(r[i], r[i + 1]));
    return m;
  }

 private:
  static constexpr int kOne = std::numeric_limits<int>::min();

  // Encoding: kOne -> fixed 1; s >= 0 -> R[s]; s <= -2 -> conj(R[-s-2]).
  int rslot(int variant, int a, int b, int c) const {
    if (variant == 0) {
      int s = slots_.slot(a, b, c);
      return s < 0 ? kOne : s;
    }
    int s = slots_.slot(b, a, c);  // (R^-1)^{ab}_c = conj(R^{ba}_c)
    return s < 0 ? kOne : -s - 2;
  }

  struct Instance {
    int variant;
    std::vector<std::pair<cplx, int>> lhs;
    cplx rhs_coef;
    int rhs_slot1, rhs_slot2;
  };

  const SkeletalData& data_;
  RSlots slots_;
  std::vector<Instance> instances_;
};

// Dense Levenberg-Marquardt with forward-difference Jacobian; dimensions stay
// below ~40 unknowns for every theory in scope.
inline bool lm_minimize(const HexagonSystem& sys, std::vector<double>& x, int max_iter) {
  const int n = sys.n_unknowns();
  const int m = sys.n_residuals();
  std::vector<double> r(m), r_try(m), xt(n);
  std::vector<double> jac((size_t)m * n);
  sys.eval(x, r);
  auto sq = [](const std::vector<double>& v) {
    double s = 0;
    for (double e : v) s += e * e;
    return s;
  };
  double cost = sq(r);
  double lambda = 1e-3;
  const double h = 1e-7;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (cost < 1e-24) return true;
    for (int j = 0; j < n; ++j) {
      xt = x;
      xt[j] += h;
      sys.eval(xt, r_try);
      for (int i = 0; i < m; ++i) jac[(size_t)i * n + j] = (r_try[i] - r[i]) / h;
    }
    // normal equations with Marquardt damping
    std::vector<double> jtj((size_t)n * n, 0.0), jtr(n, 0.0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        double jij = jac[(size_t)i * n + j];
        jtr[j] += jij * r[i];
        for (int k = j; k < n; ++k) jtj[(size_t)j * n + k] += jij * jac[(size_t)i * n + k];
      }
    }
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < j; ++k) jtj[(size_t)j * n + k] = jtj[(size_t)k * n + j];

    bool stepped = false;
    for (int attempt = 0; attempt < 12 && !stepped; ++attempt) {
      std::vector<double> a = jtj, rhs = jtr;
      for (int j = 0; j < n; ++j) a[(size_t)j * n + j] += lambda * (jtj[(size_t)j * n + j] + 1e-12);
      // Gaussian elimination with partial pivoting
      std::vector<double> sol(n);
      bool singular = false;
      {
        std::vector<int> piv(n);
        for (int j = 0; j < n; ++j) piv[j] = j;
        for (int col = 0; col < n; ++col) {
          int best = col;
          for (int row = col + 1; row < n; ++row)
            if (std::abs(a[(size_t)row * n + col]) > std::abs(a[(size_t)best * n + col])) best = row;
          if (std::abs(a[(size_t)best * n + col]) < 1e-300) {
            singular = true;
            break;
          }
          if (best != col) {
            for (int j = 0; j < n; ++j) std::swap(a[(size_t)best * n + j], a[(size_t)col * n + j]);
            std::swap(rhs[best], rhs[col]);
          }
          for (int row = col + 1; row < n; ++row) {
            double f = a[(size_t)row * n + col] / a[(size_t)col * n + col];
            if (f == 0) continue;
            for (int j = col; j < n; ++j) a[(size_t)row * n + j] -= f * a[(size_t)col * n + j];
            rhs[row] -= f * rhs[col];
          }
        }
        if (!singular)
          for (int col = n - 1; col >= 0; --col) {
            double s = rhs[col];
            for (int j = col + 1; j < n; ++j) s -= a[(size_t)col * n + j] * sol[j];
            sol[col] = s / a[(size_t)col * n + col];
          }
      }
      if (singular) {
        lambda *= 10;
        continue;
      }
      for (int j = 0; j < n; ++j) xt[j] = x[j] - sol[j];
      sys.eval(xt, r_try);
      double cost_try = sq(r_try);
      if (cost_try < cost) {
        x = xt;
        r = r_try;
        cost = cost_try;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
      } else {
        lambda *= 3.0;
      }
    }
    if (!stepped) return cost < 1e-20;
  }
  return cost < 1e-20;
}

}  // namespace detail

// Signature used to identify a gauge class: all theta_a followed by all
// R^{aa}_b, rounded to a 1e-5 grid.
inline std::vector<long long> braiding_invariant_key(const SkeletalData& with_r,
                                                     const std::vector<double>& dims) {
  std::vector<long long> key;
  auto push = [&](cplx v) {
    key.push_back(std::llround(v.real() / 1e-5));
    key.push_back(std::llround(v.imag() / 1e-5));
  };
  const FusionRules& ru = with_r.rules;
  for (int a = 0; a < ru.rank(); ++a) {
    cplx th(0, 0);
    for (int c : ru.product(a, a)) th += dims[c] * with_r.r(a, a, c);
    push(th / dims[a]);
  }
  for (int a = 1; a < ru.rank(); ++a)
    for (int b : ru.product(a, a)) push(with_r.r(a, a, b));
  return key;
}

// Enumerates braidings of pentagon-valid F-data.  An empty result is a valid
// outcome meaning "no braiding found with this restart budget".
inline std::vector<BraidingSolution> solve_hexagon(const SkeletalData& f_data, std::uint64_t seed,
                                                   int restarts = 200, int max_iter = 500,
                                                   double keep_tol = 1e-7) {
  detail::HexagonSystem sys(f_data);
  auto dims = quantum_dimensions(f_data.rules);
  PivotalData piv = pivotal_and_fs(f_data, dims);
  const int nq = f_data.rules.rank() - 1;

  std::map<std::vector<long long>, BraidingSolution> classes;
  Rng root(seed);
  for (int restart = 0; restart < restarts; ++restart) {
    Rng rng = root.split();
    std::vector<double> angles(sys.n_unknowns());
    for (double& a : angles) a = 2.0 * kPi * rng.uniform();
    detail::lm_minimize(sys, angles, max_iter);
    double res = sys.max_abs_residual(angles);
    if (res >= keep_tol) continue;

    SkeletalData sol = f_data;
    sol.has_r = true;
    for (size_t k = 0; k < sys.slots().slots.size(); ++k) {
      auto [a, b, c] = sys.slots().slots[k];
      sol.r_symbols[{a, b}][c] = std::polar(1.0, angles[k]);
    }
    for (int a = 0; a < f_data.rules.rank(); ++a) {
      sol.r_symbols[{a, 0}][a] = cplx(1, 0);
      sol.r_symbols[{0, a}][a] = cplx(1, 0);
    }
    BraidingSolution bs;
    bs.key = braiding_invariant_key(sol, dims);
    if (classes.count(bs.key)) continue;
    bs.theory = std::move(sol);
    bs.residual = res;
    bs.kappa_q = piv.fs_indicator.count(nq) ? piv.fs_indicator.at(nq) : 0.0;
    for (int a = 0; a < f_data.rules.rank(); ++a) {
      cplx th(0, 0);
      for (int c : f_data.rules.product(a, a)) th += dims[c] * bs.theory.r(a, a, c);
      bs.spins.push_back(th / dims[a]);
    }
    classes.emplace(bs.key, std::move(bs));
  }
  std::vector<BraidingSolution> out;
  for (auto& [k, v] : classes) out.push_back(std::move(v));
  return out;
}

}  // namespace anyonsim
