#pragma once

// Pentagon and hexagon checkers.  These evaluate the multiplicity-free
// consistency equations over every admissible labelling and report the worst
// residual together with the labelling that produced it.

#include <array>
#include <sstream>
#include <string>

#include "anyonsim/skeletal.hpp"

namespace anyonsim {

struct ResidualReport {
  double max_residual = 0.0;
  long instances = 0;
  std::array<int, 9> worst{};  // labelling of the worst instance

  std::string worst_string(const FusionRules& rules) const {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < worst.size(); ++i) os << (i ? "," : "") << rules.labels[worst[i]];
    os << ")";
    return os.str();
  }
};

// [F^{abr}_e]_{sp} [F^{pcd}_e]_{rq} = sum_t [F^{bcd}_s]_{rt} [F^{atd}_e]_{sq} [F^{abc}_q]_{tp}
inline ResidualReport check_pentagon(const SkeletalData& data) {
  const FusionRules& ru = data.rules;
  const int n = ru.rank();
  ResidualReport rep;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int p : ru.product(a, b))
        for (int c = 0; c < n; ++c)
          for (int q : ru.product(p, c))
            for (int d = 0; d < n; ++d)
              for (int e : ru.product(q, d))
                for (int r : ru.product(c, d)) {
                  if (!ru.fuses(p, r, e)) continue;
                  for (int s : ru.product(b, r)) {
                    if (!ru.fuses(a, s, e)) continue;
                    cplx lhs = data.f(a, b, r, e, s, p) * data.f(p, c, d, e, r, q);
                    cplx rhs(0, 0);
                    for (int t : ru.product(b, c))
                      rhs += data.f(b, c, d, s, r, t) * data.f(a, t, d, e, s, q) *
                             data.f(a, b, c, q, t, p);
                    double res = std::abs(lhs - rhs);
                    ++rep.instances;
                    if (res > rep.max_residual) {
                      rep.max_residual = res;
                      rep.worst = {a, b, c, d, e, p, q, r, s};
                    }
                  }
                }
  return rep;
}

// Both hexagon variants:
//   sum_y [F^{bca}_d]_{zy} [R^{ay}_d]      [F^{abc}_d]_{yx} = [R^{ac}_z]      [F^{bac}_d]_{zx} [R^{ab}_x]
//   sum_y [F^{bca}_d]_{zy} [(R^-1)^{ay}_d] [F^{abc}_d]_{yx} = [(R^-1)^{ac}_z] [F^{bac}_d]_{zx} [(R^-1)^{ab}_x]
inline ResidualReport check_hexagon(const SkeletalData& data) {
  if (!data.has_r) throw UnsupportedOperationError("check_hexagon: theory has no R-symbols");
  const FusionRules& ru = data.rules;
  const int n = ru.rank();
  ResidualReport rep;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int x : ru.product(a, b))
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            if (!ru.fuses(x, c, d)) continue;
            for (int z : ru.product(a, c)) {
              if (!ru.fuses(b, z, d)) continue;
              for (int variant = 0; variant < 2; ++variant) {
                auto rsym = [&](int u, int v, int w) {
                  return variant == 0 ? data.r(u, v, w) : data.r_inv(u, v, w);
                };
                cplx lhs(0, 0);
                for (int y : ru.product(b, c)) {
                  if (!ru.fuses(a, y, d)) continue;
                  lhs += data.f(b, c, a, d, z, y) * rsym(a, y, d) * data.f(a, b, c, d, y, x);
                }
                cplx rhs = rsym(a, c, z) * data.f(b, a, c, d, z, x) * rsym(a, b, x);
                double res = std::abs(lhs - rhs);
                ++rep.instances;
                if (res > rep.max_residual) {
                  rep.max_residual = res;
                  rep.worst = {a, b, c, d, x, z, variant, 0, 0};
                }
              }
            }
          }
  return rep;
}

}  // namespace anyonsim
