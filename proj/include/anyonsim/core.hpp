#pragma once

// Dense complex matrices, numeric helpers and the tolerance policy shared by
// every other header.

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace anyonsim {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct AnyonError : std::runtime_error {
  explicit AnyonError(const std::string& msg) : std::runtime_error(msg) {}
};

// A required F/R entry is absent or an operation addressed a label tuple that
// the fusion rules do not admit.
struct StructuralError : AnyonError {
  using AnyonError::AnyonError;
};

// Data violates an identity it should satisfy (|t_a| != 1, spin cross-check
// mismatch, ...).
struct InconsistentDataError : AnyonError {
  using AnyonError::AnyonError;
};

struct NumericalError : AnyonError {
  using AnyonError::AnyonError;
};

// Raised when a protocol asks for a capability the theory lacks, e.g. a braid
// on a theory without R-symbols.
struct UnsupportedOperationError : AnyonError {
  using AnyonError::AnyonError;
};

// Absolute entrywise tolerance; valid range is (0,1).
struct Tolerance {
  double eps;
  explicit Tolerance(double e) : eps(e) {
    if (!(e > 0.0 && e < 1.0)) throw std::invalid_argument("Tolerance: eps must lie in (0,1)");
  }
};

// Exactly constructed data is held to 1e-9, solver-produced data to 1e-7.
inline Tolerance consistency_tol() { return Tolerance{1e-9}; }
inline Tolerance solver_data_tol() { return Tolerance{1e-7}; }

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_((size_t)rows * cols, cplx(0, 0)) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("CMatrix: dimensions must be positive");
  }

  static CMatrix identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int i, int j) { return a_[(size_t)i * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[(size_t)i * cols_ + j]; }

  CMatrix dagger() const {
    CMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  CMatrix operator*(const CMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("CMatrix: shape mismatch in product");
    CMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        cplx v = (*this)(i, k);
        if (v == cplx(0, 0)) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
      }
    return r;
  }

  CMatrix operator*(cplx s) const {
    CMatrix r = *this;
    for (auto& x : r.a_) x *= s;
    return r;
  }

  double max_abs_diff(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("CMatrix: shape mismatch in diff");
    double m = 0;
    for (size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::abs(a_[i] - o.a_[i]));
    return m;
  }

  // Max-entry deviation of m^dagger m from the identity.
  double unitarity_defect() const {
    if (rows_ != cols_) throw std::invalid_argument("CMatrix: unitarity check needs a square matrix");
    return (dagger() * (*this)).max_abs_diff(identity(rows_));
  }

  // |det| via partial-pivot LU; used for nondegeneracy checks only.
  double abs_det() const {
    if (rows_ != cols_) throw std::invalid_argument("CMatrix: determinant needs a square matrix");
    std::vector<cplx> m = a_;
    int n = rows_;
    double d = 1.0;
    for (int k = 0; k < n; ++k) {
      int piv = k;
      for (int i = k + 1; i < n; ++i)
        if (std::abs(m[(size_t)i * n + k]) > std::abs(m[(size_t)piv * n + k])) piv = i;
      if (std::abs(m[(size_t)piv * n + k]) == 0.0) return 0.0;
      if (piv != k)
        for (int j = 0; j < n; ++j) std::swap(m[(size_t)piv * n + j], m[(size_t)k * n + j]);
      d *= std::abs(m[(size_t)k * n + k]);
      for (int i = k + 1; i < n; ++i) {
        cplx f = m[(size_t)i * n + k] / m[(size_t)k * n + k];
        for (int j = k; j < n; ++j) m[(size_t)i * n + j] -= f * m[(size_t)k * n + j];
      }
    }
    return d;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
};

inline bool is_unitary(const CMatrix& m, Tolerance tol) { return m.unitarity_defect() <= tol.eps; }

inline bool approx_eq(cplx a, cplx b, double eps) { return std::abs(a - b) <= eps; }

}  // namespace anyonsim
