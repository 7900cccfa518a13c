#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "anisogeo/jet.hpp"

namespace anisogeo {

// Dense row-major matrix over double or Jet.
template <class T>
struct Mat {
  int rows = 0, cols = 0;
  std::vector<T> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
  Mat(int r, int c, const T& fill)
      : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, fill) {}

  T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  const T& operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i) * cols + j];
  }
};

using MatD = Mat<double>;
using MatJ = Mat<Jet>;

template <class T>
struct Ten3 {
  int d0 = 0, d1 = 0, d2 = 0;
  std::vector<T> a;
  Ten3() = default;
  Ten3(int a0, int a1, int a2)
      : d0(a0), d1(a1), d2(a2),
        a(static_cast<std::size_t>(a0) * a1 * a2) {}
  T& operator()(int i, int j, int k) {
    return a[(static_cast<std::size_t>(i) * d1 + j) * d2 + k];
  }
  const T& operator()(int i, int j, int k) const {
    return a[(static_cast<std::size_t>(i) * d1 + j) * d2 + k];
  }
};

template <class T>
struct Ten4 {
  int d0 = 0, d1 = 0, d2 = 0, d3 = 0;
  std::vector<T> a;
  Ten4() = default;
  Ten4(int a0, int a1, int a2, int a3)
      : d0(a0), d1(a1), d2(a2), d3(a3),
        a(static_cast<std::size_t>(a0) * a1 * a2 * a3) {}
  T& operator()(int i, int j, int k, int l) {
    return a[((static_cast<std::size_t>(i) * d1 + j) * d2 + k) * d3 + l];
  }
  const T& operator()(int i, int j, int k, int l) const {
    return a[((static_cast<std::size_t>(i) * d1 + j) * d2 + k) * d3 + l];
  }
};

using Ten3D = Ten3<double>;
using Ten4D = Ten4<double>;
using Ten3J = Ten3<Jet>;

inline double pivot_size(double x) { return std::abs(x); }
inline double pivot_size(const Jet& x) { return std::abs(x.value()); }

template <class T>
Mat<T> matmul(const Mat<T>& A, const Mat<T>& B) {
  if (A.cols != B.rows) throw std::logic_error("matmul: shape mismatch");
  Mat<T> C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      const T& aik = A(i, k);
      for (int j = 0; j < B.cols; ++j) C(i, j) = C(i, j) + aik * B(k, j);
    }
  return C;
}

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double detail_make(const double&, double v) { return v; }
inline Jet detail_make(const Jet& proto, double v) {
  return Jet(proto.nvars(), proto.order(), v);
}
inline double detail_inv(double x) { return 1.0 / x; }
inline Jet detail_inv(const Jet& x) { return inverse(x); }

// Gauss-Jordan inverse with partial pivoting on the value part.
template <class T>
Mat<T> inverse(Mat<T> A, double tol = 1e-12) {
  if (A.rows != A.cols) throw std::logic_error("inverse: non-square");
  int n = A.rows;
  Mat<T> I(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) I(i, j) = detail_make(A(0, 0), i == j ? 1.0 : 0.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (pivot_size(A(r, col)) > pivot_size(A(piv, col))) piv = r;
    if (pivot_size(A(piv, col)) < tol)
      throw SingularMatrixError("matrix is singular to tolerance");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(A(piv, j), A(col, j));
        std::swap(I(piv, j), I(col, j));
      }
    T inv_p = detail_inv(A(col, col));
    for (int j = 0; j < n; ++j) {
      A(col, j) = A(col, j) * inv_p;
      I(col, j) = I(col, j) * inv_p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      T f = A(r, col);
      if (pivot_size(f) == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        A(r, j) = A(r, j) - f * A(col, j);
        I(r, j) = I(r, j) - f * I(col, j);
      }
    }
  }
  return I;
}

inline double det(const MatD& M) {
  MatD A = M;
  int n = A.rows;
  double d = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A(r, col)) > std::abs(A(piv, col))) piv = r;
    if (A(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(col, j));
      d = -d;
    }
    d *= A(col, col);
    for (int r = col + 1; r < n; ++r) {
      double f = A(r, col) / A(col, col);
      for (int j = col; j < n; ++j) A(r, j) -= f * A(col, j);
    }
  }
  return d;
}

// Jacobi eigenvalues of a symmetric matrix (diagnostics only).
std::vector<double> symmetric_eigenvalues(MatD A);

inline MatD values(const MatJ& M) {
  MatD R(M.rows, M.cols);
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) R(i, j) = M(i, j).value();
  return R;
}

inline double max_abs(const MatD& M) {
  double m = 0.0;
  for (double v : M.a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace anisogeo
