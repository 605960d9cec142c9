#pragma once

#include <string>
#include <vector>

#include "eisen/arith.hpp"

namespace eisen {

// Dense integer matrix; operators act on column vectors.
struct IntMatrix {
  size_t rows = 0, cols = 0;
  std::vector<i64> a;

  IntMatrix() = default;
  IntMatrix(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}

  i64& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  i64 operator()(size_t i, size_t j) const { return a[i * cols + j]; }

  static IntMatrix identity(size_t n) {
    IntMatrix I(n, n);
    for (size_t i = 0; i < n; ++i) I(i, i) = 1;
    return I;
  }

  bool operator==(const IntMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }
};

inline i64 checked_add(i64 x, i64 y) {
  i64 r;
  if (__builtin_add_overflow(x, y, &r)) throw Error(ErrorKind::Internal, "integer overflow");
  return r;
}

inline i64 checked_mul(i64 x, i64 y) {
  i64 r;
  if (__builtin_mul_overflow(x, y, &r)) throw Error(ErrorKind::Internal, "integer overflow");
  return r;
}

inline IntMatrix operator*(const IntMatrix& A, const IntMatrix& B) {
  if (A.cols != B.rows) throw Error(ErrorKind::Internal, "dimension mismatch");
  IntMatrix C(A.rows, B.cols);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t t = 0; t < A.cols; ++t) {
      i64 x = A(i, t);
      if (x == 0) continue;
      for (size_t j = 0; j < B.cols; ++j)
        if (B(t, j)) C(i, j) = checked_add(C(i, j), checked_mul(x, B(t, j)));
    }
  return C;
}

inline IntMatrix operator-(const IntMatrix& A, const IntMatrix& B) {
  IntMatrix C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = checked_add(C.a[i], -B.a[i]);
  return C;
}

inline IntMatrix operator+(const IntMatrix& A, const IntMatrix& B) {
  IntMatrix C = A;
  for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = checked_add(C.a[i], B.a[i]);
  return C;
}

inline IntMatrix scalar_shift(IntMatrix A, i64 lambda) {
  for (size_t i = 0; i < A.rows; ++i) A(i, i) -= lambda;
  return A;
}

}  // namespace eisen
