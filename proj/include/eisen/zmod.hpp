#pragma once

// Dense linear algebra over the chain ring Z/p^k (k = 1 gives F_p).

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eisen/arith.hpp"

namespace eisen {

struct Zpk {
  u64 p = 0;
  int k = 0;
  u64 m = 0;  // p^k, kept below 2^31 so products fit in 64 bits
  std::vector<u64> pw;

  Zpk() = default;
  Zpk(u64 p_, int k_) : p(p_), k(k_) {
    if (k_ < 1) throw Error(ErrorKind::BadInput, "precision must be positive");
    m = 1;
    pw.push_back(1);
    for (int i = 0; i < k_; ++i) {
      if (m > (1ull << 31) / p) throw Error(ErrorKind::BadInput, "p^k must stay below 2^31");
      m *= p;
      pw.push_back(m);
    }
  }

  // Largest k with p^k below 2^26, which allows delayed reduction in products.
  static Zpk max_precision(u64 p) {
    int k = 0;
    u64 v = 1;
    while (v * p < (1ull << 26)) { v *= p; ++k; }
    return Zpk(p, std::max(k, 1));
  }

  u64 red(i64 a) const { return mod_floor(a, m); }
  u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= m ? s - m : s; }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + m - b; }
  u64 mul(u64 a, u64 b) const { return a * b % m; }
  u64 neg(u64 a) const { return a == 0 ? 0 : m - a; }

  int val(u64 a) const {
    if (a == 0) return k;
    int v = 0;
    while (a % p == 0) { a /= p; ++v; }
    return v;
  }

  u64 inv(u64 a) const {
    if (a % p == 0) throw Error(ErrorKind::Internal, "inverting a non-unit");
    return inv_mod(a, m);
  }

  // Signed representative in (-m/2, m/2].
  i64 lift(u64 a) const { return a > m / 2 ? (i64)a - (i64)m : (i64)a; }
};

struct Mat {
  size_t rows = 0, cols = 0;
  std::vector<u64> a;

  Mat() = default;
  Mat(size_t r, size_t c) : rows(r), cols(c), a(r * c, 0) {}

  u64& operator()(size_t i, size_t j) { return a[i * cols + j]; }
  u64 operator()(size_t i, size_t j) const { return a[i * cols + j]; }
  u64* row(size_t i) { return a.data() + i * cols; }
  const u64* row(size_t i) const { return a.data() + i * cols; }

  static Mat identity(size_t n) {
    Mat I(n, n);
    for (size_t i = 0; i < n; ++i) I(i, i) = 1;
    return I;
  }

  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

  bool is_zero() const {
    return std::all_of(a.begin(), a.end(), [](u64 x) { return x == 0; });
  }
};

inline Mat mat_mul(const Zpk& R, const Mat& A, const Mat& B) {
  if (A.cols != B.rows) throw Error(ErrorKind::Internal, "dimension mismatch in product");
  Mat C(A.rows, B.cols);
  const bool lazy = R.m < (1ull << 26);
  std::vector<u64> acc(B.cols);
  for (size_t i = 0; i < A.rows; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    const u64* ar = A.row(i);
    size_t pending = 0;
    for (size_t t = 0; t < A.cols; ++t) {
      u64 x = ar[t];
      if (x == 0) continue;
      const u64* br = B.row(t);
      if (lazy) {
        for (size_t j = 0; j < B.cols; ++j) acc[j] += x * br[j];
        if (++pending == 2000) {
          for (auto& v : acc) v %= R.m;
          pending = 0;
        }
      } else {
        for (size_t j = 0; j < B.cols; ++j) acc[j] = (acc[j] + x * br[j]) % R.m;
      }
    }
    u64* cr = C.row(i);
    for (size_t j = 0; j < B.cols; ++j) cr[j] = acc[j] % R.m;
  }
  return C;
}

inline Mat mat_sub(const Zpk& R, const Mat& A, const Mat& B) {
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = R.sub(A.a[i], B.a[i]);
  return C;
}

inline Mat mat_add(const Zpk& R, const Mat& A, const Mat& B) {
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = R.add(A.a[i], B.a[i]);
  return C;
}

inline Mat mat_scale(const Zpk& R, const Mat& A, u64 s) {
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = R.mul(A.a[i], s);
  return C;
}

// A - lambda I
inline Mat shift_diag(const Zpk& R, Mat A, i64 lambda) {
  u64 l = R.red(lambda);
  for (size_t i = 0; i < A.rows; ++i) A(i, i) = R.sub(A(i, i), l);
  return A;
}

inline Mat mat_reduce(const Zpk& R, const Mat& A) {
  Mat C(A.rows, A.cols);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = A.a[i] % R.m;
  return C;
}

inline Mat transpose(const Mat& A) {
  Mat T(A.cols, A.rows);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
  return T;
}

inline Mat select_cols(const Mat& A, const std::vector<size_t>& cols) {
  Mat C(A.rows, cols.size());
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t j = 0; j < cols.size(); ++j) C(i, j) = A(i, cols[j]);
  return C;
}

inline Mat select_rows(const Mat& A, const std::vector<size_t>& rows) {
  Mat C(rows.size(), A.cols);
  for (size_t i = 0; i < rows.size(); ++i) std::copy(A.row(rows[i]), A.row(rows[i]) + A.cols, C.row(i));
  return C;
}

inline Mat col_range(const Mat& A, size_t from, size_t to) {
  std::vector<size_t> idx;
  for (size_t j = from; j < to; ++j) idx.push_back(j);
  return select_cols(A, idx);
}

inline Mat row_range(const Mat& A, size_t from, size_t to) {
  std::vector<size_t> idx;
  for (size_t j = from; j < to; ++j) idx.push_back(j);
  return select_rows(A, idx);
}

inline Mat hconcat(const Mat& A, const Mat& B) {
  Mat C(A.rows, A.cols + B.cols);
  for (size_t i = 0; i < A.rows; ++i) {
    std::copy(A.row(i), A.row(i) + A.cols, C.row(i));
    std::copy(B.row(i), B.row(i) + B.cols, C.row(i) + A.cols);
  }
  return C;
}

inline std::vector<u64> mat_vec(const Zpk& R, const Mat& A, const std::vector<u64>& v) {
  std::vector<u64> out(A.rows, 0);
  for (size_t i = 0; i < A.rows; ++i) {
    u64 s = 0;
    const u64* r = A.row(i);
    for (size_t j = 0; j < A.cols; ++j) s = (s + r[j] * v[j]) % R.m;
    out[i] = s;
  }
  return out;
}

// P A Q = D with D diagonal, entries p^{d_i} (or 0), P and Q invertible.
struct SmithForm {
  Mat P, Pinv, Q, Qinv;
  std::vector<int> vals;  // valuation of each diagonal entry, k meaning zero
  size_t rank = 0;        // number of nonzero diagonal entries
};

struct SmithOptions {
  bool want_P = true, want_Pinv = true, want_Q = true, want_Qinv = true;
};

inline SmithForm smith(const Zpk& R, Mat A, SmithOptions opt = {}) {
  const size_t m = A.rows, n = A.cols;
  SmithForm S;
  if (opt.want_P) S.P = Mat::identity(m);
  if (opt.want_Pinv) S.Pinv = Mat::identity(m);
  if (opt.want_Q) S.Q = Mat::identity(n);
  if (opt.want_Qinv) S.Qinv = Mat::identity(n);
  const size_t steps = std::min(m, n);
  for (size_t t = 0; t < steps; ++t) {
    int best = R.k;
    size_t bi = t, bj = t;
    for (size_t i = t; i < m && best > 0; ++i) {
      const u64* r = A.row(i);
      for (size_t j = t; j < n; ++j) {
        if (r[j] == 0) continue;
        int v = R.val(r[j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
          if (v == 0) break;
        }
      }
    }
    if (best == R.k) {
      for (size_t s = t; s < steps; ++s) S.vals.push_back(R.k);
      break;
    }
    // move pivot to (t, t)
    if (bi != t) {
      std::swap_ranges(A.row(t), A.row(t) + n, A.row(bi));
      if (opt.want_P) std::swap_ranges(S.P.row(t), S.P.row(t) + m, S.P.row(bi));
      if (opt.want_Pinv)
        for (size_t i = 0; i < m; ++i) std::swap(S.Pinv(i, t), S.Pinv(i, bi));
    }
    if (bj != t) {
      for (size_t i = 0; i < m; ++i) std::swap(A(i, t), A(i, bj));
      if (opt.want_Q)
        for (size_t i = 0; i < n; ++i) std::swap(S.Q(i, t), S.Q(i, bj));
      if (opt.want_Qinv) std::swap_ranges(S.Qinv.row(t), S.Qinv.row(t) + n, S.Qinv.row(bj));
    }
    const u64 pv = R.pw[best];
    u64 unit = A(t, t) / pv;
    if (unit != 1) {
      u64 ui = R.inv(unit);
      u64* r = A.row(t);
      for (size_t j = t; j < n; ++j) r[j] = R.mul(r[j], ui);
      if (opt.want_P) {
        u64* pr = S.P.row(t);
        for (size_t j = 0; j < m; ++j) pr[j] = R.mul(pr[j], ui);
      }
      if (opt.want_Pinv)
        for (size_t i = 0; i < m; ++i) S.Pinv(i, t) = R.mul(S.Pinv(i, t), unit);
    }
    // clear column t below the pivot
    const u64* tr = A.row(t);
    for (size_t i = t + 1; i < m; ++i) {
      u64 x = A(i, t);
      if (x == 0) continue;
      u64 f = x / pv;  // exact since val(x) >= best
      u64 nf = R.neg(f);
      u64* r = A.row(i);
      for (size_t j = t; j < n; ++j)
        if (tr[j]) r[j] = (r[j] + nf * tr[j]) % R.m;
      if (opt.want_P) {
        const u64* pt = S.P.row(t);
        u64* pi = S.P.row(i);
        for (size_t j = 0; j < m; ++j)
          if (pt[j]) pi[j] = (pi[j] + nf * pt[j]) % R.m;
      }
      if (opt.want_Pinv)
        for (size_t s = 0; s < m; ++s)
          if (S.Pinv(s, i)) S.Pinv(s, t) = (S.Pinv(s, t) + f * S.Pinv(s, i)) % R.m;
    }
    // clear row t right of the pivot
    for (size_t j = t + 1; j < n; ++j) {
      u64 x = A(t, j);
      if (x == 0) continue;
      u64 f = x / pv;
      u64 nf = R.neg(f);
      A(t, j) = 0;
      if (opt.want_Q)
        for (size_t i = 0; i < n; ++i)
          if (S.Q(i, t)) S.Q(i, j) = (S.Q(i, j) + nf * S.Q(i, t)) % R.m;
      if (opt.want_Qinv) {
        const u64* qj = S.Qinv.row(j);
        u64* qt = S.Qinv.row(t);
        for (size_t s = 0; s < n; ++s)
          if (qj[s]) qt[s] = (qt[s] + f * qj[s]) % R.m;
      }
    }
    S.vals.push_back(best);
    ++S.rank;
  }
  return S;
}

// Basis of the image of A, assumed a free direct summand, with a left inverse on it.
struct FreeImage {
  Mat basis;     // n x r
  Mat left_inv;  // r x n, left_inv * basis = I
};

inline FreeImage free_image(const Zpk& R, const Mat& A) {
  const size_t n = A.rows;
  Mat W = A;
  std::vector<size_t> rowperm(n);
  for (size_t i = 0; i < n; ++i) rowperm[i] = i;
  std::vector<size_t> pr, pc;
  std::vector<bool> col_used(A.cols, false);
  size_t t = 0;
  for (; t < n; ++t) {
    size_t bi = n, bj = 0;
    bool nonzero = false;
    for (size_t i = t; i < n && bi == n; ++i) {
      const u64* r = W.row(i);
      for (size_t j = 0; j < W.cols; ++j) {
        if (r[j] == 0 || col_used[j]) continue;
        nonzero = true;
        if (r[j] % R.p != 0) { bi = i; bj = j; break; }
      }
    }
    if (bi == n) {
      if (nonzero) throw Error(ErrorKind::PrecisionExceeded, "image is not a free direct summand");
      break;
    }
    std::swap_ranges(W.row(t), W.row(t) + W.cols, W.row(bi));
    std::swap(rowperm[t], rowperm[bi]);
    col_used[bj] = true;
    pr.push_back(rowperm[t]);
    pc.push_back(bj);
    u64 ui = R.inv(W(t, bj));
    const u64* tr = W.row(t);
    for (size_t i = t + 1; i < n; ++i) {
      u64 x = W(i, bj);
      if (x == 0) continue;
      u64 f = R.neg(R.mul(x, ui));
      u64* r = W.row(i);
      for (size_t j = 0; j < W.cols; ++j)
        if (tr[j]) r[j] = (r[j] + f * tr[j]) % R.m;
    }
  }
  FreeImage out;
  out.basis = select_cols(A, pc);
  const size_t r = pc.size();
  // left inverse: (basis restricted to pivot rows)^{-1} composed with row selection
  Mat sub = select_rows(out.basis, pr);
  SmithForm S = smith(R, sub);
  for (size_t i = 0; i < S.rank; ++i)
    if (S.vals[i] != 0) throw Error(ErrorKind::Internal, "pivot block not invertible");
  Mat subinv = mat_mul(R, S.Q, S.P);  // D = I so sub^{-1} = Q P
  out.left_inv = Mat(r, n);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j) out.left_inv(i, pr[j]) = subinv(i, j);
  return out;
}

inline Mat mat_inverse(const Zpk& R, const Mat& A) {
  SmithForm S = smith(R, A);
  if (S.rank != A.rows) throw Error(ErrorKind::Internal, "matrix not invertible");
  for (int v : S.vals)
    if (v != 0) throw Error(ErrorKind::Internal, "matrix not invertible");
  return mat_mul(R, S.Q, S.P);
}

// Kernel of A when it is a free direct summand and the image is too (e.g. A = g^J with
// J large on a space carrying a Fitting decomposition). Returns basis and left inverse.
inline FreeImage free_kernel(const Zpk& R, const Mat& A) {
  SmithForm S = smith(R, A, {true, false, true, true});
  for (size_t i = 0; i < S.rank; ++i)
    if (S.vals[i] != 0) throw Error(ErrorKind::PrecisionExceeded, "kernel is not a direct summand");
  FreeImage out;
  out.basis = col_range(S.Q, S.rank, A.cols);
  out.left_inv = row_range(S.Qinv, S.rank, A.cols);
  return out;
}

// Saturated kernel over Z_p of a map whose nonzero invariants are all below p^k:
// columns of Q past the rank. Valid when the true kernel rank is A.cols - rank.
inline FreeImage saturated_kernel(const Zpk& R, const Mat& A) {
  SmithForm S = smith(R, A, {false, false, true, true});
  FreeImage out;
  out.basis = col_range(S.Q, S.rank, A.cols);
  out.left_inv = row_range(S.Qinv, S.rank, A.cols);
  return out;
}

inline Mat mat_pow(const Zpk& R, Mat A, u64 e) {
  Mat result = Mat::identity(A.rows);
  while (e) {
    if (e & 1) result = mat_mul(R, result, A);
    e >>= 1;
    if (e) A = mat_mul(R, A, A);
  }
  return result;
}

// Generalised 0-eigenspace (Fitting nil part) of A on (Z/p^k)^n.
inline FreeImage nil_part(const Zpk& R, const Mat& A) {
  u64 need = (u64)A.rows * (u64)R.k + 1;
  Mat Z = A;
  u64 e = 1;
  while (e < need) {
    Z = mat_mul(R, Z, Z);
    e <<= 1;
    if (Z.is_zero()) break;
  }
  return free_kernel(R, Z);
}

// Submodule of (Z/p^k)^n tracked through its Smith form; supports membership and
// coordinates with respect to the basis b_i = p^{a_i} Pinv e_i.
class SubmoduleTracker {
 public:
  SubmoduleTracker(const Zpk& R, size_t n) : R_(R), n_(n), gens_(n, 0) { recompute(); }

  size_t ambient() const { return n_; }
  const Mat& generators() const { return gens_; }
  const SmithForm& smith_form() const { return S_; }
  size_t rank() const { return S_.rank; }

  bool contains(const std::vector<u64>& v) const {
    auto w = mat_vec(R_, S_.P, v);
    for (size_t i = 0; i < n_; ++i) {
      if (w[i] == 0) continue;
      if (i >= S_.rank) return false;
      if (R_.val(w[i]) < S_.vals[i]) return false;
    }
    return true;
  }

  // Adds v; returns true if the submodule grew.
  bool insert(const std::vector<u64>& v) {
    if (contains(v)) return false;
    Mat g(n_, gens_.cols + 1);
    for (size_t i = 0; i < n_; ++i) {
      std::copy(gens_.row(i), gens_.row(i) + gens_.cols, g.row(i));
      g(i, gens_.cols) = v[i];
    }
    gens_ = std::move(g);
    recompute();
    return true;
  }

  // Basis vectors p^{a_i} Pinv e_i as columns.
  Mat basis() const {
    Mat B(n_, S_.rank);
    for (size_t j = 0; j < S_.rank; ++j)
      for (size_t i = 0; i < n_; ++i) B(i, j) = R_.mul(S_.Pinv(i, j), R_.pw[S_.vals[j]]);
    return B;
  }

  int max_elementary_valuation() const {
    int v = 0;
    for (size_t i = 0; i < S_.rank; ++i) v = std::max(v, S_.vals[i]);
    return v;
  }

  // Coordinates of a member v in basis(); exact modulo p^{k - a_i} in slot i.
  std::vector<u64> coords(const std::vector<u64>& v) const {
    auto w = mat_vec(R_, S_.P, v);
    std::vector<u64> c(S_.rank);
    for (size_t i = 0; i < n_; ++i) {
      if (i >= S_.rank) {
        if (w[i] != 0) throw Error(ErrorKind::Internal, "vector outside submodule");
        continue;
      }
      u64 pv = R_.pw[S_.vals[i]];
      if (w[i] % pv != 0) throw Error(ErrorKind::Internal, "vector outside submodule");
      c[i] = w[i] / pv;
    }
    return c;
  }

 private:
  void recompute() {
    if (gens_.cols == 0) {
      S_ = SmithForm{};
      S_.P = Mat::identity(n_);
      S_.Pinv = Mat::identity(n_);
      S_.rank = 0;
      return;
    }
    S_ = smith(R_, gens_, {true, true, false, false});
    // drop redundant generators to keep recomputation cheap
    if (gens_.cols > 2 * n_ + 4) {
      Mat B = basis();
      gens_ = B;
    }
  }

  Zpk R_;
  size_t n_;
  Mat gens_;
  SmithForm S_;
};

}  // namespace eisen
