#pragma once

// Hecke algebras over Z as lattices of integer matrices, with abstract reduction mod p.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "eisen/intmat.hpp"
#include "eisen/local_algebra.hpp"
#include "eisen/modsym.hpp"

namespace eisen {

using ZVec = std::vector<mpz_class>;

// Sublattice of Z^n kept in Hermite normal form (rows, positive pivots, reduced above).
class ZLattice {
 public:
  explicit ZLattice(size_t n = 0) : n_(n) {}

  size_t ambient() const { return n_; }
  size_t rank() const { return rows_.size(); }
  const std::vector<ZVec>& rows() const { return rows_; }
  const std::vector<size_t>& pivots() const { return piv_; }

  // v minus a lattice vector, with pivot entries reduced into [0, pivot).
  ZVec reduce(ZVec v) const {
    for (size_t r = 0; r < rows_.size(); ++r) {
      size_t c = piv_[r];
      if (v[c] == 0) continue;
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), v[c].get_mpz_t(), rows_[r][c].get_mpz_t());
      if (q == 0) continue;
      for (size_t j = c; j < n_; ++j) v[j] -= q * rows_[r][j];
    }
    return v;
  }

  bool contains(const ZVec& v) const {
    ZVec w = reduce(v);
    for (auto& x : w)
      if (x != 0) return false;
    return true;
  }

  // Adds v; returns true if the lattice grew.
  bool insert(const ZVec& v) {
    ZVec w = reduce(v);
    bool nonzero = false;
    for (auto& x : w)
      if (x != 0) { nonzero = true; break; }
    if (!nonzero) return false;
    // merge w into the echelon rows
    size_t r = 0;
    while (true) {
      size_t c = 0;
      while (c < n_ && w[c] == 0) ++c;
      if (c == n_) break;
      while (r < rows_.size() && piv_[r] < c) ++r;
      if (r == rows_.size() || piv_[r] > c) {
        if (w[c] < 0)
          for (auto& x : w) x = -x;
        rows_.insert(rows_.begin() + r, w);
        piv_.insert(piv_.begin() + r, c);
        break;
      }
      ZVec& row = rows_[r];
      mpz_class g, a, b;
      mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(), row[c].get_mpz_t(), w[c].get_mpz_t());
      mpz_class rc = row[c] / g, wc = w[c] / g;
      ZVec nrow(n_), nw(n_);
      for (size_t j = 0; j < n_; ++j) {
        nrow[j] = a * row[j] + b * w[j];
        nw[j] = rc * w[j] - wc * row[j];
      }
      if (nrow[c] < 0)
        for (auto& x : nrow) x = -x;
      row = std::move(nrow);
      w = std::move(nw);
      ++r;
    }
    normalize();
    return true;
  }

  // Integer coordinates of a member in the row basis.
  ZVec coords(ZVec v) const {
    ZVec c(rows_.size());
    for (size_t r = 0; r < rows_.size(); ++r) {
      size_t col = piv_[r];
      if (v[col] == 0) continue;
      if (!mpz_divisible_p(v[col].get_mpz_t(), rows_[r][col].get_mpz_t()))
        throw Error(ErrorKind::Internal, "vector outside lattice");
      c[r] = v[col] / rows_[r][col];
      for (size_t j = col; j < n_; ++j) v[j] -= c[r] * rows_[r][j];
    }
    for (auto& x : v)
      if (x != 0) throw Error(ErrorKind::Internal, "vector outside lattice");
    return c;
  }

  // |det| of the pivot block: the index when the lattice has full rank in a coordinate sublattice.
  mpz_class pivot_product() const {
    mpz_class d = 1;
    for (size_t r = 0; r < rows_.size(); ++r) d *= rows_[r][piv_[r]];
    return d;
  }

 private:
  void normalize() {
    for (size_t r = 0; r < rows_.size(); ++r)
      for (size_t s = 0; s < r; ++s) {
        size_t c = piv_[r];
        if (rows_[s][c] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rows_[s][c].get_mpz_t(), rows_[r][c].get_mpz_t());
        if (q == 0) continue;
        for (size_t j = c; j < n_; ++j) rows_[s][j] -= q * rows_[r][j];
      }
  }

  size_t n_;
  std::vector<ZVec> rows_;
  std::vector<size_t> piv_;
};

inline ZVec to_zvec(const IntMatrix& M) {
  ZVec v(M.a.size());
  for (size_t i = 0; i < M.a.size(); ++i) v[i] = (long)M.a[i];
  return v;
}

inline IntMatrix from_zvec(const ZVec& v, size_t n) {
  IntMatrix M(n, n);
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].fits_slong_p()) throw Error(ErrorKind::TooLarge, "exact algebra basis entry exceeds 64 bits");
    M.a[i] = v[i].get_si();
  }
  return M;
}

// p-adic valuations of the elementary divisors of a full-rank d x d integer matrix (rows
// generate a sublattice of Z^d). Entries with valuation 0 are omitted.
inline std::vector<int> p_elementary_divisors(const std::vector<ZVec>& gens, size_t d, u64 p) {
  ZLattice L(d);
  for (auto& g : gens) L.insert(g);
  if (L.rank() != d) throw Error(ErrorKind::Internal, "sublattice is not of full rank");
  mpz_class det = L.pivot_product();
  int v = 0;
  mpz_class t = det, pp = (unsigned long)p;
  while (mpz_divisible_p(t.get_mpz_t(), pp.get_mpz_t())) {
    t /= pp;
    ++v;
  }
  if (v == 0) return {};
  // the p-part is determined modulo p^{v+1}
  Zpk R(p, v + 1);
  Mat M(d, d);
  mpz_class m = (unsigned long)R.m;
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j) {
      mpz_class x;
      mpz_fdiv_r(x.get_mpz_t(), L.rows()[i][j].get_mpz_t(), m.get_mpz_t());
      M(i, j) = x.get_ui();
    }
  SmithForm S = smith(R, M, {false, false, false, false});
  std::vector<int> out;
  int total = 0;
  for (size_t i = 0; i < d; ++i) {
    int e = i < S.vals.size() ? S.vals[i] : R.k;
    if (e > 0) out.push_back(e);
    total += e;
  }
  if (total != v) throw Error(ErrorKind::Internal, "elementary divisor valuations do not sum to the determinant");
  std::sort(out.begin(), out.end());
  return out;
}

struct ZAlgebraOptions {
  int degree_cap = 0;  // 0: ambient size
};

class ZAlgebra {
 public:

  // Z-algebra generated by pairwise commuting operators (and the identity).
  static ZAlgebra generate(const std::vector<IntegerOperator>& ops, ZAlgebraOptions opt = {}) {
    ZAlgebra A;
    if (ops.empty()) throw Error(ErrorKind::BadInput, "no operators given");
    const size_t n = ops[0].matrix.rows;
    for (auto& o : ops)
      if (o.matrix.rows != n || o.matrix.cols != n) throw Error(ErrorKind::BadInput, "operators of different sizes");
    for (size_t i = 0; i < ops.size(); ++i)
      for (size_t j = i + 1; j < ops.size(); ++j)
        if (ops[i].matrix * ops[j].matrix != ops[j].matrix * ops[i].matrix)
          throw Error(ErrorKind::NonCommuting, ops[i].label.str() + " and " + ops[j].label.str() + " do not commute");
    A.n_ = n;
    for (auto& o : ops) {
      A.labels_.push_back(o.label.str());
      A.gens_.push_back(o.matrix);
    }
    const int cap = opt.degree_cap > 0 ? opt.degree_cap : (int)std::max<size_t>(n, 1);
    ZLattice L(n * n);
    std::vector<std::pair<IntMatrix, int>> queue{{IntMatrix::identity(n), 0}};
    L.insert(to_zvec(queue[0].first));
    for (size_t head = 0; head < queue.size(); ++head) {
      auto [e, deg] = queue[head];
      for (auto& o : ops) {
        IntMatrix f = e * o.matrix;
        ZVec r = L.reduce(to_zvec(f));
        if (!L.insert(r)) continue;
        if (deg + 1 > cap) throw Error(ErrorKind::RankUnstable, "monomial span still growing at the degree cap");
        queue.emplace_back(from_zvec(r, n), deg + 1);
      }
    }
    A.lattice_ = L;
    for (auto& row : L.rows()) A.basis_.push_back(from_zvec(row, n));
    const size_t d = A.basis_.size();
    A.mult_.assign(d * d * d, 0);
    for (size_t i = 0; i < d; ++i)
      for (size_t j = i; j < d; ++j) {
        ZVec c = L.coords(to_zvec(A.basis_[i] * A.basis_[j]));  // throws if not closed
        for (size_t k = 0; k < d; ++k) {
          A.mult_[(i * d + j) * d + k] = c[k];
          A.mult_[(j * d + i) * d + k] = c[k];
        }
      }
    A.identity_ = L.coords(to_zvec(IntMatrix::identity(n)));
    return A;
  }

  size_t ambient() const { return n_; }
  size_t rank() const { return basis_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<IntMatrix>& basis() const { return basis_; }
  const IntMatrix& generator(size_t i) const { return gens_[i]; }
  const mpz_class& structure_constant(size_t i, size_t j, size_t k) const {
    const size_t d = rank();
    return mult_[(i * d + j) * d + k];
  }
  const ZVec& identity_coords() const { return identity_; }

  bool contains(const IntMatrix& M) const { return M.rows == n_ && lattice_.contains(to_zvec(M)); }
  ZVec coords(const IntMatrix& M) const { return lattice_.coords(to_zvec(M)); }

  // Coordinates of the product of two elements given in coordinates.
  ZVec mul(const ZVec& x, const ZVec& y) const {
    const size_t d = rank();
    ZVec z(d);
    for (size_t i = 0; i < d; ++i) {
      if (x[i] == 0) continue;
      for (size_t j = 0; j < d; ++j) {
        if (y[j] == 0) continue;
        mpz_class c = x[i] * y[j];
        for (size_t k = 0; k < d; ++k)
          if (mult_[(i * d + j) * d + k] != 0) z[k] += c * mult_[(i * d + j) * d + k];
      }
    }
    return z;
  }

  // Lattice generators of the ideal generated by the given elements (coordinates).
  std::vector<ZVec> ideal_generators(const std::vector<ZVec>& elems) const {
    std::vector<ZVec> out;
    const size_t d = rank();
    for (auto& x : elems)
      for (size_t i = 0; i < d; ++i) {
        ZVec e(d);
        e[i] = 1;
        out.push_back(mul(e, x));
      }
    return out;
  }

 private:
  size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<IntMatrix> gens_;
  std::vector<IntMatrix> basis_;
  std::vector<mpz_class> mult_;
  ZVec identity_;
  ZLattice lattice_;
};

// Eisenstein eigenvalue of a generator label: T_q -> q+1, w_l -> eps_l, U_l -> l^{(eps+1)/2}.
inline i64 eisenstein_eigenvalue(const OperatorLabel& L, const EpsilonSetting& s) {
  switch (L.kind) {
    case 'T': {
      // sum of divisors coprime to N
      i64 sigma = 0;
      for (i64 d = 1; d <= L.index; ++d)
        if (L.index % d == 0 && std::gcd(d, s.level()) == 1) sigma += d;
      return sigma;
    }
    case 'w': return s.sign_of(L.index);
    case 'U': return s.sign_of(L.index) == 1 ? L.index : 1;
    case 's': return 1;
  }
  throw Error(ErrorKind::Internal, "unknown operator kind");
}

inline std::string eisenstein_element_label(const OperatorLabel& L, i64 lambda) {
  std::string s = L.str();
  if (lambda > 0) return s + "-" + std::to_string(lambda);
  if (lambda < 0) return s + "+" + std::to_string(-lambda);
  return s;
}

// Generators used by default: T_q for primes q <= cap with q not dividing N, then w_l.
inline std::vector<OperatorLabel> default_generator_labels(i64 N, double sturm_factor = 1.0) {
  i64 mu = index_mu(N);
  i64 cap = (i64)std::ceil((double)mu / 6.0 * sturm_factor);
  std::vector<OperatorLabel> out;
  for (i64 q : primes_up_to(std::max<i64>(cap, 2)))
    if (q <= cap && N % q != 0) out.push_back({'T', q});
  for (i64 l : factor_squarefree(N)) out.push_back({'w', l});
  return out;
}

inline i64 sturm_cap(i64 N, double factor = 1.0) { return (i64)std::ceil((double)index_mu(N) / 6.0 * factor); }

// Operators on the full space or restricted to the cuspidal lattice.
inline std::vector<IntegerOperator> hecke_operators(const ModularSymbolSpace& S, const std::vector<OperatorLabel>& labels,
                                                    bool cuspidal) {
  std::vector<IntegerOperator> out;
  for (auto& L : labels) {
    IntMatrix M = S.operator_matrix(L);
    if (cuspidal) M = S.cuspidal_restriction(M);
    out.push_back({L, std::move(M)});
  }
  return out;
}

// (A tensor F_p) localised at the Eisenstein maximal ideal, via structure constants only.
inline LocalAlgebra eisenstein_local_algebra(const ZAlgebra& A, const EpsilonSetting& setting) {
  const u64 p = (u64)setting.p;
  Zpk F(p, 1);
  const size_t d = A.rank();
  if (d == 0) return LocalAlgebra::zero(p);
  auto red = [&](const mpz_class& x) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), p);
    return (u64)r.get_ui();
  };
  std::vector<u64> mult(d * d * d);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < d; ++j)
      for (size_t k = 0; k < d; ++k) mult[(i * d + j) * d + k] = red(A.structure_constant(i, j, k));
  Vec one(d);
  for (size_t i = 0; i < d; ++i) one[i] = red(A.identity_coords()[i]);
  // whole algebra as a (non-local) LocalAlgebra container; only mul is used below
  LocalAlgebra Abar(p, d, mult, one, Vec(d, 0));
  std::vector<Vec> gen_images;
  std::vector<Vec> mgens;
  for (size_t g = 0; g < A.labels().size(); ++g) {
    ZVec c = A.coords(A.generator(g));
    Vec v(d);
    for (size_t i = 0; i < d; ++i) v[i] = red(c[i]);
    gen_images.push_back(v);
    OperatorLabel L = parse_operator_label(A.labels()[g]);
    i64 lam = eisenstein_eigenvalue(L, setting);
    mgens.push_back(Abar.add(v, Abar.scaled(one, F.neg(F.red(lam)))));
  }
  // maximal ideal and its stabilised power
  std::vector<Vec> ideal_gens;
  for (auto& x : mgens)
    for (size_t i = 0; i < d; ++i) {
      Vec e(d, 0);
      e[i] = 1;
      ideal_gens.push_back(Abar.mul(e, x));
    }
  Mat m = fp::span(F, fp::from_vectors(d, ideal_gens));
  if (m.cols == d) return LocalAlgebra::zero(p);
  Mat pw = m;
  while (true) {
    Mat next = Abar.product(pw, m);
    if (next.cols == pw.cols) break;
    pw = next;
  }
  // quotient by pw
  const size_t r = pw.cols;
  const size_t n = d - r;
  Mat P, Pinv;
  if (r == 0) {
    P = Mat::identity(d);
    Pinv = Mat::identity(d);
  } else {
    SmithForm S = smith(F, pw, {true, true, false, false});
    P = S.P;
    Pinv = S.Pinv;
  }
  auto project = [&](const Vec& v) {
    Vec w = mat_vec(F, P, v);
    return Vec(w.begin() + r, w.end());
  };
  std::vector<Vec> reps(n);
  for (size_t i = 0; i < n; ++i) reps[i] = fp::column(Pinv, r + i);
  std::vector<u64> qmult(n * n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Vec c = project(Abar.mul(reps[i], reps[j]));
      std::copy(c.begin(), c.end(), qmult.begin() + (i * n + j) * n);
    }
  // augmentation: functional vanishing on the image of m, equal to 1 on the unit
  std::vector<Vec> mimg;
  for (size_t j = 0; j < m.cols; ++j) mimg.push_back(project(fp::column(m, j)));
  Vec qone = project(one);
  Mat C(mimg.size(), n);
  for (size_t i = 0; i < mimg.size(); ++i)
    for (size_t j = 0; j < n; ++j) C(i, j) = mimg[i][j];
  Mat ker = fp::kernel(F, C.rows ? C : Mat(0, n));  // functionals y with C y = 0 as columns
  // C y = 0 means y pairs to zero with each row of C; the space of such y is one-dimensional
  if (ker.cols != 1) throw Error(ErrorKind::Internal, "residue field is not F_p");
  Vec y = fp::column(ker, 0);
  u64 t = 0;
  for (size_t j = 0; j < n; ++j) t = (t + y[j] * qone[j]) % p;
  if (t == 0) throw Error(ErrorKind::Internal, "augmentation vanishes on the unit");
  u64 ti = F.inv(t);
  for (auto& x : y) x = x * ti % p;
  LocalAlgebra out(p, n, std::move(qmult), qone, y);
  for (size_t g = 0; g < A.labels().size(); ++g) out.set_operator(A.labels()[g], project(gen_images[g]));
  return out;
}

// Ideal generated by T - lambda over the generators, as lattice vectors in coordinates.
inline std::vector<ZVec> eisenstein_ideal_generators(const ZAlgebra& A, const EpsilonSetting& setting) {
  std::vector<ZVec> elems;
  for (size_t g = 0; g < A.labels().size(); ++g) {
    ZVec c = A.coords(A.generator(g));
    i64 lam = eisenstein_eigenvalue(parse_operator_label(A.labels()[g]), setting);
    ZVec id = A.identity_coords();
    for (size_t i = 0; i < c.size(); ++i) c[i] -= (long)lam * id[i];
    elems.push_back(std::move(c));
  }
  return A.ideal_generators(elems);
}

// p-part of |A0 / I| as a power of p (returned as the exponent and value).
struct PPower {
  int exponent = 0;
  u64 p = 0;
  mpz_class value() const {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), p, (unsigned long)exponent);
    return v;
  }
};

inline PPower congruence_number(const ZAlgebra& A0, const EpsilonSetting& setting) {
  PPower out{0, (u64)setting.p};
  if (A0.rank() == 0) return out;
  auto gens = eisenstein_ideal_generators(A0, setting);
  ZLattice I(A0.rank());
  for (auto& g : gens) I.insert(g);
  if (I.rank() < A0.rank()) throw Error(ErrorKind::Internal, "Eisenstein ideal has infinite index");
  for (int e : p_elementary_divisors(I.rows(), A0.rank(), (u64)setting.p)) out.exponent += e;
  return out;
}

// Exponents e_i with I/I^2 tensor Z_p = sum Z/p^{e_i}.
inline std::vector<int> cotangent_orders(const ZAlgebra& A, const EpsilonSetting& setting) {
  if (A.rank() == 0) return {};
  auto gens = eisenstein_ideal_generators(A, setting);
  ZLattice I(A.rank());
  for (auto& g : gens) I.insert(g);
  const size_t r = I.rank();
  std::vector<ZVec> sq;
  const auto& rows = I.rows();
  for (size_t i = 0; i < r; ++i)
    for (size_t j = i; j < r; ++j) sq.push_back(I.coords(A.mul(rows[i], rows[j])));
  // I^2 has full rank in I exactly when I/I^2 is finite
  ZLattice L2(r);
  for (auto& v : sq) L2.insert(v);
  if (L2.rank() < r) throw Error(ErrorKind::Internal, "I/I^2 is infinite");
  return p_elementary_divisors(L2.rows(), r, (u64)setting.p);
}

}  // namespace eisen
