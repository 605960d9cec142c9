#pragma once

// Finite local commutative F_p-algebras given by structure constants.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eisen/zmod.hpp"

namespace eisen {

using Vec = std::vector<u64>;

namespace fp {

// Column basis of the span of the given columns.
inline Mat span(const Zpk& F, const Mat& cols) {
  if (cols.cols == 0) return Mat(cols.rows, 0);
  SmithForm S = smith(F, cols, {false, true, false, false});
  return col_range(S.Pinv, 0, S.rank);
}

inline size_t rank(const Zpk& F, const Mat& A) {
  if (A.rows == 0 || A.cols == 0) return 0;
  return smith(F, A, {false, false, false, false}).rank;
}

// Column basis of {x : A x = 0}.
inline Mat kernel(const Zpk& F, const Mat& A) {
  if (A.rows == 0) return Mat::identity(A.cols);
  SmithForm S = smith(F, A, {false, false, true, false});
  return col_range(S.Q, S.rank, A.cols);
}

inline Mat from_vectors(size_t n, const std::vector<Vec>& vs) {
  Mat M(n, vs.size());
  for (size_t j = 0; j < vs.size(); ++j)
    for (size_t i = 0; i < n; ++i) M(i, j) = vs[j][i];
  return M;
}

inline Vec column(const Mat& M, size_t j) {
  Vec v(M.rows);
  for (size_t i = 0; i < M.rows; ++i) v[i] = M(i, j);
  return v;
}

}  // namespace fp

// c_0 + sum c_i * name_i, parsed from strings like "2*T2+T3-1".
struct LinearExpr {
  i64 constant = 0;
  std::vector<std::pair<i64, std::string>> terms;
};

inline LinearExpr parse_linear_expr(const std::string& text) {
  LinearExpr out;
  std::string s;
  for (char c : text)
    if (!std::isspace((unsigned char)c)) s += c;
  if (s.empty()) throw Error(ErrorKind::UnknownLabel, "empty element expression");
  size_t i = 0;
  auto fail = [&]() -> LinearExpr { throw Error(ErrorKind::UnknownLabel, "cannot parse element expression " + text); };
  while (i < s.size()) {
    i64 sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i > 0) {
      return fail();
    }
    if (i >= s.size()) return fail();
    i64 coef = 1;
    if (std::isdigit((unsigned char)s[i])) {
      size_t j = i;
      while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
      if (j - i > 15) return fail();
      coef = std::stoll(s.substr(i, j - i));
      i = j;
      if (i < s.size() && s[i] == '*') ++i;
      else if (i < s.size() && std::isalpha((unsigned char)s[i])) return fail();
      else {
        out.constant += sign * coef;
        continue;
      }
    }
    if (i >= s.size() || !std::isalpha((unsigned char)s[i])) return fail();
    size_t j = i;
    while (j < s.size() && std::isalnum((unsigned char)s[j])) ++j;
    out.terms.emplace_back(sign * coef, s.substr(i, j - i));
    i = j;
  }
  return out;
}

struct LocalInvariants {
  size_t dim = 0;
  size_t embedding_dim = 0;
  size_t socle_dim = 0;
  int gorenstein_defect = 0;  // socle_dim - 1, zero for the zero algebra
  size_t nilpotency_degree = 0;
  bool zero_algebra() const { return dim == 0; }
};

// Relation: list of (coefficient in F_p, exponent vector).
struct Polynomial {
  std::vector<std::pair<u64, std::vector<int>>> terms;
};

struct Presentation {
  std::vector<std::string> vars;
  std::vector<Polynomial> relations;
};

inline std::string var_name(size_t i) {
  static const char* names[] = {"x", "y", "z", "w", "v", "u"};
  return i < 6 ? std::string(names[i]) : "x" + std::to_string(i);
}

inline std::string format_polynomial(const Polynomial& f, u64 p, const std::vector<std::string>& names = {}) {
  std::string out;
  for (auto& [c, e] : f.terms) {
    i64 s = c > p / 2 ? (i64)c - (i64)p : (i64)c;
    std::string mono;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += i < names.size() ? names[i] : var_name(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    bool first = out.empty();
    if (s < 0) out += first ? "-" : " - ";
    else if (!first) out += " + ";
    i64 a = s < 0 ? -s : s;
    if (mono.empty()) out += std::to_string(a);
    else if (a == 1) out += mono;
    else out += std::to_string(a) + "*" + mono;
  }
  return out.empty() ? "0" : out;
}

// Parses "y^2-2x^2", "x^3 + 2*x^2", "xy+y^2" over F_p in the given single-letter variables.
inline Polynomial parse_polynomial(const std::string& text, u64 p, const std::vector<std::string>& names) {
  std::string s;
  for (char c : text)
    if (!std::isspace((unsigned char)c)) s += c;
  if (s.empty()) throw Error(ErrorKind::BadInput, "empty polynomial");
  std::map<std::vector<int>, u64> acc;
  size_t i = 0;
  while (i < s.size()) {
    i64 sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    u64 coef = 1;
    bool have_coef = false;
    if (i < s.size() && std::isdigit((unsigned char)s[i])) {
      size_t j = i;
      while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
      coef = std::stoull(s.substr(i, j - i)) % p;
      have_coef = true;
      i = j;
      if (i < s.size() && s[i] == '*') ++i;
    }
    std::vector<int> e(names.size(), 0);
    bool have_var = false;
    while (i < s.size() && s[i] != '+' && s[i] != '-') {
      if (s[i] == '*') {
        ++i;
        continue;
      }
      size_t k = 0;
      while (k < names.size() && s.compare(i, names[k].size(), names[k]) != 0) ++k;
      if (k == names.size()) throw Error(ErrorKind::BadInput, "unknown symbol in polynomial: " + text);
      i += names[k].size();
      int pw = 1;
      if (i < s.size() && s[i] == '^') {
        size_t j = ++i;
        while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
        if (j == i) throw Error(ErrorKind::BadInput, "missing exponent in polynomial: " + text);
        pw = std::stoi(s.substr(i, j - i));
        i = j;
      }
      e[k] += pw;
      have_var = true;
    }
    if (!have_coef && !have_var) throw Error(ErrorKind::BadInput, "malformed polynomial: " + text);
    u64 c = sign < 0 ? (p - coef) % p : coef;
    acc[e] = (acc[e] + c) % p;
  }
  Polynomial f;
  auto mons = std::vector<std::pair<std::vector<int>, u64>>(acc.begin(), acc.end());
  // graded descending, to match format order
  std::sort(mons.begin(), mons.end(), [](auto& a, auto& b) {
    int da = 0, db = 0;
    for (int x : a.first) da += x;
    for (int x : b.first) db += x;
    if (da != db) return da > db;
    return a.first > b.first;
  });
  for (auto& [e, c] : mons)
    if (c) f.terms.emplace_back(c, e);
  return f;
}

namespace detail {

// Monomials in nv variables of degree <= D: graded, then lexicographically descending.
inline std::vector<std::vector<int>> monomials_upto(size_t nv, int D) {
  std::vector<std::vector<int>> out;
  for (int deg = 0; deg <= D; ++deg) {
    std::vector<std::vector<int>> level;
    std::vector<int> e(nv, 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int left) {
      if (i + 1 == nv) {
        e[i] = left;
        level.push_back(e);
        return;
      }
      for (int a = left; a >= 0; --a) {
        e[i] = a;
        rec(i + 1, left - a);
      }
    };
    if (nv == 0) {
      if (deg == 0) level.push_back({});
    } else {
      rec(0, deg);
    }
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

inline int degree(const std::vector<int>& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

}  // namespace detail

// dim_F F[[x_1..x_n]] / (relations), found by truncating at growing degree until the
// quotient stops changing. Independent of any algebra; used as a presentation oracle.
inline size_t power_series_quotient_dim(u64 p, size_t nvars, const std::vector<Polynomial>& rels, int max_degree = 40) {
  Zpk F(p, 1);
  auto quotient_dim = [&](int D) -> size_t {
    // polynomials modulo (x)^D
    auto mons = detail::monomials_upto(nvars, D - 1);
    std::map<std::vector<int>, size_t> idx;
    for (size_t i = 0; i < mons.size(); ++i) idx[mons[i]] = i;
    std::vector<Vec> gens;
    for (auto& rel : rels)
      for (auto& m : mons) {
        Vec v(mons.size(), 0);
        bool any = false;
        for (auto& [c, e] : rel.terms) {
          std::vector<int> prod(nvars);
          for (size_t i = 0; i < nvars; ++i) prod[i] = e[i] + m[i];
          auto it = idx.find(prod);
          if (it == idx.end()) continue;
          v[it->second] = (v[it->second] + c) % p;
          any = true;
        }
        if (any) gens.push_back(std::move(v));
      }
    return mons.size() - fp::rank(F, fp::from_vectors(mons.size(), gens));
  };
  size_t prev = quotient_dim(1);
  for (int D = 2; D <= max_degree; ++D) {
    size_t cur = quotient_dim(D);
    if (cur == prev) return cur;
    prev = cur;
  }
  throw Error(ErrorKind::RankUnstable, "quotient is not finite up to the degree bound");
}

// Whether two m-primary ideals of F_p[[x_1..x_n]] coincide: A, B and A + B have equal colength.
inline bool same_ideal(u64 p, size_t nvars, const std::vector<Polynomial>& a, const std::vector<Polynomial>& b) {
  auto both = a;
  both.insert(both.end(), b.begin(), b.end());
  size_t da = power_series_quotient_dim(p, nvars, a), db = power_series_quotient_dim(p, nvars, b);
  return da == db && power_series_quotient_dim(p, nvars, both) == da;
}

class LocalAlgebra;
LocalAlgebra algebra_from_presentation(u64 p, size_t nvars, const std::vector<Polynomial>& rels, int max_degree = 40);

// Commutative F_p-algebra with unit, local, with augmentation to F_p.
class LocalAlgebra {
 public:
  LocalAlgebra() = default;
  LocalAlgebra(u64 p, size_t d, std::vector<u64> mult, Vec one, Vec augmentation)
      : F_(p, 1), d_(d), mult_(std::move(mult)), one_(std::move(one)), aug_(std::move(augmentation)) {
    if (mult_.size() != d_ * d_ * d_) throw Error(ErrorKind::Internal, "structure constant size mismatch");
  }

  static LocalAlgebra zero(u64 p) {
    LocalAlgebra A;
    A.F_ = Zpk(p, 1);
    return A;
  }

  u64 p() const { return F_.p; }
  size_t dim() const { return d_; }
  const Vec& one() const { return one_; }
  const Zpk& field() const { return F_; }
  const std::vector<u64>& structure_constants() const { return mult_; }

  Vec mul(const Vec& x, const Vec& y) const {
    Vec z(d_, 0);
    for (size_t i = 0; i < d_; ++i) {
      if (x[i] == 0) continue;
      for (size_t j = 0; j < d_; ++j) {
        if (y[j] == 0) continue;
        u64 c = x[i] * y[j] % F_.p;
        const u64* row = &mult_[(i * d_ + j) * d_];
        for (size_t k = 0; k < d_; ++k) z[k] = (z[k] + c * row[k]) % F_.p;
      }
    }
    return z;
  }

  u64 augment(const Vec& x) const {
    u64 s = 0;
    for (size_t i = 0; i < d_; ++i) s = (s + x[i] * aug_[i]) % F_.p;
    return s;
  }

  Vec scaled(const Vec& x, u64 c) const {
    Vec z(x);
    for (auto& v : z) v = v * c % F_.p;
    return z;
  }

  Vec add(const Vec& x, const Vec& y) const {
    Vec z(d_);
    for (size_t i = 0; i < d_; ++i) z[i] = (x[i] + y[i]) % F_.p;
    return z;
  }

  // Images of operators (e.g. "T2", "w11"); elements are linear expressions in them.
  void set_operator(const std::string& name, Vec v) { ops_[name] = std::move(v); }
  bool has_operator(const std::string& name) const { return ops_.count(name) > 0; }
  const std::map<std::string, Vec>& operators() const { return ops_; }

  // Evaluates an expression such as "T2-3", "T3-T2-1" or "2*T2+T3".
  Vec element(const std::string& expr) const {
    LinearExpr e = parse_linear_expr(expr);
    Vec v = scaled(one_, F_.red(e.constant));
    for (auto& [c, name] : e.terms) {
      auto it = ops_.find(name);
      if (it == ops_.end()) throw Error(ErrorKind::UnknownLabel, "unknown operator " + name + " in " + expr);
      v = add(v, scaled(it->second, F_.red(c)));
    }
    return v;
  }

  Mat maximal_ideal() const {
    if (d_ == 0) return Mat(0, 0);
    Mat A(1, d_);
    for (size_t i = 0; i < d_; ++i) A(0, i) = aug_[i];
    return fp::kernel(F_, A);
  }

  // Column basis of the product of two subspaces that are ideals.
  Mat product(const Mat& I, const Mat& J) const {
    std::vector<Vec> gens;
    for (size_t a = 0; a < I.cols; ++a)
      for (size_t b = 0; b < J.cols; ++b) gens.push_back(mul(fp::column(I, a), fp::column(J, b)));
    if (gens.empty()) return Mat(d_, 0);
    return fp::span(F_, fp::from_vectors(d_, gens));
  }

  // m, m^2, ... until zero; throws NotLocal when the powers stall at a nonzero ideal.
  std::vector<Mat> maximal_ideal_powers() const {
    std::vector<Mat> pw;
    if (d_ == 0) return pw;
    Mat m = maximal_ideal();
    pw.push_back(m);
    while (pw.back().cols > 0) {
      Mat next = product(pw.back(), m);
      if (next.cols == pw.back().cols) throw Error(ErrorKind::NotLocal, "maximal ideal is not nilpotent");
      pw.push_back(next);
    }
    return pw;
  }

  bool is_local() const {
    if (d_ == 0) return true;
    if (augment(one_) != 1) return false;
    try {
      maximal_ideal_powers();
    } catch (const Error&) {
      return false;
    }
    return true;
  }

  size_t socle_dim() const {
    if (d_ == 0) return 0;
    Mat m = maximal_ideal();
    // x with x * y = 0 for all y in m
    Mat A(d_ * m.cols, d_);
    for (size_t j = 0; j < m.cols; ++j) {
      Vec y = fp::column(m, j);
      for (size_t i = 0; i < d_; ++i) {
        Vec e(d_, 0);
        e[i] = 1;
        Vec z = mul(e, y);
        for (size_t k = 0; k < d_; ++k) A(j * d_ + k, i) = z[k];
      }
    }
    return fp::kernel(F_, A).cols;
  }

  LocalInvariants invariants() const {
    LocalInvariants inv;
    inv.dim = d_;
    if (d_ == 0) return inv;
    auto pw = maximal_ideal_powers();
    inv.embedding_dim = pw[0].cols - (pw.size() > 1 ? pw[1].cols : 0);
    inv.nilpotency_degree = pw.size();  // least n with m^n = 0
    inv.socle_dim = socle_dim();
    inv.gorenstein_defect = (int)inv.socle_dim - 1;
    return inv;
  }

  std::vector<size_t> power_dims() const {
    std::vector<size_t> out;
    for (auto& m : maximal_ideal_powers()) out.push_back(m.cols);
    return out;
  }

  // Whether the labelled elements span m / m^2 (hence generate m).
  bool check_generates(const std::vector<std::string>& labels) const {
    if (d_ == 0) return true;
    auto pw = maximal_ideal_powers();
    std::vector<Vec> cols;
    for (auto& l : labels) {
      Vec v = element(l);
      if (augment(v) != 0) return false;  // not in m
      cols.push_back(v);
    }
    const Mat& m2 = pw.size() > 1 ? pw[1] : pw[0];
    if (pw.size() > 1)
      for (size_t j = 0; j < m2.cols; ++j) cols.push_back(fp::column(m2, j));
    return fp::rank(F_, fp::from_vectors(d_, cols)) == pw[0].cols;
  }

  Presentation presentation(const std::vector<std::string>& labels) const {
    Presentation P;
    P.vars = labels;
    if (d_ == 0) return P;
    if (!check_generates(labels)) throw Error(ErrorKind::NotMinimalGenerators, "elements do not generate the maximal ideal");
    auto inv = invariants();
    if (labels.size() != inv.embedding_dim)
      throw Error(ErrorKind::NotMinimalGenerators, "generator count differs from the embedding dimension");
    const size_t nv = labels.size();
    const int D = (int)inv.nilpotency_degree;  // every monomial of degree >= D vanishes
    std::vector<Vec> gens;
    for (auto& l : labels) gens.push_back(element(l));
    auto mons = detail::monomials_upto(nv, D);
    std::map<std::vector<int>, size_t> idx;
    for (size_t i = 0; i < mons.size(); ++i) idx[mons[i]] = i;
    std::vector<Vec> vals(mons.size());
    for (size_t i = 0; i < mons.size(); ++i) {
      const auto& e = mons[i];
      size_t v = 0;
      while (v < nv && e[v] == 0) ++v;
      if (v == nv) { vals[i] = one_; continue; }
      auto prev = e;
      --prev[v];
      vals[i] = mul(vals[idx[prev]], gens[v]);
    }
    // J = kernel of evaluation; rows of J in reduced echelon form with the monomial order
    Mat E = fp::from_vectors(d_, vals);
    Mat J = fp::kernel(F_, E);  // columns indexed by monomials
    Mat Jrows = transpose(J);
    auto rref = [&](Mat M) {
      size_t r = 0;
      for (size_t c = 0; c < M.cols && r < M.rows; ++c) {
        size_t piv = r;
        while (piv < M.rows && M(piv, c) == 0) ++piv;
        if (piv == M.rows) continue;
        std::swap_ranges(M.row(r), M.row(r) + M.cols, M.row(piv));
        u64 iv = F_.inv(M(r, c));
        for (size_t j = 0; j < M.cols; ++j) M(r, j) = M(r, j) * iv % F_.p;
        for (size_t i = 0; i < M.rows; ++i) {
          if (i == r || M(i, c) == 0) continue;
          u64 f = F_.neg(M(i, c));
          for (size_t j = 0; j < M.cols; ++j) M(i, j) = (M(i, j) + f * M(r, j)) % F_.p;
        }
        ++r;
      }
      M.rows = r;
      M.a.resize(r * M.cols);
      return M;
    };
    Mat Jr = rref(Jrows);
    // (x) J, truncated above degree D
    std::vector<Vec> xJ;
    for (size_t r = 0; r < Jr.rows; ++r)
      for (size_t v = 0; v < nv; ++v) {
        Vec w(mons.size(), 0);
        for (size_t c = 0; c < mons.size(); ++c) {
          if (Jr(r, c) == 0) continue;
          auto e = mons[c];
          ++e[v];
          auto it = idx.find(e);
          if (it != idx.end()) w[it->second] = Jr(r, c);
        }
        xJ.push_back(std::move(w));
      }
    std::vector<Vec> span_vecs = xJ;
    size_t base_rank = xJ.empty() ? 0 : fp::rank(F_, fp::from_vectors(mons.size(), span_vecs));
    for (size_t r = 0; r < Jr.rows; ++r) {
      Vec row(Jr.row(r), Jr.row(r) + Jr.cols);
      span_vecs.push_back(row);
      size_t nr = fp::rank(F_, fp::from_vectors(mons.size(), span_vecs));
      if (nr == base_rank) {
        span_vecs.pop_back();
        continue;
      }
      base_rank = nr;
      Polynomial f;
      for (size_t c = 0; c < mons.size(); ++c)
        if (row[c]) f.terms.emplace_back(row[c], mons[c]);
      P.relations.push_back(std::move(f));
    }
    return P;
  }

  // Evaluate a polynomial at the labelled elements.
  Vec evaluate(const Polynomial& f, const std::vector<std::string>& labels) const {
    Vec acc(d_, 0);
    std::vector<Vec> gens;
    for (auto& l : labels) gens.push_back(element(l));
    for (auto& [c, e] : f.terms) {
      Vec term = scaled(one_, c);
      for (size_t v = 0; v < e.size(); ++v)
        for (int t = 0; t < e[v]; ++t) term = mul(term, gens[v]);
      acc = add(acc, term);
    }
    return acc;
  }

 private:
  Zpk F_{2, 1};
  size_t d_ = 0;
  std::vector<u64> mult_;
  Vec one_, aug_;
  std::map<std::string, Vec> ops_;
};

// F_p[[x_1..x_n]] / (relations) as a LocalAlgebra, relations in the maximal ideal.
// The variables are stored as operators "x", "y", ...
inline LocalAlgebra algebra_from_presentation(u64 p, size_t nvars, const std::vector<Polynomial>& rels, int max_degree) {
  size_t target = power_series_quotient_dim(p, nvars, rels, max_degree);
  Zpk F(p, 1);
  for (auto& r : rels)
    for (auto& [c, e] : r.terms)
      if (c % p && detail::degree(e) == 0) throw Error(ErrorKind::NotLocal, "relation has a unit constant term");
  // truncation degree D with (x)^D inside the ideal
  int D = 1;
  std::vector<std::vector<int>> mons;
  std::map<std::vector<int>, size_t> idx;
  SmithForm S;
  size_t r = 0;
  for (;; ++D) {
    if (D > max_degree) throw Error(ErrorKind::RankUnstable, "quotient is not finite up to the degree bound");
    mons = detail::monomials_upto(nvars, D - 1);
    idx.clear();
    for (size_t i = 0; i < mons.size(); ++i) idx[mons[i]] = i;
    std::vector<Vec> gens;
    for (auto& rel : rels)
      for (auto& m : mons) {
        Vec v(mons.size(), 0);
        for (auto& [c, e] : rel.terms) {
          std::vector<int> prod(nvars);
          for (size_t i = 0; i < nvars; ++i) prod[i] = e[i] + m[i];
          auto it = idx.find(prod);
          if (it != idx.end()) v[it->second] = (v[it->second] + c) % p;
        }
        gens.push_back(std::move(v));
      }
    Mat G = gens.empty() ? Mat(mons.size(), 1) : fp::from_vectors(mons.size(), gens);
    S = smith(F, G, {true, true, false, false});
    r = S.rank;
    if (mons.size() - r != target) continue;
    break;
  }
  const size_t n = target;
  auto project = [&](const Vec& v) {
    Vec w = mat_vec(F, S.P, v);
    return Vec(w.begin() + r, w.end());
  };
  std::vector<Vec> reps(n);
  for (size_t i = 0; i < n; ++i) reps[i] = fp::column(S.Pinv, r + i);
  auto poly_mul = [&](const Vec& a, const Vec& b) {
    Vec c(mons.size(), 0);
    for (size_t i = 0; i < mons.size(); ++i) {
      if (!a[i]) continue;
      for (size_t j = 0; j < mons.size(); ++j) {
        if (!b[j]) continue;
        std::vector<int> e(nvars);
        for (size_t t = 0; t < nvars; ++t) e[t] = mons[i][t] + mons[j][t];
        auto it = idx.find(e);
        if (it != idx.end()) c[it->second] = (c[it->second] + a[i] * b[j]) % p;
      }
    }
    return c;
  };
  std::vector<u64> mult(n * n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Vec c = project(poly_mul(reps[i], reps[j]));
      std::copy(c.begin(), c.end(), mult.begin() + (i * n + j) * n);
    }
  Vec unit(mons.size(), 0);
  unit[0] = 1;
  Vec aug(n);
  for (size_t i = 0; i < n; ++i) aug[i] = reps[i][0];
  LocalAlgebra A(p, n, std::move(mult), project(unit), std::move(aug));
  for (size_t v = 0; v < nvars; ++v) {
    Vec x(mons.size(), 0);
    std::vector<int> e(nvars, 0);
    e[v] = 1;
    if (idx.count(e)) x[idx[e]] = 1;
    A.set_operator(var_name(v), project(x));
  }
  return A;
}

// Algebra generated by commuting matrices acting on F_p^n with a cyclic vector u, identified
// with F_p^n via a -> a u. Eigenvalues give the augmentation.
struct CyclicModuleData {
  std::vector<Mat> gens;         // commuting n x n matrices over F_p
  std::vector<u64> eigenvalues;  // Eisenstein eigenvalue of each generator mod p
  Vec u;                         // cyclic vector
};

struct CyclicAlgebra {
  LocalAlgebra algebra;
  Mat basis_inv;  // monomial basis (as vectors M u) inverted
  Vec u;

  // Element of the algebra acting on F_p^n by the given matrix.
  Vec element(const Mat& action) const {
    if (u.empty()) return {};
    Zpk F(algebra.p(), 1);
    return mat_vec(F, basis_inv, mat_vec(F, action, u));
  }
};

inline CyclicAlgebra cyclic_algebra(u64 p, const CyclicModuleData& data) {
  Zpk F(p, 1);
  const size_t n = data.u.size();
  CyclicAlgebra out;
  out.u = data.u;
  if (n == 0) {
    out.algebra = LocalAlgebra::zero(p);
    return out;
  }
  std::vector<Mat> mats{Mat::identity(n)};
  std::vector<Vec> vecs{data.u};
  std::vector<u64> augs{1};
  for (size_t head = 0; head < mats.size() && mats.size() < n; ++head) {
    for (size_t g = 0; g < data.gens.size() && mats.size() < n; ++g) {
      Mat M = mat_mul(F, data.gens[g], mats[head]);
      vecs.push_back(mat_vec(F, M, data.u));
      if (fp::rank(F, fp::from_vectors(n, vecs)) == mats.size() + 1) {
        mats.push_back(std::move(M));
        augs.push_back(augs[head] * (data.eigenvalues[g] % p) % p);
      } else {
        vecs.pop_back();
      }
    }
  }
  if (mats.size() != n) throw Error(ErrorKind::Internal, "vector is not cyclic for the generators");
  out.basis_inv = mat_inverse(F, fp::from_vectors(n, vecs));
  std::vector<u64> mult(n * n * n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Vec c = mat_vec(F, out.basis_inv, mat_vec(F, mats[i], vecs[j]));
      std::copy(c.begin(), c.end(), mult.begin() + (i * n + j) * n);
    }
  Vec one(n, 0);
  one[0] = 1;
  out.algebra = LocalAlgebra(p, n, std::move(mult), std::move(one), std::move(augs));
  return out;
}

}  // namespace eisen
