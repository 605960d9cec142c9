#pragma once

// Weight-2 modular symbols for Gamma_0(N), N squarefree, over Z.

#include <cctype>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "eisen/arith.hpp"
#include "eisen/intmat.hpp"

namespace eisen {

constexpr i64 kMaxLevel = 10000;

// P^1(Z/N) for squarefree N. Elements are indexed in lexicographic order of their
// lexicographically least lift (c, d) with 0 <= c, d < N.
class P1List {
 public:
  P1List() = default;
  explicit P1List(i64 N) : N_(N) {
    primes_ = factor_squarefree(N);
    radix_.assign(primes_.size(), 1);
    size_t total = 1;
    for (size_t i = 0; i < primes_.size(); ++i) {
      radix_[i] = total;
      total *= (size_t)(primes_[i] + 1);
      std::vector<int> inv((size_t)primes_[i], 0);
      for (i64 x = 1; x < primes_[i]; ++x) inv[(size_t)x] = (int)inv_mod((u64)x, (u64)primes_[i]);
      inverses_.push_back(std::move(inv));
    }
    code_to_index_.assign(total, -1);
    size_t found = 0;
    for (i64 c = 0; c < std::max<i64>(N, 1) && found < total; ++c) {
      for (i64 d = 0; d < std::max<i64>(N, 1) && found < total; ++d) {
        i64 code = encode(c, d);
        if (code < 0 || code_to_index_[(size_t)code] >= 0) continue;
        code_to_index_[(size_t)code] = (int)reps_.size();
        reps_.emplace_back(c, d);
        ++found;
      }
    }
    if (found != total) throw Error(ErrorKind::Internal, "incomplete P^1 enumeration");
  }

  i64 level() const { return N_; }
  size_t size() const { return reps_.size(); }
  const std::pair<i64, i64>& rep(size_t i) const { return reps_[i]; }

  // Index of (c : d), or -1 when gcd(c, d, N) != 1.
  int index(i64 c, i64 d) const {
    i64 code = encode(c, d);
    return code < 0 ? -1 : code_to_index_[(size_t)code];
  }

 private:
  i64 encode(i64 c, i64 d) const {
    i64 code = 0;
    for (size_t i = 0; i < primes_.size(); ++i) {
      i64 l = primes_[i];
      i64 cl = c % l, dl = d % l;
      if (cl < 0) cl += l;
      if (dl < 0) dl += l;
      i64 loc;
      if (dl != 0) loc = cl * inverses_[i][(size_t)dl] % l;
      else if (cl != 0) loc = l;
      else return -1;
      code += loc * (i64)radix_[i];
    }
    return code;
  }

  i64 N_ = 1;
  std::vector<i64> primes_;
  std::vector<size_t> radix_;
  std::vector<std::vector<int>> inverses_;
  std::vector<int> code_to_index_;
  std::vector<std::pair<i64, i64>> reps_;
};

struct Mat2 {
  i64 a, b, c, d;
};

// Heilbronn matrices of determinant q (q prime), Cremona's construction.
inline std::vector<Mat2> heilbronn_cremona(i64 q) {
  std::vector<Mat2> out{{1, 0, 0, q}};
  if (q == 2) {
    out.push_back({2, 0, 0, 1});
    out.push_back({2, 1, 0, 1});
    out.push_back({1, 0, 1, 2});
    return out;
  }
  for (i64 r = -(q / 2); r <= q / 2; ++r) {
    i64 x1 = q, x2 = -r, y1 = 0, y2 = 1, a = -q, b = r;
    out.push_back({x1, x2, y1, y2});
    while (b != 0) {
      // nearest integer to a/b, halves rounded away from zero
      i64 qq = (2 * std::llabs(a) + std::llabs(b)) / (2 * std::llabs(b));
      if ((a < 0) != (b < 0)) qq = -qq;
      i64 c = a - b * qq;
      a = -b;
      b = c;
      i64 x3 = qq * x2 - x1;
      x1 = x2;
      x2 = x3;
      i64 y3 = qq * y2 - y1;
      y1 = y2;
      y2 = y3;
      out.push_back({x1, x2, y1, y2});
    }
  }
  return out;
}

// Merel's set: ad - bc = n, a > b >= 0, d > c >= 0.
inline std::vector<Mat2> heilbronn_merel(i64 n) {
  std::vector<Mat2> out;
  for (i64 a = 1; a <= n; ++a) {
    i64 q = n / a;
    if (q * a == n) {
      i64 d = q;
      for (i64 b = 0; b < a; ++b) out.push_back({a, b, 0, d});
      for (i64 c = 1; c < d; ++c) out.push_back({a, 0, c, d});
    }
    for (i64 d = q + 1; d <= n; ++d) {
      i64 bc = a * d - n;
      for (i64 c = bc / a + 1; c < d; ++c)
        if (bc % c == 0) out.push_back({a, bc / c, c, d});
    }
  }
  return out;
}

using SparseVec = std::vector<std::pair<int, i64>>;  // sorted (index, coefficient)

inline void sparse_axpy(SparseVec& y, i64 s, const SparseVec& x) {
  SparseVec out;
  out.reserve(y.size() + x.size());
  size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      out.emplace_back(x[j].first, checked_mul(s, x[j].second));
      ++j;
    } else {
      i64 v = checked_add(y[i].second, checked_mul(s, x[j].second));
      if (v != 0) out.emplace_back(y[i].first, v);
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

// Reduced fraction num/den with den >= 0; infinity is 1/0.
struct Cusp {
  i64 num, den;
};

inline Cusp make_cusp(i64 num, i64 den) {
  if (den == 0) return {1, 0};
  i64 g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (den < 0) { num = -num; den = -den; }
  return {num, den};
}

struct OperatorLabel {
  char kind = 'T';  // 'T' Hecke, 'w' Atkin-Lehner, 'U' Hecke at a prime dividing N, 's' star
  i64 index = 0;

  std::string str() const { return kind == 's' ? std::string("star") : std::string(1, kind) + std::to_string(index); }
  bool operator<(const OperatorLabel& o) const { return kind != o.kind ? kind < o.kind : index < o.index; }
  bool operator==(const OperatorLabel& o) const { return kind == o.kind && index == o.index; }
};

inline OperatorLabel parse_operator_label(const std::string& s) {
  if (s == "star") return {'s', 0};
  if (s.size() < 2 || (s[0] != 'T' && s[0] != 'w' && s[0] != 'U'))
    throw Error(ErrorKind::UnknownLabel, "unknown operator " + s);
  for (size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit((unsigned char)s[i]) || i > 12) throw Error(ErrorKind::UnknownLabel, "unknown operator " + s);
  return {s[0], std::stoll(s.substr(1))};
}

struct IntegerOperator {
  OperatorLabel label;
  IntMatrix matrix;
};

class ModularSymbolSpace {
 public:
  static ModularSymbolSpace build(i64 N, i64 level_bound = kMaxLevel) {
    if (N > level_bound) throw Error(ErrorKind::LevelTooLarge, "level " + std::to_string(N) + " exceeds bound");
    ModularSymbolSpace S;
    S.N_ = N;
    S.primes_ = factor_squarefree(N);
    S.p1_ = P1List(N);
    S.solve_relations();
    S.setup_cusps();
    return S;
  }

  i64 level() const { return N_; }
  const std::vector<i64>& primes() const { return primes_; }
  size_t rank() const { return gens_.size(); }
  size_t cuspidal_rank() const { return cusp_nontree_.size(); }
  size_t num_cusps() const { return cusp_divisors_.size(); }
  const P1List& p1() const { return p1_; }
  // P^1 indices of the Manin symbols forming the basis
  const std::vector<int>& basis_symbols() const { return gens_; }

  // Coordinates of the Manin symbol (c : d).
  const SparseVec& symbol_coords(i64 c, i64 d) const {
    int i = p1_.index(c, d);
    if (i < 0) throw Error(ErrorKind::Internal, "symbol outside P^1");
    return coords_[(size_t)i];
  }

  // Coordinates of the modular symbol {0, x}.
  SparseVec zero_to(Cusp x) const {
    SparseVec v;
    if (x.den == 0) {
      sparse_axpy(v, 1, symbol_coords(0, 1));
      return v;
    }
    // convergents p_k/q_k; the pair (k-1, k) contributes one Manin symbol
    i64 pm2 = 0, qm2 = 1, pm1 = 1, qm1 = 0;
    sparse_axpy(v, 1, symbol_coords(0, 1));
    i64 a = x.num, b = x.den;
    while (b != 0) {
      i64 t = a / b;
      if ((a % b != 0) && ((a < 0) != (b < 0))) --t;  // floor
      i64 r = a - t * b;
      i64 pk = checked_add(checked_mul(t, pm1), pm2);
      i64 qk = checked_add(checked_mul(t, qm1), qm2);
      i64 det = pk * qm1 - pm1 * qk;
      i64 c = det == 1 ? qk : -qk;
      sparse_axpy(v, 1, symbol_coords(c, qm1));
      pm2 = pm1; qm2 = qm1; pm1 = pk; qm1 = qk;
      a = b;
      b = r;
    }
    return v;
  }

  // Coordinates of {alpha, beta}.
  SparseVec symbol(Cusp alpha, Cusp beta) const {
    SparseVec v = zero_to(beta);
    sparse_axpy(v, -1, zero_to(alpha));
    return v;
  }

  // Lift of basis symbol j to [a b; c d] in SL_2(Z).
  Mat2 lift_to_sl2(size_t j) const {
    auto [c, d] = p1_.rep((size_t)gens_[j]);
    return lift_pair(c, d);
  }

  Mat2 lift_pair(i64 c, i64 d) const {
    if (N_ == 1) return {1, 0, 0, 1};
    i64 dd = d;
    if (c == 0) {
      dd = 1;
    } else {
      while (std::gcd(c, dd) != 1) dd += N_;
    }
    i64 s, t;
    ext_gcd(dd, c, s, t);  // dd s + c t = 1
    return {s, -t, c, dd};
  }

  // Left action of an integral matrix M (det > 0) on the basis: column j is M g_j {0, oo}.
  template <class Fn>
  IntMatrix act_by_matrices(Fn&& matrices_for) const {
    const size_t n = rank();
    IntMatrix T(n, n);
    for (size_t j = 0; j < n; ++j) {
      Mat2 g = lift_to_sl2(j);
      SparseVec col;
      for (const Mat2& M : matrices_for()) {
        Mat2 h{M.a * g.a + M.b * g.c, M.a * g.b + M.b * g.d, M.c * g.a + M.d * g.c, M.c * g.b + M.d * g.d};
        sparse_axpy(col, 1, symbol(make_cusp(h.b, h.d), make_cusp(h.a, h.c)));
      }
      for (auto& [i, v] : col) T((size_t)i, j) = v;
    }
    return T;
  }

  // Right action of Heilbronn matrices on Manin symbols.
  IntMatrix heilbronn_action(const std::vector<Mat2>& H) const {
    const size_t n = rank();
    IntMatrix T(n, n);
    for (size_t j = 0; j < n; ++j) {
      auto [c, d] = p1_.rep((size_t)gens_[j]);
      for (const Mat2& h : H) {
        int idx = p1_.index(c * h.a + d * h.c, c * h.b + d * h.d);
        if (idx < 0) continue;
        for (auto& [i, v] : coords_[(size_t)idx]) T((size_t)i, j) += v;
      }
    }
    return T;
  }

  IntMatrix hecke_matrix(i64 n) const {
    if (n < 1) throw Error(ErrorKind::BadInput, "Hecke index must be positive");
    if (std::gcd(n, N_) != 1) throw Error(ErrorKind::NotCoprime, "T_n needs gcd(n, N) = 1");
    if (n == 1) return IntMatrix::identity(rank());
    if (is_prime((u64)n)) return heilbronn_action(heilbronn_cremona(n));
    return heilbronn_action(heilbronn_merel(n));
  }

  // T_q for prime q not dividing N from double coset representatives; independent route.
  IntMatrix hecke_matrix_cosets(i64 q) const {
    if (std::gcd(q, N_) != 1 || !is_prime((u64)q)) throw Error(ErrorKind::NotCoprime, "need a prime not dividing N");
    std::vector<Mat2> reps{{q, 0, 0, 1}};
    for (i64 j = 0; j < q; ++j) reps.push_back({1, j, 0, q});
    return act_by_matrices([&]() -> const std::vector<Mat2>& { return reps; });
  }

  IntMatrix atkin_lehner_matrix(i64 Q) const {
    if (Q < 1 || N_ % Q != 0 || std::gcd(Q, N_ / Q) != 1) throw Error(ErrorKind::BadDivisor, "Q must be an exact divisor of N");
    i64 s, t;
    ext_gcd(Q, N_ / Q, s, t);  // Q s + (N/Q) t = 1
    std::vector<Mat2> W{{Q * s, -t, N_, Q}};
    return act_by_matrices([&]() -> const std::vector<Mat2>& { return W; });
  }

  IntMatrix u_matrix(i64 ell) const {
    if (ell < 2 || N_ % ell != 0 || !is_prime((u64)ell)) throw Error(ErrorKind::BadDivisor, "ell must be a prime dividing N");
    std::vector<Mat2> reps;
    for (i64 j = 0; j < ell; ++j) reps.push_back({1, j, 0, ell});
    return act_by_matrices([&]() -> const std::vector<Mat2>& { return reps; });
  }

  // {alpha, beta} -> {-alpha, -beta}
  IntMatrix star_matrix() const {
    const size_t n = rank();
    IntMatrix T(n, n);
    for (size_t j = 0; j < n; ++j) {
      auto [c, d] = p1_.rep((size_t)gens_[j]);
      for (auto& [i, v] : symbol_coords(-c, d)) T((size_t)i, j) += v;
    }
    return T;
  }

  IntMatrix operator_matrix(const OperatorLabel& L) const {
    switch (L.kind) {
      case 'T': return hecke_matrix(L.index);
      case 'w': return atkin_lehner_matrix(L.index);
      case 'U': return u_matrix(L.index);
      case 's': return star_matrix();
    }
    throw Error(ErrorKind::BadInput, "unknown operator kind");
  }

  IntegerOperator make_operator(const OperatorLabel& L) const { return {L, operator_matrix(L)}; }

  // Divisors of N labelling the cusps (class of a/c is gcd(c, N)).
  const std::vector<i64>& cusp_divisors() const { return cusp_divisors_; }

  // Boundary map to Z^{cusps}, num_cusps x rank.
  IntMatrix boundary_matrix() const {
    IntMatrix B(num_cusps(), rank());
    for (size_t j = 0; j < rank(); ++j) {
      auto [c, d] = p1_.rep((size_t)gens_[j]);
      B((size_t)cusp_of(c), j) += 1;
      B((size_t)cusp_of(d), j) -= 1;
    }
    return B;
  }

  // Columns form a Z-basis of the cuspidal sublattice (kernel of the boundary map).
  const IntMatrix& cuspidal_basis() const { return cusp_basis_; }

  // Coordinates of a cuspidal vector in cuspidal_basis().
  std::vector<i64> cuspidal_coords(const std::vector<i64>& x) const {
    std::vector<i64> out(cusp_nontree_.size());
    for (size_t i = 0; i < cusp_nontree_.size(); ++i) out[i] = x[(size_t)cusp_nontree_[i]];
    return out;
  }

  // Restriction of an operator preserving the cuspidal sublattice.
  IntMatrix cuspidal_restriction(const IntMatrix& T) const {
    const size_t n = rank(), m = cuspidal_rank();
    IntMatrix R(m, m);
    for (size_t j = 0; j < m; ++j) {
      std::vector<i64> img(n, 0);
      for (size_t t = 0; t < n; ++t) {
        i64 b = cusp_basis_(t, j);
        if (b == 0) continue;
        for (size_t i = 0; i < n; ++i) img[i] += T(i, t) * b;
      }
      // membership: boundary must vanish
      for (size_t cidx = 0; cidx < num_cusps(); ++cidx) {
        i64 s = 0;
        for (size_t t = 0; t < n; ++t) s += boundary_(cidx, t) * img[t];
        if (s != 0) throw Error(ErrorKind::NotStable, "operator does not preserve the cuspidal sublattice");
      }
      auto c = cuspidal_coords(img);
      for (size_t i = 0; i < m; ++i) R(i, j) = c[i];
    }
    return R;
  }

  // Hash of the level and basis symbols, used to key cached operators.
  u64 basis_hash() const {
    u64 h = 1469598103934665603ull;
    auto mix = [&](u64 x) {
      for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    };
    mix((u64)N_);
    for (int g : gens_) {
      mix((u64)p1_.rep((size_t)g).first);
      mix((u64)p1_.rep((size_t)g).second);
    }
    return h;
  }

 private:
  int cusp_of(i64 c) const {
    i64 g = std::gcd(c % N_, N_);
    if (g == 0) g = N_;
    auto it = std::lower_bound(cusp_divisors_.begin(), cusp_divisors_.end(), g);
    return (int)(it - cusp_divisors_.begin());
  }

  void solve_relations() {
    const size_t mu = p1_.size();
    // two-term relations x + xS = 0 with (c:d)S = (d:-c)
    std::vector<int> cls(mu, -1);
    std::vector<i64> sgn(mu, 0);
    for (size_t i = 0; i < mu; ++i) {
      auto [c, d] = p1_.rep(i);
      size_t j = (size_t)p1_.index(d, -c);
      if (j == i) {
        cls[i] = -1;  // 2-torsion: vanishes in the free quotient
        sgn[i] = 0;
      } else {
        cls[i] = (int)std::min(i, j);
        sgn[i] = i < j ? 1 : -1;
      }
    }
    // three-term relations x + xT + xT^2 = 0 with (c:d)T = (d:-c-d)
    std::vector<bool> seen(mu, false);
    std::map<int, SparseVec> pivot_expr;          // pivot class -> expression in free classes
    std::map<int, std::vector<int>> used_by;       // free class -> pivots whose expression uses it
    std::vector<SparseVec> deferred;
    std::vector<bool> dead(mu, false);              // classes forced to zero

    auto reduce = [&](SparseVec rel) {
      SparseVec out;
      for (auto& [v, c] : rel) {
        if (dead[(size_t)v]) continue;
        auto it = pivot_expr.find(v);
        if (it == pivot_expr.end()) sparse_axpy(out, c, SparseVec{{v, 1}});
        else sparse_axpy(out, c, it->second);
      }
      i64 g = 0;
      for (auto& [v, c] : out) g = std::gcd(g, c);
      if (g > 1)
        for (auto& [v, c] : out) c /= g;
      return out;
    };

    auto kill = [&](int v) {
      // v = 0 in the free quotient: substitute into pivot expressions
      dead[(size_t)v] = true;
      auto it = used_by.find(v);
      if (it == used_by.end()) return;
      for (int piv : it->second) {
        auto& e = pivot_expr[piv];
        e.erase(std::remove_if(e.begin(), e.end(), [&](auto& pr) { return pr.first == v; }), e.end());
      }
      used_by.erase(it);
    };

    auto add_relation = [&](const SparseVec& raw) -> bool {
      SparseVec rel = reduce(raw);
      if (rel.empty()) return true;
      if (rel.size() == 1) {
        kill(rel[0].first);
        return true;
      }
      int pv = -1;
      i64 pc = 0;
      for (auto it = rel.rbegin(); it != rel.rend(); ++it)
        if (it->second == 1 || it->second == -1) { pv = it->first; pc = it->second; break; }
      if (pv < 0) return false;
      SparseVec expr;
      for (auto& [v, c] : rel)
        if (v != pv) expr.emplace_back(v, -c * pc);  // pc = +-1
      // substitute into existing pivots that use pv
      auto it = used_by.find(pv);
      if (it != used_by.end()) {
        for (int piv : it->second) {
          auto& e = pivot_expr[piv];
          i64 coef = 0;
          for (auto& [v, c] : e)
            if (v == pv) coef = c;
          if (coef == 0) continue;
          sparse_axpy(e, -coef, SparseVec{{pv, 1}});
          sparse_axpy(e, coef, expr);
          for (auto& [v, c] : expr) used_by[v].push_back(piv);
        }
        used_by.erase(pv);
      }
      for (auto& [v, c] : expr) used_by[v].push_back(pv);
      pivot_expr[pv] = std::move(expr);
      return true;
    };

    for (size_t i = 0; i < mu; ++i) {
      if (seen[i]) continue;
      auto [c, d] = p1_.rep(i);
      size_t i1 = (size_t)p1_.index(d, -c - d);
      auto [c1, d1] = p1_.rep(i1);
      size_t i2 = (size_t)p1_.index(d1, -c1 - d1);
      seen[i] = seen[i1] = seen[i2] = true;
      SparseVec rel;
      for (size_t x : {i, i1, i2}) {
        if (cls[x] < 0) continue;
        sparse_axpy(rel, sgn[x], SparseVec{{cls[x], 1}});
      }
      if (i == i1) {
        // orbit of size one: 3x = 0
        if (cls[i] >= 0) add_relation(SparseVec{{cls[i], 1}});
        continue;
      }
      if (!add_relation(rel)) deferred.push_back(rel);
    }
    for (size_t pass = 0; pass < 4 && !deferred.empty(); ++pass) {
      std::vector<SparseVec> still;
      for (auto& r : deferred)
        if (!add_relation(r)) still.push_back(r);
      deferred.swap(still);
    }
    for (auto& r : deferred)
      if (!reduce(r).empty()) throw Error(ErrorKind::Internal, "relation without unit coefficient");

    // free classes become the basis, in P^1 order
    std::vector<int> basis_of(mu, -1);
    for (size_t i = 0; i < mu; ++i) {
      if (cls[i] != (int)i || dead[i] || pivot_expr.count((int)i)) continue;
      basis_of[i] = (int)gens_.size();
      gens_.push_back((int)i);
    }
    coords_.assign(mu, {});
    for (size_t i = 0; i < mu; ++i) {
      if (cls[i] < 0) continue;
      int k = cls[i];
      if (dead[(size_t)k]) continue;
      SparseVec v;
      auto it = pivot_expr.find(k);
      if (it == pivot_expr.end()) {
        v.emplace_back(basis_of[(size_t)k], sgn[i]);
      } else {
        for (auto& [fv, c] : it->second) {
          if (dead[(size_t)fv]) continue;
          if (basis_of[(size_t)fv] < 0) throw Error(ErrorKind::Internal, "pivot expression not reduced");
          v.emplace_back(basis_of[(size_t)fv], c * sgn[i]);
        }
        std::sort(v.begin(), v.end());
      }
      coords_[i] = std::move(v);
    }
  }

  void setup_cusps() {
    for (i64 d = 1; d <= N_; ++d)
      if (N_ % d == 0) cusp_divisors_.push_back(d);
    boundary_ = boundary_matrix();
    const size_t n = rank(), c = num_cusps();
    // spanning forest on the cusp graph; each basis symbol is an edge
    std::vector<int> parent(c);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[(size_t)x] == x ? x : parent[(size_t)x] = find(parent[(size_t)x]); };
    std::vector<bool> tree(n, false);
    std::vector<std::vector<std::pair<int, int>>> adj(c);  // (neighbour, signed edge)
    for (size_t j = 0; j < n; ++j) {
      auto [cc, dd] = p1_.rep((size_t)gens_[j]);
      int u = cusp_of(cc), v = cusp_of(dd);
      if (u == v) continue;
      int ru = find(u), rv = find(v);
      if (ru == rv) continue;
      parent[(size_t)ru] = rv;
      tree[j] = true;
      // edge j has boundary e_u - e_v
      adj[(size_t)u].push_back({v, -(int)(j + 1)});
      adj[(size_t)v].push_back({u, (int)(j + 1)});
    }
    // potential P(x): combination of tree edges with boundary e_x - e_root
    std::vector<SparseVec> pot(c);
    std::vector<bool> done(c, false);
    for (size_t root = 0; root < c; ++root) {
      if (done[root]) continue;
      done[root] = true;
      std::vector<int> stack{(int)root};
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (auto [y, se] : adj[(size_t)x]) {
          if (done[(size_t)y]) continue;
          done[(size_t)y] = true;
          // moving from x to y: edge e with boundary e_u - e_v
          int j = std::abs(se) - 1;
          pot[(size_t)y] = pot[(size_t)x];
          // se > 0: y = u, x = v, boundary(e_j) = e_y - e_x
          sparse_axpy(pot[(size_t)y], se > 0 ? 1 : -1, SparseVec{{j, 1}});
          stack.push_back(y);
        }
      }
    }
    for (size_t j = 0; j < n; ++j)
      if (!tree[j]) cusp_nontree_.push_back((int)j);
    cusp_basis_ = IntMatrix(n, cusp_nontree_.size());
    for (size_t t = 0; t < cusp_nontree_.size(); ++t) {
      size_t j = (size_t)cusp_nontree_[t];
      auto [cc, dd] = p1_.rep((size_t)gens_[j]);
      int u = cusp_of(cc), v = cusp_of(dd);
      cusp_basis_(j, t) = 1;
      if (u == v) continue;
      SparseVec path = pot[(size_t)u];
      sparse_axpy(path, -1, pot[(size_t)v]);
      for (auto& [e, coef] : path) cusp_basis_((size_t)e, t) -= coef;
    }
  }

  i64 N_ = 1;
  std::vector<i64> primes_;
  P1List p1_;
  std::vector<int> gens_;
  std::vector<SparseVec> coords_;
  std::vector<i64> cusp_divisors_;
  IntMatrix boundary_;
  std::vector<int> cusp_nontree_;
  IntMatrix cusp_basis_;
};

inline ModularSymbolSpace build_space(i64 N, i64 level_bound = kMaxLevel) { return ModularSymbolSpace::build(N, level_bound); }

// Genus of X_0(N) for squarefree N.
inline i64 genus_x0(i64 N) {
  auto ps = factor_squarefree(N);
  i64 mu = N, nu2 = 1, nu3 = 1;
  for (i64 l : ps) {
    mu = mu / l * (l + 1);
    nu2 *= (l == 2) ? 1 : 1 + legendre(-1, l);
    nu3 *= (l == 3) ? 1 : (l == 2 ? 1 - 1 : 1 + legendre(-3, l));
  }
  // a prime 2 contributes (1 + (-3/2)) = 0 to nu3
  i64 c = (i64)1 << ps.size();
  // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 c
  i64 twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * c;
  if (twelve_g % 12 != 0) throw Error(ErrorKind::Internal, "genus formula not integral");
  return twelve_g / 12;
}

inline i64 index_mu(i64 N) {
  i64 mu = N;
  for (i64 l : factor_squarefree(N)) mu = mu / l * (l + 1);
  return mu;
}

}  // namespace eisen
