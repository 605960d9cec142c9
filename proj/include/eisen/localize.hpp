#pragma once

// Eisenstein localization over Z/p^k: Fitting decomposition of the modular symbol space under
// the Hecke generators, regular lattices T.v, and the invariants read off from them.

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "eisen/local_algebra.hpp"
#include "eisen/modsym.hpp"
#include "eisen/zalgebra.hpp"
#include "eisen/zmod.hpp"

namespace eisen {

// A * B with A an integer matrix, reduced mod p^k.
inline Mat apply_int(const Zpk& R, const IntMatrix& A, const Mat& B) {
  Mat C(A.rows, B.cols);
  std::vector<u64> acc(B.cols);
  for (size_t i = 0; i < A.rows; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    size_t pending = 0;
    for (size_t t = 0; t < A.cols; ++t) {
      i64 x = A(i, t);
      if (x == 0) continue;
      u64 xr = R.red(x);
      const u64* br = B.row(t);
      for (size_t j = 0; j < B.cols; ++j) acc[j] += xr * br[j];
      if (++pending == 2000) {
        for (auto& v : acc) v %= R.m;
        pending = 0;
      }
    }
    for (size_t j = 0; j < B.cols; ++j) C(i, j) = acc[j] % R.m;
  }
  return C;
}

// Source of integer operator matrices; lets callers plug in a disk cache.
using OperatorProvider = std::function<IntMatrix(const OperatorLabel&)>;

inline OperatorProvider direct_provider(const ModularSymbolSpace& S) {
  return [&S](const OperatorLabel& L) { return S.operator_matrix(L); };
}

struct GeneratorSpec {
  OperatorLabel label;
  i64 eigenvalue = 0;
};

// Current state of the localized space: columns of B span it, pi B = I, and each operator
// restricted to it is stored in the basis B.
struct LocalizedSpace {
  Zpk R;
  Mat B, pi;
  std::vector<GeneratorSpec> gens;
  std::vector<Mat> action;

  size_t rank() const { return B.cols; }

  void shrink(const FreeImage& sub) {
    B = mat_mul(R, B, sub.basis);
    pi = mat_mul(R, sub.left_inv, pi);
    for (auto& C : action) C = mat_mul(R, mat_mul(R, sub.left_inv, C), sub.basis);
  }

  Mat restrict(const IntMatrix& T) const {
    Mat TB = apply_int(R, T, B);
    Mat C = mat_mul(R, pi, TB);
    if (!(mat_mul(R, B, C) == TB)) throw Error(ErrorKind::NotStable, "operator does not preserve the localized space");
    return C;
  }

  // Adds an operator without localizing at it.
  void add_operator(const GeneratorSpec& g, const IntMatrix& T) {
    gens.push_back(g);
    action.push_back(restrict(T));
  }

  // Restricts to the generalised eigenspace of T for its Eisenstein eigenvalue.
  void localize_at(const GeneratorSpec& g, const IntMatrix& T) {
    Mat C = restrict(T);
    gens.push_back(g);
    action.push_back(C);
    if (rank() == 0) return;
    FreeImage K = nil_part(R, shift_diag(R, C, g.eigenvalue));
    if (K.basis.cols < rank()) shrink(K);
  }

  std::optional<size_t> find(const OperatorLabel& L) const {
    for (size_t i = 0; i < gens.size(); ++i)
      if (gens[i].label == L) return i;
    return std::nullopt;
  }
};

inline u64 random_unit_mod(std::mt19937_64& rng, u64 m) { return rng() % m; }

// Image of the idempotent prod (1 + sign_i X_i)/2 for commuting involutions X_i.
inline LocalizedSpace project_involutions(const Zpk& R, size_t n, const std::vector<std::pair<IntMatrix, int>>& invs,
                                          std::mt19937_64& rng) {
  if (R.p == 2) throw Error(ErrorKind::BadInput, "projection needs p odd");
  u64 half = R.inv(2);
  Mat P = Mat::identity(n);
  for (auto& [X, sign] : invs) {
    Mat XP = apply_int(R, X, P);
    for (size_t i = 0; i < P.a.size(); ++i) {
      u64 t = sign > 0 ? R.add(P.a[i], XP.a[i]) : R.sub(P.a[i], XP.a[i]);
      P.a[i] = R.mul(t, half);
    }
  }
  u64 tr = 0;
  for (size_t i = 0; i < n; ++i) tr = R.add(tr, P(i, i));
  if (tr > n) throw Error(ErrorKind::Internal, "projector trace is not a rank");
  const size_t rank = (size_t)tr;
  LocalizedSpace L;
  L.R = R;
  if (rank == 0) {
    L.B = Mat(n, 0);
    L.pi = Mat(0, n);
    return L;
  }
  for (size_t extra = 8;; extra *= 4) {
    size_t cols = std::min(n, rank + extra);
    Mat Rnd(n, cols);
    for (auto& x : Rnd.a) x = random_unit_mod(rng, R.m);
    Mat PR = mat_mul(R, P, Rnd);
    FreeImage im = free_image(R, PR);
    if (im.basis.cols == rank) {
      L.B = im.basis;
      L.pi = im.left_inv;
      return L;
    }
    if (cols == n) throw Error(ErrorKind::Internal, "projector image has unexpected rank");
  }
}

// Lattice Z_p[gens] v inside (Z/p^k)^s, with the generator action in its basis.
struct RegularLattice {
  Zpk R;
  size_t dim = 0;
  int precision = 0;        // actions below are exact mod p^precision
  std::vector<Mat> action;  // dim x dim in the lattice basis
  Vec unit;                 // coordinates of v, the image of 1
  Mat basis;                // s x dim
  std::optional<SubmoduleTracker> tracker;

  // Matrix of an operator (given on the ambient (Z/p^k)^s) in the lattice basis.
  Mat coordinates_of(const Mat& C) const {
    Zpk R2(R.p, precision);
    Mat A(dim, dim);
    for (size_t j = 0; j < dim; ++j) {
      Vec c = tracker->coords(mat_vec(R, C, fp::column(basis, j)));
      for (size_t i = 0; i < dim; ++i) A(i, j) = c[i] % R2.m;
    }
    return A;
  }
};

inline RegularLattice regular_lattice(const Zpk& R, const std::vector<Mat>& gens, size_t s, std::mt19937_64& rng,
                                      int attempts = 4) {
  RegularLattice out;
  out.R = R;
  out.precision = R.k;
  if (s == 0) return out;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    Vec v(s);
    for (auto& x : v) x = random_unit_mod(rng, R.m);
    SubmoduleTracker T(R, s);
    T.insert(v);
    std::vector<Vec> queue{v};
    for (size_t head = 0; head < queue.size(); ++head)
      for (auto& g : gens) {
        Vec y = mat_vec(R, g, queue[head]);
        if (T.insert(y)) queue.push_back(std::move(y));
      }
    if (T.rank() < s) continue;  // v not generic; retry
    out.dim = s;
    out.precision = R.k - T.max_elementary_valuation();
    if (out.precision < 1) throw Error(ErrorKind::PrecisionExceeded, "regular lattice index exceeds working precision");
    out.basis = T.basis();
    out.tracker = T;
    for (auto& g : gens) out.action.push_back(out.coordinates_of(g));
    out.unit = T.coords(v);
    Zpk R2(R.p, out.precision);
    for (auto& x : out.unit) x %= R2.m;
    return out;
  }
  throw Error(ErrorKind::RankUnstable, "localized space is not cyclic under the Hecke operators");
}

// Exponents of W inside U, where U is spanned by the columns of Ugens in (Z/p^k)^d and W by
// the columns of W_of(U basis). W must have full rank in U.
inline std::vector<int> relative_invariants(const Zpk& R, const Mat& Ugens, const std::function<Mat(const Mat&)>& W_of) {
  SmithForm S = smith(R, Ugens, {true, true, false, false});
  const size_t r = S.rank;
  if (r == 0) return {};
  int amax = 0;
  for (size_t i = 0; i < r; ++i) amax = std::max(amax, S.vals[i]);
  const int k2 = R.k - amax;
  if (k2 < 1) throw Error(ErrorKind::PrecisionExceeded, "submodule index exceeds working precision");
  Mat Ub(Ugens.rows, r);
  for (size_t j = 0; j < r; ++j)
    for (size_t i = 0; i < Ugens.rows; ++i) Ub(i, j) = R.mul(S.Pinv(i, j), R.pw[S.vals[j]]);
  Mat W = W_of(Ub);
  Mat PW = mat_mul(R, S.P, W);
  Zpk R2(R.p, k2);
  Mat C(r, W.cols);
  for (size_t i = 0; i < PW.rows; ++i)
    for (size_t j = 0; j < W.cols; ++j) {
      u64 x = PW(i, j);
      if (i >= r) {
        if (x != 0) throw Error(ErrorKind::Internal, "generator outside the ambient submodule");
        continue;
      }
      u64 pv = R.pw[S.vals[i]];
      if (x % pv) throw Error(ErrorKind::Internal, "generator outside the ambient submodule");
      C(i, j) = (x / pv) % R2.m;
    }
  SmithForm S2 = smith(R2, C, {false, false, false, false});
  if (S2.rank < r) throw Error(ErrorKind::PrecisionExceeded, "quotient not finite at working precision");
  std::vector<int> out;
  for (size_t i = 0; i < r; ++i)
    if (S2.vals[i] > 0) out.push_back(S2.vals[i]);
  std::sort(out.begin(), out.end());
  return out;
}

// Columns (A_g - lambda_g) u for all generators g and columns u of U.
inline Mat ideal_times(const Zpk& R, const std::vector<Mat>& action, const std::vector<i64>& lambdas, const Mat& U) {
  Mat out(U.rows, U.cols * action.size());
  for (size_t g = 0; g < action.size(); ++g) {
    Mat Y = mat_mul(R, shift_diag(R, action[g], lambdas[g]), U);
    for (size_t i = 0; i < U.rows; ++i)
      for (size_t j = 0; j < U.cols; ++j) out(i, g * U.cols + j) = Y(i, j);
  }
  return out;
}

struct LatticeInvariants {
  RegularLattice lattice;
  CyclicAlgebra cyclic;  // T/pT with operator images registered by label
  LocalInvariants invariants;
  std::vector<int> cotangent;  // exponents of (I/I^2) tensor Z_p
  int index_exponent = 0;      // exponent of |T/I|, cuspidal lattices only

  size_t rank() const { return lattice.dim; }
  const LocalAlgebra& algebra() const { return cyclic.algebra; }

  void register_operator(const std::string& name, const Mat& C) {
    if (lattice.dim == 0) {
      cyclic.algebra.set_operator(name, {});
      return;
    }
    Zpk F(lattice.R.p, 1);
    cyclic.algebra.set_operator(name, cyclic.element(mat_reduce(F, lattice.coordinates_of(C))));
  }
};

inline LatticeInvariants lattice_invariants(const LocalizedSpace& V, bool cuspidal, std::mt19937_64& rng) {
  LatticeInvariants out;
  const Zpk& R = V.R;
  out.lattice = regular_lattice(R, V.action, V.rank(), rng);
  const RegularLattice& L = out.lattice;
  if (L.dim == 0) {
    out.cyclic.algebra = LocalAlgebra::zero(R.p);
    for (auto& g : V.gens) out.cyclic.algebra.set_operator(g.label.str(), {});
    return out;
  }
  Zpk F(R.p, 1);
  CyclicModuleData data;
  for (size_t g = 0; g < V.gens.size(); ++g) {
    data.gens.push_back(mat_reduce(F, L.action[g]));
    data.eigenvalues.push_back(F.red(V.gens[g].eigenvalue));
  }
  data.u = L.unit;
  for (auto& x : data.u) x %= R.p;
  out.cyclic = cyclic_algebra(R.p, data);
  for (size_t g = 0; g < V.gens.size(); ++g)
    out.cyclic.algebra.set_operator(V.gens[g].label.str(), out.cyclic.element(data.gens[g]));
  out.invariants = out.cyclic.algebra.invariants();

  Zpk R2(R.p, L.precision);
  std::vector<i64> lambdas;
  for (auto& g : V.gens) lambdas.push_back(g.eigenvalue);
  Mat I = ideal_times(R2, L.action, lambdas, Mat::identity(L.dim));
  if (cuspidal) {
    for (int e : relative_invariants(R2, Mat::identity(L.dim), [&](const Mat&) { return I; })) out.index_exponent += e;
  } else {
    // T/I = Z_p, so I has corank one
    SmithForm SI = smith(R2, I, {false, false, false, false});
    if (SI.rank + 1 != L.dim) throw Error(ErrorKind::PrecisionExceeded, "Eisenstein ideal does not have corank one");
  }
  out.cotangent = relative_invariants(R2, I, [&](const Mat& U) { return ideal_times(R2, L.action, lambdas, U); });
  return out;
}

struct EngineOptions {
  double sturm_factor = 1.0;
  bool stability_check = true;
  u64 seed = 0x5eedULL;
  int precision = 0;  // 0: largest supported
};

// Localized full and cuspidal spaces after a given set of generators, with their invariants.
struct EngineSnapshot {
  i64 cap = 0;
  LocalizedSpace full, cusp;
  FreeImage kernel;  // cuspidal part inside the full localized space
  LatticeInvariants full_inv, cusp_inv;
};

// Cuspidal part: saturated kernel of the boundary map, expected of corank one.
inline void attach_cuspidal(const ModularSymbolSpace& S, EngineSnapshot& snap) {
  const LocalizedSpace& F = snap.full;
  const Zpk& R = F.R;
  snap.cusp = LocalizedSpace{};
  snap.cusp.R = R;
  snap.cusp.gens = F.gens;
  if (F.rank() == 0) {
    snap.cusp.B = Mat(S.rank(), 0);
    snap.cusp.pi = Mat(0, S.rank());
    snap.kernel = FreeImage{Mat(0, 0), Mat(0, 0)};
    snap.cusp.action.assign(F.gens.size(), Mat(0, 0));
    return;
  }
  Mat DB = apply_int(R, S.boundary_matrix(), F.B);
  SmithForm SD = smith(R, DB, {false, false, false, false});
  if (SD.rank != 1)
    throw Error(ErrorKind::PrecisionExceeded, "boundary map on the localized space has rank " + std::to_string(SD.rank));
  snap.kernel = saturated_kernel(R, DB);
  snap.cusp.B = mat_mul(R, F.B, snap.kernel.basis);
  snap.cusp.pi = mat_mul(R, snap.kernel.left_inv, F.pi);
  for (auto& C : F.action) {
    Mat CK = mat_mul(R, C, snap.kernel.basis);
    Mat out = mat_mul(R, snap.kernel.left_inv, CK);
    if (!(mat_mul(R, snap.kernel.basis, out) == CK)) throw Error(ErrorKind::NotStable, "cuspidal part not preserved");
    snap.cusp.action.push_back(std::move(out));
  }
}

// Localization of M_2(Gamma_0(N)) at the Eisenstein ideal of a setting, generated by T_q
// (q up to the cap, q prime to N) and w_l; the star involution is projected to +1.
class EisensteinLocalizer {
 public:
  EisensteinLocalizer(const ModularSymbolSpace& S, const EpsilonSetting& setting, EngineOptions opt = {},
                      OperatorProvider provider = {})
      : S_(S), setting_(setting.sorted()), opt_(opt), provider_(provider ? provider : direct_provider(S)),
        rng_(opt.seed) {
    setting_.validate();
    if (setting_.level() != S.level()) throw Error(ErrorKind::BadInput, "setting does not match the space level");
    R_ = opt.precision > 0 ? Zpk((u64)setting_.p, opt.precision) : Zpk::max_precision((u64)setting_.p);
    run();
  }

  const EpsilonSetting& setting() const { return setting_; }
  const Zpk& ring() const { return R_; }
  i64 cap() const { return primary_.cap; }
  // Whether doubling the cap left every invariant unchanged (true if not checked).
  bool stable() const { return stable_; }
  const EngineSnapshot& result() const { return primary_; }
  const std::optional<EngineSnapshot>& doubled() const { return doubled_; }

  const LocalAlgebra& full_algebra() const { return primary_.full_inv.algebra(); }
  const LocalAlgebra& cusp_algebra() const { return primary_.cusp_inv.algebra(); }

  // Registers the operators named in expressions such as "T181-182" in both algebras.
  void ensure_operators(const std::vector<std::string>& exprs) {
    for (auto& e : exprs)
      for (auto& [c, name] : parse_linear_expr(e).terms) ensure_operator(name);
  }

  void ensure_operator(const std::string& name) {
    if (primary_.full_inv.algebra().has_operator(name)) return;
    OperatorLabel L = parse_operator_label(name);
    if (L.kind == 'T' && std::gcd(L.index, S_.level()) != 1)
      throw Error(ErrorKind::UnknownLabel, name + " is not coprime to the level");
    if (L.kind != 'T' && L.kind != 'w') throw Error(ErrorKind::UnknownLabel, name + " is not in the algebra");
    Mat Cf = primary_.full.restrict(provider_(L));
    primary_.full_inv.register_operator(name, Cf);
    if (primary_.kernel.basis.cols == 0) {
      primary_.cusp_inv.register_operator(name, Mat(0, 0));
      return;
    }
    Mat Cc = mat_mul(R_, primary_.kernel.left_inv, mat_mul(R_, Cf, primary_.kernel.basis));
    primary_.cusp_inv.register_operator(name, Cc);
  }

 private:
  void run() {
    const i64 N = S_.level();
    const i64 cap = sturm_cap(N, opt_.sturm_factor);
    const i64 cap2 = opt_.stability_check ? sturm_cap(N, 2 * opt_.sturm_factor) : cap;
    std::vector<std::pair<IntMatrix, int>> invs;
    for (size_t i = 0; i < setting_.primes.size(); ++i)
      invs.emplace_back(provider_({'w', setting_.primes[i]}), setting_.eps[i]);
    invs.emplace_back(provider_({'s', 0}), 1);
    LocalizedSpace full = project_involutions(R_, S_.rank(), invs, rng_);
    for (size_t i = 0; i < setting_.primes.size(); ++i)
      full.add_operator({{'w', setting_.primes[i]}, setting_.eps[i]}, invs[i].first);
    invs.clear();
    bool have_primary = false;
    for (i64 q : primes_up_to(std::max<i64>(cap2, 2))) {
      if (q > cap2 || N % q == 0) continue;
      if (q > cap && !have_primary) {
        primary_ = snapshot(full, cap);
        have_primary = true;
      }
      full.localize_at({{'T', q}, q + 1}, provider_({'T', q}));
    }
    if (!have_primary) {
      primary_ = snapshot(full, cap);
      return;
    }
    doubled_ = snapshot(full, cap2);
    stable_ = same(primary_, *doubled_);
  }

  EngineSnapshot snapshot(const LocalizedSpace& full, i64 cap) {
    EngineSnapshot snap;
    snap.cap = cap;
    snap.full = full;
    attach_cuspidal(S_, snap);
    snap.full_inv = lattice_invariants(snap.full, false, rng_);
    snap.cusp_inv = lattice_invariants(snap.cusp, true, rng_);
    return snap;
  }

  static bool same(const EngineSnapshot& a, const EngineSnapshot& b) {
    auto eq = [](const LatticeInvariants& x, const LatticeInvariants& y) {
      return x.rank() == y.rank() && x.invariants.dim == y.invariants.dim &&
             x.invariants.embedding_dim == y.invariants.embedding_dim &&
             x.invariants.socle_dim == y.invariants.socle_dim &&
             x.invariants.nilpotency_degree == y.invariants.nilpotency_degree && x.cotangent == y.cotangent &&
             x.index_exponent == y.index_exponent;
    };
    return a.full.rank() == b.full.rank() && eq(a.full_inv, b.full_inv) && eq(a.cusp_inv, b.cusp_inv);
  }

  const ModularSymbolSpace& S_;
  EpsilonSetting setting_;
  EngineOptions opt_;
  OperatorProvider provider_;
  std::mt19937_64 rng_;
  Zpk R_;
  bool stable_ = true;
  EngineSnapshot primary_;
  std::optional<EngineSnapshot> doubled_;
};

}  // namespace eisen
