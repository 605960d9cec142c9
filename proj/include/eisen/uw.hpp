#pragma once

// Comparison of the cuspidal Eisenstein algebras built with U_l in place of w_l.

#include <string>
#include <vector>

#include "eisen/localize.hpp"

namespace eisen {

struct UWComparison {
  bool equal = false;
  size_t rank_w = 0, rank_u = 0;
  size_t rank_u_tq_only = 0;  // rank of Z_p[T_q] v on the U side
  size_t rank_diagonal = 0;   // rank of Z_p[T_q] acting diagonally on both sides
  std::vector<i64> u_primes;
  std::string witness;  // first failed check, empty when equal
};

namespace detail {

// Cuspidal part of a localized space whose Eisenstein part may have any rank.
inline LocalizedSpace cuspidal_part(const ModularSymbolSpace& S, const LocalizedSpace& F) {
  const Zpk& R = F.R;
  LocalizedSpace C;
  C.R = R;
  C.gens = F.gens;
  if (F.rank() == 0) {
    C.B = Mat(S.rank(), 0);
    C.pi = Mat(0, S.rank());
    C.action.assign(F.gens.size(), Mat(0, 0));
    return C;
  }
  FreeImage K = saturated_kernel(R, apply_int(R, S.boundary_matrix(), F.B));
  C.B = mat_mul(R, F.B, K.basis);
  C.pi = mat_mul(R, K.left_inv, F.pi);
  for (auto& A : F.action) {
    Mat AK = mat_mul(R, A, K.basis);
    Mat out = mat_mul(R, K.left_inv, AK);
    if (!(mat_mul(R, K.basis, out) == AK)) throw Error(ErrorKind::NotStable, "cuspidal part not preserved");
    C.action.push_back(std::move(out));
  }
  return C;
}

// Rank of Z_p[gens] v for a random v.
inline SubmoduleTracker krylov(const Zpk& R, const std::vector<Mat>& gens, size_t s, std::mt19937_64& rng) {
  SubmoduleTracker T(R, s);
  if (s == 0) return T;
  Vec v(s);
  for (auto& x : v) x = random_unit_mod(rng, R.m);
  T.insert(v);
  std::vector<Vec> queue{v};
  for (size_t head = 0; head < queue.size(); ++head)
    for (auto& g : gens) {
      Vec y = mat_vec(R, g, queue[head]);
      if (T.insert(y)) queue.push_back(std::move(y));
    }
  return T;
}

inline Mat block_diag(const Mat& A, const Mat& B) {
  Mat D(A.rows + B.rows, A.cols + B.cols);
  for (size_t i = 0; i < A.rows; ++i)
    for (size_t j = 0; j < A.cols; ++j) D(i, j) = A(i, j);
  for (size_t i = 0; i < B.rows; ++i)
    for (size_t j = 0; j < B.cols; ++j) D(A.rows + i, A.cols + j) = B(i, j);
  return D;
}

}  // namespace detail

// u_primes lists the primes whose w_l is replaced by U_l; empty means every prime of N.
// Generation by T_q alone is tested with a random vector, so a false "unequal" can only
// come from an unlucky draw; three draws are tried before reporting it.
inline UWComparison compare_u_w(const ModularSymbolSpace& S, const EpsilonSetting& input, std::vector<i64> u_primes = {},
                                EngineOptions opt = {}, OperatorProvider provider = {}) {
  EpsilonSetting setting = input.sorted();
  setting.validate();
  if (setting.level() != S.level()) throw Error(ErrorKind::BadInput, "setting does not match the space level");
  if (!provider) provider = direct_provider(S);
  if (u_primes.empty()) u_primes = setting.primes;
  for (i64 l : u_primes)
    if (S.level() % l != 0) throw Error(ErrorKind::BadDivisor, std::to_string(l) + " does not divide the level");
  std::sort(u_primes.begin(), u_primes.end());
  const Zpk R = opt.precision > 0 ? Zpk((u64)setting.p, opt.precision) : Zpk::max_precision((u64)setting.p);
  std::mt19937_64 rng(opt.seed);
  auto is_u = [&](i64 l) { return std::binary_search(u_primes.begin(), u_primes.end(), l); };

  std::vector<std::pair<IntMatrix, int>> winv, uinv;
  for (size_t i = 0; i < setting.primes.size(); ++i) {
    IntMatrix W = provider({'w', setting.primes[i]});
    winv.emplace_back(W, setting.eps[i]);
    if (!is_u(setting.primes[i])) uinv.emplace_back(W, setting.eps[i]);
  }
  IntMatrix star = provider({'s', 0});
  winv.emplace_back(star, 1);
  uinv.emplace_back(star, 1);
  LocalizedSpace W = project_involutions(R, S.rank(), winv, rng);
  LocalizedSpace U = project_involutions(R, S.rank(), uinv, rng);
  winv.clear();
  uinv.clear();
  for (size_t i = 0; i < setting.primes.size(); ++i) {
    i64 l = setting.primes[i];
    if (!is_u(l)) continue;
    OperatorLabel L{'U', l};
    U.localize_at({L, eisenstein_eigenvalue(L, setting)}, provider(L));
  }
  const size_t n_u = U.gens.size();
  const i64 cap = sturm_cap(S.level(), 2 * opt.sturm_factor);
  std::vector<size_t> tq_w, tq_u;
  for (i64 q : primes_up_to(std::max<i64>(cap, 2))) {
    if (S.level() % q == 0) continue;
    IntMatrix Tq = provider({'T', q});
    W.localize_at({{'T', q}, q + 1}, Tq);
    U.localize_at({{'T', q}, q + 1}, Tq);
  }
  LocalizedSpace Wc = detail::cuspidal_part(S, W), Uc = detail::cuspidal_part(S, U);

  UWComparison out;
  out.u_primes = u_primes;
  out.rank_w = Wc.rank();
  out.rank_u = Uc.rank();
  std::vector<Mat> u_tq(Uc.action.begin() + (long)n_u, Uc.action.end());
  std::vector<Mat> w_tq(Wc.action.begin(), Wc.action.end());
  if (out.rank_w == 0 && out.rank_u == 0) {
    out.equal = true;
    return out;
  }
  if (out.rank_w != out.rank_u) {
    out.witness = "cuspidal ranks differ: " + std::to_string(out.rank_w) + " (w) vs " + std::to_string(out.rank_u) + " (U)";
    return out;
  }
  std::vector<Mat> diag;
  for (size_t g = 0; g < u_tq.size(); ++g) diag.push_back(detail::block_diag(w_tq[g], u_tq[g]));

  for (int attempt = 0; attempt < 3; ++attempt) {
    SubmoduleTracker Tu = detail::krylov(R, u_tq, out.rank_u, rng);
    out.rank_u_tq_only = Tu.rank();
    bool u_in = Tu.rank() == out.rank_u;
    if (u_in) {
      Mat B = Tu.basis();
      for (size_t g = 0; g < n_u && u_in; ++g)
        for (size_t j = 0; j < B.cols && u_in; ++j) u_in = Tu.contains(mat_vec(R, Uc.action[g], fp::column(B, j)));
    }
    SubmoduleTracker Td = detail::krylov(R, diag, out.rank_w + out.rank_u, rng);
    out.rank_diagonal = Td.rank();
    if (u_in && out.rank_diagonal == out.rank_w) {
      out.equal = true;
      out.witness.clear();
      return out;
    }
    if (!u_in)
      out.witness = "U operators are not in the algebra generated by the T_q";
    else
      out.witness = "T_q act with different relations: diagonal rank " + std::to_string(out.rank_diagonal);
  }
  return out;
}

}  // namespace eisen
