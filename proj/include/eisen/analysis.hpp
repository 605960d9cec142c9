#pragma once

// Full measurement of one (p, N, eps) setting: local algebras, presentation, congruence and
// cotangent invariants, U/w comparison and newform count.

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eisen/cache.hpp"
#include "eisen/localize.hpp"
#include "eisen/predict.hpp"
#include "eisen/uw.hpp"

namespace eisen {

struct AnalysisOptions {
  EngineOptions engine;
  std::vector<std::string> generators;  // presentation generators; chosen greedily when empty
  bool compare_uw = true;
  bool count_newforms = true;
  std::optional<std::filesystem::path> cache_dir;
};

struct AlgebraSummary {
  size_t rank = 0;  // Z_p-rank of the algebra
  LocalInvariants invariants;
  std::vector<size_t> power_dims;  // dims of m, m^2, ...
  std::vector<int> cotangent;      // exponents of (I/I^2) tensor Z_p
  bool gorenstein() const { return invariants.dim > 0 && invariants.socle_dim == 1; }
};

struct AnalysisRecord {
  EpsilonSetting setting;  // ascending primes
  i64 cap = 0;
  bool stable = true;
  AlgebraSummary full, cusp;
  Presentation presentation;  // of the full algebra
  std::vector<std::string> presentation_cusp_vars;
  std::vector<Polynomial> presentation_cusp;
  int congruence_exponent = 0;
  std::optional<bool> u_w_equal;
  std::optional<size_t> new_rank;  // Z_p-rank of the part of the cuspidal space new at N
  double seconds = 0;              // not serialized
};

namespace detail {

// Picks T_q - (q+1), in increasing q, whose images span m/m^2.
inline std::vector<std::string> greedy_generators(const LocalAlgebra& A, const std::vector<std::string>& candidates) {
  std::vector<std::string> out;
  if (A.dim() == 0) return out;
  auto pw = A.maximal_ideal_powers();
  const size_t target = A.invariants().embedding_dim;
  Zpk F(A.p(), 1);
  std::vector<Vec> cols;
  if (pw.size() > 1)
    for (size_t j = 0; j < pw[1].cols; ++j) cols.push_back(fp::column(pw[1], j));
  size_t r = cols.empty() ? 0 : fp::rank(F, fp::from_vectors(A.dim(), cols));
  const size_t base = r;
  for (auto& c : candidates) {
    if (out.size() == target) break;
    Vec v = A.element(c);
    if (A.augment(v) != 0) continue;
    cols.push_back(v);
    size_t nr = fp::rank(F, fp::from_vectors(A.dim(), cols));
    if (nr > r) {
      r = nr;
      out.push_back(c);
    } else {
      cols.pop_back();
    }
  }
  if (r - base != target) throw Error(ErrorKind::NotMinimalGenerators, "candidate operators do not generate the maximal ideal");
  return out;
}

inline AlgebraSummary summarize(const LatticeInvariants& L) {
  AlgebraSummary s;
  s.rank = L.rank();
  s.invariants = L.invariants;
  s.power_dims = L.algebra().dim() ? L.algebra().power_dims() : std::vector<size_t>{};
  s.cotangent = L.cotangent;
  return s;
}

inline EpsilonSetting restrict_setting(const EpsilonSetting& s, i64 M) {
  EpsilonSetting out{s.p, {}, {}};
  for (size_t i = 0; i < s.primes.size(); ++i)
    if (M % s.primes[i] == 0) {
      out.primes.push_back(s.primes[i]);
      out.eps.push_back(s.eps[i]);
    }
  return out;
}

}  // namespace detail

// Keeps modular symbol spaces and a cache handle alive while an analysis runs.
class Analyzer {
 public:
  explicit Analyzer(AnalysisOptions opt = {}) : opt_(std::move(opt)) {
    auto dir = opt_.cache_dir ? opt_.cache_dir : OperatorCache::dir_from_env();
    if (dir) cache_ = std::make_unique<OperatorCache>(*dir);
  }

  const ModularSymbolSpace& space(i64 N) {
    auto it = spaces_.find(N);
    if (it == spaces_.end()) it = spaces_.emplace(N, build_space(N)).first;
    return it->second;
  }

  OperatorProvider provider(const ModularSymbolSpace& S) const {
    return cache_ ? cached_provider(S, *cache_) : direct_provider(S);
  }

  const OperatorCache* cache() const { return cache_.get(); }

  // Localizer for a setting; kept so callers can register more operators.
  EisensteinLocalizer& localizer(const EpsilonSetting& setting) {
    EpsilonSetting s = setting.sorted();
    auto key = std::make_pair(s.p, std::make_pair(s.primes, s.eps));
    auto it = localizers_.find(key);
    if (it == localizers_.end()) {
      const auto& S = space(s.level());
      it = localizers_.emplace(key, std::make_unique<EisensteinLocalizer>(S, s, opt_.engine, provider(S))).first;
    }
    return *it->second;
  }

  AnalysisRecord analyze(const EpsilonSetting& input) {
    auto t0 = std::chrono::steady_clock::now();
    EpsilonSetting s = input.sorted();
    s.validate();
    EisensteinLocalizer& E = localizer(s);
    AnalysisRecord rec;
    rec.setting = s;
    rec.cap = E.cap();
    rec.stable = E.stable();
    const auto& res = E.result();
    rec.full = detail::summarize(res.full_inv);
    rec.cusp = detail::summarize(res.cusp_inv);
    rec.congruence_exponent = res.cusp_inv.index_exponent;

    std::vector<std::string> gens = opt_.generators;
    if (gens.empty()) {
      std::vector<std::string> cands;
      for (i64 q : primes_up_to(std::max<i64>(E.cap(), 2)))
        if (s.level() % q != 0) cands.push_back("T" + std::to_string(q) + "-" + std::to_string(q + 1));
      gens = detail::greedy_generators(E.full_algebra(), cands);
    } else {
      E.ensure_operators(gens);
    }
    if (E.full_algebra().dim() > 0) rec.presentation = E.full_algebra().presentation(gens);
    else rec.presentation.vars = gens;
    if (E.cusp_algebra().dim() > 0) {
      std::vector<std::string> cands;
      for (i64 q : primes_up_to(std::max<i64>(E.cap(), 2)))
        if (s.level() % q != 0) cands.push_back("T" + std::to_string(q) + "-" + std::to_string(q + 1));
      // prefer the full-algebra generators, which always generate the cuspidal quotient's ideal
      std::vector<std::string> pref = gens;
      pref.insert(pref.end(), cands.begin(), cands.end());
      rec.presentation_cusp_vars = detail::greedy_generators(E.cusp_algebra(), pref);
      rec.presentation_cusp = E.cusp_algebra().presentation(rec.presentation_cusp_vars).relations;
    }

    if (opt_.compare_uw) {
      const auto& S = space(s.level());
      rec.u_w_equal = compare_u_w(S, s, {}, opt_.engine, provider(S)).equal;
    }
    if (opt_.count_newforms) rec.new_rank = new_rank(s);
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
  }

  // Rank of the cuspidal part new at the level: the cuspidal rank minus, for each proper divisor
  // M carrying a sign -1, the new rank at M (each such form has exactly one stabilization with
  // the prescribed w-eigenvalues).
  size_t new_rank(const EpsilonSetting& input) {
    EpsilonSetting s = input.sorted();
    const i64 N = s.level();
    auto it = new_ranks_.find({s.p, {s.primes, s.eps}});
    if (it != new_ranks_.end()) return it->second;
    long total = (long)localizer(s).result().cusp_inv.rank();
    const size_t k = s.primes.size();
    for (u64 mask = 1; mask + 1 < (1ull << k); ++mask) {
      i64 M = 1;
      bool minus = false;
      for (size_t i = 0; i < k; ++i)
        if (mask >> i & 1) {
          M *= s.primes[i];
          minus |= s.eps[i] == -1;
        }
      if (!minus) continue;
      total -= (long)new_rank(detail::restrict_setting(s, M));
    }
    if (total < 0) throw Error(ErrorKind::Internal, "negative new rank at level " + std::to_string(N));
    new_ranks_[{s.p, {s.primes, s.eps}}] = (size_t)total;
    return (size_t)total;
  }

 private:
  using Key = std::pair<i64, std::pair<std::vector<i64>, std::vector<int>>>;
  AnalysisOptions opt_;
  std::unique_ptr<OperatorCache> cache_;
  std::map<i64, ModularSymbolSpace> spaces_;
  std::map<Key, std::unique_ptr<EisensteinLocalizer>> localizers_;
  std::map<Key, size_t> new_ranks_;
};

inline AnalysisRecord analyze(const EpsilonSetting& s, AnalysisOptions opt = {}) { return Analyzer(std::move(opt)).analyze(s); }

}  // namespace eisen
