#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "eisen/error.hpp"

namespace eisen {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

// Nonnegative residue of a signed value.
inline u64 mod_floor(i64 a, u64 m) {
  i64 r = a % (i64)m;
  return (u64)(r < 0 ? r + (i64)m : r);
}

// Returns g = gcd(a, b) and x, y with a x + b y = g.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    i64 q = a / b;
    i64 t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1; x0 = x1; x1 = t;
    t = y0 - q * y1; y0 = y1; y1 = t;
  }
  if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
  x = x0;
  y = y0;
  return a;
}

inline u64 inv_mod(u64 a, u64 m) {
  i64 x, y;
  i64 g = ext_gcd((i64)(a % m), (i64)m, x, y);
  if (g != 1) throw Error(ErrorKind::BadInput, "element not invertible modulo " + std::to_string(m));
  return mod_floor(x, m);
}

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

inline std::vector<i64> primes_up_to(i64 bound) {
  std::vector<i64> out;
  if (bound < 2) return out;
  std::vector<bool> sieve((size_t)bound + 1, true);
  for (i64 i = 2; i <= bound; ++i) {
    if (!sieve[(size_t)i]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= bound; j += i) sieve[(size_t)j] = false;
  }
  return out;
}

// p-adic valuation of a nonzero integer.
inline int vp(i64 n, i64 p) {
  if (n == 0) throw Error(ErrorKind::BadInput, "valuation of zero");
  int v = 0;
  while (n % p == 0) { n /= p; ++v; }
  return v;
}

inline i64 ipow(i64 b, int e) {
  i64 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

namespace detail {

inline u64 pollard_rho(u64 n, u64& budget) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1; budget > 0; ++c) {
    u64 x = 2, y = 2, d = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    while (d == 1 && budget > 0) {
      x = f(x);
      y = f(f(y));
      d = std::gcd(x > y ? x - y : y - x, n);
      --budget;
    }
    if (d != 1 && d != n) return d;
  }
  return 0;
}

inline void factor_rec(u64 n, std::vector<u64>& out, u64& budget) {
  if (n == 1) return;
  if (is_prime(n)) { out.push_back(n); return; }
  u64 d = pollard_rho(n, budget);
  if (d == 0) throw Error(ErrorKind::TooLarge, "factorisation budget exhausted for " + std::to_string(n));
  factor_rec(d, out, budget);
  factor_rec(n / d, out, budget);
}

}  // namespace detail

// Prime factorisation with multiplicity, ascending.
inline std::vector<u64> factor(u64 n, u64 budget = 10'000'000) {
  if (n == 0) throw Error(ErrorKind::BadInput, "cannot factor zero");
  if (n > (1ull << 62)) throw Error(ErrorKind::TooLarge, "integer exceeds 2^62");
  std::vector<u64> out;
  for (u64 q = 2; q < 1000 && q * q <= n; ++q) {
    while (n % q == 0) { out.push_back(q); n /= q; }
  }
  detail::factor_rec(n, out, budget);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<i64> factor_squarefree(i64 n, u64 budget = 10'000'000) {
  if (n < 1) throw Error(ErrorKind::BadInput, "level must be positive");
  auto f = factor((u64)n, budget);
  std::vector<i64> out;
  for (size_t i = 0; i < f.size(); ++i) {
    if (i > 0 && f[i] == f[i - 1])
      throw Error(ErrorKind::NotSquarefree, std::to_string(n) + " is divisible by " + std::to_string(f[i]) + "^2");
    out.push_back((i64)f[i]);
  }
  return out;
}

// Legendre symbol (a / q) for an odd prime q.
inline int legendre(i64 a, i64 q) {
  u64 r = powmod(mod_floor(a, q), (u64)(q - 1) / 2, (u64)q);
  if (r == 0) return 0;
  return r == 1 ? 1 : -1;
}

struct EpsilonSetting {
  i64 p = 0;
  std::vector<i64> primes;  // ell_0, ..., ell_r
  std::vector<int> eps;     // aligned with primes

  i64 level() const {
    i64 n = 1;
    for (i64 l : primes) n *= l;
    return n;
  }
  int r() const { return (int)primes.size() - 1; }
  int sign_of(i64 ell) const {
    for (size_t i = 0; i < primes.size(); ++i)
      if (primes[i] == ell) return eps[i];
    throw Error(ErrorKind::BadInput, std::to_string(ell) + " does not divide the level");
  }

  void validate() const {
    if (p <= 3 || !is_prime((u64)p)) throw Error(ErrorKind::BadInput, "p must be a prime greater than 3");
    if (primes.empty()) throw Error(ErrorKind::BadInput, "no primes given");
    if (primes.size() != eps.size()) throw Error(ErrorKind::BadInput, "sign vector length mismatch");
    bool any_minus = false;
    for (size_t i = 0; i < primes.size(); ++i) {
      if (!is_prime((u64)primes[i])) throw Error(ErrorKind::BadInput, std::to_string(primes[i]) + " is not prime");
      for (size_t j = 0; j < i; ++j)
        if (primes[j] == primes[i]) throw Error(ErrorKind::BadInput, "repeated prime " + std::to_string(primes[i]));
      if (eps[i] != 1 && eps[i] != -1) throw Error(ErrorKind::BadInput, "signs must be +1 or -1");
      any_minus = any_minus || eps[i] == -1;
    }
    if (!any_minus) throw Error(ErrorKind::BadInput, "signs must not all be +1");
  }

  // Same setting with primes in ascending order, signs carried along.
  EpsilonSetting sorted() const {
    std::vector<size_t> idx(primes.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return primes[a] < primes[b]; });
    EpsilonSetting s{p, {}, {}};
    for (size_t i : idx) {
      s.primes.push_back(primes[i]);
      s.eps.push_back(eps[i]);
    }
    return s;
  }
};

struct PowerResidue {
  bool value;
  bool degenerate;  // ell != 1 mod p, so every unit is a p-th power
};

// Whether a is a p-th power modulo the prime ell.
inline PowerResidue is_pth_power_mod(i64 a, i64 ell, i64 p) {
  if (ell < 2 || !is_prime((u64)ell)) throw Error(ErrorKind::BadInput, "modulus must be prime");
  if (mod_floor(a, ell) == 0) throw Error(ErrorKind::BadInput, std::to_string(ell) + " divides " + std::to_string(a));
  if ((ell - 1) % p != 0) return {true, true};
  return {powmod(mod_floor(a, ell), (u64)((ell - 1) / p), (u64)ell) == 1, false};
}

inline bool is_primitive_root(i64 g, i64 ell) {
  u64 x = mod_floor(g, ell);
  if (x == 0) return false;
  for (u64 q : factor((u64)ell - 1 > 1 ? (u64)ell - 1 : 1))
    if (powmod(x, (u64)(ell - 1) / q, (u64)ell) == 1) return false;
  return true;
}

inline i64 smallest_primitive_root(i64 ell) {
  if (ell == 2) return 1;
  auto fs = factor((u64)(ell - 1));
  fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  for (i64 g = 2; g < ell; ++g) {
    bool ok = true;
    for (u64 q : fs)
      if (powmod((u64)g, (u64)(ell - 1) / q, (u64)ell) == 1) { ok = false; break; }
    if (ok) return g;
  }
  throw Error(ErrorKind::Internal, "no primitive root");
}

// Surjection (Z/ell)^* -> Z/p, discrete log to the smallest primitive root, reduced mod p.
class LogCharacter {
 public:
  LogCharacter(i64 ell, i64 p) : ell_(ell), p_(p) {
    if (!is_prime((u64)ell) || !is_prime((u64)p) || (ell - 1) % p != 0)
      throw Error(ErrorKind::BadModulus, "need primes with ell = 1 mod p");
    g_ = smallest_primitive_root(ell);
    h_ = powmod((u64)g_, (u64)((ell - 1) / p), (u64)ell);
  }

  // Same character normalised by another primitive root g: log_g(a) mod p.
  LogCharacter(i64 ell, i64 p, i64 g) : LogCharacter(ell, p) {
    if (!is_primitive_root(g, ell)) throw Error(ErrorKind::BadInput, std::to_string(g) + " is not a primitive root mod " + std::to_string(ell));
    g_ = mod_floor(g, ell);
    h_ = powmod((u64)g_, (u64)((ell - 1) / p), (u64)ell);
  }

  i64 ell() const { return ell_; }
  i64 p() const { return p_; }
  i64 generator() const { return g_; }

  i64 evaluate(i64 a) const {
    u64 x = mod_floor(a, ell_);
    if (x == 0) throw Error(ErrorKind::BadInput, "argument divisible by " + std::to_string(ell_));
    u64 target = powmod(x, (u64)((ell_ - 1) / p_), (u64)ell_);
    u64 cur = 1;
    for (i64 k = 0; k < p_; ++k) {
      if (cur == target) return k;
      cur = mulmod(cur, h_, (u64)ell_);
    }
    throw Error(ErrorKind::Internal, "discrete log not found");
  }

 private:
  i64 ell_, p_, g_;
  u64 h_;
};

}  // namespace eisen
