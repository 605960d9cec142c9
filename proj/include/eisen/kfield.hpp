#pragma once

#include <gmpxx.h>

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eisen/arith.hpp"

namespace eisen {

// Monic integer polynomial cutting out the field K_ell attached to (p, ell).
struct KFieldPolynomial {
  i64 p = 0;
  i64 ell = 0;
  std::vector<i64> coeffs;  // ascending, leading coefficient 1

  int degree() const { return (int)coeffs.size() - 1; }
};

namespace polymod {

using Poly = std::vector<u64>;  // ascending coefficients over F_q

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline Poly reduce(const std::vector<i64>& f, u64 q) {
  Poly r(f.size());
  for (size_t i = 0; i < f.size(); ++i) r[i] = mod_floor(f[i], q);
  trim(r);
  return r;
}

// a mod b, b nonzero.
inline Poly rem(Poly a, const Poly& b, u64 q) {
  trim(a);
  if (b.empty()) throw Error(ErrorKind::Internal, "division by zero polynomial");
  u64 lead_inv = inv_mod(b.back(), q);
  while (a.size() >= b.size()) {
    u64 c = mulmod(a.back(), lead_inv, q);
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i)
      a[shift + i] = (a[shift + i] + q - mulmod(c, b[i], q)) % q;
    trim(a);
  }
  return a;
}

inline Poly mul_mod(const Poly& a, const Poly& b, const Poly& f, u64 q) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j], q)) % q;
  return rem(c, f, q);
}

inline Poly gcd(Poly a, Poly b, u64 q) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b, q);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Poly derivative(const Poly& f, u64 q) {
  Poly d;
  for (size_t i = 1; i < f.size(); ++i) d.push_back(mulmod(f[i], i % q, q));
  trim(d);
  return d;
}

}  // namespace polymod

namespace detail {

// Number of roots in Z_q of g, counted by descending through residues mod q.
inline int count_qadic_roots(std::vector<mpz_class> g, const mpz_class& q, int depth) {
  if (depth > 64) throw Error(ErrorKind::Internal, "q-adic root search did not terminate");
  mpz_class content = 0;
  for (auto& c : g) content = gcd(content, c);
  if (content == 0) throw Error(ErrorKind::Internal, "zero polynomial in root search");
  while (content % q == 0) {
    for (auto& c : g) c /= q;
    content /= q;
  }
  const long qi = q.get_si();
  int total = 0;
  for (long r = 0; r < qi; ++r) {
    mpz_class val = 0, der = 0;
    for (size_t i = g.size(); i-- > 0;) {
      der = der * r + val;
      val = val * r + g[i];
    }
    if (val % q != 0) continue;
    if (der % q != 0) {
      ++total;  // simple root lifts uniquely
      continue;
    }
    // g(r + q x) via Taylor shift then scaling
    std::vector<mpz_class> h = g;
    for (size_t i = 0; i + 1 < h.size(); ++i)
      for (size_t j = h.size() - 1; j > i; --j) h[j - 1] += h[j] * r;
    mpz_class scale = 1;
    for (auto& c : h) {
      c *= scale;
      scale *= q;
    }
    total += count_qadic_roots(std::move(h), q, depth + 1);
  }
  return total;
}

}  // namespace detail

// Whether the prime q splits completely in the field cut out by the polynomial.
// Fast path: deg gcd(x^q - x, f) = deg f when f mod q is squarefree. Otherwise q divides
// the index of Z[x]/f and f splits into distinct linear factors over Q_q exactly when q
// splits completely, so roots in Z_q are counted. The field is only ramified at p and ell.
inline bool splits_completely(const KFieldPolynomial& kf, i64 q) {
  using namespace polymod;
  if (q < 2 || !is_prime((u64)q)) throw Error(ErrorKind::BadInput, "q must be prime");
  if (kf.coeffs.empty() || kf.coeffs.back() != 1) throw Error(ErrorKind::BadInput, "polynomial must be monic");
  if (q == kf.p || q == kf.ell) throw Error(ErrorKind::Ramified, std::to_string(q) + " ramifies in the field");
  u64 uq = (u64)q;
  Poly f = reduce(kf.coeffs, uq);
  if (gcd(f, derivative(f, uq), uq).size() > 1) {
    if (q > 2'000'000) throw Error(ErrorKind::TooLarge, "q-adic root count needs q below 2e6");
    std::vector<mpz_class> g;
    for (i64 c : kf.coeffs) g.emplace_back((long)c);
    return detail::count_qadic_roots(std::move(g), mpz_class((long)q), 0) == kf.degree();
  }
  // x^q mod f by square and multiply
  Poly result{1}, base{0, 1};
  base = rem(base, f, uq);
  for (u64 e = uq; e; e >>= 1) {
    if (e & 1) result = mul_mod(result, base, f, uq);
    base = mul_mod(base, base, f, uq);
  }
  Poly h = result;
  if (h.size() < 2) h.resize(2, 0);
  h[1] = (h[1] + uq - 1) % uq;
  trim(h);
  if (h.empty()) return true;  // x^q = x modulo f
  return (int)gcd(f, h, uq).size() - 1 == kf.degree();
}

inline KFieldPolynomial parse_kfield_line(const std::string& line) {
  auto colon = line.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::BadInput, "missing ':' in field record");
  KFieldPolynomial kf;
  std::istringstream head(line.substr(0, colon));
  if (!(head >> kf.p >> kf.ell)) throw Error(ErrorKind::BadInput, "bad field record header");
  std::string tail = line.substr(colon + 1);
  std::istringstream body(tail);
  std::string tok;
  while (std::getline(body, tok, ',')) {
    try {
      size_t pos = 0;
      i64 c = std::stoll(tok, &pos);
      for (size_t i = pos; i < tok.size(); ++i)
        if (!std::isspace((unsigned char)tok[i])) throw Error(ErrorKind::BadInput, "bad coefficient " + tok);
      kf.coeffs.push_back(c);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::BadInput, "bad coefficient '" + tok + "'");
    }
  }
  if (kf.coeffs.size() < 2 || kf.coeffs.back() != 1) throw Error(ErrorKind::BadInput, "polynomial must be monic");
  return kf;
}

// Lookup of field polynomials keyed by (p, ell).
class KFieldOracle {
 public:
  void add(KFieldPolynomial kf) {
    auto key = std::make_pair(kf.p, kf.ell);
    fields_[key] = std::move(kf);
  }

  const KFieldPolynomial* find(i64 p, i64 ell) const {
    auto it = fields_.find({p, ell});
    return it == fields_.end() ? nullptr : &it->second;
  }

  // nullopt when no polynomial is known for (p, ell).
  std::optional<bool> splits(i64 p, i64 ell, i64 q) const {
    const auto* kf = find(p, ell);
    if (!kf) return std::nullopt;
    return splits_completely(*kf, q);
  }

  size_t size() const { return fields_.size(); }

  static KFieldOracle load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::BadInput, "cannot open field file " + path);
    KFieldOracle o;
    std::string line;
    while (std::getline(in, line)) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      o.add(parse_kfield_line(line));
    }
    return o;
  }

  static KFieldOracle bundled() {
#ifdef EISEN_DATA_DIR
    return load(std::string(EISEN_DATA_DIR) + "/kfields.txt");
#else
    return {};
#endif
  }

 private:
  std::map<std::pair<i64, i64>, KFieldPolynomial> fields_;
};

}  // namespace eisen
