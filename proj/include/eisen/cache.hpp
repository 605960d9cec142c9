#pragma once

// On-disk cache of integer operator matrices, keyed by (format version, level, label, basis hash).

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <unistd.h>

#include "eisen/localize.hpp"
#include "eisen/modsym.hpp"

namespace eisen {

inline constexpr int kCacheFormatVersion = 1;

namespace detail {

struct Fnv {
  u64 h = 1469598103934665603ull;
  void byte(unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  }
  void word(u64 x) {
    for (int i = 0; i < 8; ++i) byte((unsigned char)(x >> (8 * i)));
  }
  void text(const std::string& s) {
    for (char c : s) byte((unsigned char)c);
  }
};

inline std::string hex64(u64 x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)x);
  return buf;
}

}  // namespace detail

// Identifies the chosen basis of the symbol space: level, P^1 ordering and free generators.
inline u64 basis_hash(const ModularSymbolSpace& S) {
  detail::Fnv f;
  f.word((u64)S.level());
  f.word(S.p1().size());
  for (size_t i = 0; i < S.p1().size(); ++i) {
    auto [c, d] = S.p1().rep(i);
    f.word((u64)c);
    f.word((u64)d);
  }
  for (int g : S.basis_symbols()) f.word((u64)g);
  return f.h;
}

class OperatorCache {
 public:
  explicit OperatorCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  // EISEN_CACHE_DIR, or nullopt when unset or empty.
  static std::optional<std::filesystem::path> dir_from_env() {
    const char* v = std::getenv("EISEN_CACHE_DIR");
    if (!v || !*v) return std::nullopt;
    return std::filesystem::path(v);
  }

  const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path path_for(i64 N, const std::string& label, u64 hash) const {
    return dir_ / ("N" + std::to_string(N) + "_" + label + "_" + detail::hex64(hash) + ".mat");
  }

  // nullopt on a miss or on any corruption; a corrupt file is removed.
  std::optional<IntMatrix> load(i64 N, const std::string& label, u64 hash) const {
    auto path = path_for(N, label, hash);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    auto m = parse(ss.str(), N, label, hash);
    if (!m) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
      ++corrupt_;
    }
    return m;
  }

  void store(i64 N, const std::string& label, u64 hash, const IntMatrix& M) const {
    auto path = path_for(N, label, hash);
    static std::atomic<u64> counter{0};
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << serialize(N, label, hash, M);
      if (!out) throw Error(ErrorKind::Internal, "cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  }

  size_t corrupt_count() const { return corrupt_; }

  static std::string serialize(i64 N, const std::string& label, u64 hash, const IntMatrix& M) {
    std::ostringstream body;
    body << "eisen-operator " << kCacheFormatVersion << "\n"
         << "N " << N << "\n"
         << "label " << label << "\n"
         << "basis " << detail::hex64(hash) << "\n"
         << "dims " << M.rows << " " << M.cols << "\n";
    for (size_t i = 0; i < M.rows; ++i) {
      for (size_t j = 0; j < M.cols; ++j) body << (j ? " " : "") << M(i, j);
      body << "\n";
    }
    std::string b = body.str();
    detail::Fnv f;
    f.text(b);
    return b + "checksum " + detail::hex64(f.h) + "\n";
  }

  static std::optional<IntMatrix> parse(const std::string& text, i64 N, const std::string& label, u64 hash) {
    auto pos = text.rfind("checksum ");
    if (pos == std::string::npos) return std::nullopt;
    std::string body = text.substr(0, pos);
    detail::Fnv f;
    f.text(body);
    if (text.substr(pos) != "checksum " + detail::hex64(f.h) + "\n") return std::nullopt;
    std::istringstream in(body);
    std::string tag, lab, hs;
    int version = 0;
    i64 n = 0;
    size_t r = 0, c = 0;
    if (!(in >> tag >> version) || tag != "eisen-operator" || version != kCacheFormatVersion) return std::nullopt;
    if (!(in >> tag >> n) || tag != "N" || n != N) return std::nullopt;
    if (!(in >> tag >> lab) || tag != "label" || lab != label) return std::nullopt;
    if (!(in >> tag >> hs) || tag != "basis" || hs != detail::hex64(hash)) return std::nullopt;
    if (!(in >> tag >> r >> c) || tag != "dims") return std::nullopt;
    IntMatrix M(r, c);
    for (auto& x : M.a)
      if (!(in >> x)) return std::nullopt;
    return M;
  }

 private:
  std::filesystem::path dir_;
  mutable size_t corrupt_ = 0;
};

// Provider that reads through the cache and fills it on a miss.
inline OperatorProvider cached_provider(const ModularSymbolSpace& S, const OperatorCache& cache) {
  u64 h = basis_hash(S);
  return [&S, &cache, h](const OperatorLabel& L) {
    std::string label = L.str();
    if (auto m = cache.load(S.level(), label, h)) return *m;
    IntMatrix M = S.operator_matrix(L);
    cache.store(S.level(), label, h, M);
    return M;
  };
}

}  // namespace eisen
