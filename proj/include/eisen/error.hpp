#pragma once

#include <stdexcept>
#include <string>

namespace eisen {

enum class ErrorKind {
  BadInput,
  NotSquarefree,
  TooLarge,
  BadModulus,
  Ramified,
  NotCoprime,
  BadDivisor,
  NotStable,
  LevelTooLarge,
  NonCommuting,
  RankUnstable,
  NotLocal,
  NotMinimalGenerators,
  UnknownLabel,
  HypothesisFailure,
  OracleMissing,
  WrongCardinality,
  PrecisionExceeded,
  CacheCorrupt,
  Internal,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::BadInput: return "BadInput";
    case ErrorKind::NotSquarefree: return "NotSquarefree";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BadModulus: return "BadModulus";
    case ErrorKind::Ramified: return "Ramified";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::BadDivisor: return "BadDivisor";
    case ErrorKind::NotStable: return "NotStable";
    case ErrorKind::LevelTooLarge: return "LevelTooLarge";
    case ErrorKind::NonCommuting: return "NonCommuting";
    case ErrorKind::RankUnstable: return "RankUnstable";
    case ErrorKind::NotLocal: return "NotLocal";
    case ErrorKind::NotMinimalGenerators: return "NotMinimalGenerators";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::HypothesisFailure: return "HypothesisFailure";
    case ErrorKind::OracleMissing: return "OracleMissing";
    case ErrorKind::WrongCardinality: return "WrongCardinality";
    case ErrorKind::PrecisionExceeded: return "PrecisionExceeded";
    case ErrorKind::CacheCorrupt: return "CacheCorrupt";
    case ErrorKind::Internal: return "Internal";
  }
  return "?";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace eisen
