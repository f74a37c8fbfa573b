#pragma once

#include <stdexcept>
#include <string>

namespace matgroupoid {

enum class ErrorKind {
  NotComposable,
  UnknownArrow,
  UnknownObject,
  MissingProduct,
  NoArrow,
  NotInGroup,
  NotInSlice,
  AxiomViolation,
  Singular,
  GridTooSmall,
  InvalidF,
  InvalidP,
  UnknownNode,
  BadDescriptor,
  NotIsomorphic,
  SolverDiverged,
  NotUniform,
  SingularGauge,
  ParseError,
  ValidationError,
  IoError,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotComposable: return "NotComposable";
    case ErrorKind::UnknownArrow: return "UnknownArrow";
    case ErrorKind::UnknownObject: return "UnknownObject";
    case ErrorKind::MissingProduct: return "MissingProduct";
    case ErrorKind::NoArrow: return "NoArrow";
    case ErrorKind::NotInGroup: return "NotInGroup";
    case ErrorKind::NotInSlice: return "NotInSlice";
    case ErrorKind::AxiomViolation: return "AxiomViolation";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::InvalidF: return "InvalidF";
    case ErrorKind::InvalidP: return "InvalidP";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::BadDescriptor: return "BadDescriptor";
    case ErrorKind::NotIsomorphic: return "NotIsomorphic";
    case ErrorKind::SolverDiverged: return "SolverDiverged";
    case ErrorKind::NotUniform: return "NotUniform";
    case ErrorKind::SingularGauge: return "SingularGauge";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Base exception for every failure raised by the library. The kind is the
/// stable, machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a material isomorphism search ends above the acceptance
/// threshold. Carries the best residual found so callers can classify it.
class NotIsomorphicError : public Error {
 public:
  NotIsomorphicError(double best_residual, const std::string& what)
      : Error(ErrorKind::NotIsomorphic, what), best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace matgroupoid
