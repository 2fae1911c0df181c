#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mstab {

enum class ErrorKind {
  Domain,
  Parse,
  Size,
  SingularShift,
  Convergence,
  Divergence,
  Hypothesis,
  Degenerate,
  TheoryViolation,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Input outside the operation's mathematical domain (negative entries where
// H >= 0 is required, non-square input, a C that is not positive definite).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorKind::Parse, std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SizeError : public Error {
 public:
  explicit SizeError(const std::string& what) : Error(ErrorKind::Size, what) {}
};

// (mu I - A) is singular or too ill-conditioned to trust a solve.
class SingularShiftError : public Error {
 public:
  SingularShiftError(const std::string& what, double condition)
      : Error(ErrorKind::SingularShift, what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& what) : Error(ErrorKind::Convergence, what) {}
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(const std::string& what) : Error(ErrorKind::Divergence, what) {}
};

// A theorem's hypotheses do not hold for this input; the check is skipped,
// not failed.
class HypothesisError : public Error {
 public:
  explicit HypothesisError(const std::string& what) : Error(ErrorKind::Hypothesis, what) {}

 protected:
  HypothesisError(ErrorKind kind, const std::string& what) : Error(kind, what) {}
};

class DegenerateError : public HypothesisError {
 public:
  explicit DegenerateError(const std::string& what) : HypothesisError(ErrorKind::Degenerate, what) {}
};

// A proven implication failed numerically. Always a bug in the eigensolver,
// a tolerance, or the implementation of a criterion.
class TheoryViolation : public Error {
 public:
  explicit TheoryViolation(const std::string& what) : Error(ErrorKind::TheoryViolation, what) {}
};

// CLI exit status for an error: 2 input/domain, 3 hypothesis unmet, 4 theory violation.
inline int exit_code(const Error& e) noexcept {
  switch (e.kind()) {
    case ErrorKind::Hypothesis:
    case ErrorKind::Degenerate:
      return 3;
    case ErrorKind::TheoryViolation:
      return 4;
    default:
      return 2;
  }
}

}  // namespace mstab
