#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nfsplit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands that do not fit together (symbol tables, dimensions, indices).
class StructuralError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

/// The input field contains terms that are not resonant with its spectrum.
class NotInNormalForm : public Error {
 public:
  explicit NotInNormalForm(std::vector<std::string> terms);
  const std::vector<std::string>& offending_terms() const noexcept { return terms_; }

 private:
  std::vector<std::string> terms_;
};

/// A resonance could not be split into a base plus invariance relations.
class NoDecomposition : public Error {
 public:
  using Error::Error;
};

class NotInvariant : public Error {
 public:
  using Error::Error;
};

/// A chain-rule term could not be written in the required split form.
class RewriteFailure : public Error {
 public:
  RewriteFailure(std::string monomial, const std::string& what)
      : Error(what + " (monomial " + monomial + ")"), monomial_(std::move(monomial)) {}
  const std::string& monomial() const noexcept { return monomial_; }

 private:
  std::string monomial_;
};

/// Numerical integration produced a non-finite state.
class NonFinite : public Error {
 public:
  explicit NonFinite(double time)
      : Error("non-finite state at t = " + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace nfsplit
