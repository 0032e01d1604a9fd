#pragma once

#include <gmpxx.h>

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nfsplit {

/// Arbitrary-precision rational, always kept in lowest terms.
using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" (no spaces). Throws ParseError on malformed
/// input or a zero denominator.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
/// Nearest double to q.
double to_double(const Rational& q);

/// Named numeric constants usable inside exact coefficients.
///
/// Entry 0 is always the imaginary unit "i"; the arithmetic reduces i^2 to -1.
/// Every other entry is treated as a transcendental independent over Q.
class SymbolTable {
 public:
  SymbolTable();

  /// Returns the index of the new symbol; throws StructuralError on a
  /// duplicate or empty name.
  std::size_t declare(std::string name, std::complex<double> value);

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(std::size_t index) const { return names_.at(index); }
  std::complex<double> value(std::size_t index) const { return values_.at(index); }

  friend bool operator==(const SymbolTable&, const SymbolTable&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::complex<double>> values_;
};

using SymbolTablePtr = std::shared_ptr<const SymbolTable>;

/// Product of symbol powers, e.g. pi^2*i. The imaginary-unit exponent is 0 or 1.
class SymbolMonomial {
 public:
  using Power = std::pair<std::uint32_t, std::uint32_t>;  // (symbol index, exponent)

  SymbolMonomial() = default;
  static SymbolMonomial symbol(std::size_t index, std::uint32_t exponent = 1);

  const std::vector<Power>& powers() const noexcept { return powers_; }
  std::uint32_t exponent(std::size_t index) const;
  bool is_one() const noexcept { return powers_.empty(); }
  /// Total degree in the transcendental symbols (the imaginary unit excluded).
  std::uint32_t transcendental_degree() const;
  bool has_imaginary_unit() const { return exponent(0) == 1; }

  std::string to_string(const SymbolTable* table) const;

  friend bool operator==(const SymbolMonomial&, const SymbolMonomial&) = default;

 private:
  friend std::pair<SymbolMonomial, int> multiply(const SymbolMonomial&, const SymbolMonomial&);
  std::vector<Power> powers_;  // sorted by index, no zero exponents
};

/// Product of two monomials together with the sign produced by i^2 = -1.
std::pair<SymbolMonomial, int> multiply(const SymbolMonomial& a, const SymbolMonomial& b);

/// Canonical basis order: graded on the transcendental part (a larger
/// exponent on an earlier symbol sorts first within a degree), then the
/// imaginary unit. This yields 1, i, pi, pi*i, ...
struct CanonicalOrder {
  bool operator()(const SymbolMonomial& a, const SymbolMonomial& b) const;
};

/// Exact scalar: a Q-linear combination of symbol monomials.
///
/// A value that carries no table (pure rationals and the imaginary unit)
/// combines with any table. Two distinct tables never mix.
class CoeffValue {
 public:
  using TermMap = std::map<SymbolMonomial, Rational, CanonicalOrder>;

  CoeffValue() = default;
  CoeffValue(int value) : CoeffValue(Rational(value)) {}  // NOLINT(google-explicit-constructor)
  CoeffValue(const Rational& value);                      // NOLINT(google-explicit-constructor)

  static CoeffValue imaginary_unit(SymbolTablePtr table = nullptr);
  /// Throws StructuralError when the symbol is not declared.
  static CoeffValue symbol(const SymbolTablePtr& table, std::string_view name);
  static CoeffValue monomial(SymbolTablePtr table, const SymbolMonomial& mono, const Rational& coeff);

  const SymbolTablePtr& table() const noexcept { return table_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::optional<Rational> as_rational() const;
  /// Single term with coefficient +-1 or a bare rational.
  bool is_single_term() const noexcept { return terms_.size() == 1; }

  CoeffValue operator-() const;
  CoeffValue& operator+=(const CoeffValue& rhs);
  CoeffValue& operator-=(const CoeffValue& rhs);
  CoeffValue& operator*=(const CoeffValue& rhs);
  friend CoeffValue operator+(CoeffValue a, const CoeffValue& b) { return a += b; }
  friend CoeffValue operator-(CoeffValue a, const CoeffValue& b) { return a -= b; }
  friend CoeffValue operator*(const CoeffValue& a, const CoeffValue& b);

  /// Equality of values; table identity is not compared for table-free values.
  friend bool operator==(const CoeffValue& a, const CoeffValue& b);

  /// Canonical text, e.g. "2 - 3*i", "1/2 + pi*i", "0".
  std::string to_string() const;

 private:
  void adopt_table(const SymbolTablePtr& other);

  SymbolTablePtr table_;
  TermMap terms_;
};

/// Floating evaluation using the declared symbol values.
std::complex<double> eval_numeric(const CoeffValue& value, const SymbolTable& table);
/// Same, using the value's own table (the imaginary unit alone if it has none).
std::complex<double> eval_numeric(const CoeffValue& value);

/// Coordinates over the monomials actually present, in canonical order.
std::vector<std::pair<SymbolMonomial, Rational>> rational_coordinates(const CoeffValue& value);
/// Coordinates over an explicit basis. Throws StructuralError when the value
/// has a component outside the basis.
std::vector<Rational> rational_coordinates(const CoeffValue& value,
                                           std::span<const SymbolMonomial> basis);

/// Shared table of two values, or StructuralError when they differ.
SymbolTablePtr common_table(const SymbolTablePtr& a, const SymbolTablePtr& b);

}  // namespace nfsplit
