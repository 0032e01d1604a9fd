#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nfsplit/coeff.hpp"

namespace nfsplit {

/// Exponent vector of a monomial x^mu.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dimension) : exps_(dimension, 0) {}
  MultiIndex(std::initializer_list<std::uint32_t> exps) : exps_(exps) {}
  explicit MultiIndex(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {}
  static MultiIndex unit(std::size_t dimension, std::size_t index);

  std::size_t size() const noexcept { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  std::uint32_t& operator[](std::size_t i) { return exps_[i]; }
  const std::vector<std::uint32_t>& exponents() const noexcept { return exps_; }
  std::uint32_t degree() const;
  bool is_zero() const { return degree() == 0; }

  /// Componentwise a <= b.
  bool divides(const MultiIndex& other) const;

  MultiIndex& operator+=(const MultiIndex& rhs);
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
  /// Componentwise difference; StructuralError when rhs does not divide *this.
  MultiIndex& operator-=(const MultiIndex& rhs);
  friend MultiIndex operator-(MultiIndex a, const MultiIndex& b) { return a -= b; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  /// Plain lexicographic order on the exponent vectors.
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

  /// "(1,0,2)"
  std::string to_string() const;

 private:
  std::vector<std::uint32_t> exps_;
};

/// Graded-lexicographic order, largest first: higher total degree first,
/// then larger exponent on an earlier variable first.
struct GrlexDescending {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// Default variable names x1..xn.
std::vector<std::string> default_names(std::size_t dimension, const std::string& stem = "x");

/// Sparse multivariate polynomial over CoeffValue.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, CoeffValue, GrlexDescending>;

  explicit Polynomial(std::size_t dimension = 0) : dimension_(dimension) {}
  static Polynomial constant(std::size_t dimension, const CoeffValue& c);
  static Polynomial variable(std::size_t dimension, std::size_t index);
  static Polynomial monomial(std::size_t dimension, const MultiIndex& mu, const CoeffValue& c = 1);

  std::size_t dimension() const noexcept { return dimension_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  CoeffValue coefficient(const MultiIndex& mu) const;

  /// Adds c*x^mu, dropping the term if it cancels.
  void add_term(const MultiIndex& mu, const CoeffValue& c);

  std::uint32_t total_degree() const;
  /// Largest joint degree in the given variables over all terms (0 for zero).
  std::uint32_t degree_in(std::span<const std::size_t> variables) const;
  /// Smallest joint degree in the given variables over all terms (0 for zero).
  std::uint32_t min_degree_in(std::span<const std::size_t> variables) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const CoeffValue& c);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const CoeffValue& c) { return a *= c; }
  friend Polynomial operator*(const CoeffValue& c, Polynomial a) { return a *= c; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  Polynomial pow(std::uint32_t exponent) const;

  /// Canonical rendering, terms in graded-lex order, e.g.
  /// "(2 - 3*i)*x1^2*x2 - x2 + 1/2".
  std::string to_string(std::span<const std::string> names) const;
  std::string to_string() const { return to_string(default_names(dimension_)); }

 private:
  std::size_t dimension_ = 0;
  TermMap terms_;
};

/// Renders the monomial x^mu with the given names ("1" for mu = 0).
std::string monomial_to_string(const MultiIndex& mu, std::span<const std::string> names);

/// Polynomial vector field f = (f_1, ..., f_n), all components in n variables.
class PolyVectorField {
 public:
  PolyVectorField() = default;
  explicit PolyVectorField(std::size_t dimension);
  /// Throws StructuralError unless every component has dimension components.size().
  explicit PolyVectorField(std::vector<Polynomial> components);

  std::size_t dimension() const noexcept { return components_.size(); }
  const Polynomial& operator[](std::size_t i) const { return components_.at(i); }
  Polynomial& operator[](std::size_t i) { return components_.at(i); }
  const std::vector<Polynomial>& components() const noexcept { return components_; }
  bool is_zero() const;

  friend bool operator==(const PolyVectorField&, const PolyVectorField&) = default;

 private:
  std::vector<Polynomial> components_;
};

Polynomial partial_derivative(const Polynomial& p, std::size_t index);
/// sum_i (dp/dx_i) f_i
Polynomial directional_derivative(const Polynomial& p, const PolyVectorField& f);
/// Component i: sum_j (g_j df_i/dx_j - f_j dg_i/dx_j).
PolyVectorField lie_bracket(const PolyVectorField& g, const PolyVectorField& f);

/// Full composition: variable k of p is replaced by images[k]. All images
/// share one target dimension.
Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images);
/// Partial substitution inside p's own space; unassigned variables stay.
Polynomial substitute(const Polynomial& p, const std::map<std::size_t, Polynomial>& assignment);

/// Moves p into a space of new_dimension variables, variable k going to
/// positions[k].
Polynomial relabel(const Polynomial& p, std::size_t new_dimension, std::span<const std::size_t> positions);

/// Floating evaluation at a complex point.
std::complex<double> evaluate(const Polynomial& p, std::span<const std::complex<double>> point,
                              const SymbolTable& table);

}  // namespace nfsplit
