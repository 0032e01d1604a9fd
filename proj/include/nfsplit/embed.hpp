#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nfsplit/poly.hpp"
#include "nfsplit/resonance.hpp"

namespace nfsplit {

/// Linear semisimple field X0 with components lambda_i x_i.
PolyVectorField semisimple_field(const Spectrum& spec);

/// Terms c*x^mu*e_alpha of the field that are not resonant, rendered as
/// "x1^3 in component 1". Empty when the field is in normal form.
std::vector<std::string> check_normal_form(const Spectrum& spec, const PolyVectorField& field);

/// A polynomial field in eigencoordinates whose every term is resonant.
class NormalFormSystem {
 public:
  /// Throws NotInNormalForm listing the non-resonant terms, StructuralError
  /// on a dimension mismatch.
  NormalFormSystem(Spectrum spec, PolyVectorField field);

  const Spectrum& spectrum() const noexcept { return spec_; }
  const PolyVectorField& field() const noexcept { return field_; }
  std::size_t dimension() const noexcept { return field_.dimension(); }
  /// Largest total degree of the field.
  std::uint32_t degree() const;

 private:
  Spectrum spec_;
  PolyVectorField field_;
};

/// w_j := x^mu, resonant for eigenvalue lambda_target.
struct WVariable {
  MultiIndex mu;
  std::size_t target = 0;  // smallest component index with mu . lambda = lambda_target

  friend bool operator==(const WVariable&, const WVariable&) = default;
};

/// The enlarged system on W = (x, w, phi): an autonomous phi-subsystem plus
/// eta' = M(phi) eta for eta = (x, w). Every polynomial in phi_rhs and
/// coeff_matrix lives in the m phi variables.
struct EmbeddedSystem {
  std::size_t n = 0;
  std::size_t r = 0;
  std::size_t m = 0;
  std::vector<WVariable> w_defs;
  std::vector<MultiIndex> phi_defs;
  std::vector<Polynomial> phi_rhs;
  std::vector<std::vector<Polynomial>> coeff_matrix;  // (n+r) x (n+r)

  std::size_t total_dimension() const { return n + r + m; }
  /// x1..xn, w1..wr, phi1..phim
  std::vector<std::string> variable_names() const;
  /// Y as a field on W, in the variable order of variable_names().
  PolyVectorField full_field() const;
  /// The polynomial in x that each W variable stands for.
  std::vector<Polynomial> manifold_images() const;
};

/// Linear form sum_i a_i(phi) x_i + sum_j c_j(phi) w_j.
struct QuasiLinearForm {
  std::vector<Polynomial> x_coeffs;  // n entries, in phi variables
  std::vector<Polynomial> w_coeffs;  // r entries, in phi variables
};

/// Rewrites an X0-invariant polynomial in x as a polynomial in the phi
/// variables. Throws NotInvariant if a monomial has nonzero weight, and
/// RewriteFailure if a monomial is not a product of the phi monomials.
Polynomial rewrite_invariant(const Polynomial& p, const Spectrum& spec, std::span<const MultiIndex> phi_defs);

/// Rewrites p (every monomial resonant for component target) linearly in x
/// and w with phi-dependent coefficients, via canonical decompositions.
QuasiLinearForm rewrite_quasilinear(const Polynomial& p, std::size_t target, const Spectrum& spec,
                                    std::span<const WVariable> w_defs, std::span<const MultiIndex> phi_defs);

/// Builds the split system. Requires a certified sporadic set; throws
/// RewriteFailure when some chain-rule term does not fit the split form.
EmbeddedSystem build_embedding(const NormalFormSystem& sys, const SporadicSet& sporadics,
                               std::span<const InvarianceRelation> invariances);

/// Per W-equation difference between Y restricted to the manifold
/// (w = x^mu, phi = x^sigma) and the chain-rule derivative along the input
/// field. All zero means the manifold is invariant and Y projects onto f.
std::vector<Polynomial> manifold_residual(const NormalFormSystem& sys, const EmbeddedSystem& emb);

struct SymbolicChecks {
  bool manifold_invariant = false;  ///< zero residual on every equation
  bool phi_autonomous = false;      ///< phi equations free of x and w
  bool quasi_linear = false;        ///< (x, w) equations linear homogeneous in (x, w)
  /// Diagonal coefficient matrix; only evaluated when there are no w
  /// variables and all eigenvalues are distinct.
  std::optional<bool> diagonal_product;

  bool all() const {
    return manifold_invariant && phi_autonomous && quasi_linear && diagonal_product.value_or(true);
  }
};

SymbolicChecks symbolic_checks(const NormalFormSystem& sys, const EmbeddedSystem& emb);

/// Canonical text of the embedded system: definitions then equations.
std::string render_embedding(const EmbeddedSystem& emb);

}  // namespace nfsplit
