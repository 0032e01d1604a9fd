#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nfsplit/coeff.hpp"
#include "nfsplit/poly.hpp"

namespace nfsplit {

/// Eigenvalues of the semisimple linear part, in eigencoordinate order.
class Spectrum {
 public:
  Spectrum() = default;
  /// Throws StructuralError if the eigenvalues use different symbol tables.
  explicit Spectrum(std::vector<CoeffValue> lambdas);

  std::size_t size() const noexcept { return lambdas_.size(); }
  const CoeffValue& operator[](std::size_t i) const { return lambdas_.at(i); }
  const std::vector<CoeffValue>& lambdas() const noexcept { return lambdas_; }
  const SymbolTablePtr& table() const noexcept { return table_; }

  /// (mu . lambda), exact.
  CoeffValue dot(const MultiIndex& mu) const;

  /// Union of the symbol monomials occurring in the eigenvalues, canonical order.
  std::vector<SymbolMonomial> coordinate_basis() const;

 private:
  std::vector<CoeffValue> lambdas_;
  SymbolTablePtr table_;
};

/// (mu . lambda) = lambda_alpha with |mu| >= 1.
bool is_resonant(const MultiIndex& mu, std::size_t alpha, const Spectrum& spec);

/// sigma . lambda = 0, sigma != 0.
struct InvarianceRelation {
  MultiIndex sigma;
  bool elementary = true;

  friend bool operator==(const InvarianceRelation&, const InvarianceRelation&) = default;
};

enum class ResonanceKind { trivial, sporadic, composite };
std::string to_string(ResonanceKind kind);

/// mu = base + sum of invariance relations. The base is absent only for a
/// pure invariant monomial in a component whose eigenvalue is zero.
struct Decomposition {
  std::optional<MultiIndex> base;
  std::vector<std::size_t> invariances;  // indices into the invariance list, non-decreasing

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

struct ResonanceRelation {
  MultiIndex mu;
  std::size_t alpha = 0;  // 0-based component
  ResonanceKind kind = ResonanceKind::sporadic;
  std::optional<Decomposition> decomposition;

  std::uint32_t order() const { return mu.degree(); }
  friend bool operator==(const ResonanceRelation&, const ResonanceRelation&) = default;
};

/// Sporadic resonances of order >= 2 up to a degree bound.
struct SporadicSet {
  std::vector<ResonanceRelation> relations;  // sorted by (alpha, graded-lex)
  std::uint32_t degree_bound = 10;
  /// True when no minimal solution of any resonance system exceeds the bound.
  bool certified_complete = false;
  /// Largest order among all minimal solutions found (0 if none).
  std::uint32_t max_order = 0;
};

inline constexpr std::uint32_t kDefaultDegreeBound = 10;

// --- integer lattice machinery --------------------------------------------

using IntMatrix = std::vector<std::vector<std::int64_t>>;  // rows are equations

/// All componentwise-minimal nonzero x in N^n with A x = 0 (the Hilbert
/// basis of the system), by Contejean-Devie completion. caps, when given,
/// bounds each coordinate; minimal solutions within the caps are still found
/// completely. Solutions come back in graded-lex ascending order.
std::vector<MultiIndex> minimal_solutions(const IntMatrix& rows, std::size_t variables,
                                          std::span<const std::uint32_t> caps = {});

/// Integer system whose nonnegative solutions are the sigma with
/// sigma . lambda = 0: one row per rational coordinate, denominators cleared.
IntMatrix invariance_system(const Spectrum& spec);

// --- resonance structure ---------------------------------------------------

/// Complete elementary set, sorted by degree then lexicographically
/// descending (e.g. (1,1,0,0) before (0,0,1,1)).
std::vector<InvarianceRelation> elementary_invariance_relations(const Spectrum& spec);

SporadicSet sporadic_resonances(const Spectrum& spec, std::uint32_t degree_bound = kDefaultDegreeBound);

/// Bases admissible for component alpha: e_beta with lambda_beta = lambda_alpha,
/// sporadic mu for alpha, and the zero index when lambda_alpha = 0.
std::set<MultiIndex> resonance_bases(std::size_t alpha, const Spectrum& spec, const SporadicSet& sporadics);

/// Canonical split mu = base + sum sigma_k over the given generators: the
/// sorted index sequence of the sigmas is lexicographically smallest (a
/// shorter prefix wins). Returns nullopt when no split exists.
std::optional<Decomposition> canonical_decomposition(const MultiIndex& mu, const std::set<MultiIndex>& bases,
                                                     std::span<const MultiIndex> generators);

/// Classifies a resonance. Throws NoDecomposition when mu is not resonant
/// or cannot be reduced to a base of the supplied sporadic set.
ResonanceRelation decompose_resonance(const MultiIndex& mu, std::size_t alpha, const Spectrum& spec,
                                      const SporadicSet& sporadics,
                                      std::span<const InvarianceRelation> invariances);

/// Matrix units E_{alpha,beta} with lambda_beta = lambda_alpha, as 0-based
/// (beta, alpha) pairs sorted by (alpha, beta).
std::vector<std::pair<std::size_t, std::size_t>> linear_centralizer_basis(const Spectrum& spec);

}  // namespace nfsplit
