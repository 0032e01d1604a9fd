#include "nfsplit/resonance.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "nfsplit/errors.hpp"

namespace nfsplit {

Spectrum::Spectrum(std::vector<CoeffValue> lambdas) : lambdas_(std::move(lambdas)) {
  for (const auto& l : lambdas_) table_ = common_table(table_, l.table());
}

CoeffValue Spectrum::dot(const MultiIndex& mu) const {
  if (mu.size() != lambdas_.size()) throw StructuralError("multi-index length does not match spectrum");
  CoeffValue sum;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] != 0) sum += CoeffValue(static_cast<int>(mu[i])) * lambdas_[i];
  }
  return sum;
}

std::vector<SymbolMonomial> Spectrum::coordinate_basis() const {
  std::set<SymbolMonomial, CanonicalOrder> basis;
  for (const auto& l : lambdas_) {
    for (const auto& [m, c] : l.terms()) basis.insert(m);
  }
  return {basis.begin(), basis.end()};
}

bool is_resonant(const MultiIndex& mu, std::size_t alpha, const Spectrum& spec) {
  if (alpha >= spec.size()) throw StructuralError("component index out of range");
  if (mu.degree() < 1) return false;
  return spec.dot(mu) == spec[alpha];
}

std::string to_string(ResonanceKind kind) {
  switch (kind) {
    case ResonanceKind::trivial: return "trivial";
    case ResonanceKind::sporadic: return "sporadic";
    case ResonanceKind::composite: return "composite";
  }
  return "?";
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::int64_t> apply(const IntMatrix& rows, const MultiIndex& x) {
  std::vector<std::int64_t> out(rows.size(), 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < x.size(); ++j) out[r] += rows[r][j] * static_cast<std::int64_t>(x[j]);
  }
  return out;
}

bool is_zero_vector(const std::vector<std::int64_t>& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t e) { return e == 0; });
}

std::int64_t to_int64(const mpz_class& z) {
  if (!z.fits_slong_p()) throw StructuralError("eigenvalue coordinates too large for the lattice solver");
  return z.get_si();
}

}  // namespace

std::vector<MultiIndex> minimal_solutions(const IntMatrix& rows, std::size_t variables,
                                          std::span<const std::uint32_t> caps) {
  for (const auto& r : rows) {
    if (r.size() != variables) throw StructuralError("lattice system row has wrong length");
  }
  if (!caps.empty() && caps.size() != variables) throw StructuralError("cap vector has wrong length");
  auto cap = [&](std::size_t j) { return caps.empty() ? std::numeric_limits<std::uint32_t>::max() : caps[j]; };

  // column images A e_j
  std::vector<std::vector<std::int64_t>> columns(variables, std::vector<std::int64_t>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < variables; ++j) columns[j][r] = rows[r][j];
  }

  std::vector<MultiIndex> solutions;
  std::set<MultiIndex> frontier;
  for (std::size_t j = 0; j < variables; ++j) {
    if (cap(j) >= 1) frontier.insert(MultiIndex::unit(variables, j));
  }
  auto dominated = [&](const MultiIndex& t) {
    return std::any_of(solutions.begin(), solutions.end(), [&](const MultiIndex& s) { return s.divides(t); });
  };

  while (!frontier.empty()) {
    std::vector<std::pair<MultiIndex, std::vector<std::int64_t>>> open;
    std::vector<MultiIndex> level_solutions;
    for (const auto& t : frontier) {
      auto image = apply(rows, t);
      if (is_zero_vector(image)) {
        level_solutions.push_back(t);
      } else {
        open.emplace_back(t, std::move(image));
      }
    }
    solutions.insert(solutions.end(), level_solutions.begin(), level_solutions.end());

    std::set<MultiIndex> next;
    for (const auto& [t, image] : open) {
      for (std::size_t j = 0; j < variables; ++j) {
        if (t[j] >= cap(j)) continue;
        std::int64_t inner = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) inner += image[r] * columns[j][r];
        // Contejean-Devie criterion: only move back towards the origin of the image space.
        if (inner >= 0) continue;
        MultiIndex u = t;
        u[j] += 1;
        if (!dominated(u)) next.insert(std::move(u));
      }
    }
    frontier = std::move(next);
  }
  std::sort(solutions.begin(), solutions.end(),
            [](const MultiIndex& a, const MultiIndex& b) { return GrlexDescending{}(b, a); });
  return solutions;
}

namespace {

/// Rows of the real-coordinate system for sum_i x_i lambda_i (plus optional
/// extra columns), denominators cleared per row.
IntMatrix coordinate_rows(const std::vector<CoeffValue>& columns) {
  std::set<SymbolMonomial, CanonicalOrder> basis;
  for (const auto& c : columns) {
    for (const auto& [m, q] : c.terms()) basis.insert(m);
  }
  IntMatrix rows;
  for (const auto& m : basis) {
    std::vector<Rational> coords;
    coords.reserve(columns.size());
    mpz_class lcm = 1;
    for (const auto& c : columns) {
      auto it = c.terms().find(m);
      coords.push_back(it == c.terms().end() ? Rational(0) : it->second);
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), coords.back().get_den_mpz_t());
    }
    std::vector<std::int64_t> row;
    row.reserve(columns.size());
    for (const auto& q : coords) {
      mpz_class scaled = q.get_num() * (lcm / q.get_den());
      row.push_back(to_int64(scaled));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool grlex_ascending(const MultiIndex& a, const MultiIndex& b) { return GrlexDescending{}(b, a); }

}  // namespace

IntMatrix invariance_system(const Spectrum& spec) { return coordinate_rows(spec.lambdas()); }

std::vector<InvarianceRelation> elementary_invariance_relations(const Spectrum& spec) {
  const auto rows = invariance_system(spec);
  std::vector<InvarianceRelation> out;
  auto sigmas = minimal_solutions(rows, spec.size());
  std::stable_sort(sigmas.begin(), sigmas.end(), [](const MultiIndex& a, const MultiIndex& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return b < a;
  });
  for (auto& sigma : sigmas) out.push_back({std::move(sigma), true});
  return out;
}

SporadicSet sporadic_resonances(const Spectrum& spec, std::uint32_t degree_bound) {
  if (degree_bound < 1) throw StructuralError("degree bound must be at least 1");
  const std::size_t n = spec.size();
  SporadicSet result;
  result.degree_bound = degree_bound;
  result.certified_complete = true;

  std::vector<std::uint32_t> caps(n + 1, std::numeric_limits<std::uint32_t>::max());
  caps[n] = 1;  // slack variable of the homogenized system
  for (std::size_t alpha = 0; alpha < n; ++alpha) {
    // mu . lambda - s lambda_alpha = 0; minimal solutions with s = 1 are the
    // minimal solutions of the inhomogeneous resonance system.
    std::vector<CoeffValue> columns = spec.lambdas();
    columns.push_back(-spec[alpha]);
    const auto rows = coordinate_rows(columns);
    for (const auto& sol : minimal_solutions(rows, n + 1, caps)) {
      if (sol[n] != 1) continue;
      std::vector<std::uint32_t> exps(sol.exponents().begin(), sol.exponents().end() - 1);
      MultiIndex mu(std::move(exps));
      const auto order = mu.degree();
      if (order < 2) continue;  // order-one resonances are linear terms, recorded by the centralizer
      result.max_order = std::max(result.max_order, order);
      if (order > degree_bound) {
        result.certified_complete = false;
        continue;
      }
      result.relations.push_back({std::move(mu), alpha, ResonanceKind::sporadic, std::nullopt});
    }
  }
  std::stable_sort(result.relations.begin(), result.relations.end(),
                   [](const ResonanceRelation& a, const ResonanceRelation& b) {
                     if (a.alpha != b.alpha) return a.alpha < b.alpha;
                     return grlex_ascending(a.mu, b.mu);
                   });
  return result;
}

std::set<MultiIndex> resonance_bases(std::size_t alpha, const Spectrum& spec, const SporadicSet& sporadics) {
  if (alpha >= spec.size()) throw StructuralError("component index out of range");
  std::set<MultiIndex> bases;
  for (std::size_t beta = 0; beta < spec.size(); ++beta) {
    if (spec[beta] == spec[alpha]) bases.insert(MultiIndex::unit(spec.size(), beta));
  }
  for (const auto& r : sporadics.relations) {
    if (r.alpha == alpha) bases.insert(r.mu);
  }
  if (spec[alpha].is_zero()) bases.insert(MultiIndex(spec.size()));
  return bases;
}

std::optional<Decomposition> canonical_decomposition(const MultiIndex& mu, const std::set<MultiIndex>& bases,
                                                     std::span<const MultiIndex> generators) {
  // feasible(rem, k): rem = base + sum of generators with index >= k
  std::map<std::pair<MultiIndex, std::size_t>, bool> memo;
  auto feasible = [&](auto&& self, const MultiIndex& rem, std::size_t first) -> bool {
    if (bases.contains(rem)) return true;
    auto key = std::make_pair(rem, first);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = false;
    for (std::size_t k = first; k < generators.size() && !ok; ++k) {
      const auto& g = generators[k];
      if (g.is_zero() || !g.divides(rem)) continue;
      ok = self(self, rem - g, k);
    }
    memo.emplace(std::move(key), ok);
    return ok;
  };
  if (!feasible(feasible, mu, 0)) return std::nullopt;

  Decomposition out;
  MultiIndex rem = mu;
  std::size_t first = 0;
  while (!bases.contains(rem)) {
    for (std::size_t k = first; k < generators.size(); ++k) {
      const auto& g = generators[k];
      if (g.is_zero() || !g.divides(rem)) continue;
      MultiIndex next = rem - g;
      if (feasible(feasible, next, k)) {
        out.invariances.push_back(k);
        rem = std::move(next);
        first = k;
        break;
      }
    }
  }
  if (!rem.is_zero()) out.base = rem;
  return out;
}

ResonanceRelation decompose_resonance(const MultiIndex& mu, std::size_t alpha, const Spectrum& spec,
                                      const SporadicSet& sporadics,
                                      std::span<const InvarianceRelation> invariances) {
  if (!is_resonant(mu, alpha, spec)) {
    throw NoDecomposition("monomial " + mu.to_string() + " is not resonant for component " +
                          std::to_string(alpha + 1));
  }
  ResonanceRelation rel{mu, alpha, ResonanceKind::composite, std::nullopt};
  if (mu.degree() == 1) {
    rel.kind = ResonanceKind::trivial;
    return rel;
  }
  for (const auto& s : sporadics.relations) {
    if (s.alpha == alpha && s.mu == mu) {
      rel.kind = ResonanceKind::sporadic;
      return rel;
    }
  }
  std::vector<MultiIndex> generators;
  generators.reserve(invariances.size());
  for (const auto& inv : invariances) generators.push_back(inv.sigma);
  auto bases = resonance_bases(alpha, spec, sporadics);
  auto dec = canonical_decomposition(mu, bases, generators);
  if (!dec) {
    throw NoDecomposition("resonance " + mu.to_string() + " -> " + std::to_string(alpha + 1) +
                          " has no decomposition over the supplied sporadic and invariance sets");
  }
  rel.decomposition = std::move(dec);
  return rel;
}

std::vector<std::pair<std::size_t, std::size_t>> linear_centralizer_basis(const Spectrum& spec) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t alpha = 0; alpha < spec.size(); ++alpha) {
    for (std::size_t beta = 0; beta < spec.size(); ++beta) {
      if (spec[beta] == spec[alpha]) out.emplace_back(beta, alpha);
    }
  }
  return out;
}

}  // namespace nfsplit
