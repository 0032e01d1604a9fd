#include "nfsplit/embed.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "nfsplit/errors.hpp"

namespace nfsplit {

PolyVectorField semisimple_field(const Spectrum& spec) {
  const std::size_t n = spec.size();
  std::vector<Polynomial> comps;
  comps.reserve(n);
  for (std::size_t i = 0; i < n; ++i) comps.push_back(Polynomial::monomial(n, MultiIndex::unit(n, i), spec[i]));
  return PolyVectorField(std::move(comps));
}

std::vector<std::string> check_normal_form(const Spectrum& spec, const PolyVectorField& field) {
  if (spec.size() != field.dimension()) throw StructuralError("spectrum and field differ in dimension");
  std::vector<std::string> offending;
  const auto names = default_names(field.dimension());
  for (std::size_t alpha = 0; alpha < field.dimension(); ++alpha) {
    for (const auto& [mu, c] : field[alpha].terms()) {
      if (!is_resonant(mu, alpha, spec)) {
        offending.push_back(Polynomial::monomial(field.dimension(), mu, c).to_string(names) + " in component " +
                            std::to_string(alpha + 1));
      }
    }
  }
  return offending;
}

NormalFormSystem::NormalFormSystem(Spectrum spec, PolyVectorField field)
    : spec_(std::move(spec)), field_(std::move(field)) {
  auto offending = check_normal_form(spec_, field_);
  if (!offending.empty()) throw NotInNormalForm(std::move(offending));
}

std::uint32_t NormalFormSystem::degree() const {
  std::uint32_t d = 0;
  for (const auto& c : field_.components()) d = std::max(d, c.total_degree());
  return d;
}

// ---------------------------------------------------------------------------

std::vector<std::string> EmbeddedSystem::variable_names() const {
  auto names = default_names(n, "x");
  auto w = default_names(r, "w");
  auto phi = default_names(m, "phi");
  names.insert(names.end(), w.begin(), w.end());
  names.insert(names.end(), phi.begin(), phi.end());
  return names;
}

PolyVectorField EmbeddedSystem::full_field() const {
  const std::size_t total = total_dimension();
  std::vector<std::size_t> phi_positions(m);
  std::iota(phi_positions.begin(), phi_positions.end(), n + r);
  std::vector<Polynomial> rows;
  rows.reserve(total);
  for (std::size_t i = 0; i < n + r; ++i) {
    Polynomial row(total);
    for (std::size_t k = 0; k < n + r; ++k) {
      const auto& entry = coeff_matrix.at(i).at(k);
      if (entry.is_zero()) continue;
      row += relabel(entry, total, phi_positions) * Polynomial::variable(total, k);
    }
    rows.push_back(std::move(row));
  }
  for (std::size_t a = 0; a < m; ++a) rows.push_back(relabel(phi_rhs.at(a), total, phi_positions));
  return PolyVectorField(std::move(rows));
}

std::vector<Polynomial> EmbeddedSystem::manifold_images() const {
  std::vector<Polynomial> images;
  images.reserve(total_dimension());
  for (std::size_t i = 0; i < n; ++i) images.push_back(Polynomial::variable(n, i));
  for (const auto& w : w_defs) images.push_back(Polynomial::monomial(n, w.mu));
  for (const auto& s : phi_defs) images.push_back(Polynomial::monomial(n, s));
  return images;
}

// ---------------------------------------------------------------------------

namespace {

MultiIndex phi_monomial(const Decomposition& dec, std::size_t m) {
  MultiIndex out(m);
  for (auto k : dec.invariances) out[k] += 1;
  return out;
}

}  // namespace

Polynomial rewrite_invariant(const Polynomial& p, const Spectrum& spec, std::span<const MultiIndex> phi_defs) {
  const std::size_t m = phi_defs.size();
  const std::set<MultiIndex> zero_base{MultiIndex(p.dimension())};
  const auto names = default_names(p.dimension());
  Polynomial out(m);
  for (const auto& [nu, c] : p.terms()) {
    if (!spec.dot(nu).is_zero()) {
      throw NotInvariant("monomial " + monomial_to_string(nu, names) + " is not invariant under the linear flow");
    }
    auto dec = canonical_decomposition(nu, zero_base, phi_defs);
    if (!dec) {
      throw RewriteFailure(monomial_to_string(nu, names), "invariant monomial is not a product of phi monomials");
    }
    out.add_term(phi_monomial(*dec, m), c);
  }
  return out;
}

QuasiLinearForm rewrite_quasilinear(const Polynomial& p, std::size_t target, const Spectrum& spec,
                                    std::span<const WVariable> w_defs, std::span<const MultiIndex> phi_defs) {
  const std::size_t n = spec.size();
  const std::size_t m = phi_defs.size();
  if (p.dimension() != n || target >= n) throw StructuralError("quasi-linear rewrite: dimension mismatch");

  std::map<MultiIndex, std::size_t> column_of;  // base monomial -> column in (x, w)
  for (std::size_t beta = 0; beta < n; ++beta) {
    if (spec[beta] == spec[target]) column_of.emplace(MultiIndex::unit(n, beta), beta);
  }
  for (std::size_t j = 0; j < w_defs.size(); ++j) {
    if (spec.dot(w_defs[j].mu) == spec[target]) column_of.emplace(w_defs[j].mu, n + j);
  }
  std::set<MultiIndex> bases;
  for (const auto& [mu, col] : column_of) bases.insert(mu);

  QuasiLinearForm form{std::vector<Polynomial>(n, Polynomial(m)), std::vector<Polynomial>(w_defs.size(), Polynomial(m))};
  const auto names = default_names(n);
  for (const auto& [nu, c] : p.terms()) {
    if (!is_resonant(nu, target, spec)) {
      throw RewriteFailure(monomial_to_string(nu, names),
                           "term is not resonant for component " + std::to_string(target + 1));
    }
    auto dec = canonical_decomposition(nu, bases, phi_defs);
    if (!dec || !dec->base) {
      throw RewriteFailure(monomial_to_string(nu, names),
                           "resonant term has no coordinate or w factor for component " + std::to_string(target + 1));
    }
    const std::size_t col = column_of.at(*dec->base);
    auto& slot = col < n ? form.x_coeffs[col] : form.w_coeffs[col - n];
    slot.add_term(phi_monomial(*dec, m), c);
  }
  return form;
}

EmbeddedSystem build_embedding(const NormalFormSystem& sys, const SporadicSet& sporadics,
                               std::span<const InvarianceRelation> invariances) {
  if (!sporadics.certified_complete) {
    throw RewriteFailure("-", "sporadic resonances are not certified complete up to degree " +
                                  std::to_string(sporadics.degree_bound) + "; raise the degree bound");
  }
  const auto& spec = sys.spectrum();
  const auto& f = sys.field();
  EmbeddedSystem emb;
  emb.n = sys.dimension();

  std::map<MultiIndex, std::size_t> first_target;
  for (const auto& rel : sporadics.relations) {
    if (rel.order() < 2) continue;
    auto [it, inserted] = first_target.try_emplace(rel.mu, rel.alpha);
    if (!inserted) it->second = std::min(it->second, rel.alpha);
  }
  for (const auto& [mu, target] : first_target) emb.w_defs.push_back({mu, target});
  std::sort(emb.w_defs.begin(), emb.w_defs.end(), [](const WVariable& a, const WVariable& b) {
    if (a.target != b.target) return a.target < b.target;
    return GrlexDescending{}(b.mu, a.mu);
  });
  for (const auto& inv : invariances) emb.phi_defs.push_back(inv.sigma);
  emb.r = emb.w_defs.size();
  emb.m = emb.phi_defs.size();

  const std::size_t rows = emb.n + emb.r;
  auto to_row = [&](const QuasiLinearForm& form) {
    std::vector<Polynomial> row = form.x_coeffs;
    row.insert(row.end(), form.w_coeffs.begin(), form.w_coeffs.end());
    return row;
  };
  emb.coeff_matrix.reserve(rows);
  for (std::size_t i = 0; i < emb.n; ++i) {
    emb.coeff_matrix.push_back(to_row(rewrite_quasilinear(f[i], i, spec, emb.w_defs, emb.phi_defs)));
  }
  for (const auto& w : emb.w_defs) {
    const Polynomial h = directional_derivative(Polynomial::monomial(emb.n, w.mu), f);
    emb.coeff_matrix.push_back(to_row(rewrite_quasilinear(h, w.target, spec, emb.w_defs, emb.phi_defs)));
  }
  for (const auto& sigma : emb.phi_defs) {
    const Polynomial z = directional_derivative(Polynomial::monomial(emb.n, sigma), f);
    emb.phi_rhs.push_back(rewrite_invariant(z, spec, emb.phi_defs));
  }
  return emb;
}

std::vector<Polynomial> manifold_residual(const NormalFormSystem& sys, const EmbeddedSystem& emb) {
  const auto& f = sys.field();
  if (emb.n != sys.dimension()) throw StructuralError("embedding does not match the system dimension");
  const PolyVectorField y = emb.full_field();
  const auto images = emb.manifold_images();
  std::vector<Polynomial> residual;
  residual.reserve(y.dimension());
  for (std::size_t k = 0; k < y.dimension(); ++k) {
    Polynomial on_manifold = substitute(y[k], images);
    Polynomial direct = k < emb.n ? f[k] : directional_derivative(images[k], f);
    residual.push_back(on_manifold - direct);
  }
  return residual;
}

SymbolicChecks symbolic_checks(const NormalFormSystem& sys, const EmbeddedSystem& emb) {
  SymbolicChecks checks;
  const auto residual = manifold_residual(sys, emb);
  checks.manifold_invariant =
      std::all_of(residual.begin(), residual.end(), [](const Polynomial& p) { return p.is_zero(); });

  const PolyVectorField y = emb.full_field();
  const std::size_t linear_count = emb.n + emb.r;
  std::vector<std::size_t> xw(linear_count);
  std::iota(xw.begin(), xw.end(), 0);

  checks.phi_autonomous = true;
  for (std::size_t a = 0; a < emb.m; ++a) {
    if (y[linear_count + a].degree_in(xw) != 0) checks.phi_autonomous = false;
  }
  checks.quasi_linear = true;
  for (std::size_t i = 0; i < linear_count; ++i) {
    const auto& row = y[i];
    if (!row.is_zero() && (row.min_degree_in(xw) != 1 || row.degree_in(xw) != 1)) checks.quasi_linear = false;
  }

  const auto& spec = sys.spectrum();
  bool distinct = true;
  for (std::size_t a = 0; a < spec.size(); ++a) {
    for (std::size_t b = a + 1; b < spec.size(); ++b) {
      if (spec[a] == spec[b]) distinct = false;
    }
  }
  if (emb.r == 0 && distinct) {
    bool diagonal = true;
    for (std::size_t i = 0; i < emb.n; ++i) {
      for (const auto& [mu, c] : y[i].terms()) {
        for (std::size_t k = 0; k < emb.n; ++k) {
          if (k != i && mu[k] != 0) diagonal = false;
        }
      }
    }
    checks.diagonal_product = diagonal;
  }
  return checks;
}

std::string render_embedding(const EmbeddedSystem& emb) {
  const auto names = emb.variable_names();
  const auto x_names = default_names(emb.n);
  std::string out = "variables:";
  for (const auto& nm : names) out += " " + nm;
  out += "\n";
  for (std::size_t j = 0; j < emb.r; ++j) {
    out += names[emb.n + j] + " = " + monomial_to_string(emb.w_defs[j].mu, x_names) + "  [resonant with lambda" +
           std::to_string(emb.w_defs[j].target + 1) + "]\n";
  }
  for (std::size_t a = 0; a < emb.m; ++a) {
    out += names[emb.n + emb.r + a] + " = " + monomial_to_string(emb.phi_defs[a], x_names) + "\n";
  }
  const PolyVectorField y = emb.full_field();
  for (std::size_t k = 0; k < y.dimension(); ++k) {
    out += names[k] + "' = " + y[k].to_string(names) + "\n";
  }
  return out;
}

}  // namespace nfsplit
