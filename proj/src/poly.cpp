#include "nfsplit/poly.hpp"

#include <algorithm>
#include <numeric>

#include "nfsplit/errors.hpp"

namespace nfsplit {

MultiIndex MultiIndex::unit(std::size_t dimension, std::size_t index) {
  if (index >= dimension) throw StructuralError("unit multi-index out of range");
  MultiIndex m(dimension);
  m.exps_[index] = 1;
  return m;
}

std::uint32_t MultiIndex::degree() const { return std::accumulate(exps_.begin(), exps_.end(), 0u); }

bool MultiIndex::divides(const MultiIndex& other) const {
  if (other.size() != size()) throw StructuralError("multi-index length mismatch");
  for (std::size_t i = 0; i < size(); ++i) {
    if (exps_[i] > other.exps_[i]) return false;
  }
  return true;
}

MultiIndex& MultiIndex::operator+=(const MultiIndex& rhs) {
  if (rhs.size() != size()) throw StructuralError("multi-index length mismatch");
  for (std::size_t i = 0; i < size(); ++i) exps_[i] += rhs.exps_[i];
  return *this;
}

MultiIndex& MultiIndex::operator-=(const MultiIndex& rhs) {
  if (!rhs.divides(*this)) throw StructuralError("multi-index difference would be negative");
  for (std::size_t i = 0; i < size(); ++i) exps_[i] -= rhs.exps_[i];
  return *this;
}

std::string MultiIndex::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) out += ',';
    out += std::to_string(exps_[i]);
  }
  return out + ")";
}

bool GrlexDescending::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da > db;
  return a > b;
}

std::vector<std::string> default_names(std::size_t dimension, const std::string& stem) {
  std::vector<std::string> names;
  names.reserve(dimension);
  for (std::size_t k = 1; k <= dimension; ++k) names.push_back(stem + std::to_string(k));
  return names;
}

// ---------------------------------------------------------------------------

Polynomial Polynomial::constant(std::size_t dimension, const CoeffValue& c) {
  return monomial(dimension, MultiIndex(dimension), c);
}

Polynomial Polynomial::variable(std::size_t dimension, std::size_t index) {
  return monomial(dimension, MultiIndex::unit(dimension, index), 1);
}

Polynomial Polynomial::monomial(std::size_t dimension, const MultiIndex& mu, const CoeffValue& c) {
  Polynomial p(dimension);
  p.add_term(mu, c);
  return p;
}

CoeffValue Polynomial::coefficient(const MultiIndex& mu) const {
  auto it = terms_.find(mu);
  return it == terms_.end() ? CoeffValue{} : it->second;
}

void Polynomial::add_term(const MultiIndex& mu, const CoeffValue& c) {
  if (mu.size() != dimension_) {
    throw StructuralError("monomial " + mu.to_string() + " does not match dimension " +
                          std::to_string(dimension_));
  }
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mu, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

std::uint32_t Polynomial::total_degree() const { return terms_.empty() ? 0 : terms_.begin()->first.degree(); }

std::uint32_t Polynomial::degree_in(std::span<const std::size_t> variables) const {
  std::uint32_t best = 0;
  for (const auto& [mu, c] : terms_) {
    std::uint32_t d = 0;
    for (auto v : variables) d += mu[v];
    best = std::max(best, d);
  }
  return best;
}

std::uint32_t Polynomial::min_degree_in(std::span<const std::size_t> variables) const {
  if (terms_.empty()) return 0;
  std::uint32_t best = UINT32_MAX;
  for (const auto& [mu, c] : terms_) {
    std::uint32_t d = 0;
    for (auto v : variables) d += mu[v];
    best = std::min(best, d);
  }
  return best;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& [mu, c] : out.terms_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.dimension_ != dimension_) throw StructuralError("polynomial dimension mismatch");
  for (const auto& [mu, c] : rhs.terms_) add_term(mu, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.dimension_ != dimension_) throw StructuralError("polynomial dimension mismatch");
  for (const auto& [mu, c] : rhs.terms_) add_term(mu, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const CoeffValue& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  TermMap scaled;
  for (auto& [mu, v] : terms_) {
    CoeffValue prod = v * c;
    if (!prod.is_zero()) scaled.emplace(mu, std::move(prod));
  }
  terms_ = std::move(scaled);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.dimension_ != b.dimension_) throw StructuralError("polynomial dimension mismatch");
  Polynomial out(a.dimension_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma + mb, ca * cb);
  }
  return out;
}

Polynomial Polynomial::pow(std::uint32_t exponent) const {
  Polynomial result = constant(dimension_, 1);
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent > 0) base = base * base;
  }
  return result;
}

std::string monomial_to_string(const MultiIndex& mu, std::span<const std::string> names) {
  std::string out;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += names[i];
    if (mu[i] > 1) out += "^" + std::to_string(mu[i]);
  }
  return out.empty() ? "1" : out;
}

std::string Polynomial::to_string(std::span<const std::string> names) const {
  if (names.size() < dimension_) throw StructuralError("not enough variable names for rendering");
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [mu, c] : terms_) {
    const bool constant_term = mu.is_zero();
    std::string body;
    bool negative = false;
    if (c.is_single_term()) {
      const auto& [sm, q] = *c.terms().begin();
      negative = q < 0;
      const Rational mag = abs(q);
      std::string scalar;
      if (!sm.is_one()) {
        scalar = (mag != 1 ? nfsplit::to_string(mag) + "*" : std::string{}) + sm.to_string(c.table().get());
      } else if (mag != 1 || constant_term) {
        scalar = nfsplit::to_string(mag);
      }
      body = scalar;
      if (!constant_term) body += (scalar.empty() ? "" : "*") + monomial_to_string(mu, names);
    } else {
      body = "(" + c.to_string() + ")";
      if (!constant_term) body += "*" + monomial_to_string(mu, names);
    }
    if (first) {
      out += negative ? "-" : "";
    } else {
      out += negative ? " - " : " + ";
    }
    out += body;
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------------------

PolyVectorField::PolyVectorField(std::size_t dimension) : components_(dimension, Polynomial(dimension)) {}

PolyVectorField::PolyVectorField(std::vector<Polynomial> components) : components_(std::move(components)) {
  for (const auto& c : components_) {
    if (c.dimension() != components_.size()) {
      throw StructuralError("vector field component dimension does not match field dimension");
    }
  }
}

bool PolyVectorField::is_zero() const {
  return std::all_of(components_.begin(), components_.end(), [](const Polynomial& p) { return p.is_zero(); });
}

Polynomial partial_derivative(const Polynomial& p, std::size_t index) {
  if (index >= p.dimension()) throw StructuralError("derivative index out of range");
  Polynomial out(p.dimension());
  for (const auto& [mu, c] : p.terms()) {
    if (mu[index] == 0) continue;
    MultiIndex lowered = mu;
    lowered[index] -= 1;
    out.add_term(lowered, c * CoeffValue(static_cast<int>(mu[index])));
  }
  return out;
}

Polynomial directional_derivative(const Polynomial& p, const PolyVectorField& f) {
  if (p.dimension() != f.dimension()) throw StructuralError("directional derivative dimension mismatch");
  Polynomial out(p.dimension());
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    if (f[i].is_zero()) continue;
    Polynomial d = partial_derivative(p, i);
    if (!d.is_zero()) out += d * f[i];
  }
  return out;
}

PolyVectorField lie_bracket(const PolyVectorField& g, const PolyVectorField& f) {
  if (g.dimension() != f.dimension()) throw StructuralError("lie bracket dimension mismatch");
  std::vector<Polynomial> out;
  out.reserve(f.dimension());
  for (std::size_t i = 0; i < f.dimension(); ++i) {
    out.push_back(directional_derivative(f[i], g) - directional_derivative(g[i], f));
  }
  return PolyVectorField(std::move(out));
}

Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images) {
  if (images.size() != p.dimension()) throw StructuralError("substitution needs one image per variable");
  const std::size_t target = images.empty() ? 0 : images.front().dimension();
  for (const auto& img : images) {
    if (img.dimension() != target) throw StructuralError("substitution images differ in dimension");
  }
  // powers[k][e] = images[k]^e, built on demand
  std::vector<std::vector<Polynomial>> powers(images.size());
  auto power = [&](std::size_t k, std::uint32_t e) -> const Polynomial& {
    auto& cache = powers[k];
    if (cache.empty()) cache.push_back(Polynomial::constant(target, 1));
    while (cache.size() <= e) cache.push_back(cache.back() * images[k]);
    return cache[e];
  };
  Polynomial out(target);
  for (const auto& [mu, c] : p.terms()) {
    Polynomial term = Polynomial::constant(target, c);
    for (std::size_t k = 0; k < mu.size(); ++k) {
      if (mu[k] > 0) term = term * power(k, mu[k]);
    }
    out += term;
  }
  return out;
}

Polynomial substitute(const Polynomial& p, const std::map<std::size_t, Polynomial>& assignment) {
  std::vector<Polynomial> images;
  images.reserve(p.dimension());
  for (std::size_t k = 0; k < p.dimension(); ++k) {
    auto it = assignment.find(k);
    if (it == assignment.end()) {
      images.push_back(Polynomial::variable(p.dimension(), k));
    } else {
      if (it->second.dimension() != p.dimension()) {
        throw StructuralError("partial substitution image must live in the same space");
      }
      images.push_back(it->second);
    }
  }
  for (const auto& [k, img] : assignment) {
    if (k >= p.dimension()) throw StructuralError("substitution variable out of range");
  }
  return substitute(p, images);
}

Polynomial relabel(const Polynomial& p, std::size_t new_dimension, std::span<const std::size_t> positions) {
  if (positions.size() != p.dimension()) throw StructuralError("relabel needs one position per variable");
  Polynomial out(new_dimension);
  for (const auto& [mu, c] : p.terms()) {
    MultiIndex moved(new_dimension);
    for (std::size_t k = 0; k < mu.size(); ++k) {
      if (positions[k] >= new_dimension) throw StructuralError("relabel position out of range");
      moved[positions[k]] += mu[k];
    }
    out.add_term(moved, c);
  }
  return out;
}

std::complex<double> evaluate(const Polynomial& p, std::span<const std::complex<double>> point,
                              const SymbolTable& table) {
  if (point.size() != p.dimension()) throw StructuralError("evaluation point has wrong dimension");
  std::complex<double> sum{};
  for (const auto& [mu, c] : p.terms()) {
    std::complex<double> term = eval_numeric(c, table);
    for (std::size_t k = 0; k < mu.size(); ++k) {
      for (std::uint32_t e = 0; e < mu[k]; ++e) term *= point[k];
    }
    sum += term;
  }
  return sum;
}

}  // namespace nfsplit
