#include <doctest.h>

#include <random>
#include <set>

#include "nfsplit/errors.hpp"
#include "nfsplit/resonance.hpp"
#include "oracles.hpp"

using namespace nfsplit;

namespace {

Spectrum gaussian(const std::vector<oracle::Gauss>& g) {
  std::vector<CoeffValue> l;
  for (auto [re, im] : g) l.push_back(CoeffValue(re) + CoeffValue(im) * CoeffValue::imaginary_unit());
  return Spectrum(l);
}

std::set<MultiIndex> sigmas(const std::vector<InvarianceRelation>& rel) {
  std::set<MultiIndex> out;
  for (const auto& r : rel) out.insert(r.sigma);
  return out;
}

const Spectrum ex1 = gaussian({{1, 0}, {2, 0}});
const Spectrum ex2 = gaussian({{0, -1}, {0, 1}, {1, 0}});
const Spectrum ex4 = gaussian({{0, -1}, {0, 1}, {0, -1}, {0, 1}});
const Spectrum ex5 = gaussian({{0, -1}, {0, 1}, {0, -2}, {0, 2}});

}  // namespace

TEST_CASE("is_resonant examples") {
  CHECK(is_resonant({2, 0}, 1, ex1));
  CHECK(is_resonant({1, 0}, 0, ex1));
  CHECK_FALSE(is_resonant({1, 1, 0}, 2, ex2));
  CHECK(is_resonant({1, 1, 1}, 2, ex2));
  CHECK_FALSE(is_resonant({0, 0}, 0, ex1));
}

TEST_CASE("elementary invariance relation examples") {
  CHECK(elementary_invariance_relations(ex1).empty());
  CHECK(sigmas(elementary_invariance_relations(ex2)) == std::set<MultiIndex>{{1, 1, 0}});
  CHECK(sigmas(elementary_invariance_relations(ex4)) ==
        std::set<MultiIndex>{{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 0, 1}, {0, 1, 1, 0}});
  const auto r5 = elementary_invariance_relations(ex5);
  REQUIRE(r5.size() == 4);
  CHECK(r5[0].sigma == MultiIndex{1, 1, 0, 0});
  CHECK(r5[1].sigma == MultiIndex{0, 0, 1, 1});
  CHECK(r5[2].sigma == MultiIndex{2, 0, 0, 1});
  CHECK(r5[3].sigma == MultiIndex{0, 2, 1, 0});
  for (const auto& r : r5) CHECK(r.elementary);
}

TEST_CASE("symbolic eigenvalues split into rational equations") {
  auto t = std::make_shared<SymbolTable>();
  t->declare("pi", {3.141592653589793, 0.0});
  const auto i = CoeffValue::imaginary_unit(t);
  const auto pi = CoeffValue::symbol(t, "pi");
  const Spectrum ex6({-i, i, -pi * i, pi * i});
  CHECK(sigmas(elementary_invariance_relations(ex6)) == std::set<MultiIndex>{{1, 1, 0, 0}, {0, 0, 1, 1}});
  const auto sp = sporadic_resonances(ex6, 8);
  CHECK(sp.relations.empty());
  CHECK(sp.certified_complete);
}

TEST_CASE("sporadic resonance examples") {
  const auto s1 = sporadic_resonances(ex1, 5);
  REQUIRE(s1.relations.size() == 1);
  CHECK(s1.relations[0].mu == MultiIndex{2, 0});
  CHECK(s1.relations[0].alpha == 1);
  CHECK(s1.certified_complete);

  const auto s5 = sporadic_resonances(ex5, 5);
  std::set<std::pair<MultiIndex, std::size_t>> got;
  for (const auto& r : s5.relations) got.insert({r.mu, r.alpha});
  CHECK(got == std::set<std::pair<MultiIndex, std::size_t>>{
                   {{2, 0, 0, 0}, 2}, {{0, 2, 0, 0}, 3}, {{0, 1, 1, 0}, 0}, {{1, 0, 0, 1}, 1}});
  CHECK(s5.certified_complete);
}

TEST_CASE("uncertified sporadic search is reported, not thrown") {
  // lambda = (1, 7): x1^7 in component 2 has order 7
  const Spectrum s = gaussian({{1, 0}, {7, 0}});
  const auto low = sporadic_resonances(s, 5);
  CHECK_FALSE(low.certified_complete);
  CHECK(low.relations.empty());
  const auto high = sporadic_resonances(s, 10);
  CHECK(high.certified_complete);
  REQUIRE(high.relations.size() == 1);
  CHECK(high.relations[0].order() == 7);
}

TEST_CASE("decompose_resonance examples") {
  const auto inv2 = elementary_invariance_relations(ex2);
  const auto sp2 = sporadic_resonances(ex2);
  const auto r = decompose_resonance({1, 1, 1}, 2, ex2, sp2, inv2);
  CHECK(r.kind == ResonanceKind::composite);
  REQUIRE(r.decomposition);
  CHECK(r.decomposition->base == MultiIndex{0, 0, 1});
  REQUIRE(r.decomposition->invariances.size() == 1);
  CHECK(inv2[r.decomposition->invariances[0]].sigma == MultiIndex{1, 1, 0});

  const auto sp1 = sporadic_resonances(ex1);
  CHECK(decompose_resonance({1, 0}, 0, ex1, sp1, {}).kind == ResonanceKind::trivial);
  CHECK(decompose_resonance({2, 0}, 1, ex1, sp1, {}).kind == ResonanceKind::sporadic);
  CHECK_THROWS_AS(decompose_resonance({3, 0}, 1, ex1, sp1, {}), NoDecomposition);

  const auto inv5 = elementary_invariance_relations(ex5);
  const auto sp5 = sporadic_resonances(ex5);
  const auto c = decompose_resonance({3, 1, 0, 0}, 2, ex5, sp5, inv5);
  CHECK(c.kind == ResonanceKind::composite);
  CHECK(c.decomposition->base == MultiIndex{2, 0, 0, 0});
  REQUIRE(c.decomposition->invariances.size() == 1);
  CHECK(inv5[c.decomposition->invariances[0]].sigma == MultiIndex{1, 1, 0, 0});
}

TEST_CASE("canonical decomposition prefers the smallest index sequence") {
  const auto inv = elementary_invariance_relations(ex4);
  std::vector<MultiIndex> gens;
  for (const auto& r : inv) gens.push_back(r.sigma);
  const auto d = canonical_decomposition({1, 1, 1, 1}, {MultiIndex(4)}, gens);
  REQUIRE(d);
  REQUIRE(d->invariances.size() == 2);
  // (1,1,0,0) is generator 0, so the pair containing it wins.
  CHECK(d->invariances[0] == 0);
  CHECK(gens[d->invariances[0]] + gens[d->invariances[1]] == MultiIndex{1, 1, 1, 1});
}

TEST_CASE("linear centralizer examples") {
  CHECK(linear_centralizer_basis(ex1) == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}});
  CHECK(linear_centralizer_basis(ex2).size() == 3);
  CHECK(linear_centralizer_basis(ex4).size() == 8);
}

TEST_CASE("minimal_solutions on a plain integer system") {
  // 2a - 3b = 0 -> (3, 2)
  const IntMatrix rows{{2, -3}};
  const auto sols = minimal_solutions(rows, 2);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0] == MultiIndex{3, 2});
  // a + b - c = 0 -> (1,0,1), (0,1,1)
  const auto s2 = minimal_solutions(IntMatrix{{1, 1, -1}}, 3);
  CHECK(std::set<MultiIndex>(s2.begin(), s2.end()) == std::set<MultiIndex>{{1, 0, 1}, {0, 1, 1}});
}

TEST_CASE("oracle equivalence on random Gaussian spectra") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> coord(-3, 3), dim(1, 4);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<oracle::Gauss> g(static_cast<std::size_t>(dim(rng)));
    for (auto& e : g) e = {coord(rng), coord(rng)};
    const Spectrum s = gaussian(g);
    const auto inv = elementary_invariance_relations(s);
    std::set<oracle::Index> mine;
    for (const auto& r : inv) {
      if (r.sigma.degree() <= 12) mine.insert(r.sigma.exponents());
    }
    CHECK(mine == oracle::minimal_invariances(g, 12));
    // minimality
    for (const auto& a : inv) {
      for (const auto& b : inv) {
        if (!(a.sigma == b.sigma)) CHECK_FALSE(a.sigma.divides(b.sigma));
      }
    }
    // sporadics contain no invariance below them
    const auto sp = sporadic_resonances(s, 12);
    for (const auto& r : sp.relations) {
      CHECK(r.order() >= 2);
      for (const auto& v : inv) CHECK_FALSE(v.sigma.divides(r.mu));
    }
    // centralizer count
    std::size_t eq = 0;
    for (const auto& a : g) {
      for (const auto& b : g) eq += a == b ? 1 : 0;
    }
    CHECK(linear_centralizer_basis(s).size() == eq);
  }
}
