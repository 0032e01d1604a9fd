#include <doctest.h>

#include <random>

#include "nfsplit/errors.hpp"
#include "nfsplit/poly.hpp"

using namespace nfsplit;

namespace {

Polynomial x(std::size_t n, std::size_t k) { return Polynomial::variable(n, k); }

Polynomial random_poly(std::mt19937& rng, std::size_t n, std::uint32_t max_deg) {
  std::uniform_int_distribution<int> coeff(-3, 3), e(0, static_cast<int>(max_deg)), count(0, 4);
  Polynomial p(n);
  const int terms = count(rng);
  for (int t = 0; t < terms; ++t) {
    std::vector<std::uint32_t> mu(n, 0);
    std::uint32_t left = max_deg;
    for (auto& v : mu) {
      v = std::min<std::uint32_t>(left, static_cast<std::uint32_t>(e(rng)) / 2);
      left -= v;
    }
    p.add_term(MultiIndex(mu), CoeffValue(coeff(rng)));
  }
  return p;
}

PolyVectorField random_field(std::mt19937& rng, std::size_t n, std::uint32_t max_deg) {
  std::vector<Polynomial> comps;
  for (std::size_t k = 0; k < n; ++k) comps.push_back(random_poly(rng, n, max_deg));
  return PolyVectorField(std::move(comps));
}

}  // namespace

TEST_CASE("multi-index basics") {
  const MultiIndex a{1, 0, 2}, b{1, 1, 2};
  CHECK(a.degree() == 3);
  CHECK(a.divides(b));
  CHECK_FALSE(b.divides(a));
  CHECK(b - a == MultiIndex{0, 1, 0});
  CHECK_THROWS_AS(a - b, StructuralError);
  CHECK(a.to_string() == "(1,0,2)");
  CHECK(GrlexDescending{}(MultiIndex{2, 0}, MultiIndex{0, 1}));
  CHECK(GrlexDescending{}(MultiIndex{1, 0}, MultiIndex{0, 1}));
}

TEST_CASE("canonical rendering") {
  const auto i = CoeffValue::imaginary_unit();
  Polynomial p(2);
  p.add_term({2, 1}, CoeffValue(2) - CoeffValue(3) * i);
  CHECK(p.to_string() == "(2 - 3*i)*x1^2*x2");
  Polynomial q(2);
  q.add_term({0, 1}, 2);
  q.add_term({2, 0}, 1);
  CHECK(q.to_string() == "x1^2 + 2*x2");
  Polynomial r(2);
  r.add_term({0, 1}, -1);
  r.add_term({0, 0}, CoeffValue(Rational(1, 2)));
  CHECK(r.to_string() == "-x2 + 1/2");
  CHECK(Polynomial(3).to_string() == "0");
}

TEST_CASE("partial derivative examples") {
  const std::size_t n = 2;
  CHECK(partial_derivative(x(n, 0).pow(2) * x(n, 1), 0) == CoeffValue(2) * x(n, 0) * x(n, 1));
  CHECK(partial_derivative(x(n, 0).pow(2), 1).is_zero());
  CHECK(partial_derivative(x(n, 0).pow(3), 0) == CoeffValue(3) * x(n, 0).pow(2));
  CHECK_THROWS(partial_derivative(x(n, 0), 2));
}

TEST_CASE("directional derivative examples") {
  CHECK(directional_derivative(x(1, 0).pow(2), PolyVectorField({x(1, 0)})) == CoeffValue(2) * x(1, 0).pow(2));
  const PolyVectorField hyper({x(2, 0), -x(2, 1)});
  CHECK(directional_derivative(x(2, 0) * x(2, 1), hyper).is_zero());
  CHECK(directional_derivative(x(1, 0).pow(3), PolyVectorField({CoeffValue(2) * x(1, 0)})) ==
        CoeffValue(6) * x(1, 0).pow(3));
  CHECK_THROWS_AS(directional_derivative(x(2, 0), PolyVectorField({x(1, 0)})), StructuralError);
}

TEST_CASE("lie bracket examples") {
  const PolyVectorField x0({x(2, 0), CoeffValue(2) * x(2, 1)});
  CHECK(lie_bracket(x0, x0).is_zero());
  const PolyVectorField f({Polynomial(2), x(2, 0).pow(2)});
  CHECK(lie_bracket(x0, f).is_zero());
  const PolyVectorField g({Polynomial(2), x(2, 0).pow(3)});
  const auto br = lie_bracket(x0, g);
  CHECK(br[0].is_zero());
  CHECK(br[1] == x(2, 0).pow(3));
}

TEST_CASE("substitution examples") {
  // p = w - x^2 on (x, w); w -> x^2
  const Polynomial p = x(2, 1) - x(2, 0).pow(2);
  CHECK(substitute(p, std::map<std::size_t, Polynomial>{{1, x(2, 0).pow(2)}}).is_zero());
  const std::vector<Polynomial> identity{x(1, 0)};
  CHECK(substitute(x(1, 0), identity) == x(1, 0));
  const std::vector<Polynomial> phi{x(2, 0) * x(2, 1)};
  const Polynomial phi2 = x(1, 0).pow(2);
  CHECK(substitute(phi2, phi) == x(2, 0).pow(2) * x(2, 1).pow(2));
  const std::vector<Polynomial> mixed{x(2, 0), x(3, 0)};
  CHECK_THROWS_AS(substitute(x(2, 0) + x(2, 1), mixed), StructuralError);
}

TEST_CASE("derivation rule on random inputs") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto p = random_poly(rng, n, 3), q = random_poly(rng, n, 3);
    const auto f = random_field(rng, n, 3);
    CHECK(directional_derivative(p * q, f) == directional_derivative(p, f) * q + p * directional_derivative(q, f));
  }
}

TEST_CASE("lie bracket antisymmetry and Jacobi identity") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto a = random_field(rng, n, 3), b = random_field(rng, n, 3), c = random_field(rng, n, 3);
    const auto ab = lie_bracket(a, b), ba = lie_bracket(b, a);
    for (std::size_t k = 0; k < n; ++k) CHECK((ab[k] + ba[k]).is_zero());
    const auto j1 = lie_bracket(a, lie_bracket(b, c));
    const auto j2 = lie_bracket(b, lie_bracket(c, a));
    const auto j3 = lie_bracket(c, lie_bracket(a, b));
    for (std::size_t k = 0; k < n; ++k) CHECK((j1[k] + j2[k] + j3[k]).is_zero());
  }
}

TEST_CASE("numeric evaluation") {
  SymbolTable t;
  const std::vector<std::complex<double>> pt{{2.0, 0.0}, {0.0, 1.0}};
  const Polynomial p = x(2, 0).pow(2) * x(2, 1) + Polynomial::constant(2, CoeffValue(3));
  CHECK(std::abs(evaluate(p, pt, t) - std::complex<double>(3.0, 4.0)) < 1e-15);
}
