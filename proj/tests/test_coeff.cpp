#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "nfsplit/coeff.hpp"
#include "nfsplit/errors.hpp"

using namespace nfsplit;

namespace {

SymbolTablePtr pi_table() {
  auto t = std::make_shared<SymbolTable>();
  t->declare("pi", {3.141592653589793, 0.0});
  t->declare("mu", {0.5, 0.0});
  return t;
}

CoeffValue random_value(std::mt19937& rng, const SymbolTablePtr& t) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7), pick(0, 5);
  CoeffValue v;
  const CoeffValue i = CoeffValue::imaginary_unit(t);
  const CoeffValue pi = CoeffValue::symbol(t, "pi");
  const CoeffValue mu = CoeffValue::symbol(t, "mu");
  const CoeffValue basis[] = {CoeffValue(1), i, pi, pi * i, mu, mu * mu};
  for (int k = 0; k < 3; ++k) v += CoeffValue(Rational(num(rng), den(rng))) * basis[pick(rng)];
  return v;
}

}  // namespace

TEST_CASE("rationals are reduced and parsed exactly") {
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational("-2/4") == Rational(-1, 2));
  CHECK(to_string(parse_rational("10/5")) == "2");
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK(to_double(Rational(1, 3)) == 1.0 / 3.0);
  CHECK(to_double(Rational(2, 3)) == 2.0 / 3.0);
}

TEST_CASE("ring operation examples") {
  const auto i = CoeffValue::imaginary_unit();
  CHECK(CoeffValue(Rational(1, 2)) + CoeffValue(Rational(1, 2)) == CoeffValue(1));
  CHECK(i * i == CoeffValue(-1));
  CHECK(i * (-i) == CoeffValue(1));
  CHECK((CoeffValue(2) - CoeffValue(3) * i).to_string() == "2 - 3*i");
  CHECK(CoeffValue(0).to_string() == "0");
  CHECK(CoeffValue(0).is_zero());
}

TEST_CASE("symbol tables") {
  auto t = pi_table();
  CHECK(t->name(0) == "i");
  CHECK(t->find("pi").has_value());
  CHECK_FALSE(t->find("e").has_value());
  auto dup = std::make_shared<SymbolTable>();
  dup->declare("a", {1.0, 0.0});
  CHECK_THROWS_AS(dup->declare("a", {2.0, 0.0}), StructuralError);
  CHECK_THROWS_AS(dup->declare("i", {2.0, 0.0}), StructuralError);
  CHECK_THROWS_AS(CoeffValue::symbol(t, "nope"), StructuralError);
  const auto v = CoeffValue(Rational(1, 2)) + CoeffValue::symbol(t, "pi") * CoeffValue::imaginary_unit(t);
  CHECK(v.to_string() == "1/2 + pi*i");
}

TEST_CASE("mismatched tables are a structural error") {
  auto a = pi_table();
  auto other = std::make_shared<SymbolTable>();
  other->declare("pi", {3.0, 0.0});
  const SymbolTablePtr b = other;
  // equal content is the same table
  CHECK_NOTHROW(CoeffValue::symbol(a, "pi") + CoeffValue::symbol(pi_table(), "pi"));
  CHECK_THROWS_AS(CoeffValue::symbol(a, "pi") + CoeffValue::symbol(b, "pi"), StructuralError);
  // table-free values mix with either
  CHECK_NOTHROW(CoeffValue::symbol(a, "pi") + CoeffValue::imaginary_unit());
}

TEST_CASE("eval_numeric examples") {
  auto t = pi_table();
  CHECK(eval_numeric(CoeffValue(Rational(1, 2)), *t) == std::complex<double>(0.5, 0.0));
  CHECK(eval_numeric(CoeffValue::imaginary_unit(), *t) == std::complex<double>(0.0, 1.0));
  CHECK(eval_numeric(CoeffValue::symbol(t, "pi"), *t) == std::complex<double>(3.141592653589793, 0.0));
}

TEST_CASE("rational_coordinates examples") {
  auto t = pi_table();
  const auto i = CoeffValue::imaginary_unit(t);
  const auto pi = CoeffValue::symbol(t, "pi");
  const std::vector<SymbolMonomial> b2{SymbolMonomial{}, SymbolMonomial::symbol(0)};
  const auto c1 = rational_coordinates(CoeffValue(2) - CoeffValue(3) * i, b2);
  CHECK(c1 == std::vector<Rational>{2, -3});
  const auto c0 = rational_coordinates(CoeffValue(0), b2);
  CHECK(c0 == std::vector<Rational>{0, 0});
  const auto pidx = *t->find("pi");
  std::vector<SymbolMonomial> b4{SymbolMonomial{}, SymbolMonomial::symbol(0), SymbolMonomial::symbol(pidx),
                                 multiply(SymbolMonomial::symbol(pidx), SymbolMonomial::symbol(0)).first};
  std::sort(b4.begin(), b4.end(), CanonicalOrder{});
  const auto c2 = rational_coordinates(CoeffValue(Rational(1, 2)) + pi * i, b4);
  CHECK(c2 == std::vector<Rational>{Rational(1, 2), 0, 0, 1});
  CHECK_THROWS_AS(rational_coordinates(pi, b2), StructuralError);
}

TEST_CASE("ring axioms on random values") {
  auto t = pi_table();
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_value(rng, t), b = random_value(rng, t), c = random_value(rng, t);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == CoeffValue(0));
    CHECK(a * CoeffValue(1) == a);
  }
}

TEST_CASE("eval_numeric is a ring homomorphism") {
  auto t = pi_table();
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_value(rng, t), b = random_value(rng, t);
    const auto ea = eval_numeric(a, *t), eb = eval_numeric(b, *t);
    const auto sum = eval_numeric(a + b, *t), prod = eval_numeric(a * b, *t);
    CHECK(std::abs(sum - (ea + eb)) <= 1e-12 * std::max(1.0, std::abs(sum)));
    CHECK(std::abs(prod - ea * eb) <= 1e-12 * std::max(1.0, std::abs(prod)));
  }
}

TEST_CASE("rational_coordinates is Q-linear") {
  auto t = pi_table();
  std::mt19937 rng(13);
  std::vector<SymbolMonomial> basis;
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_value(rng, t), b = random_value(rng, t);
    Rational q(trial - 50, 7);
    q.canonicalize();
    std::set<SymbolMonomial, CanonicalOrder> mons;
    for (const auto& v : {a, b}) {
      for (const auto& [m, c] : v.terms()) mons.insert(m);
    }
    basis.assign(mons.begin(), mons.end());
    const auto ca = rational_coordinates(a, basis), cb = rational_coordinates(b, basis);
    const auto cs = rational_coordinates(a + b, basis);
    const auto cq = rational_coordinates(CoeffValue(q) * a, basis);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      CHECK(cs[k] == ca[k] + cb[k]);
      CHECK(cq[k] == q * ca[k]);
    }
  }
}

TEST_CASE("large numerators stay exact") {
  CoeffValue v(1);
  for (int k = 0; k < 40; ++k) v *= CoeffValue(Rational(1000003, 7));
  for (int k = 0; k < 40; ++k) v *= CoeffValue(Rational(7, 1000003));
  CHECK(v == CoeffValue(1));
}
