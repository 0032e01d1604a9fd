#include "nfsplit/coeff.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "nfsplit/errors.hpp"

namespace nfsplit {

Rational parse_rational(std::string_view text) {
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  std::string_view body = text;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
  if (!digits(num) || !digits(den)) {
    throw ParseError("", "malformed rational '" + std::string(text) + "'");
  }
  mpz_class n{std::string(num)};
  mpz_class d{std::string(den)};
  if (d == 0) throw ParseError("", "zero denominator in '" + std::string(text) + "'");
  if (!text.empty() && text.front() == '-') n = -n;
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) {
  // mpq_get_d truncates; pick whichever neighbour is closer.
  const double t = q.get_d();
  if (!std::isfinite(t)) return t;
  const double up = std::nextafter(t, std::numeric_limits<double>::infinity());
  const double down = std::nextafter(t, -std::numeric_limits<double>::infinity());
  double best = t;
  Rational best_err = abs(q - Rational(t));
  for (double c : {up, down}) {
    if (!std::isfinite(c)) continue;
    Rational err = abs(q - Rational(c));
    if (err < best_err) {
      best_err = err;
      best = c;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------

SymbolTable::SymbolTable() : names_{"i"}, values_{{0.0, 1.0}} {}

std::size_t SymbolTable::declare(std::string name, std::complex<double> value) {
  if (name.empty()) throw StructuralError("empty symbol name");
  if (!(std::isalpha(static_cast<unsigned char>(name.front())) || name.front() == '_')) {
    throw StructuralError("symbol name must start with a letter: '" + name + "'");
  }
  for (unsigned char c : name) {
    if (!(std::isalnum(c) || c == '_')) throw StructuralError("invalid symbol name '" + name + "'");
  }
  if (find(name)) throw StructuralError("duplicate symbol '" + name + "'");
  names_.push_back(std::move(name));
  values_.push_back(value);
  return names_.size() - 1;
}

std::optional<std::size_t> SymbolTable::find(std::string_view name) const {
  for (std::size_t k = 0; k < names_.size(); ++k) {
    if (names_[k] == name) return k;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

SymbolMonomial SymbolMonomial::symbol(std::size_t index, std::uint32_t exponent) {
  SymbolMonomial m;
  if (index == 0) exponent %= 2;  // caller wanting the sign of i^2 uses multiply()
  if (exponent > 0) m.powers_.emplace_back(static_cast<std::uint32_t>(index), exponent);
  return m;
}

std::uint32_t SymbolMonomial::exponent(std::size_t index) const {
  for (const auto& [k, e] : powers_) {
    if (k == index) return e;
  }
  return 0;
}

std::uint32_t SymbolMonomial::transcendental_degree() const {
  std::uint32_t d = 0;
  for (const auto& [k, e] : powers_) {
    if (k != 0) d += e;
  }
  return d;
}

std::string SymbolMonomial::to_string(const SymbolTable* table) const {
  if (powers_.empty()) return "1";
  std::string out;
  // Transcendentals first, the imaginary unit last: "pi^2*i".
  for (const auto& [k, e] : powers_) {
    if (k == 0) continue;
    if (!out.empty()) out += '*';
    out += table != nullptr ? table->name(k) : "s" + std::to_string(k);
    if (e > 1) out += "^" + std::to_string(e);
  }
  if (has_imaginary_unit()) {
    if (!out.empty()) out += '*';
    out += 'i';
  }
  return out;
}

std::pair<SymbolMonomial, int> multiply(const SymbolMonomial& a, const SymbolMonomial& b) {
  SymbolMonomial out;
  int sign = 1;
  auto ia = a.powers_.begin();
  auto ib = b.powers_.begin();
  auto push = [&](std::uint32_t k, std::uint32_t e) {
    if (k == 0) {
      if (e >= 2) sign = -sign;  // e is at most 2 here
      e %= 2;
    }
    if (e > 0) out.powers_.emplace_back(k, e);
  };
  while (ia != a.powers_.end() || ib != b.powers_.end()) {
    if (ib == b.powers_.end() || (ia != a.powers_.end() && ia->first < ib->first)) {
      push(ia->first, ia->second);
      ++ia;
    } else if (ia == a.powers_.end() || ib->first < ia->first) {
      push(ib->first, ib->second);
      ++ib;
    } else {
      push(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return {std::move(out), sign};
}

bool CanonicalOrder::operator()(const SymbolMonomial& a, const SymbolMonomial& b) const {
  const auto da = a.transcendental_degree();
  const auto db = b.transcendental_degree();
  if (da != db) return da < db;
  // Same degree: the first symbol where exponents differ decides; the larger
  // exponent sorts first.
  auto ia = a.powers().begin();
  auto ib = b.powers().begin();
  auto skip_i = [](auto& it, auto end) {
    if (it != end && it->first == 0) ++it;
  };
  skip_i(ia, a.powers().end());
  skip_i(ib, b.powers().end());
  while (ia != a.powers().end() && ib != b.powers().end()) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second != ib->second) return ia->second > ib->second;
    ++ia;
    ++ib;
  }
  if (ia != a.powers().end()) return true;
  if (ib != b.powers().end()) return false;
  return a.exponent(0) < b.exponent(0);
}

// ---------------------------------------------------------------------------

SymbolTablePtr common_table(const SymbolTablePtr& a, const SymbolTablePtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (*a == *b) return a;
  throw StructuralError("coefficients belong to different symbol tables");
}

CoeffValue::CoeffValue(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  if (q != 0) terms_.emplace(SymbolMonomial{}, std::move(q));
}

CoeffValue CoeffValue::imaginary_unit(SymbolTablePtr table) {
  return monomial(std::move(table), SymbolMonomial::symbol(0), Rational(1));
}

CoeffValue CoeffValue::symbol(const SymbolTablePtr& table, std::string_view name) {
  if (!table) throw StructuralError("symbol lookup without a symbol table");
  const auto index = table->find(name);
  if (!index) throw StructuralError("unknown symbol '" + std::string(name) + "'");
  return monomial(table, SymbolMonomial::symbol(*index), Rational(1));
}

CoeffValue CoeffValue::monomial(SymbolTablePtr table, const SymbolMonomial& mono, const Rational& coeff) {
  CoeffValue v;
  if (table) {
    for (const auto& [k, e] : mono.powers()) {
      if (k >= table->size()) throw StructuralError("symbol index out of range");
    }
  } else if (mono.transcendental_degree() > 0) {
    throw StructuralError("transcendental symbol without a symbol table");
  }
  v.table_ = std::move(table);
  Rational q = coeff;
  q.canonicalize();
  if (q != 0) v.terms_.emplace(mono, std::move(q));
  return v;
}

std::optional<Rational> CoeffValue::as_rational() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
  return std::nullopt;
}

void CoeffValue::adopt_table(const SymbolTablePtr& other) { table_ = common_table(table_, other); }

CoeffValue CoeffValue::operator-() const {
  CoeffValue out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

CoeffValue& CoeffValue::operator+=(const CoeffValue& rhs) {
  adopt_table(rhs.table_);
  for (const auto& [m, c] : rhs.terms_) {
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

CoeffValue& CoeffValue::operator-=(const CoeffValue& rhs) { return *this += -rhs; }

CoeffValue operator*(const CoeffValue& a, const CoeffValue& b) {
  CoeffValue out;
  out.table_ = common_table(a.table_, b.table_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto [m, sign] = multiply(ma, mb);
      Rational c = ca * cb;
      if (sign < 0) c = -c;
      auto [it, inserted] = out.terms_.try_emplace(std::move(m), c);
      if (!inserted) {
        it->second += c;
        if (it->second == 0) out.terms_.erase(it);
      }
    }
  }
  return out;
}

CoeffValue& CoeffValue::operator*=(const CoeffValue& rhs) { return *this = *this * rhs; }

bool operator==(const CoeffValue& a, const CoeffValue& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (a.table_ && b.table_ && a.table_ != b.table_ && !(*a.table_ == *b.table_)) return false;
  auto ib = b.terms_.begin();
  for (const auto& [m, c] : a.terms_) {
    if (!(ib->first == m) || ib->second != c) return false;
    ++ib;
  }
  return true;
}

std::string CoeffValue::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c < 0;
    const Rational mag = abs(c);
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    if (m.is_one()) {
      out += nfsplit::to_string(mag);
    } else {
      if (mag != 1) out += nfsplit::to_string(mag) + "*";
      out += m.to_string(table_.get());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::complex<double> eval_numeric(const CoeffValue& value, const SymbolTable& table) {
  std::complex<double> sum{0.0, 0.0};
  for (const auto& [m, c] : value.terms()) {
    std::complex<double> term{to_double(c), 0.0};
    for (const auto& [k, e] : m.powers()) {
      if (k >= table.size()) throw StructuralError("symbol index out of range in evaluation");
      term *= std::pow(table.value(k), static_cast<int>(e));
    }
    sum += term;
  }
  return sum;
}

std::complex<double> eval_numeric(const CoeffValue& value) {
  static const SymbolTable bare;
  return eval_numeric(value, value.table() ? *value.table() : bare);
}

std::vector<std::pair<SymbolMonomial, Rational>> rational_coordinates(const CoeffValue& value) {
  return {value.terms().begin(), value.terms().end()};
}

std::vector<Rational> rational_coordinates(const CoeffValue& value, std::span<const SymbolMonomial> basis) {
  std::vector<Rational> coords(basis.size());
  std::size_t matched = 0;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (auto it = value.terms().find(basis[k]); it != value.terms().end()) {
      coords[k] = it->second;
      ++matched;
    }
  }
  if (matched != value.terms().size()) {
    throw StructuralError("value " + value.to_string() + " has components outside the basis");
  }
  return coords;
}

NotInNormalForm::NotInNormalForm(std::vector<std::string> terms)
    : Error([&] {
        std::string msg = "field is not in normal form; non-resonant terms:";
        for (const auto& t : terms) msg += " " + t + ";";
        return msg;
      }()),
      terms_(std::move(terms)) {}

}  // namespace nfsplit
