#include "nfsplit/spec_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nfsplit/errors.hpp"

namespace nfsplit {

using json = nlohmann::json;

// --- coefficient literals --------------------------------------------------

namespace {

class CoeffParser {
 public:
  CoeffParser(std::string_view text, const SymbolTablePtr& table) : text_(text), table_(table) {}

  CoeffValue parse() {
    CoeffValue v = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("", "in coefficient '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  CoeffValue expr() {
    CoeffValue v;
    bool negate = false;
    if (accept('-')) {
      negate = true;
    } else {
      accept('+');
    }
    v = term();
    if (negate) v = -v;
    while (true) {
      if (accept('+')) {
        v += term();
      } else if (accept('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  CoeffValue term() {
    CoeffValue v = factor();
    while (true) {
      if (accept('*')) {
        v *= factor();
      } else if (accept('/')) {
        const CoeffValue d = factor();
        auto q = d.as_rational();
        if (!q) fail("division by a non-rational value");
        if (*q == 0) fail("division by zero");
        v *= CoeffValue(Rational(1) / *q);
      } else {
        return v;
      }
    }
  }

  CoeffValue factor() {
    CoeffValue base = atom();
    if (accept('^')) {
      skip_space();
      const auto e = integer();
      CoeffValue out(1);
      for (unsigned long k = 0; k < e; ++k) out *= base;
      return out;
    }
    return base;
  }

  unsigned long integer() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an integer");
    const auto digits = text_.substr(start, pos_ - start);
    if (digits.size() > 6) fail("exponent too large");
    return std::stoul(std::string(digits));
  }

  CoeffValue atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      CoeffValue v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return CoeffValue(Rational(mpz_class{std::string(text_.substr(start, pos_ - start))}));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      const auto name = text_.substr(start, pos_ - start);
      if (name == "i") return CoeffValue::imaginary_unit(table_);
      if (!table_ || !table_->find(name)) fail("unknown symbol '" + std::string(name) + "'");
      return CoeffValue::symbol(table_, name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const SymbolTablePtr& table_;
  std::size_t pos_ = 0;
};

}  // namespace

CoeffValue parse_coeff(std::string_view text, const SymbolTablePtr& table) { return CoeffParser(text, table).parse(); }

SymbolMonomial parse_symbol_monomial(std::string_view text, const SymbolTable& table) {
  SymbolMonomial out;
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ParseError("", "empty symbol monomial");
  if (s == "1") return out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = std::min(s.find('*', start), s.size());
    const std::string factor = s.substr(start, end - start);
    const auto caret = factor.find('^');
    const std::string name = factor.substr(0, caret);
    std::uint32_t exponent = 1;
    if (caret != std::string::npos) {
      const std::string digits = factor.substr(caret + 1);
      if (digits.empty() || digits.size() > 6 ||
          !std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw ParseError("", "bad exponent in symbol monomial '" + std::string(text) + "'");
      }
      exponent = static_cast<std::uint32_t>(std::stoul(digits));
    }
    const auto index = table.find(name);
    if (!index) throw ParseError("", "unknown symbol '" + name + "' in monomial '" + std::string(text) + "'");
    if (*index == 0 && exponent > 1) throw ParseError("", "write powers of i as signs: '" + std::string(text) + "'");
    if (out.exponent(*index) != 0) {
      throw ParseError("", "repeated factor in symbol monomial '" + std::string(text) + "'");
    }
    out = multiply(out, SymbolMonomial::symbol(*index, exponent)).first;
    if (end == s.size()) break;
    start = end + 1;
  }
  return out;
}

// --- spec files --------------------------------------------------------------

namespace {

[[noreturn]] void fail_at(const std::string& path, const std::string& what) { throw ParseError(path, what); }

const json& require(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail_at(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string child(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string item(const std::string& path, std::size_t k) { return path + "[" + std::to_string(k) + "]"; }

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail_at(path, "expected a string");
  return v.get<std::string>();
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) fail_at(path, "expected a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail_at(path, "expected an integer");
  return v.get<std::int64_t>();
}

const json& as_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail_at(path, "expected an array");
  return v;
}

template <typename Fn>
auto at_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    if (!e.where().empty()) throw;
    throw ParseError(path, e.what());
  } catch (const StructuralError& e) {
    throw ParseError(path, e.what());
  }
}

CoeffValue coeff_at(const json& v, const std::string& path, const SymbolTablePtr& table) {
  const auto text = as_string(v, path);
  return at_path(path, [&] { return parse_coeff(text, table); });
}

std::string block_kind(RealBlock::Kind k) { return k == RealBlock::Kind::rotation ? "rotation" : "real"; }

}  // namespace

SystemSpec parse_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("syntax", e.what());
  }
  if (!doc.is_object()) fail_at("", "top level must be an object");

  SystemSpec spec;
  spec.schema_version = static_cast<int>(as_int(require(doc, "schema_version", ""), "schema_version"));
  if (spec.schema_version != kSchemaVersion) {
    fail_at("schema_version", "unsupported schema version " + std::to_string(spec.schema_version));
  }
  static const std::set<std::string> known{"schema_version", "name",        "description", "dimension",
                                           "symbols",        "eigenvalues", "field_terms", "field_basis",
                                           "real_blocks",    "degree_bound", "verify",     "equilibria"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) fail_at(key, "unknown field");
  }
  if (doc.contains("name")) spec.name = as_string(doc["name"], "name");
  if (doc.contains("description")) spec.description = as_string(doc["description"], "description");

  const auto dim = as_int(require(doc, "dimension", ""), "dimension");
  if (dim < 1 || dim > 64) fail_at("dimension", "dimension must be between 1 and 64");
  spec.dimension = static_cast<std::size_t>(dim);
  const std::size_t n = spec.dimension;

  auto table = std::make_shared<SymbolTable>();
  if (doc.contains("symbols")) {
    const auto& syms = as_array(doc["symbols"], "symbols");
    for (std::size_t k = 0; k < syms.size(); ++k) {
      const std::string path = item("symbols", k);
      const auto& s = syms[k];
      if (!s.is_object()) fail_at(path, "expected an object");
      SymbolDecl decl;
      decl.name = as_string(require(s, "name", path), child(path, "name"));
      decl.numeric_value_real = as_double(require(s, "numeric_value_real", path), child(path, "numeric_value_real"));
      if (s.contains("numeric_value_imag")) {
        decl.numeric_value_imag = as_double(s["numeric_value_imag"], child(path, "numeric_value_imag"));
      }
      at_path(child(path, "name"), [&] {
        return table->declare(decl.name, {decl.numeric_value_real, decl.numeric_value_imag});
      });
      spec.symbols.push_back(std::move(decl));
    }
  }
  spec.table = table;

  const auto& eig = as_array(require(doc, "eigenvalues", ""), "eigenvalues");
  if (eig.size() != n) {
    fail_at("eigenvalues", "expected " + std::to_string(n) + " eigenvalues, got " + std::to_string(eig.size()));
  }
  for (std::size_t k = 0; k < n; ++k) {
    const std::string path = item("eigenvalues", k);
    const auto& pairs = as_array(eig[k], path);
    CoeffValue lambda;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const std::string ppath = item(path, p);
      const auto& pr = as_array(pairs[p], ppath);
      if (pr.size() != 2) fail_at(ppath, "expected a [symbol_monomial, rational] pair");
      const auto mono_text = as_string(pr[0], item(ppath, 0));
      const auto rat_text = as_string(pr[1], item(ppath, 1));
      const auto mono = at_path(item(ppath, 0), [&] { return parse_symbol_monomial(mono_text, *table); });
      const auto q = at_path(item(ppath, 1), [&] { return parse_rational(rat_text); });
      lambda += CoeffValue::monomial(spec.table, mono, q);
    }
    spec.eigenvalues.push_back(std::move(lambda));
  }

  if (doc.contains("field_terms")) {
    const auto& terms = as_array(doc["field_terms"], "field_terms");
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const std::string path = item("field_terms", k);
      const auto& t = terms[k];
      if (!t.is_object()) fail_at(path, "expected an object");
      FieldTerm term;
      const auto comp = as_int(require(t, "component", path), child(path, "component"));
      if (comp < 1 || static_cast<std::size_t>(comp) > n) {
        fail_at(child(path, "component"), "component must be in 1.." + std::to_string(n));
      }
      term.component = static_cast<std::size_t>(comp);
      const auto& exps = as_array(require(t, "exponents", path), child(path, "exponents"));
      if (exps.size() != n) {
        fail_at(child(path, "exponents"), "dimension mismatch: expected " + std::to_string(n) + " exponents, got " +
                                              std::to_string(exps.size()));
      }
      std::vector<std::uint32_t> mu;
      for (std::size_t e = 0; e < exps.size(); ++e) {
        const auto v = as_int(exps[e], item(child(path, "exponents"), e));
        if (v < 0 || v > 1000) fail_at(item(child(path, "exponents"), e), "exponent must be in 0..1000");
        mu.push_back(static_cast<std::uint32_t>(v));
      }
      term.exponents = MultiIndex(std::move(mu));
      term.coeff = coeff_at(require(t, "coeff", path), child(path, "coeff"), spec.table);
      spec.field_terms.push_back(std::move(term));
    }
  }

  if (doc.contains("field_basis")) {
    const auto basis = as_string(doc["field_basis"], "field_basis");
    if (basis == "eigen") {
      spec.field_basis = FieldBasis::eigen;
    } else if (basis == "real") {
      spec.field_basis = FieldBasis::real;
    } else {
      fail_at("field_basis", "expected \"eigen\" or \"real\"");
    }
  }

  if (doc.contains("real_blocks")) {
    const auto& blocks = as_array(doc["real_blocks"], "real_blocks");
    std::size_t total = 0;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const std::string path = item("real_blocks", k);
      const auto& b = blocks[k];
      if (!b.is_object()) fail_at(path, "expected an object");
      const auto kind = as_string(require(b, "kind", path), child(path, "kind"));
      RealBlock block;
      if (kind == "rotation") {
        block.kind = RealBlock::Kind::rotation;
        block.re = coeff_at(require(b, "re", path), child(path, "re"), spec.table);
        block.im = coeff_at(require(b, "im", path), child(path, "im"), spec.table);
      } else if (kind == "real") {
        block.kind = RealBlock::Kind::real;
        block.re = coeff_at(require(b, "value", path), child(path, "value"), spec.table);
      } else {
        fail_at(child(path, "kind"), "expected \"rotation\" or \"real\"");
      }
      total += block.size();
      spec.real_blocks.push_back(std::move(block));
    }
    if (total != n) fail_at("real_blocks", "blocks cover " + std::to_string(total) + " coordinates, expected " + std::to_string(n));
    const auto change = real_to_eigen(spec.real_blocks, spec.table);
    for (std::size_t k = 0; k < n; ++k) {
      if (!(change.spectrum[k] == spec.eigenvalues[k])) {
        fail_at(item("eigenvalues", k), "does not match real_blocks (expected " + change.spectrum[k].to_string() + ")");
      }
    }
  }
  if (spec.field_basis == FieldBasis::real && spec.real_blocks.empty()) {
    fail_at("field_basis", "a real field basis needs real_blocks");
  }

  if (doc.contains("degree_bound")) {
    const auto bound = as_int(doc["degree_bound"], "degree_bound");
    if (bound < 1 || bound > 64) fail_at("degree_bound", "degree bound must be between 1 and 64");
    spec.degree_bound = static_cast<std::uint32_t>(bound);
  }

  if (doc.contains("verify")) {
    const auto& v = doc["verify"];
    if (!v.is_object()) fail_at("verify", "expected an object");
    VerifySettings settings;
    const auto& x0 = as_array(require(v, "x0", "verify"), "verify.x0");
    if (x0.size() != n) fail_at("verify.x0", "expected " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k) settings.x0.push_back(coeff_at(x0[k], item("verify.x0", k), spec.table));
    if (v.contains("t_final")) settings.t_final = as_double(v["t_final"], "verify.t_final");
    if (v.contains("step")) settings.step = as_double(v["step"], "verify.step");
    if (v.contains("tol")) settings.tol = as_double(v["tol"], "verify.tol");
    if (!(settings.t_final > 0)) fail_at("verify.t_final", "must be positive");
    if (!(settings.step > 0)) fail_at("verify.step", "must be positive");
    if (!(settings.tol > 0)) fail_at("verify.tol", "must be positive");
    spec.verify = std::move(settings);
  }

  if (doc.contains("equilibria")) {
    const auto& e = doc["equilibria"];
    if (!e.is_object()) fail_at("equilibria", "expected an object");
    EquilibriumSettings settings;
    const auto& box = as_array(require(e, "box", "equilibria"), "equilibria.box");
    for (std::size_t k = 0; k < box.size(); ++k) {
      const auto& iv = as_array(box[k], item("equilibria.box", k));
      if (iv.size() != 2) fail_at(item("equilibria.box", k), "expected [lo, hi]");
      const double lo = as_double(iv[0], item(item("equilibria.box", k), 0));
      const double hi = as_double(iv[1], item(item("equilibria.box", k), 1));
      if (!(lo < hi)) fail_at(item("equilibria.box", k), "expected lo < hi");
      settings.box.emplace_back(lo, hi);
    }
    if (e.contains("resolution")) settings.resolution = as_double(e["resolution"], "equilibria.resolution");
    if (!(settings.resolution > 0)) fail_at("equilibria.resolution", "must be positive");
    spec.equilibria = std::move(settings);
  }
  return spec;
}

SystemSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open spec file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_spec(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.where(), std::string(e.what()).substr(e.where().empty() ? 0 : e.where().size() + 2));
  }
}

std::string serialize_spec(const SystemSpec& spec) {
  json doc = json::object();
  doc["schema_version"] = spec.schema_version;
  if (!spec.name.empty()) doc["name"] = spec.name;
  if (!spec.description.empty()) doc["description"] = spec.description;
  doc["dimension"] = spec.dimension;
  json syms = json::array();
  for (const auto& s : spec.symbols) {
    syms.push_back({{"name", s.name}, {"numeric_value_real", s.numeric_value_real}, {"numeric_value_imag", s.numeric_value_imag}});
  }
  doc["symbols"] = syms;
  json eig = json::array();
  for (const auto& l : spec.eigenvalues) {
    json pairs = json::array();
    for (const auto& [m, q] : l.terms()) pairs.push_back({m.to_string(spec.table.get()), to_string(q)});
    eig.push_back(pairs);
  }
  doc["eigenvalues"] = eig;
  json terms = json::array();
  for (const auto& t : spec.field_terms) {
    terms.push_back({{"component", t.component}, {"exponents", t.exponents.exponents()}, {"coeff", t.coeff.to_string()}});
  }
  doc["field_terms"] = terms;
  doc["field_basis"] = spec.field_basis == FieldBasis::real ? "real" : "eigen";
  if (!spec.real_blocks.empty()) {
    json blocks = json::array();
    for (const auto& b : spec.real_blocks) {
      if (b.kind == RealBlock::Kind::rotation) {
        blocks.push_back({{"kind", block_kind(b.kind)}, {"re", b.re.to_string()}, {"im", b.im.to_string()}});
      } else {
        blocks.push_back({{"kind", block_kind(b.kind)}, {"value", b.re.to_string()}});
      }
    }
    doc["real_blocks"] = blocks;
  }
  doc["degree_bound"] = spec.degree_bound;
  if (spec.verify) {
    json x0 = json::array();
    for (const auto& c : spec.verify->x0) x0.push_back(c.to_string());
    doc["verify"] = {{"x0", x0}, {"t_final", spec.verify->t_final}, {"step", spec.verify->step}, {"tol", spec.verify->tol}};
  }
  if (spec.equilibria) {
    json box = json::array();
    for (const auto& [lo, hi] : spec.equilibria->box) box.push_back({lo, hi});
    doc["equilibria"] = {{"box", box}, {"resolution", spec.equilibria->resolution}};
  }
  return doc.dump(2) + "\n";
}

bool operator==(const SystemSpec& a, const SystemSpec& b) {
  auto same_blocks = [](const std::vector<RealBlock>& x, const std::vector<RealBlock>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k].kind != y[k].kind || !(x[k].re == y[k].re) || !(x[k].im == y[k].im)) return false;
    }
    return true;
  };
  const bool tables = (!a.table && !b.table) || (a.table && b.table && *a.table == *b.table);
  return a.schema_version == b.schema_version && a.name == b.name && a.description == b.description &&
         a.dimension == b.dimension && a.symbols == b.symbols && tables && a.eigenvalues == b.eigenvalues &&
         a.field_terms == b.field_terms && a.field_basis == b.field_basis && same_blocks(a.real_blocks, b.real_blocks) &&
         a.degree_bound == b.degree_bound && a.verify == b.verify && a.equilibria == b.equilibria;
}

// ---------------------------------------------------------------------------

std::optional<RealToEigen> SystemSpec::coordinate_change() const {
  if (real_blocks.empty()) return std::nullopt;
  return real_to_eigen(real_blocks, table);
}

PolyVectorField SystemSpec::eigen_field() const {
  std::vector<Polynomial> comps(dimension, Polynomial(dimension));
  for (const auto& t : field_terms) comps[t.component - 1].add_term(t.exponents, t.coeff);
  PolyVectorField field(std::move(comps));
  if (field_basis == FieldBasis::real) return to_eigen_coordinates(field, *coordinate_change());
  return field;
}

ComplexVector SystemSpec::eigen_initial_point() const {
  if (!verify) throw StructuralError("spec has no verify.x0 initial point");
  ComplexVector x;
  for (const auto& c : verify->x0) x.push_back(eval_numeric(c, *table));
  if (field_basis == FieldBasis::eigen) return x;
  const auto change = coordinate_change();
  ComplexVector xi(dimension);
  for (std::size_t i = 0; i < dimension; ++i) {
    for (std::size_t k = 0; k < dimension; ++k) xi[i] += eval_numeric(change->lambda[i][k], *table) * x[k];
  }
  return xi;
}

}  // namespace nfsplit
