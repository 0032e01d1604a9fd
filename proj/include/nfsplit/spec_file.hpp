#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nfsplit/embed.hpp"
#include "nfsplit/real_form.hpp"
#include "nfsplit/verify.hpp"

namespace nfsplit {

inline constexpr int kSchemaVersion = 1;

/// Parses a coefficient literal such as "2 - 3*i", "1/2 + pi*i" or
/// "-(mu + 1)^2". Symbols must be declared in the table ("i" always is).
CoeffValue parse_coeff(std::string_view text, const SymbolTablePtr& table);
/// Parses a symbol monomial such as "1", "i", "pi^2*i".
SymbolMonomial parse_symbol_monomial(std::string_view text, const SymbolTable& table);

struct SymbolDecl {
  std::string name;
  double numeric_value_real = 0.0;
  double numeric_value_imag = 0.0;

  friend bool operator==(const SymbolDecl&, const SymbolDecl&) = default;
};

struct FieldTerm {
  std::size_t component = 1;  // 1-based
  MultiIndex exponents;
  CoeffValue coeff;

  friend bool operator==(const FieldTerm&, const FieldTerm&) = default;
};

struct VerifySettings {
  std::vector<CoeffValue> x0;  // in the coordinates of field_terms
  double t_final = 1.0;
  double step = 1e-3;
  double tol = 1e-6;

  friend bool operator==(const VerifySettings&, const VerifySettings&) = default;
};

struct EquilibriumSettings {
  std::vector<std::pair<double, double>> box;
  double resolution = 1e-2;

  friend bool operator==(const EquilibriumSettings&, const EquilibriumSettings&) = default;
};

enum class FieldBasis { eigen, real };

/// In-memory form of a spec file.
struct SystemSpec {
  int schema_version = kSchemaVersion;
  std::string name;
  std::string description;
  std::size_t dimension = 0;
  std::vector<SymbolDecl> symbols;
  SymbolTablePtr table;
  std::vector<CoeffValue> eigenvalues;
  std::vector<FieldTerm> field_terms;
  FieldBasis field_basis = FieldBasis::eigen;
  std::vector<RealBlock> real_blocks;
  std::uint32_t degree_bound = kDefaultDegreeBound;
  std::optional<VerifySettings> verify;
  std::optional<EquilibriumSettings> equilibria;

  Spectrum spectrum() const { return Spectrum(eigenvalues); }
  /// The field in eigencoordinates (converted when given in real form).
  PolyVectorField eigen_field() const;
  /// The coordinate change, when real blocks are declared.
  std::optional<RealToEigen> coordinate_change() const;
  /// verify.x0 in eigencoordinates, evaluated numerically.
  ComplexVector eigen_initial_point() const;
};

bool operator==(const SystemSpec& a, const SystemSpec& b);

/// Parses and validates a spec document. Throws ParseError carrying the
/// line/column (syntax) or the JSON path of the offending field.
SystemSpec parse_spec(std::string_view text);
SystemSpec load_spec(const std::string& path);
/// Canonical JSON text; parse_spec(serialize_spec(s)) == s.
std::string serialize_spec(const SystemSpec& spec);

}  // namespace nfsplit
