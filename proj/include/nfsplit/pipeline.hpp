#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nfsplit/spec_file.hpp"

namespace nfsplit {

enum class Stage { analyze, embed, verify };
std::string to_string(Stage stage);

/// CLI overrides; unset fields fall back to the spec, then to the defaults.
struct PipelineOptions {
  Stage stage = Stage::verify;
  std::optional<std::uint32_t> degree_bound;
  std::optional<double> step;
  std::optional<double> t_final;
  std::optional<double> tol;
};

struct TermClassification {
  FieldTerm term;
  std::optional<ResonanceRelation> relation;  // empty when no split exists
};

struct EquilibriumReport {
  std::vector<double> phi0;
  ComplexMatrix eigen_matrix;
  std::optional<ComplexMatrix> real_matrix;
};

struct AnalysisReport {
  std::string name;
  Stage stage = Stage::analyze;
  std::size_t dimension = 0;
  SymbolTablePtr table;
  Spectrum spectrum;
  std::uint32_t degree_bound = kDefaultDegreeBound;

  std::vector<InvarianceRelation> invariances;
  SporadicSet sporadics;
  std::vector<std::pair<std::size_t, std::size_t>> centralizer;
  std::vector<TermClassification> terms;

  std::optional<EmbeddedSystem> embedding;
  std::optional<SymbolicChecks> checks;

  std::optional<VerifyOptions> verify_options;
  std::optional<SplitReport> split;
  std::optional<std::string> numeric_error;
  std::optional<double> failure_time;

  std::optional<std::vector<std::pair<double, double>>> equilibrium_box;
  std::optional<EquilibriumSearch> equilibria;
  std::vector<EquilibriumReport> asymptotics;

  /// 0 when every requested stage succeeded, 1 when a symbolic check
  /// failed or no initial point was given, 5 when numeric certification
  /// failed.
  int exit_code() const;
};

/// Throws NotInNormalForm, RewriteFailure (embed and verify stages, also
/// for an uncertified sporadic set). NonFinite is recorded in the report.
AnalysisReport run_pipeline(const SystemSpec& spec, const PipelineOptions& options = {});

std::string render_text(const AnalysisReport& report);
/// JSON document mirroring AnalysisReport.
std::string render_machine(const AnalysisReport& report);

}  // namespace nfsplit
