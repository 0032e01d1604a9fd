#include "nfsplit/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "nfsplit/errors.hpp"

namespace nfsplit {

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::analyze:
      return "analyze";
    case Stage::embed:
      return "embed";
    case Stage::verify:
      return "verify";
  }
  return "?";
}

int AnalysisReport::exit_code() const {
  if (checks && !checks->all()) return 1;
  if (stage == Stage::verify) {
    if (numeric_error) return failure_time ? 5 : 1;
    if (!split || !split->certified) return 5;
  }
  return 0;
}

AnalysisReport run_pipeline(const SystemSpec& spec, const PipelineOptions& options) {
  AnalysisReport report;
  report.name = spec.name;
  report.stage = options.stage;
  report.dimension = spec.dimension;
  report.table = spec.table;
  report.spectrum = spec.spectrum();
  report.degree_bound = options.degree_bound.value_or(spec.degree_bound);

  const NormalFormSystem sys(report.spectrum, spec.eigen_field());

  report.invariances = elementary_invariance_relations(report.spectrum);
  report.sporadics = sporadic_resonances(report.spectrum, report.degree_bound);
  report.centralizer = linear_centralizer_basis(report.spectrum);
  for (std::size_t a = 0; a < sys.dimension(); ++a) {
    for (const auto& [mu, c] : sys.field()[a].terms()) {
      report.terms.push_back({FieldTerm{a + 1, mu, c}, std::nullopt});
    }
  }
  for (auto& tc : report.terms) {
    const auto& t = tc.term;
    if (!t.coeff.is_zero()) {
      try {
        tc.relation = decompose_resonance(t.exponents, t.component - 1, report.spectrum, report.sporadics,
                                          report.invariances);
      } catch (const NoDecomposition&) {
      }
    }
  }
  if (options.stage == Stage::analyze) return report;

  report.embedding = build_embedding(sys, report.sporadics, report.invariances);
  report.checks = symbolic_checks(sys, *report.embedding);
  if (options.stage == Stage::embed) return report;

  VerifyOptions vo;
  if (spec.verify) {
    vo.t_final = spec.verify->t_final;
    vo.step = spec.verify->step;
    vo.tol = spec.verify->tol;
  }
  if (options.t_final) vo.t_final = *options.t_final;
  if (options.step) vo.step = *options.step;
  if (options.tol) vo.tol = *options.tol;
  report.verify_options = vo;

  const SymbolTable& table = *spec.table;
  if (!spec.verify) {
    report.numeric_error = "no initial point (verify.x0) in the spec";
  } else {
    try {
      report.split = verify_split(sys, *report.embedding, table, spec.eigen_initial_point(), vo);
    } catch (const NonFinite& e) {
      report.numeric_error = e.what();
      report.failure_time = e.time();
    }
  }

  if (spec.equilibria && report.embedding->m > 0) {
    report.equilibrium_box = spec.equilibria->box;
    report.equilibria =
        phi_equilibria(report.embedding->phi_rhs, table, spec.equilibria->box, spec.equilibria->resolution);
    const auto change = spec.coordinate_change();
    for (const auto& p : report.equilibria->points) {
      EquilibriumReport er;
      er.phi0 = p;
      const ComplexVector phi0(p.begin(), p.end());
      er.eigen_matrix = asymptotic_linear_system(*report.embedding, table, phi0);
      if (change) er.real_matrix = asymptotic_linear_system(*report.embedding, table, phi0, *change);
      report.asymptotics.push_back(std::move(er));
    }
  }
  return report;
}

// --- rendering ---------------------------------------------------------------

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

double clean(double v) { return std::abs(v) < 1e-14 ? 0.0 : v; }

std::string imag_text(double im) { return im == 1.0 ? "i" : fmt("%.10g", im) + "*i"; }

std::string complex_text(Complex z) {
  const double re = clean(z.real());
  const double im = clean(z.imag());
  if (im == 0.0) return fmt("%.10g", re);
  if (re == 0.0) return (im < 0 ? "-" : "") + imag_text(std::abs(im));
  return fmt("%.10g", re) + (im < 0 ? " - " : " + ") + imag_text(std::abs(im));
}

std::string matrix_text(const ComplexMatrix& m, const std::string& indent) {
  std::string out;
  for (const auto& row : m) {
    out += indent + "[";
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ", ";
      out += complex_text(row[k]);
    }
    out += "]\n";
  }
  return out;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string decomposition_text(const Decomposition& d, const std::vector<InvarianceRelation>& inv) {
  std::string out = d.base ? d.base->to_string() : "0";
  for (auto k : d.invariances) out += " + " + inv[k].sigma.to_string();
  return out;
}

std::string term_text(const FieldTerm& t, std::size_t n) {
  Polynomial p(n);
  p.add_term(t.exponents, t.coeff);
  return p.to_string(default_names(n));
}

}  // namespace

std::string render_text(const AnalysisReport& r) {
  std::ostringstream out;
  const auto n = r.dimension;
  out << "system: " << (r.name.empty() ? "(unnamed)" : r.name) << "\n";
  out << "stage: " << to_string(r.stage) << "\n";
  out << "dimension: " << n << "\n";
  out << "eigenvalues:";
  for (std::size_t k = 0; k < n; ++k) out << (k ? ", " : " ") << r.spectrum.lambdas()[k].to_string();
  out << "\n\n";

  out << "elementary invariance relations: " << r.invariances.size() << "\n";
  for (std::size_t k = 0; k < r.invariances.size(); ++k) {
    out << "  sigma" << k + 1 << " = " << r.invariances[k].sigma.to_string() << "\n";
  }
  out << "sporadic resonances: " << r.sporadics.relations.size() << " ("
      << (r.sporadics.certified_complete ? "certified complete" : "NOT certified") << ", degree bound "
      << r.sporadics.degree_bound << ", max order " << r.sporadics.max_order << ")\n";
  for (const auto& s : r.sporadics.relations) {
    out << "  " << s.mu.to_string() << " -> lambda" << s.alpha + 1 << "\n";
  }
  out << "linear centralizer dimension: " << r.centralizer.size() << "\n";
  out << "field terms in eigencoordinates: " << r.terms.size() << "\n";
  for (const auto& t : r.terms) {
    out << "  component " << t.term.component << ": " << term_text(t.term, n) << "  ";
    if (!t.relation) {
      out << "unclassified\n";
      continue;
    }
    out << to_string(t.relation->kind);
    if (t.relation->kind == ResonanceKind::composite && t.relation->decomposition) {
      out << " = " << decomposition_text(*t.relation->decomposition, r.invariances);
    }
    out << "\n";
  }

  if (r.embedding) {
    out << "\nembedded system:\n" << render_embedding(*r.embedding);
  }
  if (r.checks) {
    out << "\nsymbolic checks:\n";
    out << "  manifold invariant: " << yes_no(r.checks->manifold_invariant) << "\n";
    out << "  phi autonomous: " << yes_no(r.checks->phi_autonomous) << "\n";
    out << "  quasi-linear: " << yes_no(r.checks->quasi_linear) << "\n";
    out << "  diagonal product: "
        << (r.checks->diagonal_product ? yes_no(*r.checks->diagonal_product) : std::string("n/a")) << "\n";
  }

  if (r.verify_options) {
    const auto& vo = *r.verify_options;
    out << "\nsplit verification (t_final " << fmt("%g", vo.t_final) << ", step " << fmt("%g", vo.step) << ", tol "
        << fmt("%g", vo.tol) << "):\n";
    if (r.split) {
      out << "  max psi residual: " << fmt("%.3e", r.split->max_psi_residual) << "\n";
      out << "  max phi residual: " << fmt("%.3e", r.split->max_phi_residual) << "\n";
      out << "  max projection error: " << fmt("%.3e", r.split->max_projection_error) << "\n";
      out << "  steps: " << r.split->steps << "\n";
      out << "  certified: " << yes_no(r.split->certified) << "\n";
    }
    if (r.numeric_error) out << "  error: " << *r.numeric_error << "\n";
  }
  if (r.equilibria) {
    out << "\nphi equilibria in box";
    for (const auto& [lo, hi] : *r.equilibrium_box) out << " [" << fmt("%g", lo) << ", " << fmt("%g", hi) << "]";
    out << ":\n";
    if (r.equilibria->unsupported) {
      out << "  unsupported (more than two phi variables)\n";
    } else if (r.equilibria->degenerate) {
      out << "  degenerate: the phi right-hand side vanishes identically\n";
    } else if (r.asymptotics.empty()) {
      out << "  none found\n";
    }
    for (const auto& e : r.asymptotics) {
      out << "  phi0 = (";
      for (std::size_t k = 0; k < e.phi0.size(); ++k) out << (k ? ", " : "") << fmt("%.10g", clean(e.phi0[k]));
      out << ")\n    limit matrix (eigencoordinates):\n" << matrix_text(e.eigen_matrix, "      ");
      if (e.real_matrix) out << "    limit matrix (real coordinates):\n" << matrix_text(*e.real_matrix, "      ");
    }
    out << "  note: periodic phi orbits are not detected\n";
  }
  return out.str();
}

std::string render_machine(const AnalysisReport& r) {
  using json = nlohmann::ordered_json;
  const auto n = r.dimension;
  auto complex_json = [](Complex z) { return json::array({clean(z.real()), clean(z.imag())}); };
  auto matrix_json = [&](const ComplexMatrix& m) {
    json rows = json::array();
    for (const auto& row : m) {
      json jr = json::array();
      for (auto z : row) jr.push_back(complex_json(z));
      rows.push_back(jr);
    }
    return rows;
  };
  auto poly_json = [](const Polynomial& p, const std::vector<std::string>& names) { return p.to_string(names); };

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = r.name;
  doc["stage"] = to_string(r.stage);
  doc["dimension"] = n;
  json eig = json::array();
  for (const auto& l : r.spectrum.lambdas()) eig.push_back(l.to_string());
  doc["eigenvalues"] = eig;

  json inv = json::array();
  for (const auto& s : r.invariances) inv.push_back({{"sigma", s.sigma.exponents()}, {"elementary", s.elementary}});
  doc["invariance_relations"] = inv;

  json spor = json::array();
  for (const auto& s : r.sporadics.relations) {
    spor.push_back({{"mu", s.mu.exponents()}, {"component", s.alpha + 1}, {"order", s.order()}});
  }
  doc["sporadic_resonances"] = {{"certified_complete", r.sporadics.certified_complete},
                                {"degree_bound", r.sporadics.degree_bound},
                                {"max_order", r.sporadics.max_order},
                                {"relations", spor}};
  json units = json::array();
  for (auto [beta, alpha] : r.centralizer) units.push_back({beta + 1, alpha + 1});
  doc["centralizer"] = {{"dimension", r.centralizer.size()}, {"units", units}};

  json terms = json::array();
  for (const auto& t : r.terms) {
    json jt = {{"component", t.term.component}, {"exponents", t.term.exponents.exponents()},
               {"coeff", t.term.coeff.to_string()}};
    if (t.relation) {
      jt["kind"] = to_string(t.relation->kind);
      if (t.relation->decomposition) {
        const auto& d = *t.relation->decomposition;
        jt["decomposition"] = {{"base", d.base ? json(d.base->exponents()) : json(nullptr)},
                               {"invariances", d.invariances}};
      }
    } else {
      jt["kind"] = nullptr;
    }
    terms.push_back(jt);
  }
  doc["field_terms"] = terms;

  if (r.embedding) {
    const auto& e = *r.embedding;
    std::vector<std::string> phi_names;
    for (std::size_t k = 0; k < e.m; ++k) phi_names.push_back("phi" + std::to_string(k + 1));
    json w = json::array();
    for (const auto& d : e.w_defs) w.push_back({{"mu", d.mu.exponents()}, {"target", d.target + 1}});
    json phi = json::array();
    for (const auto& s : e.phi_defs) phi.push_back(s.exponents());
    json rhs = json::array();
    for (const auto& p : e.phi_rhs) rhs.push_back(poly_json(p, phi_names));
    json mat = json::array();
    for (const auto& row : e.coeff_matrix) {
      json jr = json::array();
      for (const auto& p : row) jr.push_back(poly_json(p, phi_names));
      mat.push_back(jr);
    }
    doc["embedding"] = {{"text", render_embedding(e)}, {"variables", e.variable_names()},
                        {"w", w},                      {"phi", phi},
                        {"phi_rhs", rhs},              {"coeff_matrix", mat}};
  }
  if (r.checks) {
    doc["checks"] = {{"manifold_invariant", r.checks->manifold_invariant},
                     {"phi_autonomous", r.checks->phi_autonomous},
                     {"quasi_linear", r.checks->quasi_linear},
                     {"diagonal_product", r.checks->diagonal_product ? json(*r.checks->diagonal_product) : json(nullptr)}};
  }
  if (r.verify_options) {
    json v = {{"t_final", r.verify_options->t_final}, {"step", r.verify_options->step}, {"tol", r.verify_options->tol}};
    if (r.split) {
      v["max_psi_residual"] = r.split->max_psi_residual;
      v["max_phi_residual"] = r.split->max_phi_residual;
      v["max_projection_error"] = r.split->max_projection_error;
      v["steps"] = r.split->steps;
      v["certified"] = r.split->certified;
    }
    if (r.numeric_error) v["error"] = *r.numeric_error;
    if (r.failure_time) v["failure_time"] = *r.failure_time;
    doc["split"] = v;
  }
  if (r.equilibria) {
    json pts = json::array();
    for (const auto& e : r.asymptotics) {
      json jp = {{"phi0", e.phi0}, {"limit_matrix_eigen", matrix_json(e.eigen_matrix)}};
      if (e.real_matrix) jp["limit_matrix_real"] = matrix_json(*e.real_matrix);
      pts.push_back(jp);
    }
    doc["equilibria"] = {{"degenerate", r.equilibria->degenerate},
                         {"unsupported", r.equilibria->unsupported},
                         {"points", pts}};
  }
  doc["exit_code"] = r.exit_code();
  return doc.dump(2) + "\n";
}

}  // namespace nfsplit
