#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfsplit/errors.hpp"
#include "nfsplit/pipeline.hpp"
#include "nfsplit/resonance.hpp"
#include "nfsplit/spec_file.hpp"

namespace py = pybind11;
using namespace nfsplit;

namespace {

using Symbols = std::map<std::string, std::complex<double>>;
using Index = std::vector<std::uint32_t>;

Spectrum make_spectrum(const std::vector<std::string>& eigenvalues, const Symbols& symbols) {
  auto table = std::make_shared<SymbolTable>();
  for (const auto& [name, value] : symbols) table->declare(name, value);
  const SymbolTablePtr shared = table;
  std::vector<CoeffValue> l;
  l.reserve(eigenvalues.size());
  for (const auto& e : eigenvalues) l.push_back(parse_coeff(e, shared));
  return Spectrum(std::move(l));
}

Stage parse_stage(const std::string& s) {
  if (s == "analyze") return Stage::analyze;
  if (s == "embed") return Stage::embed;
  if (s == "verify") return Stage::verify;
  throw py::value_error("unknown stage '" + s + "'");
}

std::string run(const std::string& spec_text, const std::string& stage, const std::string& format,
                std::optional<std::uint32_t> degree_bound) {
  PipelineOptions opts;
  opts.stage = parse_stage(stage);
  opts.degree_bound = degree_bound;
  const auto report = run_pipeline(parse_spec(spec_text), opts);
  if (format == "text") return render_text(report);
  if (format == "machine") return render_machine(report);
  throw py::value_error("unknown format '" + format + "'");
}

py::dict relation_dict(const ResonanceRelation& r) {
  py::dict d;
  d["mu"] = r.mu.exponents();
  d["alpha"] = r.alpha;
  d["kind"] = to_string(r.kind);
  if (r.decomposition) {
    d["base"] = r.decomposition->base ? py::cast(r.decomposition->base->exponents()) : py::none();
    d["invariances"] = r.decomposition->invariances;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_nfsplit, m) {
  m.doc() = "Resonance analysis and split embedding of polynomial normal forms";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<NotInNormalForm>(m, "NotInNormalForm", base.ptr());
  py::register_exception<NoDecomposition>(m, "NoDecomposition", base.ptr());
  py::register_exception<NotInvariant>(m, "NotInvariant", base.ptr());
  py::register_exception<RewriteFailure>(m, "RewriteFailure", base.ptr());
  py::register_exception<NonFinite>(m, "NonFinite", base.ptr());
  py::register_exception<StructuralError>(m, "StructuralError", base.ptr());

  m.def("run", &run, py::arg("spec_text"), py::arg("stage") = "verify", py::arg("format") = "text",
        py::arg("degree_bound") = py::none(), py::call_guard<py::gil_scoped_release>(),
        "Runs the pipeline on a spec document and returns the rendered report.");

  m.def(
      "normalize_spec", [](const std::string& text) { return serialize_spec(parse_spec(text)); },
      py::arg("spec_text"), "Parses, validates and re-serializes a spec document.");

  m.def(
      "is_resonant",
      [](const Index& mu, std::size_t alpha, const std::vector<std::string>& eigenvalues, const Symbols& symbols) {
        return is_resonant(MultiIndex(mu), alpha, make_spectrum(eigenvalues, symbols));
      },
      py::arg("mu"), py::arg("alpha"), py::arg("eigenvalues"), py::arg("symbols") = Symbols{});

  m.def(
      "invariance_relations",
      [](const std::vector<std::string>& eigenvalues, const Symbols& symbols) {
        std::vector<Index> out;
        for (const auto& r : elementary_invariance_relations(make_spectrum(eigenvalues, symbols))) {
          out.push_back(r.sigma.exponents());
        }
        return out;
      },
      py::arg("eigenvalues"), py::arg("symbols") = Symbols{});

  m.def(
      "sporadic_resonances",
      [](const std::vector<std::string>& eigenvalues, const Symbols& symbols, std::uint32_t degree_bound) {
        const auto sp = sporadic_resonances(make_spectrum(eigenvalues, symbols), degree_bound);
        py::list rel;
        for (const auto& r : sp.relations) rel.append(relation_dict(r));
        py::dict d;
        d["relations"] = rel;
        d["certified_complete"] = sp.certified_complete;
        d["max_order"] = sp.max_order;
        d["degree_bound"] = sp.degree_bound;
        return d;
      },
      py::arg("eigenvalues"), py::arg("symbols") = Symbols{}, py::arg("degree_bound") = kDefaultDegreeBound);

  m.def(
      "decompose",
      [](const Index& mu, std::size_t alpha, const std::vector<std::string>& eigenvalues, const Symbols& symbols,
         std::uint32_t degree_bound) {
        const auto s = make_spectrum(eigenvalues, symbols);
        const auto inv = elementary_invariance_relations(s);
        return relation_dict(decompose_resonance(MultiIndex(mu), alpha, s, sporadic_resonances(s, degree_bound), inv));
      },
      py::arg("mu"), py::arg("alpha"), py::arg("eigenvalues"), py::arg("symbols") = Symbols{},
      py::arg("degree_bound") = kDefaultDegreeBound);
}
