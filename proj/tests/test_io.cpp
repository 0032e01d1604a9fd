#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "nfsplit/errors.hpp"
#include "nfsplit/pipeline.hpp"

using namespace nfsplit;
namespace fs = std::filesystem;

namespace {

std::string corpus(const std::string& name) { return std::string(NFSPLIT_CORPUS_DIR) + "/" + name + ".json"; }

std::string minimal(const std::string& eig, const std::string& terms, const std::string& extra = "") {
  return R"({"schema_version": 1, "dimension": 2, "eigenvalues": )" + eig + R"(, "field_terms": )" + terms + extra +
         "}";
}

const std::string kEig12 = R"([[["1", "1"]], [["1", "2"]]])";

std::string parse_error_where(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const ParseError& e) {
    return e.where();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("coefficient literals") {
  auto t = std::make_shared<SymbolTable>();
  t->declare("pi", {3.14159, 0.0});
  t->declare("mu", {0.5, 0.0});
  CHECK(parse_coeff("2 - 3*i", t).to_string() == "2 - 3*i");
  CHECK(parse_coeff("1/2 + pi*i", t).to_string() == "1/2 + pi*i");
  CHECK(parse_coeff("-(mu + 1)^2", t) == -(CoeffValue::symbol(t, "mu") + CoeffValue(1)) *
                                             (CoeffValue::symbol(t, "mu") + CoeffValue(1)));
  CHECK(parse_coeff("i^2", t) == CoeffValue(-1));
  CHECK(parse_coeff("6/4", t) == CoeffValue(Rational(3, 2)));
  CHECK_THROWS_AS(parse_coeff("1/0", t), ParseError);
  CHECK_THROWS_AS(parse_coeff("e", t), ParseError);
  CHECK_THROWS_AS(parse_coeff("1 +", t), ParseError);
  CHECK_THROWS_AS(parse_coeff("1/pi", t), ParseError);
  CHECK_THROWS_AS(parse_coeff("(1", t), ParseError);
  CHECK(parse_symbol_monomial("pi^2*i", *t).to_string(t.get()) == "pi^2*i");
  CHECK(parse_symbol_monomial("1", *t).is_one());
  CHECK_THROWS_AS(parse_symbol_monomial("pi*pi", *t), ParseError);
  CHECK_THROWS_AS(parse_symbol_monomial("i^2", *t), ParseError);
}

TEST_CASE("ex1 corpus file") {
  const auto spec = load_spec(corpus("ex1"));
  CHECK(spec.dimension == 2);
  CHECK(spec.eigenvalues == std::vector<CoeffValue>{CoeffValue(1), CoeffValue(2)});
  std::size_t nonlinear = 0;
  for (const auto& t : spec.field_terms) {
    if (t.exponents.degree() > 1) {
      ++nonlinear;
      CHECK(t.component == 2);
      CHECK(t.exponents == MultiIndex{2, 0});
    }
  }
  CHECK(nonlinear == 1);
}

TEST_CASE("empty field list gives a linear spec") {
  const auto spec = parse_spec(R"({"schema_version": 1, "dimension": 1, "eigenvalues": [[["1", "1"]]], "field_terms": []})");
  CHECK(spec.dimension == 1);
  CHECK(spec.field_terms.empty());
  CHECK(spec.degree_bound == 10);
}

TEST_CASE("positioned parse errors") {
  CHECK(parse_error_where(minimal(kEig12, R"([{"component": 2, "exponents": [2, 0, 1], "coeff": "1"}])")) ==
        "field_terms[0].exponents");
  CHECK(parse_error_where(minimal(kEig12, R"([{"component": 3, "exponents": [2, 0], "coeff": "1"}])")) ==
        "field_terms[0].component");
  CHECK(parse_error_where(minimal(kEig12, R"([{"component": 2, "exponents": [2, 0], "coeff": "pi"}])")) ==
        "field_terms[0].coeff");
  CHECK(parse_error_where(minimal(R"([[["1", "1/0"]], [["1", "2"]]])", "[]")) == "eigenvalues[0][0][1]");
  CHECK(parse_error_where(minimal(R"([[["1", "1"]]])", "[]")) == "eigenvalues");
  CHECK(parse_error_where(R"({"schema_version": 2, "dimension": 1, "eigenvalues": [[["1","1"]]]})") == "schema_version");
  CHECK(parse_error_where(minimal(kEig12, "[]", R"(, "colour": 1)")) == "colour");
  try {
    parse_spec("{\"schema_version\": 1,\n  \"dimension\": }");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.where() == "syntax");
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("real blocks must match the eigenvalues") {
  const std::string bad = minimal(R"([[["i", "-1"]], [["i", "1"]]])", "[]",
                                  R"(, "real_blocks": [{"kind": "rotation", "re": "0", "im": "2"}])");
  CHECK(parse_error_where(bad) == "eigenvalues[0]");
  const std::string good = minimal(R"([[["i", "-1"]], [["i", "1"]]])", "[]",
                                   R"(, "real_blocks": [{"kind": "rotation", "re": "0", "im": "1"}])");
  CHECK_NOTHROW(parse_spec(good));
}

TEST_CASE("spec round trip on the corpus") {
  for (int k = 1; k <= 9; ++k) {
    const auto spec = load_spec(corpus("ex" + std::to_string(k)));
    const auto again = parse_spec(serialize_spec(spec));
    CHECK(again == spec);
    CHECK(serialize_spec(again) == serialize_spec(spec));
  }
}

TEST_CASE("pipeline examples") {
  const auto r3 = run_pipeline(load_spec(corpus("ex3")), {Stage::analyze});
  REQUIRE(r3.sporadics.relations.size() == 1);
  CHECK(r3.sporadics.relations[0].mu == MultiIndex{0, 0, 2, 0});
  CHECK(r3.sporadics.relations[0].alpha == 3);
  REQUIRE(r3.invariances.size() == 1);
  CHECK(r3.invariances[0].sigma == MultiIndex{1, 1, 0, 0});
  CHECK_FALSE(r3.embedding);

  const auto r7 = run_pipeline(load_spec(corpus("ex7")), {Stage::analyze});
  CHECK(r7.invariances.size() == 9);
  CHECK(r7.sporadics.relations.empty());

  const auto bad = parse_spec(minimal(kEig12, R"([{"component": 1, "exponents": [3, 0], "coeff": "1"}])"));
  try {
    run_pipeline(bad);
    FAIL("expected NotInNormalForm");
  } catch (const NotInNormalForm& e) {
    CHECK(e.offending_terms() == std::vector<std::string>{"x1^3 in component 1"});
  }
}

TEST_CASE("reports are byte-stable and the machine form is valid JSON") {
  const auto spec = load_spec(corpus("ex5"));
  const auto a = render_text(run_pipeline(spec, {Stage::embed}));
  const auto b = render_text(run_pipeline(load_spec(corpus("ex5")), {Stage::embed}));
  CHECK(a == b);
  const auto doc = nlohmann::json::parse(render_machine(run_pipeline(spec, {Stage::verify})));
  CHECK(doc["invariance_relations"].size() == 4);
  CHECK(doc["sporadic_resonances"]["relations"].size() == 4);
  CHECK(doc["checks"]["manifold_invariant"] == true);
  CHECK(doc["split"]["certified"] == true);
  CHECK(doc["exit_code"] == 0);
}

TEST_CASE("verify stage overrides and numeric failure") {
  auto spec = load_spec(corpus("ex1"));
  PipelineOptions o;
  o.tol = 1e-30;
  const auto r = run_pipeline(spec, o);
  REQUIRE(r.split);
  CHECK_FALSE(r.split->certified);
  CHECK(r.exit_code() == 5);

  // phi' = 2 phi^2 from phi0 = 1 escapes at t = 1/2
  const auto blow = parse_spec(R"({"schema_version": 1, "dimension": 2, "eigenvalues": [[["i", "-1"]], [["i", "1"]]],
    "field_terms": [{"component": 1, "exponents": [2, 1], "coeff": "1"},
                    {"component": 2, "exponents": [1, 2], "coeff": "1"}],
    "verify": {"x0": ["1", "1"]}})");
  const auto rb = run_pipeline(blow);
  CHECK_FALSE(rb.split);
  REQUIRE(rb.failure_time);
  CHECK(*rb.failure_time > 0.4);
  CHECK(*rb.failure_time < 0.6);
  CHECK(rb.exit_code() == 5);
  CHECK(rb.checks->all());
}

TEST_CASE("CLI exit codes") {
  const std::string cli = NFSPLIT_CLI;
  const fs::path tmp = fs::temp_directory_path() / "nfsplit_cli_test";
  fs::create_directories(tmp);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(tmp / name) << text;
    return (tmp / name).string();
  };
  auto run = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + " > " + (tmp / "out.txt").string() + " 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  CHECK(run("verify --input " + corpus("ex1")) == 0);
  CHECK(run("analyze --input " + corpus("ex7") + " --format machine") == 0);
  CHECK(run("verify --input " + corpus("ex1") + " --tol 1e-30") == 5);
  CHECK(run("embed --input " + write("syntax.json", "{ nope")) == 2);
  CHECK(run("embed --input " + write("nf.json", minimal(kEig12, R"([{"component": 1, "exponents": [3, 0], "coeff": "1"}])"))) == 3);
  const std::string uncertified = R"({"schema_version": 1, "dimension": 2, "eigenvalues": [[["1","1"]], [["1","7"]]],
    "field_terms": [], "degree_bound": 3})";
  CHECK(run("embed --input " + write("rw.json", uncertified)) == 4);
  CHECK(run("analyze --input " + write("rw2.json", uncertified)) == 0);
  const auto out = (tmp / "report.txt").string();
  CHECK(run("embed --input " + corpus("ex1") + " --out " + out) == 0);
  std::ifstream f(out);
  std::string first;
  std::getline(f, first);
  CHECK(first == "system: ex1");
  fs::remove_all(tmp);
}
