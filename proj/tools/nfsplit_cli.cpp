#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nfsplit/errors.hpp"
#include "nfsplit/pipeline.hpp"

namespace fs = std::filesystem;
using namespace nfsplit;

namespace {

enum Exit { kOk = 0, kOther = 1, kParse = 2, kNormalForm = 3, kRewrite = 4 };

struct RunArgs {
  std::string input;
  std::string out;
  std::string format = "text";
  std::optional<std::uint32_t> degree_bound;
  std::optional<double> step;
  std::optional<double> t_final;
  std::optional<double> tol;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const NotInNormalForm& e) {
    std::cerr << "not in normal form; non-resonant terms:\n";
    for (const auto& t : e.offending_terms()) std::cerr << "  " << t << "\n";
    return kNormalForm;
  } catch (const RewriteFailure& e) {
    std::cerr << "rewrite failure: " << e.what() << "\n";
    return kRewrite;
  } catch (const NoDecomposition& e) {
    std::cerr << "rewrite failure: " << e.what() << "\n";
    return kRewrite;
  } catch (const NotInvariant& e) {
    std::cerr << "rewrite failure: " << e.what() << "\n";
    return kRewrite;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}

int run_stage(Stage stage, const RunArgs& args) {
  return guarded([&] {
    const SystemSpec spec = load_spec(args.input);
    PipelineOptions opts;
    opts.stage = stage;
    opts.degree_bound = args.degree_bound;
    opts.step = args.step;
    opts.t_final = args.t_final;
    opts.tol = args.tol;
    const AnalysisReport report = run_pipeline(spec, opts);
    write_output(args.out, args.format == "machine" ? render_machine(report) : render_text(report));
    return report.exit_code();
  });
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

struct GoldenResult {
  std::string name;
  int code = kOk;
  std::string message;
};

GoldenResult golden_entry(const fs::path& spec_path, const fs::path& expected_dir, bool update,
                          std::optional<std::uint32_t> degree_bound) {
  GoldenResult res{spec_path.stem().string(), kOk, {}};
  std::string actual;
  res.code = guarded([&] {
    PipelineOptions opts;
    opts.stage = Stage::embed;
    opts.degree_bound = degree_bound;
    actual = render_text(run_pipeline(load_spec(spec_path.string()), opts));
    return kOk;
  });
  if (res.code != kOk) {
    res.message = "pipeline failed with exit code " + std::to_string(res.code);
    return res;
  }
  const fs::path expected = expected_dir / (res.name + ".txt");
  if (update) {
    std::ofstream(expected, std::ios::binary) << actual;
    res.message = "updated";
    return res;
  }
  if (!fs::exists(expected)) {
    res.code = kOther;
    res.message = "missing " + expected.string();
    return res;
  }
  const std::string want = read_file(expected);
  if (want != actual) {
    res.code = kOther;
    std::istringstream a(actual), w(want);
    std::string la, lw;
    std::size_t line = 1;
    while (true) {
      const bool ga = static_cast<bool>(std::getline(a, la));
      const bool gw = static_cast<bool>(std::getline(w, lw));
      if (!ga && !gw) break;
      if (!ga || !gw || la != lw) {
        res.message = "first difference at line " + std::to_string(line) + "\n    expected: " + (gw ? lw : "<eof>") +
                      "\n    actual:   " + (ga ? la : "<eof>");
        break;
      }
      ++line;
    }
    return res;
  }
  res.message = "ok";
  return res;
}

int run_golden(const std::string& corpus, bool update, std::optional<std::uint32_t> degree_bound) {
  const fs::path dir(corpus);
  if (!fs::is_directory(dir)) {
    std::cerr << "error: corpus directory " << corpus << " not found\n";
    return kOther;
  }
  std::vector<fs::path> specs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json") specs.push_back(e.path());
  }
  std::sort(specs.begin(), specs.end());
  const fs::path expected = dir / "expected";
  if (update) fs::create_directories(expected);
  std::vector<std::future<GoldenResult>> jobs;
  for (const auto& p : specs) {
    jobs.push_back(std::async(std::launch::async, golden_entry, p, expected, update, degree_bound));
  }
  int worst = kOk;
  for (auto& j : jobs) {
    const auto r = j.get();
    std::cout << (r.code == kOk ? "PASS " : "FAIL ") << r.name << ": " << r.message << "\n";
    if (r.code != kOk) worst = kOther;
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonance structure and split embedding of normal-form vector fields"};
  app.require_subcommand(1);

  RunArgs args;
  std::string corpus = "corpus";
  bool update = false;

  auto add_common = [&](CLI::App* sub, bool numeric) {
    sub->add_option("--input", args.input, "Spec file")->required()->check(CLI::ExistingFile);
    sub->add_option("--degree-bound", args.degree_bound, "Degree bound for the sporadic search")
        ->check(CLI::Range(1, 64));
    sub->add_option("--format", args.format, "Report format")->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--out", args.out, "Output file (default stdout)");
    if (numeric) {
      sub->add_option("--step", args.step, "RK4 step")->check(CLI::PositiveNumber);
      sub->add_option("--t-final", args.t_final, "Integration horizon")->check(CLI::PositiveNumber);
      sub->add_option("--tol", args.tol, "Certification tolerance")->check(CLI::PositiveNumber);
    }
  };
  auto* analyze = app.add_subcommand("analyze", "Resonance structure only");
  add_common(analyze, false);
  auto* embed = app.add_subcommand("embed", "Adds the split system and symbolic checks");
  add_common(embed, false);
  auto* verify = app.add_subcommand("verify", "Adds numeric split verification");
  add_common(verify, true);
  auto* golden = app.add_subcommand("golden", "Runs the corpus and diffs against expected reports");
  golden->add_option("--corpus", corpus, "Corpus directory");
  golden->add_flag("--update", update, "Rewrite expected reports");
  golden->add_option("--degree-bound", args.degree_bound, "Degree bound")->check(CLI::Range(1, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kParse;
  }

  if (*analyze) return run_stage(Stage::analyze, args);
  if (*embed) return run_stage(Stage::embed, args);
  if (*verify) return run_stage(Stage::verify, args);
  return run_golden(corpus, update, args.degree_bound);
}
