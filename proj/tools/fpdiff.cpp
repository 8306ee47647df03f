// Command-line driver: generate, run, hipify, merge, report, replay.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fpdiff/campaign.hpp"
#include "fpdiff/error.hpp"
#include "fpdiff/oracle.hpp"

namespace fs = std::filesystem;
using namespace fpdiff;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitTestFailures = 2;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error("cannot write " + p.string());
}

json parse_json_file(const fs::path& p) {
  try {
    return json::parse(read_file(p));
  } catch (const json::parse_error& e) {
    throw ConfigError(p.string() + ": " + e.what());
  }
}

std::vector<OptLevel> parse_levels(const std::vector<std::string>& names) {
  std::vector<OptLevel> out;
  for (const auto& n : names) out.push_back(opt_level_from_string(n));
  return out;
}

std::vector<Dialect> parse_dialects(const std::vector<std::string>& names) {
  std::vector<Dialect> out;
  for (const auto& n : names) out.push_back(dialect_from_string(n));
  return out;
}

struct CommonRunFlags {
  std::vector<std::string> levels;
  std::vector<std::string> dialects;
  std::size_t jobs = 0;
  double timeout = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> count_inputs;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--levels", levels, "Optimization levels (O0,O1,O2,O3,O3_FM)")->delimiter(',');
    cmd->add_option("--dialects", dialects, "Dialects (c,cuda,hip)")->delimiter(',');
    cmd->add_option("--jobs", jobs, "Concurrent compile/run jobs");
    cmd->add_option("--timeout", timeout, "Per-run timeout in seconds");
    cmd->add_option("--seed", seed, "Seed for programs and inputs");
    cmd->add_option("--count-inputs", count_inputs, "Input vectors per program");
  }

  void apply(CampaignConfig& c) const {
    if (!levels.empty()) c.levels = parse_levels(levels);
    if (!dialects.empty()) c.dialects = parse_dialects(dialects);
    if (jobs > 0) c.jobs = jobs;
    if (timeout > 0) c.timeout = std::chrono::milliseconds(static_cast<long long>(timeout * 1000));
    if (count_inputs) c.inputs_per_program = *count_inputs;
  }
};

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
  CommonRunFlags common;
  fs::path out;
  std::optional<fs::path> config_file;
  std::size_t count = 10;
  std::string precision = "fp64";
  bool hipify = false;
  bool no_math = false;
};

CampaignConfig campaign_from_generate(const GenerateArgs& a) {
  CampaignConfig c;
  if (a.config_file) c = campaign_config_from_json(parse_json_file(*a.config_file));
  else c.generator = GenConfig::for_precision(precision_from_string(a.precision));
  if (!a.config_file || a.count != 10) c.programs = a.count;
  a.common.apply(c);
  if (a.common.seed) {
    c.generator.seed = *a.common.seed;
    c.input_seed = *a.common.seed;
  }
  if (a.hipify) c.hipify = true;
  if (a.no_math) c.generator.math_fn_set.clear();
  return c;
}

void write_sources(const CampaignMetadata& m, const fs::path& dir) {
  for (const auto& t : m.tests) {
    for (const auto& s : t.sources) write_file(dir / s.file, s.text);
  }
}

int cmd_generate(const GenerateArgs& a) {
  const CampaignConfig c = campaign_from_generate(a);
  CampaignMetadata m;
  m.platform = current_platform();
  m.config = campaign_config_to_json(c);
  m.tests = build_test_suite(c);
  fs::create_directories(a.out);
  write_sources(m, a.out);
  write_metadata(m, a.out / "campaign.json");
  std::cout << "generated " << m.tests.size() << " programs in " << a.out.string() << "\n";
  return kExitOk;
}

// --- run --------------------------------------------------------------------

struct RunArgs {
  CommonRunFlags common;
  fs::path dir;
  std::optional<fs::path> registry;
  std::vector<std::string> compilers;
  std::optional<fs::path> out;
  std::optional<fs::path> work_dir;
};

std::vector<CompilerSpec> registry_or_default(const std::optional<fs::path>& file) {
  return file ? load_registry(*file) : default_registry();
}

int cmd_run(const RunArgs& a) {
  const fs::path meta_path = a.dir / "campaign.json";
  CampaignMetadata in = read_metadata(meta_path);
  CampaignConfig c = campaign_config_from_json(in.config);
  a.common.apply(c);
  if (!a.compilers.empty()) c.compilers = a.compilers;
  if (a.work_dir) c.work_dir = *a.work_dir;
  if (a.common.seed) c.input_seed = *a.common.seed;
  if (a.common.seed || a.common.count_inputs) {
    for (auto& t : in.tests) {
      t.inputs = generate_input_vectors(t.ast, c.inputs_per_program, c.input_seed, c.class_weights,
                                        c.generator.loop_bound_range);
      for (auto& v : t.inputs) v.test_id = t.test_id;
    }
  }
  const auto registry = registry_or_default(a.registry);
  CampaignMetadata m = execute_tests(std::move(in.tests), c, registry);
  write_sources(m, a.dir);
  const fs::path out = a.out.value_or(meta_path);
  write_metadata(m, out);

  std::size_t failed = 0;
  for (const auto& r : m.runs) failed += r.status != RunStatus::Ok;
  std::cout << m.runs.size() << " runs, " << failed << " without outcome; metadata in " << out.string() << "\n";
  return failed ? kExitTestFailures : kExitOk;
}

// --- hipify -----------------------------------------------------------------

struct HipifyArgs {
  std::vector<fs::path> files;
  std::optional<std::string> tool;
  std::optional<fs::path> out_dir;
};

int cmd_hipify(const HipifyArgs& a) {
  HipifyOptions opts;
  opts.tool = a.tool;
  int rc = kExitOk;
  for (const auto& f : a.files) {
    if (f.extension() != ".cu") throw ConfigError(f.string() + " is not a .cu file");
    fs::path target = f;
    target.replace_extension(".hip");
    if (a.out_dir) {
      fs::create_directories(*a.out_dir);
      target = *a.out_dir / target.filename();
    }
    try {
      write_file(target, hipify_lite(read_file(f), opts));
      std::cout << f.string() << " -> " << target.string() << "\n";
    } catch (const UnsupportedConstructError& e) {
      std::cerr << f.string() << ": " << e.what() << "\n";
      rc = kExitTestFailures;
    }
  }
  return rc;
}

// --- merge ------------------------------------------------------------------

struct MergeArgs {
  fs::path a, b;
  std::optional<fs::path> out;
  std::string cross_level;
  std::optional<std::string> compiler_a, compiler_b;
  double tolerance = 0.0;
};

int cmd_merge(const MergeArgs& args) {
  const CampaignMetadata a = read_metadata(args.a);
  const CampaignMetadata b = read_metadata(args.b);
  MergeOptions opts;
  opts.compiler_a = args.compiler_a;
  opts.compiler_b = args.compiler_b;
  opts.compare.relative_tolerance = args.tolerance;
  if (!args.cross_level.empty()) {
    const auto colon = args.cross_level.find(':');
    if (colon == std::string::npos) throw ConfigError("--cross-level expects LEVEL_A:LEVEL_B");
    opts.cross_levels = {opt_level_from_string(args.cross_level.substr(0, colon)),
                         opt_level_from_string(args.cross_level.substr(colon + 1))};
  }
  const MergeResult r = merge_platforms(a, b, opts);
  const std::string text = merge_result_to_json(r).dump(2) + "\n";
  if (args.out) {
    write_file(*args.out, text);
    std::cout << r.records.size() << " comparisons, " << r.unmatched.size() << " unmatched runs\n";
  } else {
    std::cout << text;
  }
  return kExitOk;
}

// --- report -----------------------------------------------------------------

int cmd_report(const fs::path& file, const std::string& format) {
  const Report r = build_report(merge_result_from_json(parse_json_file(file)));
  if (format == "json") std::cout << report_to_json(r).dump(2) << "\n";
  else std::cout << render_report_text(r);
  return kExitOk;
}

// --- replay -----------------------------------------------------------------

struct ReplayArgs {
  fs::path metadata;
  std::string test_id;
  std::size_t input_index = 0;
  std::optional<std::string> compiler;
  std::string level = "O0";
  std::optional<fs::path> registry;
};

int cmd_replay(const ReplayArgs& a) {
  const CampaignMetadata m = read_metadata(a.metadata);
  const TestEntry* t = m.find_test(a.test_id);
  if (!t) throw ConfigError("no test " + a.test_id + " in " + a.metadata.string());
  if (a.input_index >= t->inputs.size()) throw ConfigError("input index out of range");
  const InputVector& input = t->inputs[a.input_index];

  std::cout << "input:";
  for (const auto& arg : input.argv()) std::cout << " " << arg;
  std::cout << "\n";
  const OracleResult o = interpret(t->ast, input);
  std::cout << "oracle: " << o.hexfloat << "  " << to_string(o.outcome) << "\n";

  if (!a.compiler) return kExitOk;
  const auto registry = registry_or_default(a.registry);
  const CompilerSpec* spec = nullptr;
  for (const auto& s : registry) {
    if (s.id == *a.compiler) spec = &s;
  }
  if (!spec) throw ConfigError("compiler " + *a.compiler + " is not in the registry");
  std::optional<SourceBundle> bundle;
  for (const auto& s : t->sources) {
    for (const auto& e : spec->extensions) {
      if (!bundle && std::string(file_extension(s.dialect)) == e) bundle = t->bundle(s.dialect);
    }
  }
  if (!bundle) throw ConfigError("test " + a.test_id + " has no source that " + spec->id + " compiles");

  std::string tmpl = (fs::temp_directory_path() / "fpdiff-replay-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) throw Error("cannot create a temporary directory");
  int rc = kExitOk;
  {
    BinaryCache cache(tmpl);
    try {
      const ExecutionRecord rec =
          compile_and_run(*bundle, *spec, opt_level_from_string(a.level), input, a.input_index, cache);
      std::cout << spec->id << " " << a.level << ": " << to_string(rec.status);
      if (rec.outcome) {
        std::cout << "  " << to_string(*rec.outcome) << "  class "
                  << to_string(compare_outcomes(o.outcome, *rec.outcome).tag);
      } else {
        rc = kExitTestFailures;
      }
      std::cout << "\n";
    } catch (const CompileError& e) {
      std::cout << spec->id << " " << a.level << ": compile_failure\n" << e.diagnostics();
      rc = kExitTestFailures;
    }
  }
  std::error_code ec;
  fs::remove_all(tmpl, ec);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differential floating-point testing of compilers"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate programs, sources and inputs into a directory");
  gen.common.add_to(g);
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--count", gen.count, "Number of programs");
  g->add_option("--precision", gen.precision, "fp64 or fp32")->check(CLI::IsMember({"fp64", "fp32"}));
  g->add_option("--config", gen.config_file, "Campaign config JSON");
  g->add_flag("--hipify", gen.hipify, "Derive HIP sources from CUDA with the built-in translator");
  g->add_flag("--no-math", gen.no_math, "Generate programs without math library calls");

  RunArgs run;
  auto* r = app.add_subcommand("run", "Compile and run a generated directory");
  run.common.add_to(r);
  r->add_option("dir", run.dir, "Campaign directory")->required();
  r->add_option("--registry", run.registry, "Compiler registry JSON");
  r->add_option("--compilers", run.compilers, "Only these compiler ids")->delimiter(',');
  r->add_option("--out", run.out, "Metadata output (default: DIR/campaign.json)");
  r->add_option("--work-dir", run.work_dir, "Keep compiled binaries here");

  HipifyArgs hip;
  auto* h = app.add_subcommand("hipify", "Translate .cu files to .hip");
  h->add_option("files", hip.files, ".cu files")->required();
  h->add_option("--tool", hip.tool, "External translator to use instead");
  h->add_option("--out-dir", hip.out_dir, "Directory for the .hip files");

  MergeArgs merge;
  auto* mg = app.add_subcommand("merge", "Join two metadata files into comparisons");
  mg->add_option("a", merge.a, "Metadata of side a")->required();
  mg->add_option("b", merge.b, "Metadata of side b")->required();
  mg->add_option("--out", merge.out, "Comparison file (default: stdout)");
  mg->add_option("--cross-level", merge.cross_level, "Exploratory LEVEL_A:LEVEL_B join");
  mg->add_option("--compiler-a", merge.compiler_a, "Only runs of this compiler on side a");
  mg->add_option("--compiler-b", merge.compiler_b, "Only runs of this compiler on side b");
  mg->add_option("--tolerance", merge.tolerance, "Relative tolerance for Number comparison");

  fs::path report_file;
  std::string report_format = "text";
  auto* rp = app.add_subcommand("report", "Tables and summary from a comparison file");
  rp->add_option("comparisons", report_file, "Output of merge")->required();
  rp->add_option("--format", report_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  ReplayArgs replay;
  auto* rl = app.add_subcommand("replay", "Re-run one test input through the oracle and a compiler");
  rl->add_option("metadata", replay.metadata, "Metadata file")->required();
  rl->add_option("--test-id", replay.test_id)->required();
  rl->add_option("--input-index", replay.input_index);
  rl->add_option("--compiler", replay.compiler);
  rl->add_option("--level", replay.level);
  rl->add_option("--registry", replay.registry);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*r) return cmd_run(run);
    if (*h) return cmd_hipify(hip);
    if (*mg) return cmd_merge(merge);
    if (*rp) return cmd_report(report_file, report_format);
    if (*rl) return cmd_replay(replay);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const VersionError& e) {
    std::cerr << "version error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnmatchedExtensionError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const DialectError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
