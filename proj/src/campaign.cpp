#include "fpdiff/campaign.hpp"

#include <sys/utsname.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

#include "fpdiff/ast_json.hpp"
#include "fpdiff/error.hpp"

namespace fpdiff {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

json campaign_config_to_json(const CampaignConfig& c) {
  json weights = json::object();
  for (const auto& [cls, w] : c.class_weights) weights[std::string(to_string(cls))] = w;
  json dialects = json::array();
  for (auto d : c.dialects) dialects.push_back(std::string(to_string(d)));
  json levels = json::array();
  for (auto l : c.levels) levels.push_back(std::string(to_string(l)));
  return {{"generator", config_to_json(c.generator)},
          {"programs", c.programs},
          {"inputs_per_program", c.inputs_per_program},
          {"input_seed", c.input_seed},
          {"class_weights", weights},
          {"dialects", dialects},
          {"levels", levels},
          {"hipify", c.hipify},
          {"compilers", c.compilers},
          {"jobs", c.jobs},
          {"timeout_ms", c.timeout ? json(c.timeout->count()) : json(nullptr)}};
}

CampaignConfig campaign_config_from_json(const json& j) {
  CampaignConfig c;
  try {
    if (j.contains("generator")) c.generator = config_from_json(j.at("generator"));
    c.programs = j.value("programs", c.programs);
    c.inputs_per_program = j.value("inputs_per_program", c.inputs_per_program);
    c.input_seed = j.value("input_seed", c.input_seed);
    if (j.contains("class_weights")) {
      c.class_weights.clear();
      for (const auto& [name, w] : j.at("class_weights").items()) {
        c.class_weights[value_class_from_string(name)] = w.get<double>();
      }
    }
    if (j.contains("dialects")) {
      c.dialects.clear();
      for (const auto& d : j.at("dialects")) c.dialects.push_back(dialect_from_string(d.get<std::string>()));
    }
    if (j.contains("levels")) {
      c.levels.clear();
      for (const auto& l : j.at("levels")) c.levels.push_back(opt_level_from_string(l.get<std::string>()));
    }
    c.hipify = j.value("hipify", false);
    c.compilers = j.value("compilers", std::vector<std::string>{});
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("timeout_ms") && !j.at("timeout_ms").is_null()) {
      c.timeout = std::chrono::milliseconds(j.at("timeout_ms").get<long long>());
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed campaign config: ") + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Tests and runs

std::vector<Dialect> TestEntry::dialects() const {
  std::vector<Dialect> out;
  for (const auto& s : sources) out.push_back(s.dialect);
  return out;
}

const TestSource* TestEntry::source(Dialect d) const {
  for (const auto& s : sources) {
    if (s.dialect == d) return &s;
  }
  return nullptr;
}

SourceBundle TestEntry::bundle(Dialect d) const {
  const TestSource* s = source(d);
  if (!s) throw DialectError("test " + test_id + " has no " + std::string(to_string(d)) + " source");
  SourceBundle b;
  b.test_id = test_id;
  b.dialect = d;
  b.source_text = s->text;
  b.precision = precision;
  return b;
}

RunSummary summarize(const ExecutionRecord& rec, Dialect dialect) {
  RunSummary r;
  r.test_id = rec.test_id;
  r.input_index = rec.input_index;
  r.compiler_id = rec.compiler_id;
  r.dialect = dialect;
  r.opt_level = rec.opt_level;
  r.outcome = rec.outcome;
  r.raw_stdout = rec.raw_stdout;
  r.status = rec.status;
  r.exit_status = rec.exit_status;
  r.wall_time_us = rec.wall_time.count();
  r.diagnostics = rec.diagnostics;
  return r;
}

PlatformInfo current_platform() {
  PlatformInfo p;
  char host[256] = {};
  if (gethostname(host, sizeof host - 1) == 0) p.hostname = host;
  struct utsname u {};
  if (uname(&u) == 0) p.os = std::string(u.sysname) + " " + u.release + " " + u.machine;
  return p;
}

const TestEntry* CampaignMetadata::find_test(const std::string& test_id) const {
  for (const auto& t : tests) {
    if (t.test_id == test_id) return &t;
  }
  return nullptr;
}

bool CampaignMetadata::has_failures() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunSummary& r) { return r.status != RunStatus::Ok; });
}

// ---------------------------------------------------------------------------
// Metadata JSON

namespace {

json run_to_json(const RunSummary& r) {
  return {{"test_id", r.test_id},
          {"input_index", r.input_index},
          {"compiler_id", r.compiler_id},
          {"dialect", std::string(to_string(r.dialect))},
          {"opt_level", std::string(to_string(r.opt_level))},
          {"outcome", r.outcome ? json(to_string(*r.outcome)) : json(nullptr)},
          {"raw_stdout", r.raw_stdout},
          {"status", std::string(to_string(r.status))},
          {"exit_status", r.exit_status},
          {"wall_time_us", r.wall_time_us},
          {"diagnostics", r.diagnostics}};
}

RunSummary run_from_json(const json& j) {
  RunSummary r;
  r.test_id = j.at("test_id").get<std::string>();
  r.input_index = j.at("input_index").get<std::size_t>();
  r.compiler_id = j.at("compiler_id").get<std::string>();
  r.dialect = dialect_from_string(j.value("dialect", std::string("c")));
  r.opt_level = opt_level_from_string(j.at("opt_level").get<std::string>());
  if (j.contains("outcome") && !j.at("outcome").is_null()) {
    r.outcome = outcome_from_string(j.at("outcome").get<std::string>());
  }
  r.raw_stdout = j.value("raw_stdout", std::string{});
  r.status = run_status_from_string(j.value("status", std::string(r.outcome ? "ok" : "parse_failure")));
  r.exit_status = j.value("exit_status", 0);
  r.wall_time_us = j.value("wall_time_us", std::int64_t{0});
  r.diagnostics = j.value("diagnostics", std::string{});
  return r;
}

json test_to_json(const TestEntry& t) {
  json dialects = json::array();
  json sources = json::array();
  for (const auto& s : t.sources) {
    dialects.push_back(std::string(to_string(s.dialect)));
    sources.push_back({{"dialect", std::string(to_string(s.dialect))}, {"file", s.file}, {"text", s.text}});
  }
  json inputs = json::array();
  for (const auto& vec : t.inputs) {
    json values = json::array();
    for (const auto& v : vec.values) values.push_back({{"param", v.param}, {"value", v.rendered}});
    inputs.push_back(values);
  }
  return {{"test_id", t.test_id},
          {"precision", std::string(to_string(t.precision))},
          {"dialects", dialects},
          {"sources", sources},
          {"ast", ast_to_json(t.ast)},
          {"inputs", inputs}};
}

TestEntry test_from_json(const json& j) {
  TestEntry t;
  t.test_id = j.at("test_id").get<std::string>();
  t.precision = precision_from_string(j.at("precision").get<std::string>());
  t.ast = ast_from_json(j.at("ast"));
  if (t.ast.precision != t.precision) throw ConfigError("test " + t.test_id + ": precision does not match its AST");
  for (const auto& s : j.at("sources")) {
    t.sources.push_back({dialect_from_string(s.at("dialect").get<std::string>()), s.at("file").get<std::string>(),
                         s.at("text").get<std::string>()});
  }
  for (const auto& values : j.at("inputs")) {
    InputVector vec;
    vec.test_id = t.test_id;
    if (values.size() != t.ast.params.size()) {
      throw ConfigError("test " + t.test_id + ": input vector does not match the parameter list");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      const Param& p = t.ast.params[i];
      if (values[i].at("param").get<std::string>() != p.name) {
        throw ConfigError("test " + t.test_id + ": input for '" + p.name + "' is out of order");
      }
      vec.values.push_back(parse_input_value(p, values[i].at("value").get<std::string>(), t.precision));
    }
    t.inputs.push_back(std::move(vec));
  }
  return t;
}

}  // namespace

json metadata_to_json(const CampaignMetadata& m) {
  json tests = json::array();
  for (const auto& t : m.tests) tests.push_back(test_to_json(t));
  json runs = json::array();
  for (const auto& r : m.runs) runs.push_back(run_to_json(r));
  return {{"schema_version", m.schema_version},
          {"platform",
           {{"hostname", m.platform.hostname},
            {"os", m.platform.os},
            {"compiler_versions", m.platform.compiler_versions}}},
          {"config", m.config},
          {"tests", tests},
          {"runs", runs}};
}

CampaignMetadata metadata_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema_version") || !j.at("schema_version").is_number_integer()) {
    throw VersionError("metadata has no schema_version");
  }
  CampaignMetadata m;
  m.schema_version = j.at("schema_version").get<int>();
  if (m.schema_version != kSchemaVersion) {
    throw VersionError("unsupported metadata schema_version " + std::to_string(m.schema_version));
  }
  try {
    const json& p = j.at("platform");
    m.platform.hostname = p.value("hostname", std::string{});
    m.platform.os = p.value("os", std::string{});
    m.platform.compiler_versions = p.value("compiler_versions", std::map<std::string, std::string>{});
    m.config = j.value("config", json::object());
    for (const auto& t : j.at("tests")) m.tests.push_back(test_from_json(t));
    for (const auto& r : j.at("runs")) m.runs.push_back(run_from_json(r));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed metadata: ") + e.what());
  }
  std::map<std::string, std::size_t> input_counts;
  for (const auto& t : m.tests) {
    if (!input_counts.emplace(t.test_id, t.inputs.size()).second) {
      throw ConfigError("duplicate test id " + t.test_id);
    }
  }
  for (const auto& r : m.runs) {
    auto it = input_counts.find(r.test_id);
    if (it == input_counts.end()) throw ConfigError("run references unknown test " + r.test_id);
    if (r.input_index >= it->second) {
      throw ConfigError("run references input " + std::to_string(r.input_index) + " of test " + r.test_id);
    }
  }
  return m;
}

std::string serialize_metadata(const CampaignMetadata& m) { return metadata_to_json(m).dump(2) + "\n"; }

CampaignMetadata parse_metadata(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("metadata is not valid JSON: ") + e.what());
  }
  return metadata_from_json(j);
}

void write_metadata(const CampaignMetadata& m, const fs::path& file) {
  const std::string text = serialize_metadata(m);
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  fs::path tmp = file;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    out.flush();
    if (!out) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, file);
}

CampaignMetadata read_metadata(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot open metadata file " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_metadata(ss.str());
}

// ---------------------------------------------------------------------------
// Running

namespace {

void add_source(TestEntry& t, Dialect d, bool hipify) {
  if (t.source(d)) return;
  std::string text;
  if (d == Dialect::HIP && hipify) {
    if (!t.source(Dialect::CUDA)) add_source(t, Dialect::CUDA, false);
    text = hipify_lite(t.source(Dialect::CUDA)->text);
  } else {
    text = emit_source(t.ast, d).source_text;
  }
  t.sources.push_back({d, t.test_id + std::string(file_extension(d)), std::move(text)});
}

fs::path make_temp_dir() {
  std::string tmpl = (fs::temp_directory_path() / "fpdiff-work-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) throw Error("cannot create a temporary work directory");
  return tmpl;
}

}  // namespace

std::vector<TestEntry> build_test_suite(const CampaignConfig& config) {
  validate(config.generator);
  std::vector<TestEntry> out;
  std::map<std::string, int> seen;
  for (std::size_t i = 0; i < config.programs; ++i) {
    GenConfig gen = config.generator;
    gen.seed = derive_seed(config.generator.seed, "program:" + std::to_string(i));
    TestEntry t;
    t.ast = generate_program(gen);
    t.precision = t.ast.precision;
    const std::string sig = ast_signature(t.ast);
    const int n = ++seen[sig];
    t.test_id = n == 1 ? sig : sig + "_" + std::to_string(n);
    for (auto d : config.dialects) add_source(t, d, config.hipify);
    t.inputs = generate_input_vectors(t.ast, config.inputs_per_program, config.input_seed, config.class_weights,
                                      config.generator.loop_bound_range);
    for (auto& v : t.inputs) v.test_id = t.test_id;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<CompilerSpec> compilers_for(Dialect d, const std::vector<CompilerSpec>& registry,
                                        const std::vector<std::string>& only) {
  const std::string ext(file_extension(d));
  std::vector<CompilerSpec> out;
  for (const auto& spec : registry) {
    if (!only.empty() && std::find(only.begin(), only.end(), spec.id) == only.end()) continue;
    if (std::find(spec.extensions.begin(), spec.extensions.end(), ext) != spec.extensions.end()) {
      out.push_back(spec);
    }
  }
  return out;
}

CampaignMetadata execute_tests(std::vector<TestEntry> tests, const CampaignConfig& config,
                               const std::vector<CompilerSpec>& registry) {
  if (config.dialects.empty()) throw ConfigError("no dialects requested");
  if (config.levels.empty()) throw ConfigError("no optimization levels requested");
  if (config.jobs == 0) throw ConfigError("jobs must be at least 1");

  std::map<Dialect, std::vector<CompilerSpec>> specs;
  for (auto d : config.dialects) {
    auto matched = compilers_for(d, registry, config.compilers);
    if (matched.empty()) {
      throw ConfigError("no compiler in the registry handles " + std::string(file_extension(d)) + " sources");
    }
    for (auto& s : matched) {
      if (config.timeout) s.timeout = *config.timeout;
      validate(s);
    }
    specs[d] = std::move(matched);
  }

  for (auto& t : tests) {
    for (auto d : config.dialects) add_source(t, d, config.hipify);
  }

  struct Job {
    std::size_t test;
    Dialect dialect;
    const CompilerSpec* spec;
    OptLevel level;
    std::size_t input;
  };
  std::vector<Job> jobs;
  for (std::size_t t = 0; t < tests.size(); ++t) {
    for (auto d : config.dialects) {
      for (const auto& spec : specs[d]) {
        for (auto level : config.levels) {
          for (std::size_t k = 0; k < tests[t].inputs.size(); ++k) jobs.push_back({t, d, &spec, level, k});
        }
      }
    }
  }
  std::map<std::pair<std::size_t, Dialect>, SourceBundle> bundle_of;
  for (std::size_t t = 0; t < tests.size(); ++t) {
    for (auto d : config.dialects) bundle_of.emplace(std::pair{t, d}, tests[t].bundle(d));
  }

  const bool temp_dir = !config.work_dir;
  const fs::path work = temp_dir ? make_temp_dir() : *config.work_dir;
  BinaryCache cache(work);

  std::vector<RunSummary> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Job& job = jobs[i];
      const SourceBundle& bundle = bundle_of.at({job.test, job.dialect});
      const InputVector& input = tests[job.test].inputs[job.input];
      ExecutionRecord rec;
      rec.test_id = bundle.test_id;
      rec.input_index = job.input;
      rec.compiler_id = job.spec->id;
      rec.opt_level = job.level;
      try {
        rec = compile_and_run(bundle, *job.spec, job.level, input, job.input, cache);
      } catch (const CompileError& e) {
        rec.status = RunStatus::CompileFailure;
        rec.diagnostics = e.diagnostics().empty() ? e.what() : e.diagnostics();
      } catch (const std::exception& e) {
        rec.status = RunStatus::RuntimeFailure;
        rec.diagnostics = e.what();
      }
      results[i] = summarize(rec, job.dialect);
    }
  };
  const std::size_t n_threads = std::min(config.jobs, std::max<std::size_t>(jobs.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  if (temp_dir) {
    std::error_code ec;
    fs::remove_all(work, ec);
  }

  std::stable_sort(results.begin(), results.end(), [](const RunSummary& a, const RunSummary& b) {
    return std::tie(a.test_id, a.input_index, a.compiler_id, a.dialect, a.opt_level) <
           std::tie(b.test_id, b.input_index, b.compiler_id, b.dialect, b.opt_level);
  });

  CampaignMetadata m;
  m.platform = current_platform();
  for (const auto& [d, list] : specs) {
    for (const auto& s : list) m.platform.compiler_versions[s.id] = compiler_version(s);
  }
  m.config = campaign_config_to_json(config);
  m.tests = std::move(tests);
  m.runs = std::move(results);
  return m;
}

CampaignMetadata run_campaign(const CampaignConfig& config, const std::vector<CompilerSpec>& registry) {
  return execute_tests(build_test_suite(config), config, registry);
}

// ---------------------------------------------------------------------------
// Merging

std::string ComparisonRecord::level_label() const {
  if (side_a.opt_level == side_b.opt_level) return std::string(to_string(side_a.opt_level));
  return std::string(to_string(side_a.opt_level)) + "/" + std::string(to_string(side_b.opt_level));
}

MergeResult merge_platforms(const CampaignMetadata& a, const CampaignMetadata& b, const MergeOptions& options) {
  if (a.schema_version != b.schema_version) {
    throw VersionError("schema_version mismatch: " + std::to_string(a.schema_version) + " vs " +
                       std::to_string(b.schema_version));
  }
  MergeResult result;
  result.cross_level = options.cross_levels.has_value();

  auto selected = [&](const RunSummary& r, const std::optional<std::string>& compiler,
                      std::optional<OptLevel> level) {
    if (compiler && r.compiler_id != *compiler) return false;
    if (level && r.opt_level != *level) return false;
    return true;
  };
  std::optional<OptLevel> level_a, level_b;
  if (options.cross_levels) {
    level_a = options.cross_levels->first;
    level_b = options.cross_levels->second;
  }

  using Key = std::tuple<std::string, std::size_t, int>;
  std::map<Key, std::vector<std::size_t>> index_b;
  std::vector<std::size_t> runs_b;
  for (std::size_t i = 0; i < b.runs.size(); ++i) {
    const RunSummary& r = b.runs[i];
    if (!selected(r, options.compiler_b, level_b)) continue;
    ++result.runs_attempted;
    if (!r.outcome) {
      result.unmatched.push_back({'b', r, "no outcome (" + std::string(to_string(r.status)) + ")"});
      continue;
    }
    const int lvl = static_cast<int>(level_a ? *level_a : r.opt_level);
    index_b[{r.test_id, r.input_index, lvl}].push_back(i);
    runs_b.push_back(i);
  }

  std::vector<bool> used_b(b.runs.size(), false);
  for (const RunSummary& r : a.runs) {
    if (!selected(r, options.compiler_a, level_a)) continue;
    ++result.runs_attempted;
    if (!r.outcome) {
      result.unmatched.push_back({'a', r, "no outcome (" + std::string(to_string(r.status)) + ")"});
      continue;
    }
    auto it = index_b.find({r.test_id, r.input_index, static_cast<int>(r.opt_level)});
    if (it == index_b.end()) {
      result.unmatched.push_back({'a', r, "no partner run"});
      continue;
    }
    for (std::size_t j : it->second) {
      const RunSummary& p = b.runs[j];
      used_b[j] = true;
      ComparisonRecord rec;
      rec.test_id = r.test_id;
      rec.input_index = r.input_index;
      rec.opt_level = r.opt_level;
      rec.side_a = {r.compiler_id, r.opt_level, *r.outcome};
      rec.side_b = {p.compiler_id, p.opt_level, *p.outcome};
      rec.cls = compare_outcomes(*r.outcome, *p.outcome, options.compare);
      result.records.push_back(std::move(rec));
    }
  }
  for (std::size_t j : runs_b) {
    if (!used_b[j]) result.unmatched.push_back({'b', b.runs[j], "no partner run"});
  }
  return result;
}

namespace {

json side_to_json(const ComparisonSide& s) {
  return {{"compiler_id", s.compiler_id}, {"opt_level", std::string(to_string(s.opt_level))},
          {"outcome", to_string(s.outcome)}};
}

ComparisonSide side_from_json(const json& j) {
  return {j.at("compiler_id").get<std::string>(), opt_level_from_string(j.at("opt_level").get<std::string>()),
          outcome_from_string(j.at("outcome").get<std::string>())};
}

}  // namespace

json merge_result_to_json(const MergeResult& r) {
  json records = json::array();
  for (const auto& c : r.records) {
    records.push_back({{"test_id", c.test_id},
                       {"input_index", c.input_index},
                       {"opt_level", std::string(to_string(c.opt_level))},
                       {"side_a", side_to_json(c.side_a)},
                       {"side_b", side_to_json(c.side_b)},
                       {"class", std::string(to_string(c.cls.tag))}});
  }
  json unmatched = json::array();
  for (const auto& u : r.unmatched) {
    unmatched.push_back({{"side", std::string(1, u.side)}, {"reason", u.reason}, {"run", run_to_json(u.run)}});
  }
  return {{"schema_version", kSchemaVersion},
          {"cross_level", r.cross_level},
          {"runs_attempted", r.runs_attempted},
          {"records", records},
          {"unmatched", unmatched}};
}

MergeResult merge_result_from_json(const json& j) {
  if (!j.is_object() || j.value("schema_version", -1) != kSchemaVersion) {
    throw VersionError("comparison file has an unsupported or missing schema_version");
  }
  MergeResult r;
  try {
    r.cross_level = j.value("cross_level", false);
    r.runs_attempted = j.value("runs_attempted", std::size_t{0});
    for (const auto& c : j.at("records")) {
      ComparisonRecord rec;
      rec.test_id = c.at("test_id").get<std::string>();
      rec.input_index = c.at("input_index").get<std::size_t>();
      rec.opt_level = opt_level_from_string(c.at("opt_level").get<std::string>());
      rec.side_a = side_from_json(c.at("side_a"));
      rec.side_b = side_from_json(c.at("side_b"));
      rec.cls.tag = discrepancy_tag_from_string(c.at("class").get<std::string>());
      rec.cls.side_a = rec.side_a.outcome.tag;
      rec.cls.side_b = rec.side_b.outcome.tag;
      r.records.push_back(std::move(rec));
    }
    for (const auto& u : j.value("unmatched", json::array())) {
      const std::string side = u.at("side").get<std::string>();
      r.unmatched.push_back({side.empty() ? 'a' : side[0], run_from_json(u.at("run")), u.value("reason", "")});
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed comparison file: ") + e.what());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Reporting

std::string format_percentage(std::size_t discrepancies, std::size_t runs) {
  if (runs == 0) return "0.00%";
  // Basis points, rounded half up.
  const unsigned long long d = discrepancies, n = runs;
  const unsigned long long bp = (2 * d * 10000 + n) / (2 * n);
  std::string frac = std::to_string(bp % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return std::to_string(bp / 100) + "." + frac + "%";
}

Report build_report(const std::vector<ComparisonRecord>& records, std::size_t runs_attempted) {
  std::map<std::pair<int, int>, LevelReport> levels;
  Report rep;
  for (const auto& r : records) {
    const std::pair<int, int> key{static_cast<int>(r.side_a.opt_level), static_cast<int>(r.side_b.opt_level)};
    auto [it, inserted] = levels.try_emplace(key);
    LevelReport& lr = it->second;
    if (inserted) {
      lr.level = r.level_label();
      for (int c = 0; c < kDiscrepancyClassCount; ++c) lr.class_counts[static_cast<DiscrepancyTag>(c)] = 0;
    }
    if (key.first != key.second) rep.cross_level = true;
    const auto ra = static_cast<std::size_t>(r.side_a.outcome.tag);
    const auto cb = static_cast<std::size_t>(r.side_b.outcome.tag);
    ++lr.compared;
    ++lr.adjacency[ra][cb];
    if (r.cls.is_discrepancy()) {
      ++lr.class_counts[r.cls.tag];
      ++lr.total;
      ++lr.discrepancy_adjacency[ra][cb];
    }
    const bool sub_a = r.side_a.outcome.tag == OutcomeTag::Number && r.side_a.outcome.subnormal;
    const bool sub_b = r.side_b.outcome.tag == OutcomeTag::Number && r.side_b.outcome.subnormal;
    if (sub_a || sub_b) ++lr.subnormal_records;
  }
  for (auto& [key, lr] : levels) {
    rep.total_discrepancies += lr.total;
    rep.total_runs += 2 * lr.compared;
    rep.levels.push_back(std::move(lr));
  }
  rep.runs_attempted = std::max(runs_attempted, rep.total_runs);
  rep.percentage = format_percentage(rep.total_discrepancies, rep.total_runs);
  return rep;
}

Report build_report(const MergeResult& merged) {
  Report r = build_report(merged.records, merged.runs_attempted);
  r.cross_level = r.cross_level || merged.cross_level;
  return r;
}

namespace {

json matrix_to_json(const TagMatrix& m) {
  json rows = json::array();
  for (const auto& row : m) rows.push_back(row);
  return rows;
}

}  // namespace

json report_to_json(const Report& r) {
  json levels = json::array();
  for (const auto& lr : r.levels) {
    json counts = json::object();
    for (const auto& [tag, n] : lr.class_counts) counts[std::string(to_string(tag))] = n;
    levels.push_back({{"level", lr.level},
                      {"class_counts", counts},
                      {"total", lr.total},
                      {"compared", lr.compared},
                      {"adjacency", matrix_to_json(lr.adjacency)},
                      {"discrepancy_adjacency", matrix_to_json(lr.discrepancy_adjacency)},
                      {"subnormal_records", lr.subnormal_records}});
  }
  json tags = json::array();
  for (auto t : kOutcomeTags) tags.push_back(std::string(to_string(t)));
  return {{"levels", levels},
          {"outcome_tags", tags},
          {"cross_level", r.cross_level},
          {"summary",
           {{"total_discrepancies", r.total_discrepancies},
            {"total_runs", r.total_runs},
            {"runs_attempted", r.runs_attempted},
            {"percentage", r.percentage}}}};
}

std::string render_report_text(const Report& r) {
  std::ostringstream os;
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
  };
  if (r.cross_level) os << "NOTE: cross-level comparison (exploratory)\n\n";
  for (const auto& lr : r.levels) {
    os << "Level " << lr.level << ": " << lr.total << " discrepancies in " << lr.compared << " comparisons\n";
    for (const auto& [tag, n] : lr.class_counts) {
      std::string name(to_string(tag));
      name.resize(12, ' ');
      os << "  " << name << pad(std::to_string(n), 8) << "\n";
    }
    os << "  subnormal results: " << lr.subnormal_records << "\n";
    os << "  adjacency (rows: side a, columns: side b)\n";
    os << "  " << std::string(8, ' ');
    for (auto t : kOutcomeTags) os << pad(std::string(to_string(t)), 10);
    os << "\n";
    for (auto ra : kOutcomeTags) {
      std::string name(to_string(ra));
      name.resize(8, ' ');
      os << "  " << name;
      for (auto cb : kOutcomeTags) {
        os << pad(std::to_string(lr.adjacency[static_cast<std::size_t>(ra)][static_cast<std::size_t>(cb)]), 10);
      }
      os << "\n";
    }
    os << "\n";
  }
  os << "Total discrepancies: " << r.total_discrepancies << " / " << r.total_runs << " runs (" << r.percentage
     << ")\n";
  os << "Runs attempted: " << r.runs_attempted << ", runs compared: " << r.total_runs << "\n";
  return os.str();
}

}  // namespace fpdiff
