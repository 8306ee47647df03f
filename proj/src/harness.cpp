#include "fpdiff/harness.hpp"

#include <fstream>

#include "fpdiff/error.hpp"
#include "fpdiff/process.hpp"

namespace fpdiff {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(OptLevel l) {
  switch (l) {
    case OptLevel::O0: return "O0";
    case OptLevel::O1: return "O1";
    case OptLevel::O2: return "O2";
    case OptLevel::O3: return "O3";
    case OptLevel::O3_FM: return "O3_FM";
  }
  return "?";
}

OptLevel opt_level_from_string(std::string_view s) {
  for (auto l : kOptLevels) {
    if (to_string(l) == s) return l;
  }
  throw ConfigError("unknown optimization level '" + std::string(s) + "'");
}

std::map<OptLevel, std::vector<std::string>> standard_opt_flags() {
  return {{OptLevel::O0, {"-O0"}},
          {OptLevel::O1, {"-O1"}},
          {OptLevel::O2, {"-O2"}},
          {OptLevel::O3, {"-O3"}},
          {OptLevel::O3_FM, {"-O3"}}};
}

void validate(const CompilerSpec& spec) {
  if (spec.id.empty()) throw ConfigError("compiler spec without id");
  if (spec.command.empty()) throw ConfigError("compiler '" + spec.id + "' has no command");
  if (spec.extensions.empty()) throw ConfigError("compiler '" + spec.id + "' has no extensions");
  for (auto l : kOptLevels) {
    if (!spec.opt_flag_map.contains(l)) {
      throw ConfigError("compiler '" + spec.id + "' has no flags for " + std::string(to_string(l)));
    }
  }
  if (spec.timeout.count() <= 0) throw ConfigError("compiler '" + spec.id + "' has a non-positive timeout");
}

CompilerSpec nvcc_spec() {
  CompilerSpec s;
  s.id = "nvcc";
  s.command = "nvcc";
  s.extensions = {".cu"};
  s.fast_math_flag = "--use_fast_math";
  s.opt_flag_map = standard_opt_flags();
  return s;
}

CompilerSpec hipcc_spec() {
  CompilerSpec s;
  s.id = "hipcc";
  s.command = "hipcc";
  s.extensions = {".hip"};
  s.fast_math_flag = "-DHIP_FAST_MATH";
  s.opt_flag_map = standard_opt_flags();
  return s;
}

CompilerSpec host_cc_spec(std::string id, std::string command) {
  CompilerSpec s;
  s.id = std::move(id);
  s.command = std::move(command);
  s.extensions = {".c"};
  s.fast_math_flag = "-ffast-math";
  s.opt_flag_map = standard_opt_flags();
  s.link_args = {"-lm"};
  return s;
}

std::vector<CompilerSpec> default_registry() {
  return {nvcc_spec(), hipcc_spec(), host_cc_spec("cc", "cc"), host_cc_spec("clang", "clang")};
}

json registry_to_json(const std::vector<CompilerSpec>& registry) {
  json arr = json::array();
  for (const auto& s : registry) {
    json flags = json::object();
    for (const auto& [level, args] : s.opt_flag_map) flags[std::string(to_string(level))] = args;
    arr.push_back({{"id", s.id},
                   {"command", s.command},
                   {"extra_args", s.extra_args},
                   {"extensions", s.extensions},
                   {"fast_math_flag", s.fast_math_flag},
                   {"opt_flag_map", flags},
                   {"timeout", static_cast<double>(s.timeout.count()) / 1000.0},
                   {"link_args", s.link_args},
                   {"compile_timeout", static_cast<double>(s.compile_timeout.count()) / 1000.0}});
  }
  return arr;
}

std::vector<CompilerSpec> registry_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("compiler registry must be a JSON array");
  std::vector<CompilerSpec> out;
  try {
    for (const auto& e : j) {
      CompilerSpec s;
      s.id = e.at("id").get<std::string>();
      s.command = e.at("command").get<std::string>();
      s.extra_args = e.value("extra_args", std::vector<std::string>{});
      s.extensions = e.at("extensions").get<std::vector<std::string>>();
      s.fast_math_flag = e.value("fast_math_flag", std::string{});
      s.opt_flag_map = standard_opt_flags();
      if (e.contains("opt_flag_map")) {
        s.opt_flag_map.clear();
        for (const auto& [level, args] : e.at("opt_flag_map").items()) {
          s.opt_flag_map[opt_level_from_string(level)] = args.get<std::vector<std::string>>();
        }
      }
      s.timeout = std::chrono::milliseconds(static_cast<long long>(e.value("timeout", 10.0) * 1000.0));
      s.link_args = e.value("link_args", std::vector<std::string>{});
      s.compile_timeout =
          std::chrono::milliseconds(static_cast<long long>(e.value("compile_timeout", 120.0) * 1000.0));
      validate(s);
      out.push_back(std::move(s));
    }
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("malformed compiler registry: ") + ex.what());
  }
  return out;
}

std::vector<CompilerSpec> load_registry(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open compiler registry " + file.string());
  try {
    return registry_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("compiler registry " + file.string() + ": " + e.what());
  }
}

const CompilerSpec& match_compiler(const fs::path& source, const std::vector<CompilerSpec>& registry) {
  if (registry.empty()) throw ConfigError("compiler registry is empty");
  const std::string ext = source.extension().string();
  for (const auto& spec : registry) {
    for (const auto& e : spec.extensions) {
      if (e == ext) return spec;
    }
  }
  throw UnmatchedExtensionError(ext);
}

std::vector<std::string> build_command(const CompilerSpec& spec, OptLevel level, const std::string& src,
                                       const std::string& out) {
  std::vector<std::string> argv{spec.command};
  argv.insert(argv.end(), spec.extra_args.begin(), spec.extra_args.end());
  const auto& flags = spec.opt_flag_map.at(level);
  argv.insert(argv.end(), flags.begin(), flags.end());
  if (level == OptLevel::O3_FM && !spec.fast_math_flag.empty()) argv.push_back(spec.fast_math_flag);
  argv.insert(argv.end(), {"-o", out, src});
  argv.insert(argv.end(), spec.link_args.begin(), spec.link_args.end());
  return argv;
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::Timeout: return "timeout";
    case RunStatus::RuntimeFailure: return "runtime_failure";
    case RunStatus::CompileFailure: return "compile_failure";
    case RunStatus::ParseFailure: return "parse_failure";
  }
  return "?";
}

RunStatus run_status_from_string(std::string_view s) {
  for (auto st : {RunStatus::Ok, RunStatus::Timeout, RunStatus::RuntimeFailure, RunStatus::CompileFailure,
                  RunStatus::ParseFailure}) {
    if (to_string(st) == s) return st;
  }
  throw ConfigError("unknown run status '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------

BinaryCache::BinaryCache(fs::path work_dir) : work_dir_(std::move(work_dir)) {
  fs::create_directories(work_dir_);
}

std::size_t BinaryCache::compilations() const {
  std::lock_guard lock(mutex_);
  return compilations_;
}

fs::path BinaryCache::binary_for(const SourceBundle& bundle, const CompilerSpec& spec, OptLevel level) {
  const std::string key = bundle.test_id + "|" + std::string(to_string(bundle.dialect)) + "|" + spec.id + "|" +
                          std::string(to_string(level));
  std::promise<fs::path> promise;
  std::shared_future<fs::path> future;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      future = promise.get_future().share();
      entries_.emplace(key, Entry{future});
      ++compilations_;
      owner = true;
    } else {
      future = it->second.binary;
    }
  }
  if (owner) {
    try {
      promise.set_value(compile(bundle, spec, level));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return future.get();
}

fs::path BinaryCache::compile(const SourceBundle& bundle, const CompilerSpec& spec, OptLevel level) {
  const fs::path dir = work_dir_ / (spec.id + "-" + std::string(to_string(level)));
  fs::create_directories(dir);
  const fs::path src = dir / bundle.file_name();
  const fs::path bin = dir / (bundle.test_id + "." + std::string(to_string(bundle.dialect)) + ".bin");
  {
    std::ofstream f(src, std::ios::binary | std::ios::trunc);
    f << bundle.source_text;
    if (!f) throw CompileError("cannot write " + src.string(), "");
  }
  const auto argv = build_command(spec, level, src.string(), bin.string());
  ProcessResult r;
  try {
    r = run_process(argv, spec.compile_timeout);
  } catch (const Error& e) {
    throw CompileError(spec.id + ": " + e.what(), e.what());
  }
  if (r.timed_out) throw CompileError(spec.id + ": compilation of " + src.string() + " timed out", r.out + r.err);
  if (r.exit_status != 0 || !fs::exists(bin)) {
    throw CompileError(spec.id + ": compilation of " + src.string() + " failed", r.out + r.err);
  }
  return bin;
}

ExecutionRecord compile_and_run(const SourceBundle& bundle, const CompilerSpec& spec, OptLevel level,
                                const InputVector& input, std::size_t input_index, BinaryCache& cache) {
  const fs::path bin = cache.binary_for(bundle, spec, level);

  ExecutionRecord rec;
  rec.test_id = bundle.test_id;
  rec.input_index = input_index;
  rec.compiler_id = spec.id;
  rec.opt_level = level;

  std::vector<std::string> argv{bin.string()};
  for (auto& a : input.argv()) argv.push_back(std::move(a));
  const ProcessResult r = run_process(argv, spec.timeout);
  rec.raw_stdout = r.out;
  rec.exit_status = r.exit_status;
  rec.wall_time = r.wall_time;
  rec.diagnostics = r.err;
  if (r.timed_out) {
    rec.status = RunStatus::Timeout;
    return rec;
  }
  if (r.exit_status != 0) {
    rec.status = RunStatus::RuntimeFailure;
    return rec;
  }
  const std::string first_line = r.out.substr(0, r.out.find('\n'));
  try {
    rec.outcome = parse_outcome(first_line, bundle.precision);
    rec.status = RunStatus::Ok;
  } catch (const ParseError&) {
    rec.status = RunStatus::ParseFailure;
  }
  return rec;
}

std::string compiler_version(const CompilerSpec& spec) {
  try {
    const auto r = run_process({spec.command, "--version"}, std::chrono::seconds(20));
    const std::string& text = r.out.empty() ? r.err : r.out;
    if (r.exit_status != 0 || text.empty()) return "unknown";
    return text.substr(0, text.find('\n'));
  } catch (const Error&) {
    return "unavailable";
  }
}

}  // namespace fpdiff
