#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fpdiff/classify.hpp"
#include "fpdiff/emit.hpp"
#include "fpdiff/inputs.hpp"

namespace fpdiff {

enum class OptLevel { O0, O1, O2, O3, O3_FM };
inline constexpr OptLevel kOptLevels[] = {OptLevel::O0, OptLevel::O1, OptLevel::O2, OptLevel::O3,
                                          OptLevel::O3_FM};

std::string_view to_string(OptLevel l);
OptLevel opt_level_from_string(std::string_view s);

struct CompilerSpec {
  std::string id;
  std::string command;
  std::vector<std::string> extra_args;
  std::vector<std::string> extensions;  // e.g. {".cu"}
  std::string fast_math_flag;
  std::map<OptLevel, std::vector<std::string>> opt_flag_map;
  std::chrono::milliseconds timeout{10'000};  // per run
  /// Arguments placed after the source file (libraries must follow objects).
  std::vector<std::string> link_args;
  std::chrono::milliseconds compile_timeout{120'000};

  friend bool operator==(const CompilerSpec&, const CompilerSpec&) = default;
};

/// Throws ConfigError unless the compiler entry is usable (e.g. all five levels mapped).
void validate(const CompilerSpec& spec);

/// Standard -O0..-O3 map; O3_FM carries the O3 flags (the fast-math flag is
/// appended separately).
std::map<OptLevel, std::vector<std::string>> standard_opt_flags();

CompilerSpec nvcc_spec();
CompilerSpec hipcc_spec();
/// Host C compiler for the portable dialect (`cc`, `gcc`, `clang`, ...).
CompilerSpec host_cc_spec(std::string id = "cc", std::string command = "cc");

/// nvcc for .cu, hipcc for .hip, cc then clang for .c.
std::vector<CompilerSpec> default_registry();

nlohmann::json registry_to_json(const std::vector<CompilerSpec>& registry);
std::vector<CompilerSpec> registry_from_json(const nlohmann::json& j);
std::vector<CompilerSpec> load_registry(const std::filesystem::path& file);

/// First spec whose extensions include the file's extension.
const CompilerSpec& match_compiler(const std::filesystem::path& source, const std::vector<CompilerSpec>& registry);

/// [command] + extra_args + opt flags (+ fast-math flag for O3_FM) + -o out src + link_args.
std::vector<std::string> build_command(const CompilerSpec& spec, OptLevel level, const std::string& src,
                                       const std::string& out);

enum class RunStatus { Ok, Timeout, RuntimeFailure, CompileFailure, ParseFailure };
std::string_view to_string(RunStatus s);
RunStatus run_status_from_string(std::string_view s);

struct ExecutionRecord {
  std::string test_id;
  std::size_t input_index = 0;
  std::string compiler_id;
  OptLevel opt_level = OptLevel::O0;
  RunStatus status = RunStatus::Ok;
  std::string raw_stdout;
  int exit_status = 0;
  std::chrono::microseconds wall_time{0};
  std::optional<Outcome> outcome;  // present iff status == Ok
  std::string diagnostics;         // compiler output for CompileFailure, stderr otherwise
};

/// Compiles sources into a work directory, once per (test_id, compiler_id,
/// level). Thread-safe; concurrent requests for the same key wait for the
/// first compilation.
class BinaryCache {
 public:
  explicit BinaryCache(std::filesystem::path work_dir);

  /// Path of the compiled binary. Throws CompileError (also on later
  /// requests for a key whose compilation failed).
  std::filesystem::path binary_for(const SourceBundle& bundle, const CompilerSpec& spec, OptLevel level);

  std::size_t compilations() const;
  const std::filesystem::path& work_dir() const { return work_dir_; }

 private:
  struct Entry {
    std::shared_future<std::filesystem::path> binary;
  };
  std::filesystem::path compile(const SourceBundle& bundle, const CompilerSpec& spec, OptLevel level);

  std::filesystem::path work_dir_;
  mutable std::mutex mutex_;
  std::map<std::string, Entry> entries_;
  std::size_t compilations_ = 0;
};

/// Builds (or reuses) the binary and runs it on one input vector. The
/// outcome is parsed from the first stdout line. Throws CompileError when
/// the source does not compile.
ExecutionRecord compile_and_run(const SourceBundle& bundle, const CompilerSpec& spec, OptLevel level,
                                const InputVector& input, std::size_t input_index, BinaryCache& cache);

/// First line of `<command> --version`, or "unknown".
std::string compiler_version(const CompilerSpec& spec);

}  // namespace fpdiff
