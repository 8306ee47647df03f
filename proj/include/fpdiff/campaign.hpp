#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fpdiff/ast.hpp"
#include "fpdiff/classify.hpp"
#include "fpdiff/emit.hpp"
#include "fpdiff/harness.hpp"
#include "fpdiff/inputs.hpp"
#include "fpdiff/program_gen.hpp"

namespace fpdiff {

inline constexpr int kSchemaVersion = 1;

struct CampaignConfig {
  GenConfig generator;
  std::size_t programs = 10;
  std::size_t inputs_per_program = 10;
  std::uint64_t input_seed = 0;
  ClassWeights class_weights = default_class_weights();
  std::vector<Dialect> dialects{Dialect::PortableC};
  std::vector<OptLevel> levels{std::begin(kOptLevels), std::end(kOptLevels)};
  /// Produce the HIP source by translating the CUDA one with hipify_lite.
  bool hipify = false;
  /// Restricts the registry to these compiler ids when non-empty.
  std::vector<std::string> compilers;
  std::size_t jobs = 1;
  /// Overrides every compiler's per-run timeout.
  std::optional<std::chrono::milliseconds> timeout;
  /// Compilation directory. A temporary one is created (and removed) if unset.
  std::optional<std::filesystem::path> work_dir;
};

nlohmann::json campaign_config_to_json(const CampaignConfig& c);
CampaignConfig campaign_config_from_json(const nlohmann::json& j);

struct TestSource {
  Dialect dialect = Dialect::PortableC;
  std::string file;  // file name relative to the campaign directory
  std::string text;
};

struct TestEntry {
  std::string test_id;
  Precision precision = Precision::FP64;
  std::vector<TestSource> sources;
  ProgramAst ast;
  std::vector<InputVector> inputs;

  std::vector<Dialect> dialects() const;
  const TestSource* source(Dialect d) const;
  SourceBundle bundle(Dialect d) const;  // throws DialectError if absent
};

struct RunSummary {
  std::string test_id;
  std::size_t input_index = 0;
  std::string compiler_id;
  Dialect dialect = Dialect::PortableC;
  OptLevel opt_level = OptLevel::O0;
  std::optional<Outcome> outcome;
  std::string raw_stdout;
  RunStatus status = RunStatus::Ok;
  int exit_status = 0;
  std::int64_t wall_time_us = 0;
  std::string diagnostics;
};

RunSummary summarize(const ExecutionRecord& rec, Dialect dialect);

struct PlatformInfo {
  std::string hostname;
  std::string os;
  std::map<std::string, std::string> compiler_versions;
};

PlatformInfo current_platform();

struct CampaignMetadata {
  int schema_version = kSchemaVersion;
  PlatformInfo platform;
  nlohmann::json config = nlohmann::json::object();
  std::vector<TestEntry> tests;
  std::vector<RunSummary> runs;

  const TestEntry* find_test(const std::string& test_id) const;
  /// True if any run did not produce an outcome.
  bool has_failures() const;
};

nlohmann::json metadata_to_json(const CampaignMetadata& m);
/// Throws VersionError on a missing or unsupported schema_version and
/// ConfigError on malformed content or dangling run references.
CampaignMetadata metadata_from_json(const nlohmann::json& j);
std::string serialize_metadata(const CampaignMetadata& m);
CampaignMetadata parse_metadata(const std::string& text);
/// Writes via a temporary file and rename, so readers never see a partial file.
void write_metadata(const CampaignMetadata& m, const std::filesystem::path& file);
CampaignMetadata read_metadata(const std::filesystem::path& file);

/// Generates, emits and samples inputs for `config.programs` programs.
/// Program i is generated with seed derive_seed(generator.seed, "program:<i>").
/// A program identical to an earlier one gets a "_2", "_3", ... id suffix.
std::vector<TestEntry> build_test_suite(const CampaignConfig& config);

/// Every registry entry whose extensions include the dialect's.
std::vector<CompilerSpec> compilers_for(Dialect d, const std::vector<CompilerSpec>& registry,
                                        const std::vector<std::string>& only = {});

/// Runs every test x dialect x matching compiler x level x input. Compile
/// and run failures are recorded in the runs list. Throws ConfigError if a
/// requested dialect has no compiler.
CampaignMetadata execute_tests(std::vector<TestEntry> tests, const CampaignConfig& config,
                               const std::vector<CompilerSpec>& registry);

/// build_test_suite followed by execute_tests.
CampaignMetadata run_campaign(const CampaignConfig& config, const std::vector<CompilerSpec>& registry);

// ---------------------------------------------------------------------------

struct ComparisonSide {
  std::string compiler_id;
  OptLevel opt_level = OptLevel::O0;
  Outcome outcome;
};

struct ComparisonRecord {
  std::string test_id;
  std::size_t input_index = 0;
  OptLevel opt_level = OptLevel::O0;  // side a's level
  ComparisonSide side_a;
  ComparisonSide side_b;
  DiscrepancyClass cls;

  /// "O2", or "O0/O3_FM" for a cross-level pair.
  std::string level_label() const;
};

struct UnmatchedRun {
  char side = 'a';
  RunSummary run;
  std::string reason;
};

struct MergeOptions {
  /// Exploratory: join level `first` of side a with level `second` of side b.
  std::optional<std::pair<OptLevel, OptLevel>> cross_levels;
  std::optional<std::string> compiler_a;
  std::optional<std::string> compiler_b;
  CompareOptions compare;
};

struct MergeResult {
  std::vector<ComparisonRecord> records;
  std::vector<UnmatchedRun> unmatched;
  std::size_t runs_attempted = 0;  // runs of both sides considered for the join
  bool cross_level = false;
};

/// Joins runs on (test_id, input_index, opt_level). Several runs of one key
/// on a side (several compilers) are paired with every partner. Runs without
/// an outcome or without a partner are reported as unmatched. Throws
/// VersionError when the schema versions differ.
MergeResult merge_platforms(const CampaignMetadata& a, const CampaignMetadata& b,
                            const MergeOptions& options = {});

nlohmann::json merge_result_to_json(const MergeResult& r);
MergeResult merge_result_from_json(const nlohmann::json& j);

using TagMatrix = std::array<std::array<std::size_t, 4>, 4>;

struct LevelReport {
  std::string level;
  std::map<DiscrepancyTag, std::size_t> class_counts;  // all seven classes present
  std::size_t total = 0;
  std::size_t compared = 0;  // records at this level
  /// [side a tag][side b tag], every record.
  TagMatrix adjacency{};
  /// [side a tag][side b tag], discrepant records only.
  TagMatrix discrepancy_adjacency{};
  std::size_t subnormal_records = 0;  // records with a subnormal Number on either side
};

struct Report {
  std::vector<LevelReport> levels;  // sorted by level
  std::size_t total_discrepancies = 0;
  std::size_t total_runs = 0;  // compared runs: two per record
  std::size_t runs_attempted = 0;
  std::string percentage;  // total_discrepancies / total_runs
  bool cross_level = false;
};

/// "X.YY%" with round-half-up; "0.00%" when runs is zero.
std::string format_percentage(std::size_t discrepancies, std::size_t runs);

Report build_report(const std::vector<ComparisonRecord>& records, std::size_t runs_attempted = 0);
Report build_report(const MergeResult& merged);

nlohmann::json report_to_json(const Report& r);
std::string render_report_text(const Report& r);

}  // namespace fpdiff
