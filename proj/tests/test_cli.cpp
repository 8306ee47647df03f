#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fpdiff/campaign.hpp"
#include "fpdiff/process.hpp"
#include "support.hpp"

using namespace fpdiff;
namespace fs = std::filesystem;

namespace {

ProcessResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), FPDIFF_CLI);
  return run_process(args, std::chrono::minutes(5));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  support::TempDir dir;
  fs::path gen = dir.path() / "gen";
};

}  // namespace

TEST_F(Cli, GenerateWritesSourcesAndMetadata) {
  const auto r = cli({"generate", "--out", gen.string(), "--count", "3", "--count-inputs", "2", "--seed", "4",
                      "--dialects", "c,cuda", "--levels", "O0"});
  ASSERT_EQ(r.exit_status, 0) << r.err;
  const CampaignMetadata m = read_metadata(gen / "campaign.json");
  ASSERT_EQ(m.tests.size(), 3u);
  for (const auto& t : m.tests) {
    EXPECT_TRUE(fs::exists(gen / (t.test_id + ".c")));
    EXPECT_TRUE(fs::exists(gen / (t.test_id + ".cu")));
    EXPECT_EQ(t.inputs.size(), 2u);
  }
  EXPECT_TRUE(m.runs.empty());

  const fs::path again = dir.path() / "again";
  ASSERT_EQ(cli({"generate", "--out", again.string(), "--count", "3", "--count-inputs", "2", "--seed", "4",
                 "--dialects", "c,cuda", "--levels", "O0"})
                .exit_status,
            0);
  EXPECT_EQ(slurp(again / "campaign.json"), slurp(gen / "campaign.json"));
}

TEST_F(Cli, RunMergeReportReplay) {
  if (!support::have_program("cc")) GTEST_SKIP() << "no host C compiler";
  ASSERT_EQ(cli({"generate", "--out", gen.string(), "--count", "3", "--count-inputs", "2", "--precision", "fp32",
                 "--levels", "O0,O3_FM"})
                .exit_status,
            0);
  const auto run = cli({"run", gen.string(), "--compilers", "cc"});
  ASSERT_TRUE(run.exit_status == 0 || run.exit_status == 2) << run.err;
  const CampaignMetadata m = read_metadata(gen / "campaign.json");
  EXPECT_EQ(m.runs.size(), 12u);

  const fs::path cmp = dir.path() / "cmp.json";
  const auto merged = cli({"merge", (gen / "campaign.json").string(), (gen / "campaign.json").string(), "--out",
                           cmp.string(), "--cross-level", "O0:O3_FM"});
  ASSERT_EQ(merged.exit_status, 0) << merged.err;
  EXPECT_NE(merged.out.find("6 comparisons"), std::string::npos) << merged.out;

  const auto text = cli({"report", cmp.string()});
  ASSERT_EQ(text.exit_status, 0) << text.err;
  EXPECT_NE(text.out.find("cross-level"), std::string::npos);
  EXPECT_NE(text.out.find("Total discrepancies: "), std::string::npos);

  const auto js = cli({"report", cmp.string(), "--format", "json"});
  ASSERT_EQ(js.exit_status, 0);
  const auto j = nlohmann::json::parse(js.out);
  EXPECT_EQ(j.at("summary").at("total_runs"), 12);

  const auto replay = cli({"replay", (gen / "campaign.json").string(), "--test-id", m.tests[0].test_id,
                           "--compiler", "cc", "--level", "O0"});
  ASSERT_EQ(replay.exit_status, 0) << replay.err;
  EXPECT_NE(replay.out.find("oracle: "), std::string::npos);
  EXPECT_NE(replay.out.find("cc O0: ok"), std::string::npos) << replay.out;
}

TEST_F(Cli, HipifyTranslatesFiles) {
  ASSERT_EQ(cli({"generate", "--out", gen.string(), "--count", "2", "--dialects", "cuda"}).exit_status, 0);
  std::vector<std::string> args{"hipify", "--out-dir", (dir.path() / "hip").string()};
  for (const auto& e : fs::directory_iterator(gen)) {
    if (e.path().extension() == ".cu") args.push_back(e.path().string());
  }
  ASSERT_EQ(args.size(), 5u);
  const auto r = cli(args);
  ASSERT_EQ(r.exit_status, 0) << r.err;
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir.path() / "hip")) {
    EXPECT_EQ(e.path().extension(), ".hip");
    EXPECT_NE(slurp(e.path()).find("hipLaunchKernelGGL"), std::string::npos);
    ++n;
  }
  EXPECT_EQ(n, 2u);
}

TEST_F(Cli, ConfigurationErrorsExitWithOne) {
  EXPECT_EQ(cli({"run", (dir.path() / "missing").string()}).exit_status, 1);
  EXPECT_EQ(cli({"generate", "--out", gen.string(), "--levels", "O9"}).exit_status, 1);
  EXPECT_EQ(cli({"generate"}).exit_status, 1);
  EXPECT_EQ(cli({"bogus"}).exit_status, 1);

  std::ofstream(dir.path() / "reg.json") << "[{\"id\": \"x\"}]";
  ASSERT_EQ(cli({"generate", "--out", gen.string(), "--count", "1"}).exit_status, 0);
  EXPECT_EQ(cli({"run", gen.string(), "--registry", (dir.path() / "reg.json").string()}).exit_status, 1);

  auto j = nlohmann::json::parse(slurp(gen / "campaign.json"));
  j["schema_version"] = 42;
  std::ofstream(gen / "bad.json") << j.dump();
  EXPECT_EQ(cli({"merge", (gen / "bad.json").string(), (gen / "campaign.json").string()}).exit_status, 1);
  EXPECT_EQ(cli({"--help"}).exit_status, 0);
}

TEST_F(Cli, FailedRunsExitWithTwo) {
  if (!support::have_program("cc")) GTEST_SKIP() << "no host C compiler";
  ASSERT_EQ(cli({"generate", "--out", gen.string(), "--count", "1", "--count-inputs", "1", "--levels", "O0"})
                .exit_status,
            0);
  auto reg = registry_to_json({host_cc_spec("broken", "cc")});
  reg[0]["extra_args"] = {"-DNOT_C=1", "-include", "/nonexistent/header.h"};
  std::ofstream(dir.path() / "reg.json") << reg.dump();
  const auto r = cli({"run", gen.string(), "--registry", (dir.path() / "reg.json").string()});
  EXPECT_EQ(r.exit_status, 2) << r.err;
  const CampaignMetadata m = read_metadata(gen / "campaign.json");
  ASSERT_EQ(m.runs.size(), 1u);
  EXPECT_EQ(m.runs[0].status, RunStatus::CompileFailure);
}
