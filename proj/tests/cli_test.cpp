#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "docgen/export.hpp"
#include "support/test_support.hpp"

namespace docgen {
namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "docgen");
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

// Runs the installed binary through the shell; returns stdout and exit code.
CliRun run_binary(const std::string& arguments) {
  CliRun r;
  const std::string command = std::string(DOCGEN_CLI_PATH) + " " + arguments + " 2>/dev/null";
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return {-1, {}, {}};
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string kBank = testing::lisbon_fixture().string();

TEST(CliTest, ValidateConformingFixture) {
  const CliRun r = run_cli({"validate", kBank});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "[]\n");
}

TEST(CliTest, ValidateWarningsAndStrict) {
  const auto dir = std::filesystem::temp_directory_path() / ("docgen_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto path = dir / "long.json";
  { std::ofstream(path) << testing::manifest_json({"x"}, {{"a", "p", 80, {"x"}, 0}}); }
  CliRun r = run_cli({"validate", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("DurationOutOfObservedRange"), std::string::npos);
  r = run_cli({"validate", "--strict", path.string()});
  EXPECT_EQ(r.code, 1);
  { std::ofstream(path) << R"({"topics":["x"],"interviewees":[],"clips":[]})"; }
  EXPECT_EQ(run_cli({"validate", path.string()}).code, 1);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli({"validate", "/no/such/file.json"}).code, 3);
  const CliRun unknown = run_cli({"generate", kBank, "--topics", "nosuch", "--seed", "1"});
  EXPECT_EQ(unknown.code, 2);
  EXPECT_NE(unknown.err.find("nosuch"), std::string::npos);
  EXPECT_EQ(run_cli({"generate", kBank, "--topics", "tourism", "--seed", "1", "--min-total", "5000",
                     "--max-total", "6000"})
                .code,
            2);
  EXPECT_EQ(run_cli({"generate", kBank}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(CliTest, StatsMatchesLibrary) {
  const CliRun r = run_cli({"stats", kBank});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["clip_count"], 120);
  EXPECT_EQ(j["interviewee_count"], 14);
  EXPECT_EQ(j["topic_count"], 10);
  EXPECT_EQ(j["per_topic_clip_counts"]["gentrification"], 25);
}

TEST(CliTest, GenerateJsonMatchesLibraryBytes) {
  const CliRun r = run_cli({"generate", kBank, "--topics", "affordable housing,tourism", "--seed", "42"});
  ASSERT_EQ(r.code, 0) << r.err;
  const ClipBank bank = load_bank(kBank);
  const Documentary doc = generate(bank, {{"affordable housing", "tourism"}}, {}, 42);
  EXPECT_EQ(r.out, documentary_manifest_json(doc, bank) + "\n");
}

TEST(CliTest, GenerateFormats) {
  const CliRun m3u = run_cli({"generate", kBank, "--topics", "tourism", "--seed", "42", "--format", "m3u"});
  EXPECT_EQ(m3u.out.rfind("#EXTM3U\n", 0), 0u);
  const CliRun edl = run_cli({"generate", kBank, "--topics", "tourism", "--seed", "42", "--format", "edl"});
  EXPECT_EQ(edl.out.rfind("clip_id,interviewee,start_order,duration_s\n", 0), 0u);
  EXPECT_EQ(run_cli({"generate", kBank, "--topics", "tourism", "--format", "avi"}).code, 1);
}

TEST(CliTest, GenerateAppendsSessionLog) {
  const auto dir = std::filesystem::temp_directory_path() / ("docgen_cli_log_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  const auto path = dir / "viewer.ndjson";
  for (const char* seed : {"1", "2"}) {
    ASSERT_EQ(run_cli({"generate", kBank, "--topics", "rentals", "--seed", seed, "--session-log", path.string()}).code,
              0);
  }
  EXPECT_EQ(load_session_log(path, "viewer").entries.size(), 2u);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, SimulateIsReproducible) {
  const CliRun a = run_cli({"simulate", kBank, "--generations", "10", "--topics-per", "1..3", "--seed", "8"});
  const CliRun b = run_cli({"simulate", kBank, "--generations", "10", "--topics-per", "1..3", "--seed", "8"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(nlohmann::json::parse(a.out)["generations"].get<int>() + nlohmann::json::parse(a.out)["skipped"].get<int>(),
            10);
  EXPECT_EQ(run_cli({"simulate", kBank, "--topics-per", "3..x"}).code, 1);
  EXPECT_EQ(run_cli({"simulate", kBank, "--topics-per", "2"}).code, 0);
}

TEST(CliBinaryTest, GenerateTwiceIdenticalStdout) {
  const std::string args = "generate " + kBank + " --topics tourism --seed 42 --format m3u";
  const CliRun a = run_binary(args);
  const CliRun b = run_binary(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);
}

TEST(CliBinaryTest, ExitCodeForUnknownTopic) {
  EXPECT_EQ(run_binary("generate " + kBank + " --topics nosuch --seed 1").code, 2);
}

}  // namespace
}  // namespace docgen
