#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ifsgap/cli.hpp"
#include "test_support.hpp"

using nlohmann::json;
using testing_support::fixture;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ifsgap::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool has_finding(const json& doc, const std::string& needle) {
  for (const auto& f : doc["findings"]) {
    if (f["message"].get<std::string>().find(needle) != std::string::npos) return true;
  }
  return false;
}

class EnvGuard {
 public:
  EnvGuard(const char* name, const char* value) : name_(name) { setenv(name, value, 1); }
  ~EnvGuard() { unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST(Cli, ExactGapsAsCsv) {
  const auto r = run({"gaps", fixture("cantor"), "--exact", "--cutoff", "1/100", "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1/3\n1/9\n1/27\n1/81\n");
}

TEST(Cli, EnvelopeFields) {
  const auto r = run({"gaps", fixture("mixed"), "--exact", "--cutoff", "1/40"});
  ASSERT_EQ(r.code, 0);
  const auto d = r.doc();
  EXPECT_EQ(d["tool"], "ifsgap");
  EXPECT_EQ(d["version"], ifsgap::cli::kVersion);
  EXPECT_EQ(d["command"], "gaps");
  EXPECT_EQ(d["parameters"]["cutoff"], "1/40");
  EXPECT_EQ(d["result"]["gaps"], json({"1/6", "1/12", "1/18", "1/24", "1/36"}));
  EXPECT_EQ(d["status"], "ok");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"verify", fixture("mixed"), "--yzx"}).code, 0);
  const auto bad = run({"validate", fixture("single-map")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_TRUE(has_finding(bad.doc(), "d_u = 1 < 2"));
  const auto fail = run({"verify", fixture("halves"), "--commensurability", "--against", fixture("cantor")});
  EXPECT_EQ(fail.code, 1);
  EXPECT_EQ(fail.doc()["result"]["counterexample"], "1/3");
  EXPECT_EQ(run({"gaps", fixture("overlap3"), "--exact", "--cutoff", "1/10"}).code, 2);
  EXPECT_EQ(run({"prune", fixture("halves"), "--full-measure", "--depth", "6"}).code, 1);
  EXPECT_EQ(run({"prune", fixture("overlap3"), "--depth", "6"}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"gaps", fixture("cantor"), "--exact", "--cutoff", "one third"}).code, 2);
  EXPECT_EQ(run({"gaps", fixture("cantor"), "--exact", "--cutoff", "-1"}).code, 2);
  EXPECT_EQ(run({"hull", "/nonexistent/instance.json"}).code, 2);
  EXPECT_EQ(run({"gaps", fixture("cantor"), "--metric", "--depth", "99", "--noise-floor", "0.01"}).code, 2);
}

TEST(Cli, ErrorsCarryStructuredFindings) {
  const auto r = run({"gaps", fixture("overlap3"), "--exact", "--cutoff", "1/10"});
  const auto d = r.doc();
  EXPECT_EQ(d["status"], "error");
  ASSERT_FALSE(d["findings"].empty());
  EXPECT_EQ(d["findings"][0]["severity"], "error");
  EXPECT_EQ(d["parameters"]["cutoff"], "1/10");
}

TEST(Cli, BudgetFromEnvironment) {
  {
    EnvGuard guard("IFSGAP_MAX_GAPS", "10");
    EXPECT_EQ(run({"gaps", fixture("mixed"), "--exact", "--cutoff", "1/100000"}).code, 3);
  }
  {
    EnvGuard guard("IFSGAP_MAX_INTERVALS", "100");
    EXPECT_EQ(run({"gaps", fixture("cantor"), "--metric", "--depth", "8", "--noise-floor", "0.01"}).code, 3);
    EXPECT_EQ(run({"gaps", fixture("cantor"), "--metric", "--depth", "6", "--noise-floor", "0.01"}).code, 0);
  }
  {
    EnvGuard guard("IFSGAP_MAX_GAPS", "zero");
    EXPECT_EQ(run({"gaps", fixture("mixed"), "--exact", "--cutoff", "1/10"}).code, 2);
  }
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands{
      {"hull", fixture("gd2")},
      {"gaps", fixture("gd2"), "--exact", "--cutoff", "1/500"},
      {"gaps", fixture("mixed"), "--metric", "--depth", "10", "--noise-floor", "0.005"},
      {"kappa", fixture("cantor"), "--depth", "6", "--profile"},
      {"ratios", fixture("mixed"), "--theta", "1/24", "--floor", "1/1000"},
      {"algdep", fixture("gd2"), "--from-gaps"},
      {"verify", fixture("gd2"), "--yzx"},
      {"verify", fixture("mixed"), "--sandwich", "--theta", "1/24", "--floor", "1/1000"},
      {"bound", fixture("mixed")},
      {"prune", fixture("overlap3"), "--full-measure", "--depth", "8"},
  };
  for (const auto& args : commands) {
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0) << args[0] << "\n" << a.out << a.err;
    EXPECT_EQ(a.out, b.out) << args[0];
  }
}

TEST(Cli, RationalParametersRoundTrip) {
  // Unnormalized input is echoed in lowest terms and means the same value.
  auto r = run({"ratios", fixture("mixed"), "--theta", "2/48", "--floor", "0.001"});
  ASSERT_EQ(r.code, 0) << r.out;
  auto d = r.doc();
  EXPECT_EQ(d["parameters"]["theta"], "1/24");
  EXPECT_EQ(d["parameters"]["floor"], "1/1000");
  EXPECT_EQ(d["result"]["theta"], "1/24");

  r = run({"verify", fixture("cantor"), "--sandwich", "--theta", "3/81", "--floor", "1/729"});
  ASSERT_EQ(r.code, 0) << r.out;
  d = r.doc();
  EXPECT_EQ(d["parameters"]["theta"], "1/27");
  EXPECT_EQ(d["result"]["floor"], "1/729");
  EXPECT_EQ(d["status"], "pass");

  r = run({"kappa", fixture("cantor"), "--depth", "3", "--delta", "4/36"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.doc()["parameters"]["delta"], "1/9");
}

TEST(Cli, OutputFileAndCloudInput) {
  const auto dir = std::filesystem::temp_directory_path() / "ifsgap_cli_test";
  std::filesystem::create_directories(dir);
  const auto cloud = (dir / "cloud.csv").string();
  {
    std::ofstream f(cloud);
    f << "0\n1/9\n2/9\n1/3\n2/3\n7/9\n8/9\n1\n";
  }
  const auto report = (dir / "report.json").string();
  const auto r = run({"kappa", "--cloud", cloud, "--delta", "1/5", "--output", report});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(report);
  const auto d = json::parse(in);
  EXPECT_EQ(d["result"]["kappa"], 2);
  std::filesystem::remove_all(dir);
}

TEST(Cli, BoundAndAlgdep) {
  auto d = run({"bound", fixture("cantor")}).doc();
  EXPECT_EQ(d["result"]["bound"], 1);
  d = run({"bound", fixture("mixed")}).doc();
  EXPECT_EQ(d["result"]["bound"], 2);
  d = run({"algdep", fixture("cantor"), "--from-gaps"}).doc();
  EXPECT_EQ(d["result"]["dependence_number"], 0);
  d = run({"algdep", fixture("mixed"), "--from-ifs"}).doc();
  EXPECT_EQ(d["result"]["dependence_number"], 1);
}
