#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hconv/cli.hpp"

using namespace hconv;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("hconv_cli_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

json read(const std::string& path) {
  std::ifstream in(path);
  return json::parse(in);
}

}  // namespace

TEST(Cli, CorpusList) {
  const CliRun r = run({"corpus", "list"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j.size(), 9u);
  EXPECT_EQ(j[0]["id"], "one_step");
  EXPECT_EQ(j[8]["id"], "hconvex_right_example");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"check-hconvex"}).code, kExitUsage);
  EXPECT_EQ(run({"check-hconvex", "--field", "nope"}).code, kExitUsage);
  EXPECT_EQ(run({"check-hconvex", "--field", "one_step", "--region", "1,2"}).code, kExitUsage);
  EXPECT_EQ(run({"check-hconvex", "--field", "one_step", "--side", "up"}).code, kExitUsage);
  EXPECT_EQ(run({"envelope", "--field", "one_step", "--window", "1,8"}).code, kExitUsage);
  EXPECT_EQ(run({"reproduce", "nope"}).code, kExitUsage);
}

TEST(Cli, HelpExitsZero) {
  const CliRun r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("envelope"), std::string::npos);
}

TEST(Cli, CheckHConvex) {
  const CliRun good = run({"check-hconvex", "--field", "hconvex_sol", "--samples", "200"});
  EXPECT_EQ(good.code, kExitPass) << good.err;
  EXPECT_TRUE(json::parse(good.out)["pass"].get<bool>());

  const CliRun bad = run({"check-hconvex", "--field", "no_symmetry", "--samples", "200", "--region",
                       "0,0,0,0.5,0.5,0.5"});
  EXPECT_EQ(bad.code, kExitFactFailure);
  EXPECT_FALSE(json::parse(bad.out)["pass"].get<bool>());

  TempDir dir;
  const CliRun right = run({"check-hconvex", "--field", "hconvex_right_example", "--side", "right",
                         "--samples", "100", "--out", dir.file("r.json")});
  EXPECT_EQ(right.code, kExitPass);
  EXPECT_TRUE(right.out.empty());
  EXPECT_EQ(read(dir.file("r.json"))["field"], "hconvex_right_example");
}

TEST(Cli, PdeResidual) {
  TempDir dir;
  std::ofstream(dir.file("spec.json"))
      << R"({"equation": "linear_transport", "directions": [[0, 2]], "f": "no_symmetry/f"})";
  const CliRun r = run({"pde-residual", "--spec", dir.file("spec.json"), "--solution", "no_symmetry"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json j = json::parse(r.out);
  EXPECT_LE(j["max_abs_residual"].get<double>(), 1e-4);
  EXPECT_EQ(j["samples"], 100);

  // The wrong solution fails.
  const CliRun w = run({"pde-residual", "--spec", dir.file("spec.json"), "--solution", "one_step"});
  EXPECT_EQ(w.code, kExitFactFailure);
  EXPECT_EQ(run({"pde-residual", "--spec", dir.file("missing.json"), "--solution", "one_step"}).code,
            kExitUsage);
}

TEST(Cli, EnvelopeWritesReportAndGrid) {
  TempDir dir;
  const CliRun r = run({"envelope", "--field", "hconvex_sol", "--box", "0,0,0,1,1,1", "--res", "5",
                     "--window", "1,9", "--out", dir.file("env.json"), "--grid-format", "csv"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json j = read(dir.file("env.json"));
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_TRUE(j.contains("reference_compare"));
  EXPECT_TRUE(fs::exists(dir.file("env_grid.json")));
  EXPECT_TRUE(fs::exists(dir.file("env_grid.csv")));

  // The written grid is accepted as input.
  const CliRun again = run({"s-apply", "--field", dir.file("env_grid.json"), "--window", "1,9"});
  ASSERT_EQ(again.code, kExitPass) << again.err;
  EXPECT_LE(json::parse(again.out)["max_increase"].get<double>(), 1e-12);
}

TEST(Cli, SApplyTrace) {
  TempDir dir;
  std::ofstream(dir.file("pts.txt")) << "# points\n0 0 0.5\n0.5, 0.5, 0\n";
  const CliRun r = run({"s-apply", "--field", "two_step", "--box", "0,0,0,1,1,1", "--res", "3",
                     "--window", "1,9", "--trace", dir.file("pts.txt")});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const json j = json::parse(r.out);
  ASSERT_EQ(j["trace"].size(), 2u);
  EXPECT_LE(j["max_increase"].get<double>(), 1e-12);
  EXPECT_GE(j["sup_delta"].get<double>(), 0.0);
}

TEST(Cli, ReproduceExitCodes) {
  const CliRun r = run({"reproduce", "no_symmetry"});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_EQ(json::parse(r.out)["id"], "no_symmetry");

  TempDir dir;
  std::ofstream(dir.file("c.json")) << R"({"bogus": 1})";
  EXPECT_EQ(run({"reproduce", "no_symmetry", "--config", dir.file("c.json")}).code, kExitUsage);
}

TEST(Cli, UnboundedFieldReportsWindowTooSmall) {
  TempDir dir;
  std::ofstream(dir.file("f.json")) << R"({"terms": [{"coef": -1, "x": 2}]})";
  const CliRun r = run({"s-apply", "--field", dir.file("f.json"), "--res", "3", "--window", "1,9"});
  EXPECT_EQ(r.code, kExitWindow) << r.err;
  EXPECT_FALSE(r.err.empty());
}
