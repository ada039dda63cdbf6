#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "run_cli.hpp"

namespace fs = std::filesystem;

namespace {

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "obd_bench");
  std::vector<char*> argv;
  for (std::string& a : args) argv.push_back(a.data());
  return obd::cli::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("obd_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, HelpAndVersion) {
  EXPECT_EQ(invoke({"--help"}), 0);
  EXPECT_EQ(invoke({"--version"}), 0);
}

TEST(Cli, LowerBoundDatFile) {
  const fs::path dir = fresh_dir("lb");
  ASSERT_EQ(invoke({"--experiment", "lower_bound", "--dims", "4,9,16", "--out", dir.string()}), 0);
  std::istringstream in(slurp(dir / "plot_lower_bound.dat"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("#", 0), 0u);
  int rows = 0;
  double d = 0, online = 0, offline = 0, ratio = 0;
  while (in >> d >> online >> offline >> ratio) {
    EXPECT_NEAR(online, d, 1e-9);
    EXPECT_NEAR(offline, std::sqrt(d), 1e-9);
    EXPECT_NEAR(ratio, std::sqrt(d), 1e-9);
    ++rows;
  }
  EXPECT_EQ(rows, 3);
  fs::remove_all(dir);
}

TEST(Cli, CrVsDimIsByteIdentical) {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  const std::vector<std::string> common = {"--experiment", "cr_vs_dim", "--dims", "2,4", "--trials", "3", "--seed", "7"};
  auto with_out = [&](const fs::path& dir) {
    std::vector<std::string> v = common;
    v.push_back("--out");
    v.push_back(dir.string());
    return v;
  };
  ASSERT_EQ(invoke(with_out(a)), 0);
  ASSERT_EQ(invoke(with_out(b)), 0);
  const std::string csv = slurp(a / "results.csv");
  EXPECT_EQ(csv, slurp(b / "results.csv"));
  EXPECT_EQ(csv.rfind("family,d,trial,seed,algo,total_cost,opt_cost,cr,regret_L,bound,audit_worst_residual\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  int traces = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    const std::string n = e.path().filename().string();
    if (n.rfind("run_", 0) == 0 && e.path().extension() == ".json") ++traces;
    EXPECT_EQ(n.find(".tmp"), std::string::npos);
  }
  EXPECT_GT(traces, 0);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Cli, ConfigFileAndOverrides) {
  const fs::path dir = fresh_dir("cfg");
  {
    std::ofstream out(dir / "config.json");
    out << R"({"experiment": "lower_bound", "dims": [4]})";
  }
  ASSERT_EQ(invoke({"--config", (dir / "config.json").string(), "--dims", "9", "--format", "json", "--out",
                    dir.string()}),
            0);
  EXPECT_NE(slurp(dir / "plot_lower_bound.dat").find("\n9 "), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "results.json"));
  fs::remove_all(dir);
}

TEST(Cli, UsageErrorsExitOne) {
  const fs::path dir = fresh_dir("bad");
  EXPECT_EQ(invoke({"--no-such-flag"}), 1);
  EXPECT_EQ(invoke({"--experiment", "nope", "--out", dir.string()}), 1);
  EXPECT_EQ(invoke({"--trials", "0", "--out", dir.string()}), 1);
  EXPECT_EQ(invoke({"--config", (dir / "missing.json").string()}), 1);
  {
    std::ofstream out(dir / "bad.json");
    out << R"({"experiment": "lower_bound", "unknown_key": 1})";
  }
  EXPECT_EQ(invoke({"--config", (dir / "bad.json").string(), "--out", dir.string()}), 1);
  {
    std::ofstream out(dir / "broken.json");
    out << "{not json";
  }
  EXPECT_EQ(invoke({"--config", (dir / "broken.json").string(), "--out", dir.string()}), 1);
  fs::remove_all(dir);
}
