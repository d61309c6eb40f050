#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qiopa/closed_forms.hpp"
#include "qiopa/matrix_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QIOPA_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qiopa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub = "") const { return (dir_ / sub).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, PairExtractWritesMatchingMatrices) {
  const auto r = run("pair-extract --g 1 --qubit + --format json,csv --out " + out("o"));
  ASSERT_EQ(r.code, 0);
  const json summary = json::parse(r.out);
  EXPECT_LT(summary.at("max_deviation").get<double>(), 1e-10);
  EXPECT_LT(summary.at("input_basis_deviation").get<double>(), 1e-10);
  for (const char* name : {"pair_numeric", "pair_analytic", "pair_input_basis"}) {
    EXPECT_TRUE(fs::exists(dir_ / "o" / (std::string(name) + ".json"))) << name;
    EXPECT_TRUE(fs::exists(dir_ / "o" / (std::string(name) + ".csv"))) << name;
  }
  const auto rec = qiopa::io::parse_record(slurp(dir_ / "o" / "pair_input_basis.json"));
  const auto h = qiopa::closed_form::h_input(std::tanh(1.0));
  EXPECT_LT((rec.entries - h.matrix()).cwiseAbs().maxCoeff(), 1e-10);
  std::ifstream csv(dir_ / "o" / "pair_numeric.csv");
  const auto from_csv = qiopa::io::read_matrix_csv(csv);
  const auto from_json = qiopa::io::parse_record(slurp(dir_ / "o" / "pair_numeric.json"));
  EXPECT_EQ(from_csv.entries, from_json.entries);
}

TEST_F(Cli, OutputIsDeterministic) {
  const std::string args = "three-qubit --g 0.7 --eta 0.2 --format json,csv --out ";
  ASSERT_EQ(run(args + out("a")).code, 0);
  ASSERT_EQ(run(args + out("b")).code, 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir_ / "a")) {
    ++files;
    EXPECT_EQ(slurp(e.path()), slurp(dir_ / "b" / e.path().filename())) << e.path();
  }
  EXPECT_GT(files, 4);
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  {
    std::ofstream cfg(dir_ / "run.ini");
    cfg << "g = 0.4\nqubit = V\neta = 0.1\n";
  }
  const auto a = run("--config " + out("run.ini") + " pair-extract");
  ASSERT_EQ(a.code, 0);
  EXPECT_DOUBLE_EQ(json::parse(a.out).at("g").get<double>(), 0.4);
  const auto b = run("--config " + out("run.ini") + " pair-extract --g 0.9");
  ASSERT_EQ(b.code, 0);
  EXPECT_DOUBLE_EQ(json::parse(b.out).at("g").get<double>(), 0.9);
  EXPECT_NEAR(json::parse(b.out).at("t").get<double>(), std::tanh(0.9) * 0.99, 1e-15);
}

TEST_F(Cli, SweepCsv) {
  const auto r = run("sweep --metric clone_fidelity --g-min 0 --g-max 5 --g-steps 6 --out " + out());
  ASSERT_EQ(r.code, 0);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "g,t,value");
  double last = 1.0;
  int rows = 0;
  while (std::getline(is, line)) {
    const double v = std::stod(line.substr(line.rfind(',') + 1));
    EXPECT_LT(v, last);
    EXPECT_GT(v, 2.0 / 3.0 - 1e-12);
    last = v;
    ++rows;
  }
  EXPECT_EQ(rows, 6);
  EXPECT_EQ(slurp(dir_ / "sweep_clone_fidelity.csv"), r.out);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("pair-extract --g -1").code, 1);
  EXPECT_EQ(run("pair-extract --qubit Q").code, 1);
  EXPECT_EQ(run("pair-extract --eta 2").code, 1);
  EXPECT_EQ(run("sweep --metric nope").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("three-qubit --mode cat").code, 1);
  EXPECT_EQ(run("pair-extract --path full --g 2 --n-max 2").code, 3);
}

TEST_F(Cli, VerifyTightToleranceFails) {
  const auto r = run("verify --tol 1e-15 --out " + out());
  EXPECT_EQ(r.code, 2);
  const json report = json::parse(slurp(dir_ / "verify.json"));
  EXPECT_FALSE(report.at("checks").empty());
}
