// Copyright 2026 The DPJE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpje/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "dpje/polytope.h"
#include "json.hpp"

namespace dpje {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::string kData = DPJE_TEST_DATA_DIR;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
  json doc() const { return json::parse(out); }
};

Outcome Invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = RunCli(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dpje_cli_" + std::string(
                              ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::string WriteRandom(const std::string& name, int n, int d, unsigned seed) const {
    SavePolytope(RandomGaussianPolytope(n, d, seed), Path(name), MatrixFormat::kCsv);
    return Path(name);
  }

  fs::path dir_;
};

TEST_F(CliTest, ComputeIdentity) {
  const Outcome o = Invoke({"compute", "--input", kData + "/identity3.csv",
                            "--stub-sampling", "--stub-sketch", "--iters", "10"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const json doc = o.doc();
  EXPECT_EQ(doc["schema"], "dpje/1");
  EXPECT_NEAR(doc["sum_v"].get<double>(), 3.0, 1e-12);
  EXPECT_NEAR(doc["max_h"].get<double>(), 1.0, 1e-12);
  EXPECT_EQ(doc["T"], 10);
  EXPECT_TRUE(doc["epsilon"].is_null());
  EXPECT_NE(o.err.find("ok"), std::string::npos);
}

TEST_F(CliTest, ComputeIdentityRandomized) {
  const Outcome o = Invoke({"compute", "--input", kData + "/identity3.csv", "--xi", "0.1"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const json doc = o.doc();
  EXPECT_NEAR(doc["sum_v"].get<double>(), 3.0, 1e-12);
  // Sketching noise keeps v near, not at, the all-ones vector.
  EXPECT_GE(doc["max_h"].get<double>(), 1.0 - 1e-12);
  EXPECT_LE(doc["max_h"].get<double>(), 1.21);
}

TEST_F(CliTest, ComputeWhitespaceInputWithDiagnostics) {
  const Outcome o = Invoke({"compute", "--input", kData + "/hexagon.txt", "--xi", "0.3",
                            "--diagnostics", "--trace", Path("trace.csv")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const json doc = o.doc();
  EXPECT_EQ(doc["n"], 3);
  EXPECT_EQ(doc["d"], 2);
  EXPECT_TRUE(doc["telescope"]["holds"].get<bool>());
  std::ifstream trace(Path("trace.csv"));
  std::string header;
  std::getline(trace, header);
  EXPECT_EQ(header, "iteration,row,weight");
}

TEST_F(CliTest, MissingInputIsAParseError) {
  const Outcome o = Invoke({"compute", "--input", Path("absent.csv")});
  EXPECT_EQ(o.code, kExitError);
  EXPECT_NE(o.err.find("ParseError"), std::string::npos) << o.err;
}

TEST_F(CliTest, UnconvergedRunFailsTheCertificate) {
  const std::string input = WriteRandom("hard.csv", 200, 5, 3);
  const Outcome o = Invoke({"compute", "--input", input, "--iters", "1"});
  EXPECT_EQ(o.code, kExitCheckFailed);
  EXPECT_FALSE(o.doc()["certificate_ok"].get<bool>());
  EXPECT_NE(o.err.find("FAILED"), std::string::npos);
}

TEST_F(CliTest, OutputFile) {
  const Outcome o = Invoke({"compute", "--input", kData + "/identity3.csv", "--iters", "3",
                            "--out", Path("result.json")});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(o.out.empty());
  std::ifstream file(Path("result.json"));
  EXPECT_EQ(json::parse(file)["command"], "compute");
}

TEST_F(CliTest, Exact) {
  const Outcome o = Invoke({"exact", "--input", kData + "/hexagon.txt", "--iters", "2000"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const json doc = o.doc();
  EXPECT_TRUE(doc["optimality"]["optimal"].get<bool>());
  EXPECT_NEAR(doc["sum_v"].get<double>(), 2.0, 1e-12);
}

TEST_F(CliTest, ExactRandomAndRankDeficient) {
  const std::string input = WriteRandom("r.csv", 20, 3, 12);
  const Outcome o = Invoke({"exact", "--input", input, "--tol", "1e-2"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(o.doc()["optimality"]["optimal"].get<bool>());
  std::ofstream(Path("rd.csv")) << "1,2\n2,4\n3,6\n";
  const Outcome bad = Invoke({"exact", "--input", Path("rd.csv")});
  EXPECT_EQ(bad.code, kExitError);
  EXPECT_NE(bad.err.find("RankError"), std::string::npos);
}

TEST_F(CliTest, CalibrateOutsideRange) {
  const std::vector<std::string> base = {"calibrate", "--eps", "0.5", "--delta", "1e-5",
                                         "--eps0", "0.01", "--L", "1", "--iters", "100"};
  const Outcome refused = Invoke(base);
  EXPECT_EQ(refused.code, kExitCheckFailed);
  EXPECT_NE(refused.err.find("BudgetError"), std::string::npos);

  std::vector<std::string> args = base;
  args.push_back("--no-range-check");
  const Outcome o = Invoke(args);
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const json doc = o.doc();
  EXPECT_NEAR(doc["sigma"].get<double>(),
              2.0 * 0.01 * std::sqrt(100.0 * std::log(1e5)) / (0.98 * 0.5), 1e-12);
  EXPECT_TRUE(doc["verified"].get<bool>());
}

TEST_F(CliTest, CalibrateRejectsInvalidSpec) {
  const Outcome o = Invoke({"calibrate", "--eps", "1", "--delta", "1e-5", "--eps0", "0.6",
                            "--L", "1", "--iters", "10"});
  EXPECT_EQ(o.code, kExitError);
  EXPECT_NE(o.err.find("DomainError"), std::string::npos);
}

TEST_F(CliTest, AuditLipschitz) {
  std::ofstream(Path("i2.csv")) << "1,0\n0,1\n";
  const Outcome o = Invoke({"audit", "--input", Path("i2.csv"), "--eps0", "1e-3",
                            "--trials", "50"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const json doc = o.doc();
  EXPECT_NEAR(doc["L"].get<double>(), 12.819533894493356, 1e-12);
  EXPECT_EQ(doc["violations"], 0);
}

TEST_F(CliTest, AuditRejectsBadCloseness) {
  const std::string input = kData + "/identity3.csv";
  EXPECT_EQ(Invoke({"audit", "--input", input, "--eps0", "-1"}).code, kExitError);
  const Outcome o = Invoke({"audit", "--input", input, "--eps0", "0.5"});
  EXPECT_EQ(o.code, kExitError);
  EXPECT_NE(o.err.find("PreconditionError"), std::string::npos);
}

TEST_F(CliTest, AuditMoments) {
  const Outcome o = Invoke({"audit", "--moments", "--lambdas", "2,4"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(o.doc()["violations"], 0);
}

TEST_F(CliTest, BenchWritesCsv) {
  const Outcome o = Invoke({"bench", "--n-list", "1e2,2e2", "--d", "3", "--iters", "3",
                            "--repeats", "1"});
  EXPECT_NE(o.code, kExitError) << o.err;
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "n,d,T,nnz,seconds");
}

TEST_F(CliTest, ConfigFileWithCommandLinePrecedence) {
  std::ofstream(Path("run.cfg")) << "# defaults\nxi = 0.3\niters = 7\nstub-sketch = true\n";
  const std::string input = kData + "/identity3.csv";
  const Outcome a = Invoke({"compute", "--input", input, "--config", Path("run.cfg")});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.doc()["T"], 7);
  EXPECT_EQ(a.doc()["xi"], 0.3);
  const Outcome b =
      Invoke({"compute", "--input", input, "--config", Path("run.cfg"), "--iters", "9"});
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_EQ(b.doc()["T"], 9);
  std::ofstream(Path("bad.cfg")) << "xi 0.3\n";
  const Outcome c = Invoke({"compute", "--input", input, "--config", Path("bad.cfg")});
  EXPECT_EQ(c.code, kExitError);
  EXPECT_NE(c.err.find("ParseError"), std::string::npos);
}

TEST_F(CliTest, SeedFromEnvironment) {
  const std::string input = WriteRandom("rand.csv", 300, 4, 5);
  const std::vector<std::string> base = {"compute", "--input", input, "--iters", "20",
                                         "--N", "100"};
  std::vector<std::string> explicit_seed = base;
  explicit_seed.insert(explicit_seed.end(), {"--seed", "77"});
  const json want = Invoke(explicit_seed).doc();
  ::setenv("DPJE_SEED", "77", 1);
  const json got = Invoke(base).doc();
  ::unsetenv("DPJE_SEED");
  EXPECT_EQ(got["seed"], 77);
  EXPECT_EQ(got["v"], want["v"]);
  EXPECT_NE(Invoke(base).doc()["v"], want["v"]);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Invoke({}).code, kExitError);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitError);
  EXPECT_EQ(Invoke({"compute"}).code, kExitError);
  EXPECT_EQ(Invoke({"compute", "--input", kData + "/identity3.csv", "--xi", "abc"}).code,
            kExitError);
  const Outcome help = Invoke({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("compute"), std::string::npos);
}

}  // namespace
}  // namespace dpje
