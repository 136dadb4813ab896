#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "sovlat/cli.hpp"

using namespace sovlat;
using Json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sovlat_test_" + name);
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST(Cli, ClassifyExamples) {
  auto a = run({"classify", "--N", "3", "--L", "11"});
  ASSERT_EQ(a.code, kExitPass) << a.err;
  auto j = a.json();
  EXPECT_EQ(j["class"]["n1"], "2");
  EXPECT_EQ(j["class"]["n2"], "3");
  EXPECT_EQ(j["g"], "5");
  EXPECT_EQ(j["m"], "1");
  EXPECT_EQ(j["k2"], "2");

  auto b = run({"classify", "--N", "2", "--L", "4"});
  ASSERT_EQ(b.code, kExitPass);
  EXPECT_EQ(b.json()["class"], (Json{{"m", "2"}, {"n1", "1"}, {"n2", "1"}}));
  EXPECT_EQ(b.json()["g"], "1");
  EXPECT_EQ(b.json()["n0"], "2");

  auto c = run({"classify", "--N", "3", "--m", "2", "--n1", "2", "--n2", "3"});
  ASSERT_EQ(c.code, kExitPass);
  EXPECT_EQ(c.json()["g"], "2");
}

TEST(Cli, ClassifyRejectsBadInput) {
  EXPECT_EQ(run({"classify", "--N", "2", "--L", "2"}).code, kExitUsage);
  EXPECT_EQ(run({"classify", "--N", "1", "--L", "4"}).code, kExitUsage);
  EXPECT_EQ(run({"classify", "--N", "2", "--L", "4", "--m", "2"}).code, kExitUsage);
  EXPECT_EQ(run({"classify", "--L", "4"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitPass);
}

TEST(Cli, VerifySuites) {
  auto inv = run({"verify", "involution", "--N", "2", "--L", "8"});
  EXPECT_EQ(inv.code, kExitPass) << inv.out;
  auto center = run({"verify", "center", "--N", "3", "--L", "6"});
  EXPECT_EQ(center.code, kExitPass) << center.out;
  EXPECT_EQ(center.json()["n0"], "4");
  EXPECT_EQ(center.json()["generators"], "4");
  auto rtt = run({"verify", "rtt", "--N", "3", "--L", "7"});
  EXPECT_EQ(rtt.code, kExitPass) << rtt.out;
  const auto jr = rtt.json();
  for (const auto& c : jr["checks"]) EXPECT_EQ(c["residual"], "0");
  EXPECT_EQ(run({"verify", "pattern", "--N", "3", "--L", "7"}).code, kExitPass);
  EXPECT_EQ(run({"verify", "pattern", "--N", "2", "--m", "3", "--n1", "1", "--n2", "2"}).code, kExitPass);
  EXPECT_EQ(run({"verify", "pq", "--N", "2", "--L", "6"}).code, kExitPass);
  EXPECT_EQ(run({"verify", "dimension", "--N", "3", "--m", "2", "--n1", "1", "--n2", "3"}).code, kExitPass);
  EXPECT_EQ(run({"verify", "nonsense", "--N", "2", "--L", "4"}).code, kExitUsage);
}

TEST(Cli, VerifyReportsMissingRecipe) {
  auto r = run({"verify", "dimension", "--N", "4", "--m", "1", "--n1", "2", "--n2", "2"});
  EXPECT_EQ(r.code, kExitCheckFailed);
  EXPECT_EQ(r.json()["checks"][0]["status"], "FAIL");
}

TEST(Cli, TableExamples) {
  auto a = run({"table", "--N", "2", "--Lmin", "3", "--Lmax", "8"});
  ASSERT_EQ(a.code, kExitPass);
  std::vector<std::pair<std::string, std::string>> rows;
  const auto ja = a.json();
  for (const auto& r : ja["rows"]) rows.emplace_back(r["L"], r["g"]);
  EXPECT_EQ(rows, (std::vector<std::pair<std::string, std::string>>{
                      {"3", "1"}, {"4", "1"}, {"5", "2"}, {"6", "2"}, {"7", "3"}, {"8", "3"}}));
  auto b = run({"table", "--N", "3", "--Lmin", "5", "--Lmax", "10"});
  std::vector<std::string> g;
  const auto jb = b.json();
  for (const auto& r : jb["rows"]) g.push_back(r["g"]);
  EXPECT_EQ(g, (std::vector<std::string>{"2", "1", "3", "3", "3", "4"}));
  auto full = run({"table", "--N", "3"});
  EXPECT_EQ(full.json()["rows"].size(), 13u);
}

TEST(Cli, CertifyExamples) {
  auto a = run({"certify", "--N", "3", "--L", "9"});
  ASSERT_EQ(a.code, kExitPass);
  auto j = a.json();
  EXPECT_EQ(j["status"], "PASS");
  EXPECT_EQ(j["g"], "3");
  EXPECT_EQ(j["n_H"], "3");
  EXPECT_EQ(j["n0"], "3");
  EXPECT_EQ(run({"certify", "--N", "4", "--L", "13"}).code, kExitUsage);
}

TEST(Cli, OutputIsDeterministic) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"classify", "--N", "3", "--L", "8", "--seed", "7"},
           {"certify", "--N", "2", "--L", "9"},
           {"simulate", "--N", "2", "--L", "5", "--t-end", "0.5", "--seed", "3"},
       })
    EXPECT_EQ(run(args).out, run(args).out);
}

TEST(Cli, SimulateWritesTrajectory) {
  auto csv = temp_file("traj.csv");
  auto r = run({"simulate", "--N", "2", "--L", "6", "--t-end", "0.1", "--dt", "0.01", "--out", csv.string()});
  ASSERT_EQ(r.code, kExitPass) << r.out << r.err;
  auto lines = read_lines(csv);
  ASSERT_EQ(lines.size(), 12u);
  EXPECT_EQ(lines[0], "t,V_1,V_2,V_3,V_4,V_5,V_6,H_1,H_2");
  EXPECT_EQ(lines[1].rfind("0,", 0), 0u);
  EXPECT_EQ(r.json()["samples"], "11");
  std::filesystem::remove(csv);
}

TEST(Cli, SimulateReadsInitFile) {
  auto init = temp_file("init.json");
  std::ofstream(init) << R"({"V": ["1", 2, "3", "4", "5"]})";
  auto csv = temp_file("init.csv");
  auto r = run({"simulate", "--N", "2", "--L", "5", "--t-end", "0.01", "--dt", "0.01", "--init", init.string(),
                "--out", csv.string()});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  EXPECT_EQ(read_lines(csv)[1].rfind("0,1,2,3,4,5,15,", 0), 0u);
  EXPECT_EQ(run({"simulate", "--N", "2", "--L", "6", "--init", init.string()}).code, kExitUsage);
  std::filesystem::remove(init);
  std::filesystem::remove(csv);
}

TEST(Cli, FailedCheckGivesNonzeroExit) {
  auto r = run({"simulate", "--N", "2", "--L", "6", "--t-end", "1", "--tol", "1e-30"});
  EXPECT_EQ(r.code, kExitCheckFailed);
  EXPECT_EQ(run({"simulate", "--N", "2", "--L", "6", "--method", "euler"}).code, kExitUsage);
  EXPECT_EQ(run({"simulate", "--N", "2", "--L", "6", "--flow", "9"}).code, kExitUsage);
}

TEST(Cli, DivisorWritesCsvAndAbelReport) {
  auto csv = temp_file("div.csv");
  auto r = run({"divisor", "--N", "2", "--L", "5", "--t-end", "1", "--out", csv.string()});
  ASSERT_EQ(r.code, kExitPass) << r.out;
  auto lines = read_lines(csv);
  EXPECT_EQ(lines[0], "t,Re_z1,Im_z1,Re_w1,Im_w1,Re_z2,Im_z2,Re_w2,Im_w2");
  EXPECT_EQ(lines.size(), 1002u);
  EXPECT_EQ(r.json()["abel_flatness"].size(), 2u);
  EXPECT_EQ(r.json()["theta_divisor_samples"], "0");
  std::filesystem::remove(csv);
}
