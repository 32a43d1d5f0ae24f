#include "permid/io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace permid;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + PERMID_CLI_PATH + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  for (std::size_t got; (got = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

Run run_err(const std::string& args) {
  const std::string cmd = std::string("env -u PERMID_SEED ") + PERMID_CLI_PATH + " " + args + " 2>&1 >/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  char buf[4096];
  for (std::size_t got; (got = fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("permid_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, TypesExample) {
  auto r = run("types --n 3 --q 2");
  ASSERT_EQ(r.status, 0);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["N"], 4);
  EXPECT_EQ(j["types"].size(), 4u);
  EXPECT_TRUE(j["bounds"]["lower"].get<bool>());
  EXPECT_TRUE(j["bounds"]["upper"].get<bool>());
  EXPECT_EQ(j["types"][0]["counts"], Json::parse("[3,0]"));
}

TEST_F(Cli, FeedbackTargetExample) {
  auto r = run("feedback --n 12 --q 2 --l 2 --M 1024 --seed 7 --target-test --mode none");
  ASSERT_EQ(r.status, 0);
  auto j = Json::parse(r.out);
  const auto t = j["target_test"];
  const auto lambda2 = parse_rational(t["lambda2"].get<std::string>());
  EXPECT_EQ(t["target"], "2/13");
  EXPECT_EQ(t["pass"].get<bool>(), lambda2 <= Rational(2, 13));
  RngStream rng = RngStream(7).split("feedback");
  auto code = build_feedback_code(12, 2, 2, 1024, rng);
  EXPECT_EQ(lambda2, eval_feedback_exact(code, 0).lambda2);
}

TEST_F(Cli, McReportsAreByteIdentical) {
  ASSERT_EQ(run("build --n 40 --epsilon 1/100 --seed 3 --M 3 --save " + path("c.json")).status, 0);
  auto a = run("eval --code " + path("c.json") + " --mode mc --trials 100000 --seed 1");
  auto b = run("eval --code " + path("c.json") + " --mode mc --trials 100000 --seed 1");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  auto c = run("eval --code " + path("c.json") + " --mode mc --trials 100000 --seed 2");
  EXPECT_NE(a.out, c.out);
}

TEST_F(Cli, SeedFromEnvironment) {
  auto a = run("setsystem --N 30 --Gamma 4 --cap 1 --M 6 --seed 9");
  auto b = run("setsystem --N 30 --Gamma 4 --cap 1 --M 6", "PERMID_SEED=9");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  auto e = run_err("setsystem --N 30 --Gamma 4 --cap 1 --M 6");
  EXPECT_EQ(e.status, 1);
  auto j = Json::parse(e.out);
  EXPECT_EQ(j["error"]["origin"], "cli");
}

TEST_F(Cli, BuildSaveEvalRoundTrip) {
  auto built = run("build --n 60 --epsilon 1/20 --seed 4 --M 4 --eval --save " + path("c.json"));
  ASSERT_EQ(built.status, 0);
  auto eval = run("eval --code " + path("c.json"));
  ASSERT_EQ(eval.status, 0);
  auto b = Json::parse(built.out);
  auto e = Json::parse(eval.out);
  EXPECT_EQ(b["eval"]["lambda1"], e["lambda1"]);
  EXPECT_EQ(b["eval"]["lambda2"], e["lambda2"]);
  EXPECT_EQ(e["lambda1"], "0/1");
  EXPECT_TRUE(b["within_bound"].get<bool>());
  auto code = std::get<PermIdCode>(code_from_json(Json::parse(std::ifstream(path("c.json")))));
  EXPECT_EQ(error_report_from_json(e), eval_perm_exact(code, 16));
}

TEST_F(Cli, TransformAndApprox) {
  ASSERT_EQ(run("build --n 40 --epsilon 1/100 --seed 5 --M 3 --save " + path("c.json")).status, 0);
  auto t = run("transform --code " + path("c.json") + " --gamma 1/2 --save " + path("s.json"));
  ASSERT_EQ(t.status, 0);
  EXPECT_TRUE(Json::parse(t.out)["ok"].get<bool>());
  auto a = run("approx --code " + path("s.json") + " --K 3");
  ASSERT_EQ(a.status, 0);
  EXPECT_TRUE(Json::parse(a.out)["holds"].get<bool>());
  auto d = run("approx --dist 3/4,1/4 --K 2");
  EXPECT_EQ(Json::parse(d.out)["map"]["atoms"], Json::parse("[2,0]"));
}

TEST_F(Cli, FeedbackSaveAndCsv) {
  ASSERT_EQ(run("feedback --n 6 --q 2 --l 2 --M 5 --seed 2 --no-tables --save " + path("f.json")).status, 0);
  auto j = Json::parse(std::ifstream(path("f.json")));
  EXPECT_FALSE(j.contains("decoders"));
  auto exact = run("eval --code " + path("f.json") + " --format csv");
  ASSERT_EQ(exact.status, 0);
  EXPECT_EQ(exact.out.substr(0, exact.out.find('\n')), "kind,j,k,count,value,decimal");
  auto direct = run("feedback --n 6 --q 2 --l 2 --M 5 --seed 2 --format csv");
  EXPECT_EQ(direct.out, exact.out);
}

TEST_F(Cli, BoundsSweeps) {
  auto c = run("bounds converse --n 1 --q 2 --l 1 --M 3,4 --format csv");
  ASSERT_EQ(c.status, 0);
  EXPECT_EQ(c.out, "n,q,l,M,holds\n1,2,1,3,true\n1,2,1,4,false\n");
  auto t = run("bounds types --n 1,5,9 --q 2,3,4");
  ASSERT_EQ(t.status, 0);
  EXPECT_EQ(Json::parse(t.out)["rows"].size(), 9u);
}

TEST_F(Cli, Errors) {
  auto missing = run_err("eval --code " + path("none.json"));
  EXPECT_EQ(missing.status, 1);
  EXPECT_EQ(Json::parse(missing.out)["error"]["code"], "precondition");
  {
    std::ofstream(path("bad.json")) << "{\"schema\": \"permid/1\", \"kind\": \"noiseless\", \"N\": 2, \"M\": 1, "
                                       "\"encoders\": [[[0, \"1/2\"]]], \"decoders\": {\"deterministic\": [[0]]}}";
  }
  auto bad = run_err("eval --code " + path("bad.json"));
  EXPECT_EQ(bad.status, 2);  // probabilities summing to 1/2 break a distribution invariant
  EXPECT_EQ(Json::parse(bad.out)["error"]["origin"], "dist");
  auto infeasible = run_err("build --n 10 --epsilon 1/2 --seed 1");
  EXPECT_EQ(infeasible.status, 1);
  EXPECT_EQ(Json::parse(infeasible.out)["error"]["code"], "infeasible");
  EXPECT_NE(run("types --n 3").status, 0);  // usage error
}
