#include <gtest/gtest.h>

#include <sstream>

#include "hermitk/cli.hpp"
#include "hermitk/io.hpp"

using namespace hermitk;
using io::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = cli::run(args, in, out, err);
  return Result{code, out.str(), err.str()};
}

Json report(const Result& r) { return Json::parse(r.out); }

const std::string kJ2 = R"({"ring":"QQ","rows":[["0","1"],["-1","0"]],"flavor":"alternating"})";

}  // namespace

TEST(Cli, ReportShape) {
  Result r = run({"form", "tensor", "--ring", "ZZ", "--n", "2", "--m", "1"});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  Json j = report(r);
  EXPECT_EQ(j["command"], "form tensor");
  EXPECT_EQ(j["outcome"], "pass");
  EXPECT_EQ(j["seed"], 1);
  EXPECT_EQ(j["version"], cli::kVersion);
  Isometry iso = io::isometry_from_json(j["details"][0]["data"]["isometry"]);
  EXPECT_EQ(iso.target(), hyperbolic(FormFlavor::Symmetric, 4, Ring::integers()));
}

TEST(Cli, EmbedFromStandardInput) {
  Result r = run({"form", "embed", "--input", "-"}, kJ2);
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  Isometry iso = io::isometry_from_json(report(r)["details"][0]["data"]["isometry"]);
  EXPECT_EQ(iso.witness().rows(), 4u);
}

TEST(Cli, FailingCheckExitsOne) {
  Result r = run({"form", "embed", "--input", "-"},
                 R"({"ring":"QQ","rows":[["0","2"],["-2","0"]],"flavor":"alternating"})");
  EXPECT_EQ(r.code, cli::kPass);
  Result degenerate = run({"form", "embed", "--input", "-"},
                          R"({"ring":"ZZ","rows":[["0","2"],["-2","0"]],"flavor":"alternating"})");
  EXPECT_EQ(degenerate.code, cli::kFail);
  Json j = report(degenerate);
  EXPECT_EQ(j["outcome"], "fail");
  EXPECT_EQ(j["details"][0]["data"]["error"], "NotUnimodular");
}

TEST(Cli, BadInputExitsTwo) {
  EXPECT_EQ(run({}).code, cli::kBadInput);
  EXPECT_EQ(run({"form"}).code, cli::kBadInput);
  EXPECT_EQ(run({"form", "embed", "--ring", "RR"}).code, cli::kBadInput);
  EXPECT_EQ(run({"form", "embed", "--output", "xml"}).code, cli::kBadInput);
  EXPECT_EQ(run({"form", "embed", "--input", "-"}, "{not json").code, cli::kBadInput);
  EXPECT_EQ(run({"form", "embed", "--input", "/nonexistent/file.json"}).code, cli::kBadInput);
  Result sym = run({"form", "embed", "--input", "-"}, R"({"ring":"QQ","rows":[["0","1"],["1","0"]],"flavor":"alternating"})");
  EXPECT_EQ(sym.code, cli::kBadInput);
  EXPECT_EQ(report(sym)["outcome"], "error");
  EXPECT_EQ(run({"grass", "structure-check", "--n", "3"}).code, cli::kBadInput);
  EXPECT_EQ(run({"grass", "structure-check", "--ring", "ZZ"}).code, cli::kBadInput);
  EXPECT_EQ(run({"gw", "witt"}).code, cli::kBadInput);
}

TEST(Cli, Deterministic) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"form", "embed", "--ring", "GF(5)", "--seed", "9"},
           {"gw", "ksp0", "--ring", "QQ", "--samples", "5"},
           {"grass", "ga-check", "--seed", "4"},
           {"sp", "homotopy", "--n", "1", "--m", "2"}}) {
    Result a = run(args), b = run(args);
    EXPECT_EQ(a.code, cli::kPass) << a.out;
    EXPECT_EQ(a.out, b.out);
  }
  EXPECT_NE(run({"grass", "ga-check", "--seed", "4"}).out, run({"grass", "ga-check", "--seed", "5"}).out);
}

TEST(Cli, KoszulBorelEmitsGolden) {
  Result r = run({"koszul", "borel"});
  ASSERT_EQ(r.code, cli::kPass);
  Json j = report(r);
  Json form = j["details"][0]["data"]["form"];
  EXPECT_EQ(j["details"][0]["data"]["canonical"], io::canonical(form));
  EXPECT_EQ(form["differentials"][0], Json::parse(R"([["t0", "t1"]])"));
  EXPECT_EQ(form["dual_differentials"][1], Json::parse(R"([["-t1"], ["-t0"]])"));
  EXPECT_EQ(j["details"][1]["data"]["components"][1], Json::parse(R"([["0", "1"], ["1", "0"]])"));
}

TEST(Cli, KoszulVerifyRechecksInput) {
  Json form = report(run({"koszul", "thom", "--n", "2"}))["details"][0]["data"]["form"];
  EXPECT_EQ(run({"koszul", "verify", "--input", "-"}, form.dump()).code, cli::kPass);
  form["components"][0][0][0] = "2";
  EXPECT_EQ(run({"koszul", "verify", "--input", "-"}, form.dump()).code, cli::kBadInput);
}

TEST(Cli, SwapFactorListsFactors) {
  Result r = run({"sp", "swap-factor", "--ring", "ZZ"});
  ASSERT_EQ(r.code, cli::kPass);
  Json fs = report(r)["details"][0]["data"]["factors"];
  EXPECT_EQ(fs.size(), 7u);
  EXPECT_EQ(fs[0]["v"].size(), 4u);
}

TEST(Cli, GwCommands) {
  Result k = run({"gw", "ksp0", "--input", "-", "--i", "2"}, kJ2);
  ASSERT_EQ(k.code, cli::kPass);
  EXPECT_EQ(report(k)["details"][0]["data"]["hyperbolic_multiple"], 2);
  Result w = run({"gw", "witt", "--input", "-"}, R"({"ring":"QQ","rows":[["1","0"],["0","-1"]],"flavor":"symmetric"})");
  ASSERT_EQ(w.code, cli::kPass);
  EXPECT_EQ(report(w)["details"][0]["data"]["hyperbolic_count"], 1);
  std::string pair = R"({"spaces":[{"ring":"QQ","rows":[["1","0"],["0","-1"]],"flavor":"symmetric"},)"
                     R"({"ring":"QQ","rows":[["0","1"],["1","0"]],"flavor":"symmetric"}]})";
  Result s = run({"gw", "witt", "--input", "-", "--max-stab", "1"}, pair);
  ASSERT_EQ(s.code, cli::kPass);
  EXPECT_EQ(report(s)["details"][0]["data"]["stably_isometric"], true);
}

TEST(Cli, StructureCheckWithStabilization) {
  Result r = run({"grass", "structure-check", "--samples", "2", "--max-stab", "1", "--i", "1"});
  ASSERT_EQ(r.code, cli::kPass) << r.out;
  Json j = report(r);
  EXPECT_EQ(j["details"].size(), 4u);
  EXPECT_TRUE(j["details"][0]["data"].contains("plane_order"));
}

TEST(Cli, TextOutputAndSelftest) {
  Result r = run({"selftest", "--output", "text", "--samples", "2"});
  EXPECT_EQ(r.code, cli::kPass);
  EXPECT_NE(r.out.find("outcome: pass"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}
