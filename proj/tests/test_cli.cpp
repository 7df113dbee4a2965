#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cli_app.hpp"

using namespace lapgraph;
using lapgraph::cli::Json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args, std::optional<std::string> env = std::nullopt) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err, std::move(env));
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("lapgraph_test_" + name);
}

}  // namespace

TEST(Cli, CountValues) {
  const auto r = run({"count", "--kmax", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["command"], "count");
  EXPECT_EQ(j["results"]["d"]["values"], Json({"1", "4", "32", "400", "6912", "153664"}));
  EXPECT_EQ(j["results"]["sources_agree"], true);
  EXPECT_EQ(j["provenance"]["seed"], cli::kDefaultSeed);
  EXPECT_EQ(j["provenance"]["seed_source"], "default");
}

TEST(Cli, CountCsvAndText) {
  const auto csv = run({"--format", "csv", "count", "--kmax", "3"});
  EXPECT_EQ(csv.code, 0) << csv.err;
  EXPECT_FALSE(csv.out.empty());
  const auto text = run({"--format", "text", "count", "--kmax", "3"});
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("results.d.values = 1 4 32"), std::string::npos) << text.out;
  EXPECT_EQ(run({"--format", "xml", "count", "--kmax", "3"}).code, 2);
}

TEST(Cli, VerifyHolds) {
  const auto r = run({"verify"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["results"]["all_hold"], true);
}

TEST(Cli, ExactCumulants) {
  const auto r = run({"exact", "--n", "3", "--p", "1/2", "--kmax", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["results"]["cumulants"], Json({"9/2", "51/4"}));
}

TEST(Cli, ExactPartitionFunction) {
  const auto r = run({"exact", "--n", "4", "--p", "1/2", "--beta", "1", "--g", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pf = r.json()["results"]["partition_function"];
  EXPECT_LT(std::stod(pf["relative_gap"].get<std::string>()), 1e-12);
}

TEST(Cli, Extrapolation) {
  const auto r = run({"exact", "--extrapolate", "4,5,6", "--k", "1", "--p", "1/2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["results"]["extrapolation"]["predicted"], "1/4");
}

TEST(Cli, WeightsCoefficient) {
  const auto r = run({"weights", "--k", "3", "--p", "1/2,0.3", "--partitions"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["results"]["coefficient"]["text"], "128*p^4 - 288*p^5 + 160*p^6");
  EXPECT_EQ(j["results"]["evaluations"].size(), 2u);
  EXPECT_EQ(j["results"]["partition_weights"].size(), 3u);
}

TEST(Cli, ParseErrors) {
  EXPECT_EQ(run({"count", "--kmax", "3", "--bogus"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"count"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"exact", "--p", "1/2"}).code, 2);
  EXPECT_EQ(run({"exact", "--n", "3", "--p", "3/2"}).code, 2);
}

TEST(Cli, BudgetErrors) {
  const auto n8 = run({"exact", "--n", "8", "--p", "1/2"});
  EXPECT_EQ(n8.code, 3);
  EXPECT_NE(n8.err.find("--max-n"), std::string::npos) << n8.err;
  const auto k7 = run({"diagrams", "--k", "7"});
  EXPECT_EQ(k7.code, 3);
  EXPECT_NE(k7.err.find("--max-slots"), std::string::npos) << k7.err;
  const auto w7 = run({"weights", "--k", "7"});
  EXPECT_EQ(w7.code, 3);
  EXPECT_NE(w7.err.find("--max-k"), std::string::npos) << w7.err;
  EXPECT_EQ(run({"free-energy", "--order", "500"}).code, 3);
}

TEST(Cli, FreeEnergyGuard) {
  const auto ok = run({"free-energy", "--order", "10", "--g", "0.01"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const auto bad = run({"free-energy", "--g", "0.2"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_FALSE(bad.err.empty());
}

TEST(Cli, DiagramsFlagPublishedDiscrepancy) {
  const auto r = run({"diagrams", "--q", "3", "--k", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto row = r.json()["results"]["counts"][0];
  EXPECT_EQ(row["enumerated"], 189);
  EXPECT_EQ(row["published_agrees"], false);
}

TEST(Cli, McThreadInvariantAndSeeded) {
  const std::vector<std::string> base = {"mc", "--n", "2000", "--cbar", "4,8", "--replicates", "40"};
  auto with = [&](std::vector<std::string> front) {
    front.insert(front.end(), base.begin(), base.end());
    return run(front);
  };
  const auto one = with({"--threads", "1", "--seed", "5"});
  const auto three = with({"--threads", "3", "--seed", "5"});
  ASSERT_EQ(one.code, 0) << one.err;
  EXPECT_EQ(one.out, three.out);
  EXPECT_NE(one.out, with({"--seed", "6"}).out);
  const auto csv = with({"--format", "csv", "--seed", "5"});
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "n,cbar,k,R,estimate,std_error,normalized,target,seed");
}

TEST(Cli, SeedPrecedence) {
  const std::vector<std::string> args = {"mc", "--n", "500", "--cbar", "3", "--kmax", "1", "--replicates", "10"};
  auto flagged = args;
  flagged.insert(flagged.begin(), {"--seed", "77"});
  const auto env = run(args, "77");
  const auto flag = run(flagged, "99");
  const auto def = run(args);
  ASSERT_EQ(env.code, 0) << env.err;
  EXPECT_EQ(env.json()["provenance"]["seed_source"], "env");
  EXPECT_EQ(flag.json()["provenance"]["seed_source"], "flag");
  EXPECT_EQ(env.json()["results"], flag.json()["results"]);
  EXPECT_NE(env.json()["results"], def.json()["results"]);
  EXPECT_EQ(run(args, "not-a-number").code, 2);
}

TEST(Cli, McCellErrorsAndInvalidGrid) {
  const auto r = run({"mc", "--n", "100", "--cbar", "5,200", "--replicates", "30"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = r.json()["results"]["rows"];
  EXPECT_TRUE(rows.back().contains("error"));
  EXPECT_EQ(run({"mc", "--n", "100", "--cbar", "200"}).code, 2);
}

TEST(Cli, HistogramCache) {
  const auto path = temp_file("hist5.txt");
  std::filesystem::remove(path);
  const std::vector<std::string> args = {"exact", "--n", "5", "--p", "3/10", "--kmax", "3", "--cache", path.string()};
  const auto first = run(args);
  ASSERT_EQ(first.code, 0) << first.err;
  ASSERT_TRUE(std::filesystem::exists(path));
  const auto second = run(args);
  EXPECT_NE(second.err.find("loaded"), std::string::npos);
  EXPECT_EQ(first.out, second.out);
  {
    std::ofstream bad(path);
    bad << "5 10 1024\n0 0 1\n";
  }
  EXPECT_EQ(run(args).code, 2);
  std::filesystem::remove(path);
}
