#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "heis/oracles.hpp"
#include "heis/steiner.hpp"

using namespace heis;
using nlohmann::json;

namespace {

struct Ran {
  int code;
  std::string out, err;
};

Ran invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "heis");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  return rows;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> f;
  std::stringstream ss(s);
  for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
  return f;
}

}  // namespace

TEST(Cli, DistanceOnAxis) {
  const Ran r = invoke({"distance", "--p", "0", "0", "0", "--q", "0", "0", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("schema"), 1);
  const double d = j.at("result").at("dist");
  EXPECT_NEAR(d, brute_distance(Point::origin(1), Point::from_list({0, 0, 1})), 1e-9);
  EXPECT_NEAR(d, std::sqrt(2 * std::numbers::pi), 1e-12);
}

TEST(Cli, SaddleProjectionIsAmbiguous) {
  const Ran r = invoke({"project", "--surface", "saddle-t-xy", "--p", "0", "-1", "1.5707963"});
  EXPECT_EQ(r.code, cli::kDomainError);
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("error").at("type"), "AmbiguousProjection");
  EXPECT_EQ(j.at("result").at("multiplicity_hint"), 2);
  int tied = 0;
  for (const auto& f : j.at("result").at("feet")) {
    if (!f.at("tied").get<bool>()) continue;
    ++tied;
    EXPECT_NEAR(std::abs(f.at("foot")[0].get<double>()), 1.0, 1e-6);
  }
  EXPECT_EQ(tied, 2);
}

TEST(Cli, TubeCsvMatchesLibrary) {
  const Ran r = invoke({"tube", "--surface", "plane-t", "--annulus", "1", "2", "--r", "0.2", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "r,volume,method,std_error");
  const auto f = split(rows[1]);
  const double v = tube_volume_h1(plane_t(1), annulus_patch(1, 1.0, 2.0), {0.2}).volumes[0];
  EXPECT_EQ(std::stod(f[1]), v);
  EXPECT_EQ(f[2], "h1-closed");
  EXPECT_NE(r.out.find("# config "), std::string::npos);
}

TEST(Cli, ReachExceededIsDomainError) {
  const Ran r = invoke({"tube", "--surface", "plane-t", "--annulus", "1", "2", "--r", "1.7"});
  EXPECT_EQ(r.code, cli::kDomainError);
  EXPECT_EQ(json::parse(r.out).at("error").at("type"), "ReachExceeded");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({"distance", "--p", "0", "0", "--q", "1"}).code, cli::kUsageError);
  EXPECT_EQ(invoke({"distance", "--p", "0", "0", "0", "--q", "0", "0", "1", "--n", "2"}).code, cli::kUsageError);
  EXPECT_EQ(invoke({"nonsense"}).code, cli::kUsageError);
  EXPECT_EQ(invoke({"tube", "--surface", "plane-t", "--annulus", "1", "2"}).code, cli::kUsageError);
  EXPECT_EQ(invoke({"tube", "--surface", "no-such-surface", "--r", "0.1"}).code, cli::kUsageError);
  EXPECT_EQ(invoke({}).code, cli::kUsageError);
}

TEST(Cli, UnknownConfigKeysRejected) {
  cli::RunConfig c;
  c.command = "distance";
  c.params["p"] = {0, 0, 0};
  c.params["radius"] = {1};
  EXPECT_THROW(cli::validate(c), cli::UsageError);
  std::ostringstream out;
  EXPECT_EQ(cli::run(c, out), cli::kUsageError);

  json j = cli::config_to_json(c);
  j["colour"] = "red";
  EXPECT_THROW(cli::config_from_json(j), cli::UsageError);
}

TEST(Cli, EchoedConfigReproducesOutput) {
  const std::string path = ::testing::TempDir() + "heis_cli_echo.json";
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"tube", "--surface", "plane-t", "--r-grid", "0.05", "0.2", "4", "--quad-order", "4"},
        std::vector<std::string>{"tube", "--surface", "plane-t", "--annulus", "1", "2", "--r", "0.2", "--method",
                                 "mc", "--samples", "2000", "--seed", "7"},
        std::vector<std::string>{"geodesic", "--p", "0", "0", "0", "--v", "1", "1", "--lambda", "2", "--s", "1"}}) {
    const Ran a = invoke(args);
    ASSERT_EQ(a.code, 0) << a.err;
    {
      std::ofstream f(path);
      f << a.out;
    }
    const Ran b = invoke({"--config", path});
    EXPECT_EQ(b.code, 0);
    EXPECT_EQ(a.out, b.out);
  }
  std::remove(path.c_str());
}

TEST(Cli, FullPrecisionCsv) {
  const Ran r = invoke({"distance", "--p", "0", "0", "0", "--q", "0.3", "0.1", "0.2", "--format", "csv"});
  ASSERT_EQ(r.code, 0);
  const auto f = split(csv_rows(r.out).at(1));
  const double d = cc_distance(Point::origin(1), Point::from_list({0.3, 0.1, 0.2}));
  EXPECT_EQ(std::stod(f[0]), d);
}

TEST(Cli, VerifyReport) {
  const Ran r = invoke({"verify"});
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  ASSERT_GE(j.at("result").at("checks").size(), 10u);
  for (const auto& c : j.at("result").at("checks")) {
    EXPECT_TRUE(c.contains("value") && c.contains("reference") && c.contains("tol"));
    EXPECT_TRUE(c.at("pass").get<bool>()) << c.at("check");
  }
}

TEST(Cli, SingularScanAndReach) {
  const Ran s = invoke({"singular-scan", "--surface", "plane-t", "--box", "-1", "0.7", "-0.8", "1", "--grid", "16"});
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(json::parse(s.out).at("result").at("count"), 1);

  const Ran h = invoke({"reach", "--surface", "halfspace-x1"});
  ASSERT_EQ(h.code, 0);
  EXPECT_TRUE(json::parse(h.out).at("result").at("unbounded").get<bool>());
}
