#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "hilbert/cli.hpp"
#include "hilbert/json_io.hpp"

using namespace hilbert;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(args, in, out, err);
  return {status, out.str(), err.str()};
}

Json error_of(const Outcome& o) {
  EXPECT_TRUE(o.out.empty()) << o.out;
  EXPECT_EQ(o.err.find('\n'), o.err.size() - 1) << "error must be a single line";
  return Json::parse(o.err);
}

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST(Cli, DensityOfTwoVectorsInSpace) {
  const Outcome o = invoke({"density", "--k", "2", "--m", "3"}, R"({"k":2,"lower":[1,0,1]})");
  ASSERT_EQ(o.status, cli::kExitOk) << o.err;
  EXPECT_TRUE(o.err.empty());
  const Json j = Json::parse(o.out);
  EXPECT_NEAR(j.at("value").get<double>(), 2 * kPi * kPi, 1e-13);
  EXPECT_EQ(j.at("singular"), false);
  EXPECT_NE(o.out.find("19.73920880217872"), std::string::npos);
}

TEST(Cli, DensityCsvAndSingular) {
  const Outcome o = invoke({"density", "--m", "2", "--format", "csv"}, R"({"k":2,"lower":[1,1,1]})");
  ASSERT_EQ(o.status, cli::kExitOk) << o.err;
  EXPECT_EQ(o.out, "value,log_value,singular\ninf,inf,true\n");
}

TEST(Cli, VolumesTable) {
  const Outcome o = invoke({"volumes", "--m", "3"});
  ASSERT_EQ(o.status, cli::kExitOk) << o.err;
  const Json j = Json::parse(o.out);
  EXPECT_NEAR(j.at("orthogonal_group").get<double>(), 16 * kPi * kPi, 1e-12);
  bool found = false;
  for (const auto& s : j.at("spheres")) {
    if (s.at("n") == 2) {
      found = true;
      EXPECT_NEAR(s.at("volume").get<double>(), 4 * kPi, 1e-13);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Cli, ReduceThenLift) {
  const std::string v = R"({"k":3,"m":4,"rows":[[1,2,2,0.5],[2,0,0,1],[-1,3,0.25,2]]})";
  const Outcome reduced = invoke({"reduce"}, v);
  ASSERT_EQ(reduced.status, cli::kExitOk) << reduced.err;
  const Json r = Json::parse(reduced.out);
  const Outcome lifted = invoke({"lift", "--m", "4"}, r.at("gram").dump());
  ASSERT_EQ(lifted.status, cli::kExitOk) << lifted.err;
  const Json l = Json::parse(lifted.out);
  const auto& wa = r.at("w").at("lower");
  const auto& wb = l.at("w").at("lower");
  ASSERT_EQ(wa.size(), wb.size());
  for (std::size_t i = 0; i < wa.size(); ++i) EXPECT_NEAR(wa[i].get<double>(), wb[i].get<double>(), 1e-10);
  const Outcome again = invoke({"reduce"}, l.at("v").dump());
  const auto& ga = r.at("gram").at("lower");
  const Json regram = Json::parse(again.out);
  const auto& gb = regram.at("gram").at("lower");
  for (std::size_t i = 0; i < ga.size(); ++i) EXPECT_NEAR(ga[i].get<double>(), gb[i].get<double>(), 1e-10);
}

TEST(Cli, EulerConversions) {
  const Outcome o = invoke({"euler", "--from", "vector"}, "[0, 0, 1]");
  ASSERT_EQ(o.status, cli::kExitOk) << o.err;
  EXPECT_EQ(Json::parse(o.out).at("angles").at("theta"), Json::parse("[0,0]"));
  const Outcome swap = invoke({"euler", "--from", "matrix"}, "[[0,1,0],[1,0,0],[0,0,-1]]");
  EXPECT_EQ(swap.status, cli::kExitNumerical);
  EXPECT_EQ(error_of(swap).at("code"), "NotEulerForm");
  const Outcome factors = invoke({"euler", "--from", "matrix", "--decompose"}, "[[0,1,0],[1,0,0],[0,0,-1]]");
  ASSERT_EQ(factors.status, cli::kExitOk) << factors.err;
  EXPECT_EQ(Json::parse(factors.out).at("factors").size(), 2u);
}

TEST(Cli, IntegrateQuadrature) {
  const Outcome o = invoke({"integrate", "--k", "1", "--m", "3", "--method", "domain-w", "--no-timing"});
  ASSERT_EQ(o.status, cli::kExitOk) << o.err;
  const Json j = Json::parse(o.out);
  EXPECT_NEAR(j.at("value").get<double>(), std::pow(kPi, 1.5), 1e-12);
  EXPECT_EQ(j.at("method"), "domain-w");
  EXPECT_FALSE(j.contains("elapsed_ms"));
}

TEST(Cli, TimingIsAQuarantinedField) {
  const Outcome o = invoke({"integrate", "--k", "1", "--m", "2", "--samples", "1000"});
  ASSERT_EQ(o.status, cli::kExitOk) << o.err;
  EXPECT_TRUE(Json::parse(o.out).contains("elapsed_ms"));
}

TEST(Cli, ByteIdenticalOutput) {
  const std::vector<std::string> args = {"integrate", "--k",      "2",    "--m",       "3",
                                         "--method",  "all",      "--samples", "20000", "--no-timing"};
  const Outcome a = invoke(args);
  const Outcome b = invoke(args);
  ASSERT_EQ(a.status, cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--threads", "4"});
  EXPECT_EQ(invoke(threaded).out, a.out);
}

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> args = {"integrate", "--k", "1", "--m", "2", "--samples", "5000", "--no-timing"};
  const std::string base = invoke(args).out;
  ::setenv("HILBERT_SEED", "99", 1);
  const std::string env = invoke(args).out;
  ::unsetenv("HILBERT_SEED");
  EXPECT_NE(base, env);
  std::vector<std::string> explicit_seed = args;
  explicit_seed.insert(explicit_seed.end(), {"--seed", "99"});
  EXPECT_EQ(invoke(explicit_seed).out, env);
}

TEST(Cli, IntegrateCsv) {
  const Outcome o = invoke({"integrate", "--k", "1", "--m", "1", "--method", "all", "--format", "csv", "--no-timing",
                            "--samples", "1000"});
  ASSERT_EQ(o.status, cli::kExitOk) << o.err;
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "method,value,std_error,samples");
}

TEST(Cli, CoregularityBound) {
  const Outcome o = invoke({"integrate", "--k", "3", "--m", "2"});
  EXPECT_EQ(o.status, cli::kExitUsage);
  const Json e = error_of(o);
  EXPECT_EQ(e.at("code"), "NotCoregular");
  EXPECT_NE(e.at("message").get<std::string>().find("1 <= k <= m"), std::string::npos);
  EXPECT_EQ(e.at("context").at("subcommand"), "integrate");
}

TEST(Cli, NumericalErrorsExitTwo) {
  const Outcome o = invoke({"lift", "--m", "2"}, R"({"k":2,"lower":[1,2,1]})");
  EXPECT_EQ(o.status, cli::kExitNumerical);
  EXPECT_EQ(error_of(o).at("code"), "NotInImage");
}

TEST(Cli, UsageErrors) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {}, {"bogus"}, {"density"}, {"integrate", "--k", "x", "--m", "2"}, {"volumes", "--m", "3", "--format", "xml"}}) {
    const Outcome o = invoke(args);
    EXPECT_EQ(o.status, cli::kExitUsage);
    EXPECT_EQ(error_of(o).at("code"), "UsageError");
  }
}

TEST(Cli, MalformedInput) {
  const Outcome o = invoke({"reduce"}, "{bad");
  EXPECT_EQ(o.status, cli::kExitUsage);
  EXPECT_EQ(error_of(o).at("code"), "InvalidInput");
  const Outcome shape = invoke({"density", "--m", "3"}, R"({"k":2,"lower":[1,0]})");
  EXPECT_EQ(shape.status, cli::kExitUsage);
  EXPECT_EQ(error_of(shape).at("code"), "InvalidInput");
}

TEST(Cli, UnknownIntegrand) {
  const Outcome o = invoke({"integrate", "--k", "1", "--m", "2", "--integrand", "cauchy"});
  EXPECT_EQ(o.status, cli::kExitUsage);
  EXPECT_EQ(error_of(o).at("code"), "InvalidInput");
}

TEST(Cli, VerifyConsistencyTable) {
  const Outcome o = invoke({"verify", "--samples", "20000"});
  ASSERT_EQ(o.status, cli::kExitOk) << o.err;
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "integrand,k,m,method,value,std_error,z_max,pass");
  EXPECT_EQ(o.out.find(",false\n"), std::string::npos);
}

TEST(Cli, VerifyDetectsInjectedFault) {
  const Outcome o = invoke({"verify", "--samples", "20000", "--inject-fault"});
  EXPECT_EQ(o.status, cli::kExitNumerical);
  EXPECT_NE(o.out.find(",false\n"), std::string::npos);
  EXPECT_EQ(Json::parse(o.err).at("code"), "CheckFailed");
}
