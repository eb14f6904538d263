#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phifloor/cli.hpp"

using namespace phifloor;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::main_entry(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("sum-phi-floor CSV") {
  const Outcome o = run_cli({"sum-phi-floor", "--x", "10"});
  CHECK(o.code == cli::kOk);
  CHECK(o.out == "x,value\n10,17\n");
  CHECK(o.err.empty());
}

TEST_CASE("sum-phi-floor grid") {
  const Outcome o = run_cli({"sum-phi-floor", "--x-min", "5", "--x-max", "100", "--ratio", "20"});
  CHECK(o.code == cli::kOk);
  CHECK(o.out == "x,value\n5,8\n100,275\n");
}

TEST_CASE("sum-phi-over-floor carries the exact value") {
  const Outcome o = run_cli({"sum-phi-over-floor", "--x", "100"});
  REQUIRE(o.code == cli::kOk);
  const auto l = lines(o.out);
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "x,value,error_bound,terms,exact");
  CHECK(l[1].rfind("100,78.25800865800866,", 0) == 0);
  CHECK(l[1].substr(l[1].size() - 11) == ",90388/1155");
}

TEST_CASE("constants rounded column") {
  const Outcome o = run_cli({"constants", "--format", "json"});
  REQUIRE(o.code == cli::kOk);
  const auto doc = nlohmann::json::parse(o.out);
  std::map<std::string, std::string> rounded;
  for (const auto& row : doc["rows"]) rounded[row["name"]] = row["rounded"];
  CHECK(rounded["thm2_lower"] == "0.41649");
  CHECK(rounded["thm2_upper"] == "0.73139");
  CHECK(rounded["wu_lower"] == "0.40528");
  CHECK(rounded["wu_upper"] == "0.73862");
  CHECK(rounded["c0"] == "0.78839");
  CHECK(rounded["zeta2"] == "1.64493");
  CHECK(doc["metadata"]["tool"] == "phifloor");
  CHECK_FALSE(doc["metadata"].contains("elapsed_seconds"));
}

TEST_CASE("mobius-check passes") {
  const Outcome o = run_cli({"mobius-check", "--x", "1000", "--n", "50", "--delta", "1"});
  CHECK(o.code == cli::kOk);
  const auto l = lines(o.out);
  REQUIRE(l.size() == 2);
  CHECK(l[1].substr(l[1].size() - 5) == ",pass");
}

TEST_CASE("check subcommands pass on valid input") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"decomposition-check", "--x-min", "3", "--x-max", "3000", "--ratio", "3"},
           {"abel-check", "--x-min", "1000", "--x-max", "1000000", "--ratio", "10", "--d", "500"},
           {"derivative-check", "--x", "1000000", "--k", "1", "--n", "500"},
           {"derivative-check", "--count", "10"},
           {"aux-sum", "--x", "100", "--n", "7", "--delta", "1"},
           {"residuals-thm1", "--x-min", "1000", "--x-max", "100000", "--ratio", "10"},
           {"thm2-ratios", "--x", "10"},
           {"divisor-delta", "--x", "10"},
           {"fit", "--series", "divisor", "--x-min", "10000", "--x-max", "1000000"},
       }) {
    const Outcome o = run_cli(args);
    CAPTURE(args.front());
    CHECK(o.code == cli::kOk);
    CHECK(o.err.empty());
    CHECK(lines(o.out).size() >= 2);
  }
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}).code == cli::kUsage);
  CHECK(run_cli({"no-such-command"}).code == cli::kUsage);
  CHECK(run_cli({"sum-phi-floor"}).code == cli::kUsage);
  CHECK(run_cli({"sum-phi-floor", "--x", "10", "--x-min", "5", "--x-max", "20"}).code == cli::kUsage);
  CHECK(run_cli({"sum-phi-floor", "--x-min", "5", "--x-max", "20", "--ratio", "1"}).code == cli::kUsage);
  CHECK(run_cli({"sum-phi-floor", "--x", "10", "--workers", "0"}).code == cli::kUsage);
  CHECK(run_cli({"aux-sum", "--x", "10", "--n", "2", "--delta", "3"}).code == cli::kUsage);
  CHECK(run_cli({"sum-phi-floor", "--x", "10", "--method", "magic"}).code == cli::kUsage);
  CHECK(run_cli({"sum-phi-floor", "--x", "100000", "--memory-budget", "64", "--method", "streaming"}).code ==
        cli::kResource);
  CHECK(run_cli({"aux-sum", "--x", "10", "--n", "11"}).code == cli::kDomain);
  CHECK(run_cli({"derivative-check", "--x", "1000000", "--k", "1", "--n", "6000"}).code == cli::kDomain);
  CHECK(run_cli({"abel-check", "--x", "1000", "--d", "100"}).code == cli::kDomain);
  CHECK(run_cli({"fit", "--input", "/nonexistent/series.csv"}).code == cli::kIo);

  const Outcome o = run_cli({"aux-sum", "--x", "10", "--n", "11"});
  const auto rec = nlohmann::json::parse(o.err);
  CHECK(rec["status"] == "error");
  CHECK(rec["kind"] == "domain");
  CHECK(rec["exit_code"] == cli::kDomain);
  CHECK(o.out.empty());
}

TEST_CASE("memory budget environment variable") {
  ::setenv(cli::kMemoryBudgetEnv, "64", 1);
  CHECK(run_cli({"sum-phi-floor", "--x", "100000", "--method", "streaming"}).code == cli::kResource);
  ::setenv(cli::kMemoryBudgetEnv, "bogus", 1);
  CHECK(run_cli({"sum-phi-floor", "--x", "10"}).code == cli::kUsage);
  ::unsetenv(cli::kMemoryBudgetEnv);
  CHECK(run_cli({"sum-phi-floor", "--x", "10"}).code == cli::kOk);
}

TEST_CASE("JSON output schema") {
  const Outcome o = run_cli({"sum-phi-floor", "--x", "10", "--format", "json", "--timing"});
  REQUIRE(o.code == cli::kOk);
  const auto doc = nlohmann::json::parse(o.out);
  CHECK(doc["columns"] == nlohmann::json::array({"x", "value"}));
  CHECK(doc["rows"][0]["x"] == 10);
  CHECK(doc["rows"][0]["value"] == 17);
  CHECK(doc["metadata"]["version"] == cli::kVersion);
  CHECK(doc["metadata"]["elapsed_seconds"].is_number());
  CHECK(doc["metadata"]["config"]["subcommand"] == "sum-phi-floor");
}

TEST_CASE("output is identical across worker counts") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"sum-phi-over-floor", "--x-min", "1000", "--x-max", "20000000", "--ratio", "7"},
           {"mobius-check", "--x", "1000000", "--n", "100000"},
           {"residuals-thm1", "--x-min", "1000", "--x-max", "1000000", "--ratio", "5"},
       }) {
    auto with = [&](const char* w) {
      auto a = args;
      a.insert(a.end(), {"--workers", w, "--format", "json"});
      return run_cli(a);
    };
    const Outcome one = with("1"), four = with("4");
    CAPTURE(args.front());
    CHECK(one.code == cli::kOk);
    CHECK(one.out == four.out);
  }
}

TEST_CASE("fit from an input file and --output") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto series = dir / "phifloor_cli_series.csv";
  const auto fitted = dir / "phifloor_cli_fit.csv";
  {
    std::ofstream os(series);
    os << "x,residual\n";
    for (double x = 1000; x <= 1e7; x *= 2) os << x << ',' << 2 * std::sqrt(x) << '\n';
  }
  const Outcome o = run_cli({"fit", "--input", series.string(), "--output", fitted.string()});
  CHECK(o.code == cli::kOk);
  CHECK(o.out.empty());
  std::ifstream is(fitted);
  std::stringstream ss;
  ss << is.rdbuf();
  const auto l = lines(ss.str());
  REQUIRE(l.size() == 2);
  CHECK(l[0] == "series,points_used,slope,intercept,r_squared,x_first,x_last");
  CHECK(l[1].rfind("file:residual,14,0.5", 0) == 0);
  CHECK(run_cli({"fit", "--input", series.string(), "--column", "nope"}).code != cli::kOk);
  std::filesystem::remove(series);
  std::filesystem::remove(fitted);
}
