#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "dedekind/interval.hpp"
#include "support/oracles.hpp"

using dedekind::Rational;
using dedekind::RatInterval;

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(DEDEKIND_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 512> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

// First line of integrate/slope output: "[p/q, p/q]".
RatInterval enclosure(const std::string& out) {
  const std::string line = first_line(out);
  const auto comma = line.find(',');
  return {Rational::parse(line.substr(1, comma - 1)),
          Rational::parse(line.substr(comma + 2, line.size() - comma - 3))};
}

}  // namespace

TEST(Cli, Eval) {
  EXPECT_EQ(run("eval 'ln(4)' --digits 6").out, "1.386294\n");
  EXPECT_EQ(run("eval 'exp(0)' --digits 3").out, "1.000\n");
  EXPECT_EQ(run("eval '1/3 + 1/6' --digits 4").out, "0.5000\n");
}

TEST(Cli, Integrate) {
  const Result a = run("integrate t --from 0 --to 1 --eps 1e-6");
  ASSERT_EQ(a.code, 0);
  EXPECT_TRUE(enclosure(a.out).contains(Rational(1, 2)));
  const Result b = run("integrate 1/t --from 1 --to 2 --eps 1e-6");
  ASSERT_EQ(b.code, 0);
  EXPECT_TRUE(enclosure(b.out).contains(oracle::ln(Rational(2), Rational(1, 100000000))));
  const Result c = run("integrate t --from 1 --to 0 --eps 1e-6");
  ASSERT_EQ(c.code, 0);
  EXPECT_TRUE(enclosure(c.out).contains(Rational(-1, 2)));
}

TEST(Cli, Slopes) {
  const Result d = run("derivative 'ln(x)' --at 2");
  ASSERT_EQ(d.code, 0);
  EXPECT_TRUE(enclosure(d.out).contains(Rational(1, 2)));
  EXPECT_TRUE(enclosure(run("slope 'x^2' --at 1 3").out).contains(Rational(4)));
  EXPECT_TRUE(enclosure(run("slope 'x^2' --at 2 2").out).contains(Rational(4)));
}

TEST(Cli, TraceJson) {
  const std::string path = "cli_trace_test.json";
  ASSERT_EQ(run("integrate t --from 0 --to 1 --eps 1e-3 --trace " + path).code, 0);
  std::ifstream in(path);
  const nlohmann::json j = nlohmann::json::parse(in);
  for (const char* key : {"levels", "superlevel_bounds", "sublevel_bounds", "lower_sum", "upper_sum"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["levels"].size(), j["superlevel_bounds"].size() + 1);
  EXPECT_LE(Rational::parse(j["lower_sum"].get<std::string>()), Rational(1, 2));
  EXPECT_GE(Rational::parse(j["upper_sum"].get<std::string>()), Rational(1, 2));
  std::remove(path.c_str());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("eval '2 +'").code, 2);
  EXPECT_EQ(run("eval '1/(1 - 1)'").code, 3);
  EXPECT_EQ(run("eval 'ln(0 - 1)'").code, 3);
  EXPECT_EQ(run("integrate 1/t --from -1 --to 1").code, 3);
  EXPECT_EQ(run("integrate t --from 0").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("integrate 1/t --from 1 --to 2 --eps 1e-12 --max-depth 2").code, 4);
}
