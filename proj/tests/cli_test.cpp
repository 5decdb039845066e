#include "leibniz/cli.hpp"
#include "leibniz/format.hpp"
#include "leibniz/parser.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace {

using leibniz::cli::kDomainError;
using leibniz::cli::kSuccess;
using leibniz::cli::kUsageError;
using nlohmann::json;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = leibniz::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

TEST(Cli, ImplicitDerivative) {
  auto r = invoke({"derive", "x*y = 5", "--target", "dy/dx"});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_EQ(r.out, "-(y/x)\n");
  EXPECT_NE(r.err.find("assuming x != 0"), std::string::npos);
}

TEST(Cli, OneSidedLimit) {
  auto r = invoke({"limit", "(x^2-25)/(x-5)", "--var", "x", "--at", "5", "--side", "right"});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_EQ(r.out, "10\n");
}

TEST(Cli, ImplicitMultiplicationIsRejectedWithCaret) {
  auto r = invoke({"parse", "2z dz"});
  EXPECT_EQ(r.code, kUsageError);
  EXPECT_TRUE(r.out.empty());
  // The caret line sits under the 'z' at offset 1, after the two-space indent.
  EXPECT_NE(r.err.find("\n  2z dz\n   ^\n"), std::string::npos) << r.err;
}

TEST(Cli, DomainErrorsExitWithThree) {
  auto r = invoke({"integrate", "x*dy"});
  EXPECT_EQ(r.code, kDomainError);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("NotExact"), std::string::npos);
}

TEST(Cli, UsageErrorsExitWithTwo) {
  EXPECT_EQ(invoke({}).code, kUsageError);
  EXPECT_EQ(invoke({"frobnicate"}).code, kUsageError);
  EXPECT_EQ(invoke({"nthdiff", "x^3"}).code, kUsageError);
  EXPECT_EQ(invoke({"nthdiff", "x^3", "--order", "0"}).code, kUsageError);
  EXPECT_EQ(invoke({"limit", "x", "--var", "x", "--at", "1", "--side", "up"}).code, kUsageError);
  EXPECT_EQ(invoke({"derive", "x*y", "--target", "dy/dx"}).code, kUsageError);
}

TEST(Cli, HelpSucceeds) {
  auto r = invoke({"--help"});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_NE(r.out.find("derive"), std::string::npos);
}

TEST(Cli, JsonSuccessCarriesAllRenderings) {
  auto r = invoke({"diff", "x^3", "--json"});
  ASSERT_EQ(r.code, kSuccess);
  json j = json::parse(r.out);
  EXPECT_EQ(j["command"], "diff");
  EXPECT_EQ(j["ok"], true);
  EXPECT_EQ(j["result"]["plain"], "3*x^2*dx");
  EXPECT_EQ(leibniz::from_json(j["result"]["tree"]), leibniz::parse_expr("3*x^2*dx"));
  EXPECT_NE(j["result"]["latex"].get<std::string>().find("\\mathrm{d}x"), std::string::npos);
}

TEST(Cli, JsonErrorsGoToStdout) {
  auto r = invoke({"parse", "foo(x)", "--json"});
  EXPECT_EQ(r.code, kUsageError);
  EXPECT_TRUE(r.err.empty());
  json j = json::parse(r.out);
  EXPECT_EQ(j["ok"], false);
  EXPECT_EQ(j["error"]["code"], "ParseError");
  EXPECT_EQ(j["error"]["kind"], "UnknownFunction");
  EXPECT_EQ(j["error"]["span"]["start"], 0);
  EXPECT_EQ(j["error"]["span"]["end"], 3);

  auto d = invoke({"derive", "x*y = 5", "--target", "dq/dx", "--json"});
  EXPECT_EQ(d.code, kDomainError);
  EXPECT_EQ(json::parse(d.out)["error"]["code"], "TargetAbsent");
}

TEST(Cli, LatexStyle) {
  auto r = invoke({"derive", "x*y = 5", "--target", "dy/dx", "--latex"});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_EQ(r.out, "-\\frac{y}{x}\n");
}

TEST(Cli, IntegrateBetweenPoints) {
  auto r = invoke({"integrate", "y*dx + x*dy", "--from", "x=1,y=1", "--to", "x=2,y=3"});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_EQ(r.out, "x*y + C\n5\n");
}

TEST(Cli, UndefinedLimitIsNotAnError) {
  auto r = invoke({"limit", "abs(x)/x", "--var", "x", "--at", "0"});
  EXPECT_EQ(r.code, kSuccess);
  EXPECT_EQ(r.out, "undefined\n");
  EXPECT_NE(r.err.find("sides disagree"), std::string::npos);
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::vector<std::string>> commands = {
      {"derive", "z^2 = x*y", "--target", "dy/dz", "--json"},
      {"second", "x = t^2", "y = t^3", "--target", "dy/dx", "--independent", "t"},
      {"sum", "sqrt(dx^2 + dy^2)", "--from", "0", "--to", "1", "--curve", "y = x"},
  };
  for (const auto& args : commands) {
    auto a = invoke(args), b = invoke(args);
    EXPECT_EQ(a.out, b.out) << args.front();
    EXPECT_EQ(a.err, b.err) << args.front();
  }
}

TEST(Cli, PlainOutputReparses) {
  const std::vector<std::vector<std::string>> commands = {
      {"diff", "sin(x)*exp(y)/(x + y)"},
      {"nthdiff", "x^3*y", "--order", "2"},
      {"derive", "z^2 = x*y", "--target", "dy/dz"},
      {"diff", "u^v", "--positive", "u"},
      {"integrate", "2*x*y*dx + x^2*dy"},
  };
  for (const auto& args : commands) {
    auto r = invoke(args);
    ASSERT_EQ(r.code, kSuccess) << r.err;
    std::string text = first_line(r.out);
    auto again = invoke({"parse", "--", text});
    ASSERT_EQ(again.code, kSuccess) << text;
    EXPECT_EQ(leibniz::parse_expr(first_line(again.out)), leibniz::parse_expr(text)) << text;
  }
}

}  // namespace
