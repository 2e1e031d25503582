#include <doctest.h>

#include <fstream>
#include <sstream>

#include "wittkit/errors.hpp"
#include "wittkit/ringspec.hpp"
#include "wittkit/runner.hpp"

using namespace wittkit;

namespace {

const char* const kFixtures[] = {"witt", "towers", "modules", "split"};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixture(const std::string& name, const char* ext) {
  return slurp(std::string(WITTKIT_FIXTURES) + "/" + name + ext);
}

std::string report_text(const CheckPlan& plan, unsigned jobs) {
  RunOptions opts;
  opts.jobs = jobs;
  opts.timing = false;
  return run_checks(plan, opts).to_json(false).dump(2) + "\n";
}

}  // namespace

TEST_CASE("parse_ringspec examples") {
  auto plan = parse_ringspec("tower T { kind=ramified; p=3; d=2; G=t1^2+t2^3; N=5; D=12; }");
  REQUIRE(plan.blocks.size() == 1);
  CHECK(plan.blocks[0].type == BlockType::Tower);
  CHECK(plan.blocks[0].name == "T");
  CHECK(*plan.blocks[0].get("G") == "t1^2+t2^3");
  CHECK(plan.check_count() == 0);

  CHECK(parse_ringspec("").blocks.empty());
  CHECK(parse_ringspec("  # only a comment\n\n").blocks.empty());

  CHECK_THROWS_AS(parse_ringspec("check uniformizer U { tower=T; level=1; }"), UnknownReference);
  CHECK_THROWS_AS(parse_ringspec("check witt-identities W { p=2; n=9; }"), CapExceeded);
  CHECK_THROWS_AS(parse_ringspec("check witt-identities W { p=7; n=1; }"), CapExceeded);
  CHECK_THROWS_AS(parse_ringspec("tower T { kind=valuation; p=2; }\ncheck p-big B { tower=T; levels=5; }"),
                  CapExceeded);
  CHECK_THROWS_AS(parse_ringspec("algebra A { p=2; vars=x, y, z; mod=p^3; cap=200; }"), CapExceeded);
}

TEST_CASE("syntax errors carry positions") {
  auto expect_at = [](const std::string& text, int line, int column) {
    try {
      parse_ringspec(text);
      FAIL("no error for: " << text);
    } catch (const SyntaxError& e) {
      CHECK(e.line() == line);
      CHECK(e.column() == column);
    }
  };
  expect_at("towr T { }", 1, 1);
  expect_at("tower T { kind=valuation; p=2 }", 1, 31);
  expect_at("tower T {\n  kind=valuation;\n  p=2;\n  colour=red;\n}", 4, 3);
  expect_at("check nonsense X { }", 1, 7);
  expect_at("tower T { kind=valuation; p=2; }\ntower T { kind=valuation; p=3; }", 2, 7);
  expect_at("algebra A { p=3; vars=x; mod=p^2; cap=3; rel=x^2 = y; }", 1, 52);
  expect_at("tower T { kind=valuation; p=2; p=3; }", 1, 32);
  expect_at("tower T { kind=valuation; }", 1, 1);
}

TEST_CASE("algebra declarations build the expected ring") {
  auto plan = parse_ringspec("algebra C { p=3; vars=x, y:2; mod=p^3; cap=4; rel=x*y = 0; }");
  auto env = build_environment(plan);
  const auto& C = env.algebras.at("C");
  CHECK(C->modulus() == 27);
  CHECK(C->vars()[1].weight == 2);
  CHECK((C->var("x") * C->var("y")).is_zero());
  CHECK_FALSE(C->var("y").pow(2).is_zero());
  CHECK(C->var("y").pow(3).is_zero());  // weight 6 > cap 4
  CHECK_THROWS_AS(parse_ringspec("algebra A { p=2; vars=x; mod=6; cap=2; }"), SyntaxError);
  CHECK_THROWS_AS(parse_ringspec("algebra A { p=2; vars=x; mod=p^2; }"), InvalidSpec);
}

TEST_CASE("fixtures round-trip through print") {
  for (const char* name : kFixtures) {
    CAPTURE(name);
    const auto plan = parse_ringspec(fixture(name, ".ws"));
    const std::string text = print_ringspec(plan);
    const auto again = parse_ringspec(text);
    CHECK(again == plan);
    CHECK(print_ringspec(again) == text);
  }
}

TEST_CASE("golden reports are byte-stable") {
  for (const char* name : kFixtures) {
    CAPTURE(name);
    const auto plan = parse_ringspec(fixture(name, ".ws"));
    const std::string golden = fixture(name, ".golden.json");
    CHECK(report_text(plan, 1) == golden);
    CHECK(report_text(plan, 4) == golden);
  }
}

TEST_CASE("report shape") {
  const auto plan = parse_ringspec(fixture("split", ".ws"));
  const auto report = run_checks(plan);
  CHECK(report.pass());
  const auto j = report.to_json(true);
  CHECK(j["schema"] == "wittkit/1");
  CHECK(j["overall"] == "pass");
  REQUIRE(j["checks"].size() == plan.check_count());
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("wall_time_ms"));
    CHECK(c["certificates_verified"] == true);
    CHECK(c["precision"].contains("N"));
  }
  const auto& main = j["checks"][0];
  CHECK(main["name"] == "Main");
  for (const auto& k : main["details"]["monomial"]) CHECK(k["verdict"] == "NonMemberAtTruncation");
  CHECK(main["details"]["retraction"]["phi_one"] == "1");
  CHECK_FALSE(report.to_json(false)["checks"][0].contains("wall_time_ms"));
}

TEST_CASE("mathematical failures become records, not exceptions") {
  const auto plan = parse_ringspec(
      "algebra R { p=3; vars=x; mod=p^6; cap=6; }\n"
      "check etale E { base=R; h=z^2 - x; }\n"
      "check split S { base=R; h=3*z^2 - x; sop=3, x; }\n"
      "check witt-identities W { p=2; n=1; samples=5; }\n");
  const auto report = run_checks(plan);
  REQUIRE(report.checks.size() == 3);
  CHECK(report.checks[0].verdict == Verdict::Fail);
  CHECK(report.checks[1].verdict == Verdict::Error);
  CHECK(report.checks[1].details["error"] == "NotMonic");
  CHECK(report.checks[2].verdict == Verdict::Pass);
  CHECK_FALSE(report.pass());
}

TEST_CASE("seeds are recorded and respected") {
  const auto plan = parse_ringspec("check witt-identities W { p=3; n=1; samples=10; }");
  RunOptions a, b;
  a.seed = 3;
  b.seed = 4;
  const auto ra = run_checks(plan, a), rb = run_checks(plan, b);
  CHECK(ra.to_json(false)["seed"] == 3);
  CHECK(ra.checks[0].details["seed"] == 3);
  CHECK(rb.checks[0].details["seed"] == 4);
  CHECK(ra.pass());
  CHECK(rb.pass());
}
