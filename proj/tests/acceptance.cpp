// acceptance [path to skewnp]: one PASS/FAIL line per acceptance criterion.
// The criteria run the unit and property cases by name; the command-line
// checks need the skewnp binary.
#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

using namespace skewnp;
using namespace skewnp::testing;

namespace {

std::string g_cli;
int g_started = 0;
int g_failed = 0;

struct Counter : doctest::IReporter {
  explicit Counter(const doctest::ContextOptions&) {}
  void report_query(const doctest::QueryData&) override {}
  void test_run_start() override {}
  void test_run_end(const doctest::TestRunStats&) override {}
  void test_case_start(const doctest::TestCaseData&) override { ++g_started; }
  void test_case_reenter(const doctest::TestCaseData&) override {}
  void test_case_end(const doctest::CurrentTestCaseStats& s) override {
    if (s.failure_flags != 0) ++g_failed;
  }
  void test_case_exception(const doctest::TestCaseException&) override {}
  void subcase_start(const doctest::SubcaseSignature&) override {}
  void subcase_end() override {}
  void log_assert(const doctest::AssertData&) override {}
  void log_message(const doctest::MessageData&) override {}
  void test_case_skipped(const doctest::TestCaseData&) override {}
};

struct Run {
  int status = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  Run r;
  if (g_cli.empty()) return r;
  const std::string cmd = "'" + g_cli + "' " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int w = pclose(p);
  r.status = WIFEXITED(w) ? WEXITSTATUS(w) : -1;
  return r;
}

struct Criterion {
  int id;
  const char* title;
  std::vector<std::string> cases;
};

// Doctest filters split on commas.
std::string filter_of(const std::vector<std::string>& names) {
  std::string f;
  for (std::string n : names) {
    for (char& c : n)
      if (c == ',') c = '?';
    f += (f.empty() ? "" : ",") + n;
  }
  return f;
}

bool run_criterion(const Criterion& c, std::string& log) {
  g_started = g_failed = 0;
  std::ostringstream os;
  doctest::Context ctx;
  ctx.setOption("test-case", filter_of(c.cases).c_str());
  ctx.setOption("reporters", "console");
  ctx.setOption("no-intro", true);
  ctx.setOption("no-version", true);
  ctx.setCout(&os);
  const int rc = ctx.run();
  log = os.str();
  if (g_started != static_cast<int>(c.cases.size()))
    log += "expected " + std::to_string(c.cases.size()) + " cases, ran " + std::to_string(g_started) + "\n";
  return rc == 0 && g_failed == 0 && g_started == static_cast<int>(c.cases.size());
}

}  // namespace

REGISTER_LISTENER("counter", 1, Counter);

TEST_CASE("acceptance: factor command on the double root") {
  const Run r = run_cli("factor --alpha 2 --prec 40 --json 't^2-2*t+1'");
  INFO(r.out);
  REQUIRE(r.status == 0);
  CHECK(r.out.find("\"factors\": [\n    \"t - 1\",\n    \"t - 1\"\n  ]") != std::string::npos);
  CHECK(r.out.find("\"residual\": \"0\"") != std::string::npos);
}

TEST_CASE("acceptance: twist check and hensel command with alpha = 1") {
  const auto R = ring_for("1");
  const PuiseuxPoly g = poly("t - 1", R);
  const TwistCheck tc = twist_coprime_check(g, g);
  REQUIRE(std::holds_alternative<FailsAt>(tc));
  CHECK(std::get<FailsAt>(tc).n == 1);

  const Run r = run_cli("hensel --alpha 1 --json 't^2 - (2+x)*t + (1+2*x)' 't - 1' 't - 1'");
  INFO(r.out);
  CHECK(r.status == 2);
  CHECK(r.out.find("\"error\": \"twist_coprime_failed\"") != std::string::npos);
  CHECK(r.out.find("\"n\": 1") != std::string::npos);
}

TEST_CASE("acceptance: sigma-zero command with alpha = i") {
  const Run r = run_cli("sigma-zero --alpha i --json 't^2 - (1+x^2)'");
  INFO(r.out);
  CHECK(r.status == 2);
  CHECK(r.out.find("\"q\": \"2\"") != std::string::npos);
}

int main(int argc, char** argv) {
  if (argc > 1) g_cli = argv[1];
  const std::vector<Criterion> criteria = {
      {1, "double root factors as (t - 1)(t - 1)",
       {"double root with a nontrivial automorphism", "acceptance: factor command on the double root"}},
      {2, "quadratic example lifts with alpha = 2",
       {"lifting the quadratic example", "quadratic example with alpha = 2"}},
      {3, "quadratic example with alpha = 1",
       {"trivial automorphism breaks the twist condition", "quadratic example with alpha = 1 needs ramification",
        "acceptance: twist check and hensel command with alpha = 1"}},
      {4, "skew power series example", {"skew power series example fails at n = 1"}},
      {5, "non-real multiplier obstruction",
       {"obstruction for a non-real multiplier", "acceptance: sigma-zero command with alpha = i"}},
      {6, "property suites",
       {"exact ring laws against the rewriting oracle", "associativity and distributivity in both instances",
        "division identity", "evaluation by remainder, closed form and right factors", "Leibniz rule for delta_a",
        "conjugation by powers of x", "coefficient of t^(d-1) in (t - b)^d is minus the trace of b",
        "trace preimage", "shift and scale are invertible ring homomorphisms",
        "random liftable instances keep the step invariant"}},
      {7, "beta law and scaled normalization",
       {"beta law from expanding powers of x^(-r) t", "scaled normalization"}},
      {8, "products of three linear factors", {"products of three linear factors are refactored"}},
  };

  // The factorizer criteria count only once the structure maps check out.
  std::string log7;
  const bool maps_ok = run_criterion(criteria[6], log7);
  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string log;
    bool ok;
    if (c.id == 7) {
      ok = maps_ok;
      log = log7;
    } else if (!maps_ok && (c.id == 1 || c.id == 2 || c.id == 3 || c.id == 8)) {
      ok = false;
      log = "factorizer disabled: criterion 7 failed\n";
    } else {
      ok = run_criterion(c, log);
    }
    std::cout << (ok ? "PASS" : "FAIL") << "  " << c.id << "  " << c.title << "\n";
    if (!ok) {
      std::cout << log;
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}
