#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sessionvm/cll.hpp"
#include "sessionvm/frontend.hpp"
#include "sessionvm/harness.hpp"

using namespace svm;

namespace {
Process program(const std::string& rel) {
  std::ifstream in(std::string(SVM_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return *parse({ss.str(), rel}).process;
}
}  // namespace

TEST_CASE("closure send followed by two waits") {
  CllRun run = runCll(program("tests/programs/trace31.cll"));
  CHECK((run.outcome == CllRun::Outcome::Normal));
  REQUIRE(run.steps.size() == 3);
  CHECK((run.steps[0].redex.rule == CllRule::TensorPar));
  CHECK((run.steps[1].redex.rule == CllRule::OneBot));
  CHECK((run.steps[2].redex.rule == CllRule::OneBot));
  CHECK(run.final.isInact());
  CHECK(run.events.items.size() == 2);
}

TEST_CASE("forwarding example reduces to 0 on every path") {
  Process p = program("tests/programs/trace32.cll");
  CllExploration ex = exploreCll(p);
  CHECK(ex.exhausted);
  REQUIRE(ex.normalForms.size() == 1);
  CHECK(ex.normalForms.front() == canonical(Process::inact()));
  REQUIRE(ex.digests.size() == 1);
  CHECK(ex.digests.front() == runCll(p).events.digest());
}

TEST_CASE("redexes: forwarder, label, call") {
  auto rs = enumerateRedexes(parseOrThrow("cut { fwd x y |x:1| wait x; 0 }"));
  REQUIRE(rs.size() == 1);
  CHECK((rs[0].rule == CllRule::Fwd));
  rs = enumerateRedexes(parseOrThrow("cut { #l x; close x |x:+{#l: 1}| case x { |#l: wait x; 0 } }"));
  REQUIRE(rs.size() == 1);
  CHECK((rs[0].rule == CllRule::WithPlus));
  rs = enumerateRedexes(parseOrThrow("cut! { y. close y |!s:1| call s(z); wait z; 0 }"));
  REQUIRE(rs.size() == 1);
  CHECK((rs[0].rule == CllRule::Call));
}

TEST_CASE("no redex under a prefix") {
  CHECK(enumerateRedexes(parseOrThrow("wait a; cut { close x |x:1| wait x; 0 }")).empty());
}

TEST_CASE("strategies agree on outcomes over the small corpus") {
  for (const auto& e : generate(4, 1)) {
    CllRun a = runCll(e.program);
    CllRun b = runCll(e.program, Strategy::random(7));
    CHECK(a.final.isInact() == b.final.isInact());
    CHECK(a.events.digest() == b.events.digest());
  }
}

TEST_CASE("event digests ignore order") {
  Events a, b;
  a.add("C");
  a.add("L:l");
  b.add("L:l");
  b.add("C");
  CHECK(a.digest() == b.digest());
  b.add("C");
  CHECK(a.digest() != b.digest());
}

TEST_CASE("strategy parsing") {
  CHECK(Strategy::parse("first")->kind == Strategy::Kind::First);
  CHECK(Strategy::parse("random(5)")->seed == 5);
  CHECK_FALSE(Strategy::parse("bogus"));
}
