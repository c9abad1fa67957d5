#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sessionvm/cllb.hpp"
#include "sessionvm/frontend.hpp"
#include "sessionvm/typecheck.hpp"

using namespace svm;

namespace {
Process program(const std::string& rel) {
  std::ifstream in(std::string(SVM_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return *parse({ss.str(), rel}).process;
}
}  // namespace

TEST_CASE("rule classes") {
  CHECK((classOf(BRule::One) == BClass::Positive));
  CHECK((classOf(BRule::Tensor) == BClass::Positive));
  CHECK((classOf(BRule::Plus) == BClass::Positive));
  CHECK((classOf(BRule::Bang) == BClass::Positive));
  CHECK((classOf(BRule::Bot) == BClass::Negative));
  CHECK((classOf(BRule::Par) == BClass::Negative));
  CHECK((classOf(BRule::With) == BClass::Negative));
  CHECK((classOf(BRule::Quest) == BClass::Negative));
  CHECK((classOf(BRule::Call) == BClass::Negative));
  CHECK((classOf(BRule::Fwdp) == BClass::Forward));
}

TEST_CASE("the embedding typechecks") {
  Process p = program("tests/programs/trace32.cll");
  CHECK(typechecks(embed(p)));
  CHECK(containsBufCut(embed(p)));
}

TEST_CASE("positive actions buffer ahead of the reader") {
  // the writer may emit twice before anyone reads
  Process p = parseOrThrow("cut { send x(1); send x(2); close x |x:int * int * 1| recv x(a:int); recv x(b:int); wait x; 0 }");
  BRun run = runB(embedNet(p));
  REQUIRE((run.outcome == BRun::Outcome::Normal));
  CHECK(run.states.back().atoms.empty());
  CHECK(maxQueueLength(run) == 3);
  auto segs = classifySequence(run.steps);
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].bundle.size() == 3);
  for (const auto& s : segs) CHECK(s.negative.has_value());
}

TEST_CASE("B runs preserve typing") {
  Process p = program("tests/programs/trace32.cll");
  BRun run = runB(embedNet(p));
  for (const auto& s : run.states) CHECK(typechecks(unflatten(s)));
  CHECK(run.states.back().atoms.empty());
}

TEST_CASE("a forwarder reduces in one step") {
  Process p = parseOrThrow("cut { close x |x:1| cut { fwd x y |y:1| wait y; 0 } }");
  REQUIRE(typechecks(p));
  auto steps = stepB(embed(p));
  bool fwd = false;
  for (const auto& [q, st] : steps) fwd = fwd || st.rule == BRule::Fwdp;
  CHECK(fwd);
}

TEST_CASE("events agree with CLL") {
  Process p = parseOrThrow("cut { #r x; send x(4); close x |x:+{#l: 1, #r: int * 1}| case x { |#l: wait x; 0 |#r: recv x(v:int); wait x; 0 } }");
  BRun b = runB(embedNet(p));
  CllRun c = runCll(p);
  CHECK(b.events.digest() == c.events.digest());
}
