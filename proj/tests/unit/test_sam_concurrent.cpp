#include "doctest.h"
#include "sessionvm/frontend.hpp"
#include "sessionvm/harness.hpp"
#include "sessionvm/sam.hpp"
#include "sessionvm/sam_concurrent.hpp"
#include "sessionvm/typecheck.hpp"

using namespace svm;

namespace {
const char* kTwoSessions =
    "pcut { pcut { (send a(1); close a || send b(2); close b) |a:int * 1| recv a(v:int); wait a; 0 } "
    "|b:int * 1| recv b(w:int); wait b; 0 }";
}

TEST_CASE("the fixture is well typed") {
  CHECK(typechecks(parseOrThrow(kTwoSessions)));
  CHECK(typechecks(parseOrThrow("cut { close x |x:1| pcut { wait x; close y |y:1| wait y; 0 } }")));
}

TEST_CASE("schedule picks are a function of seed and step") {
  for (std::size_t s = 0; s < 50; ++s) {
    CHECK(schedulePick(3, s, 4) == schedulePick(3, s, 4));
    CHECK(schedulePick(3, s, 4) < 4);
  }
}

TEST_CASE("parallel cuts halt with an empty heap on every seed") {
  Process p = parseOrThrow(kTwoSessions);
  std::uint64_t expected = runSam(p).events.digest();
  for (std::uint64_t seed = 1; seed <= 16; ++seed) {
    ParRun r = runConcurrent(p, Scheduler::randomSeeded(seed), {kSamBudget, false, true});
    CHECK((r.outcome == ParRun::Outcome::Halted));
    CHECK_FALSE(r.heapLeak);
    CHECK(r.final.heap.empty());
    CHECK(r.digest == expected);
  }
}

TEST_CASE("every interleaving reaches the same outcome") {
  Exploration ex = exploreConcurrent(parseOrThrow(kTwoSessions), 10000);
  CHECK(ex.complete);
  CHECK(ex.digests.size() == 1);
  CHECK(ex.leaks == 0);
  CHECK(ex.stuck == 0);
  CHECK(ex.halted > 0);
}

TEST_CASE("thread-confined records stay confined") {
  Process p = parseOrThrow("cut { close x |x:1| pcut { wait x; close y |y:1| wait y; 0 } }");
  ParRun r = runConcurrent(p, Scheduler::roundRobin(), {kSamBudget, true, true});
  CHECK((r.outcome == ParRun::Outcome::Halted));
  for (const auto& s : r.states) CHECK_FALSE(checkFootprint(s));
}

TEST_CASE("generated parallel programs are confluent") {
  Corpus c = pcutCorpus(5, 10);
  REQUIRE(c.size() == 10);
  for (const auto& e : c) {
    ConfluenceReport r = confluence(e.program, {1, 2, 3, 4}, 2000);
    CHECK_MESSAGE(r.pass, e.id << ": " << r.detail);
    CHECK(r.leaks == 0);
  }
}
