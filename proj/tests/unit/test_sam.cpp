#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sessionvm/cllb.hpp"
#include "sessionvm/frontend.hpp"
#include "sessionvm/harness.hpp"
#include "sessionvm/sam.hpp"
#include "sessionvm/typecheck.hpp"

using namespace svm;

namespace {
Process program(const std::string& rel) {
  std::ifstream in(std::string(SVM_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return *parse({ss.str(), rel}).process;
}
using Rules = std::vector<std::string>;
}  // namespace

TEST_CASE("closure send runs in seven steps") {
  SamRun run = runSam(program("tests/programs/trace31.cll"), {kSamBudget, true});
  CHECK((run.outcome == SamRun::Outcome::Halted));
  CHECK(run.rules == Rules{"SCut", "S⊗", "S1", "S⅋−", "S1", "S⊥", "S⊥"});
  CHECK(run.states.size() == 8);
  CHECK(run.final.heap.empty());
  CHECK(halted(run.final));
}

TEST_CASE("forwarding merges queues in order") {
  SamRun run = runSam(program("tests/programs/trace32.cll"), {kSamBudget, true});
  CHECK((run.outcome == SamRun::Outcome::Halted));
  CHECK(run.rules == Rules{"SCut", "SCut", "S⊗", "S⊗", "S−", "S⅋", "S⊗", "S−", "Sfwd", "S⅋",
                           "S⅋", "S1", "S⊥"});
  CHECK(run.final.heap.empty());
  // 3 is read before 2
  std::vector<std::string> ints;
  for (const auto& e : run.events.items)
    if (e.rfind("I:", 0) == 0) ints.push_back(e);
  CHECK(ints == Rules{"I:1", "I:3", "I:2"});
}

TEST_CASE("every state is ready, closed and satisfies the heap invariant") {
  for (const char* f : {"tests/programs/trace31.cll", "tests/programs/trace32.cll"}) {
    SamRun run = runSam(program(f), {kSamBudget, true});
    for (const auto& s : run.states) {
      CHECK(checkReady(s).ready);
      CHECK_FALSE(checkHeapInvariant(s.heap));
      CHECK_FALSE(checkClosed(s));
      CHECK(typechecks(decode(s)));
    }
  }
}

TEST_CASE("encoding then decoding gives back the embedding") {
  for (const auto& e : generate(4, 1)) {
    MachineState s = encode(e.program);
    CHECK(congruentB(decode(s), embed(e.program)));
  }
}

TEST_CASE("runs are deterministic") {
  Process p = program("tests/programs/trace32.cll");
  SamRun a = runSam(p), b = runSam(p);
  CHECK(a.hashes == b.hashes);
  CHECK(a.rules == b.rules);
}

TEST_CASE("a server is called twice") {
  SamRun run = runSam(parseOrThrow("cut! { y. close y |!s:1| call s(a); call s(b); wait a; wait b; 0 }"));
  CHECK((run.outcome == SamRun::Outcome::Halted));
  CHECK(run.final.heap.empty());
  int calls = 0;
  for (const auto& r : run.rules) calls += r.rfind("Scall", 0) == 0;
  CHECK(calls == 2);
}

TEST_CASE("allocation rules") {
  CHECK(isAllocationRule("SCut"));
  CHECK(isAllocationRule("SMix"));
  CHECK_FALSE(isAllocationRule("S⊗"));
  CHECK_FALSE(isAllocationRule("Sfwd"));
}

TEST_CASE("traces carry one line per state") {
  SamRun run = runSam(program("tests/programs/trace31.cll"), {kSamBudget, true});
  std::string t = traceJsonl(run, true);
  CHECK(std::count(t.begin(), t.end(), '\n') == 8);
}
