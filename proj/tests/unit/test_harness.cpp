#include <algorithm>
#include <set>

#include "doctest.h"
#include "sessionvm/frontend.hpp"
#include "sessionvm/harness.hpp"
#include "sessionvm/typecheck.hpp"

using namespace svm;

namespace {
std::vector<std::string> keys(const std::vector<Process>& ps) {
  std::vector<std::string> k;
  for (const auto& p : ps) k.push_back(alphaKey(p));
  return k;
}
}  // namespace

TEST_CASE("type alphabet") {
  auto ts = typeAlphabet(3, {"l", "r"});
  CHECK(ts.size() == 106);
  for (const auto& t : ts) CHECK(t.size() <= 3);
}

TEST_CASE("size 1 is only the inert process") {
  Corpus c = generate(1, 1);
  REQUIRE(c.size() == 1);
  CHECK(c[0].program.isInact());
}

TEST_CASE("size 3 contains the smallest cut") {
  Process want = parseOrThrow("cut { close x |x:1| wait x; 0 }");
  Corpus c = generate(3, 1);
  CHECK(std::any_of(c.begin(), c.end(), [&](const CorpusEntry& e) { return alphaEqual(e.program, want); }));
}

TEST_CASE("enumeration counts are pinned") {
  CHECK(enumerateExact(1).size() == 1);
  CHECK(enumerateExact(2).size() == 16);
  CHECK(enumerateExact(3).size() == 38);
  CHECK(enumerateExact(4).size() == 892);
  CHECK(enumerateExact(5).size() == 5350);
  CHECK(generate(4, 1).size() == 947);
}

TEST_CASE("enumerated programs are closed, well typed and distinct") {
  for (std::size_t n = 1; n <= 4; ++n) {
    auto ps = enumerateExact(n);
    auto k = keys(ps);
    CHECK(std::adjacent_find(k.begin(), k.end()) == k.end());
    for (const auto& p : ps) {
      CHECK(processSize(p) == n);
      CHECK(typechecks(p));
    }
  }
}

TEST_CASE("enumerator agrees with brute force up to size 3") {
  for (std::size_t n = 1; n <= 3; ++n) CHECK(keys(enumerateExact(n)) == keys(bruteForceExact(n)));
}

TEST_CASE("enumerator agrees with brute force at size 4" * doctest::skip()) {
  CHECK(keys(enumerateExact(4)) == keys(bruteForceExact(4)));
}

TEST_CASE("random programs are well typed and seed-determined") {
  for (std::uint64_t s = 1; s <= 200; ++s) {
    Process p = randomProgram(s);
    CHECK(typechecks(p));
    CHECK(alphaEqual(p, randomProgram(s)));
  }
  std::set<std::string> distinct;
  for (std::uint64_t s = 1; s <= 200; ++s) {
    CHECK_FALSE(randomProgram(s).isInact());
    distinct.insert(alphaKey(randomProgram(s)));
  }
  CHECK(distinct.size() > 150);
}

TEST_CASE("parallel corpus is sorted by size and has a pcut everywhere") {
  Corpus c = pcutCorpus(1, 20);
  REQUIRE(c.size() == 20);
  for (std::size_t i = 1; i < c.size(); ++i)
    CHECK(processSize(c[i - 1].program) <= processSize(c[i].program));
  for (const auto& e : c) CHECK(prettyPrint(e.program).find("pcut") != std::string::npos);
}

TEST_CASE("engines agree on a closure program") {
  DiffReport r = diff(parseOrThrow("cut { send a(y. close y); close a |a:1 * 1| recv a(x); wait x; wait a; 0 }"));
  CHECK(r.pass);
  CHECK_FALSE(r.internal);
  CHECK(r.samSteps == 7);
  for (const char* name : {"typed", "progress", "preservation", "readiness", "soundness", "correspondence",
                           "simulation", "outcomes"}) {
    REQUIRE(r.find(name));
    CHECK_MESSAGE(r.find(name)->pass, name);
  }
}

TEST_CASE("a negative action overtaking a queued label breaks stepwise correspondence") {
  // the buffered run fires the wait on y before the case on x has read #m
  Process p = parseOrThrow(
      "cut { cut { #m x; wait y; close x |x:+{#m: 1}| case x { |#m: wait x; 0 } } |y:bot| close y }");
  DiffReport r = diff(p);
  REQUIRE(r.find("correspondence"));
  CHECK_FALSE(r.find("correspondence")->pass);
  CHECK(r.find("soundness")->pass);
  CHECK(r.find("outcomes")->pass);
}

TEST_CASE("shrinking keeps the failure and gets smaller") {
  Process big = parseOrThrow(
      "cut { cut { #m x; wait y; close x |x:+{#m: 1}| case x { |#m: wait x; cut { close u |u:1| wait u; 0 } } } "
      "|y:bot| close y }");
  auto fails = [](const Process& q) {
    const CheckResult* c = diff(q).find("correspondence");
    return c && !c->pass;
  };
  REQUIRE(fails(big));
  Process small = shrink(big, fails);
  CHECK(fails(small));
  CHECK(processSize(small) < processSize(big));
}

TEST_CASE("serial and parallel sweeps give the same reports") {
  Corpus c = generate(3, 1, 20);
  SweepSummary a = sweep(c, {}, false);
  SweepSummary b = sweep(c, {}, true);
  CHECK(a.programs == b.programs);
  CHECK(a.passed == b.passed);
  CHECK(a.failedChecks == b.failedChecks);
  CHECK(a.items == b.items);
}
