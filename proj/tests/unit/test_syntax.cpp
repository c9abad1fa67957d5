#include "doctest.h"
#include "sessionvm/frontend.hpp"
#include "sessionvm/harness.hpp"
#include "sessionvm/process.hpp"
#include "sessionvm/types.hpp"

using namespace svm;

TEST_CASE("dual is an involution and flips polarity") {
  for (const auto& t : typeAlphabet(3, {"l", "r"})) {
    CHECK(dual(dual(t)) == t);
    CHECK(polarity(dual(t)) == flip(polarity(t)));
  }
}

TEST_CASE("type sizes count every constructor") {
  CHECK(Type::one().size() == 1);
  CHECK(typeOrThrow("1 * 1").size() == 3);
  CHECK(typeOrThrow("+{#l: 1, #r: bot}").size() == 3);
  CHECK(typeOrThrow("int * 1").size() == 3);
}

TEST_CASE("polarity of the base constructors") {
  CHECK(isPositive(Type::one()));
  CHECK(isNegative(Type::bot()));
  CHECK(isPositive(typeOrThrow("1 * 1")));
  CHECK(isNegative(typeOrThrow("bot par bot")));
  CHECK(isPositive(typeOrThrow("+{#l: 1}")));
  CHECK(isNegative(typeOrThrow("&{#l: bot}")));
}

TEST_CASE("free names and binders") {
  Process p = parseOrThrow("recv x(y); fwd y z");
  NameSet fn = freeNames(p);
  CHECK(fn.count(Name("x")));
  CHECK(fn.count(Name("z")));
  CHECK_FALSE(fn.count(Name("y")));
}

TEST_CASE("substitution avoids capture") {
  Process p = parseOrThrow("recv x(y); fwd y z");
  Process q = substitute(p, Name("y"), Name("z"));
  // the bound y must have been renamed away from the incoming y
  NameSet fn = freeNames(q);
  CHECK(fn.count(Name("y")));
  CHECK_FALSE(fn.count(Name("z")));
  CHECK(q.kind() == ProcKind::Recv);
  CHECK(q.y() != Name("y"));
}

TEST_CASE("alpha-equivalence ignores binder names") {
  Process a = parseOrThrow("cut { close x |x:1| wait x; 0 }");
  Process b = parseOrThrow("cut { close u |u:1| wait u; 0 }");
  Process c = parseOrThrow("cut { wait x; 0 |x:bot| close x }");
  CHECK(alphaEqual(a, b));
  CHECK_FALSE(alphaEqual(a, c));
}

TEST_CASE("process size skips inert leaves") {
  CHECK(processSize(Process::inact()) == 1);
  CHECK(processSize(parseOrThrow("close x")) == 1);
  CHECK(processSize(parseOrThrow("cut { close x |x:1| wait x; 0 }")) == 3);
  CHECK(processSize(parseOrThrow("case x { |#l: 0 |#r: close x }")) == 2);
}
