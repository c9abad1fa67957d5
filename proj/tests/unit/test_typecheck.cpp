#include "doctest.h"
#include "sessionvm/frontend.hpp"
#include "sessionvm/typecheck.hpp"

using namespace svm;

namespace {
TypeReport tc(const char* src) { return check(parseOrThrow(src)); }
}  // namespace

TEST_CASE("closed programs are accepted with an empty residual") {
  auto r = tc("cut { send a(y. close y); close a |a:1 * 1| recv a(x); wait x; wait a; 0 }");
  CHECK(r.accept);
  CHECK(r.residual.empty());
  CHECK_FALSE(r.rules.empty());
}

TEST_CASE("type mismatches") {
  auto r = tc("cut { wait x; 0 |x:1| close x }");
  CHECK_FALSE(r.accept);
  REQUIRE(r.error);
  CHECK((r.error->kind == TypeErrorKind::TypeMismatch));
}

TEST_CASE("linear names are used exactly once") {
  auto twice = tc("cut { (close x || close x) |x:1| wait x; 0 }");
  CHECK_FALSE(twice.accept);
  auto never = check(parseOrThrow("0"), {{Name("x"), Type::one()}});
  CHECK_FALSE(never.accept);
  REQUIRE(never.error);
  CHECK((never.error->kind == TypeErrorKind::LinearityViolation));
  CHECK(never.residual.count(Name("x")));
}

TEST_CASE("a prefix continuation must consume its own channel") {
  // found by the brute-force enumerator: the continuation of x leaked to a
  // sibling of the mix
  CHECK_FALSE(tc("cut { (case x { |#l: 0 } || close x) |x:&{#l: 1}| #l x; wait x; 0 }").accept);
  CHECK_FALSE(tc("cut { (#l x; 0 || close x) |x:+{#l: 1}| case x { |#l: wait x; 0 } }").accept);
  CHECK_FALSE(tc("cut { (recv x(y); wait y; 0 || close x) |x:bot par 1| send x(z. close z); wait x; 0 }").accept);
  CHECK(tc("cut { #l x; close x |x:+{#l: 1}| case x { |#l: wait x; 0 } }").accept);
}

TEST_CASE("case needs exactly the labels of the type") {
  auto r = tc("cut { #l x; close x |x:+{#l: 1, #r: 1}| case x { |#l: wait x; 0 } }");
  CHECK_FALSE(r.accept);
  REQUIRE(r.error);
  CHECK((r.error->kind == TypeErrorKind::LabelMismatch));
  CHECK(tc("cut { #l x; close x |x:+{#l: 1, #r: 1}| case x { |#l: wait x; 0 |#r: wait x; 0 } }").accept);
}

TEST_CASE("replicated bodies cannot capture linear names") {
  auto r = tc("cut { cut! { y. wait z; close y |!s:1| call s(w); wait w; 0 } |z:bot| close z }");
  CHECK_FALSE(r.accept);
  REQUIRE(r.error);
  CHECK((r.error->kind == TypeErrorKind::EmptyContextRequired));
}

TEST_CASE("exponentials") {
  CHECK(tc("cut! { y. close y |!s:1| call s(a); call s(b); wait a; wait b; 0 }").accept);
  CHECK(tc("cut { !x(y); close y |x:!1| ?x; call x(z); wait z; 0 }").accept);
  // unused servers are fine
  CHECK(tc("cut! { y. close y |!s:1| 0 }").accept);
}

TEST_CASE("integer literals") {
  CHECK(tc("cut { send x(4); close x |x:int * 1| recv x(v:int); wait x; 0 }").accept);
  CHECK_FALSE(tc("cut { send x(4); close x |x:1 * 1| recv x(v:int); wait x; 0 }").accept);
}

TEST_CASE("buffered cuts are checked by inversion") {
  Process p = parseOrThrow("cut { close x |~x:1 [] y:bot| wait y; 0 }");
  CHECK(typechecks(p));
  Process q = parseOrThrow("cut { 0 |~x:void [#close] y:bot| wait y; 0 }");
  CHECK(typechecks(q));
  BufCutInversion inv = invertBufferedCut(q);
  CHECK(inv.ok);
  CHECK(inv.full);
  // a negative writer on an empty queue is rejected
  CHECK_FALSE(typechecks(parseOrThrow("cut { wait x; 0 |~x:bot [] y:1| close y }")));
}
