#include "doctest.h"
#include "sessionvm/frontend.hpp"
#include "sessionvm/net.hpp"

using namespace svm;

TEST_CASE("mix commutes and associates") {
  CHECK(congruent(parseOrThrow("(close a || (close b || close c))"), parseOrThrow("((close c || close a) || close b)")));
}

TEST_CASE("cuts commute and associate") {
  Process a = parseOrThrow("cut { close x |x:1| cut { wait x; close y |y:1| wait y; 0 } }");
  Process b = parseOrThrow("cut { cut { close x |x:1| wait x; close y } |y:1| wait y; 0 }");
  Process c = parseOrThrow("cut { wait y; 0 |y:bot| cut { close x |x:1| wait x; close y } }");
  CHECK(congruent(a, b));
  CHECK(congruent(a, c));
}

TEST_CASE("congruence keeps different programs apart") {
  CHECK_FALSE(congruent(parseOrThrow("cut { close x |x:1| wait x; 0 }"), parseOrThrow("cut { close x |x:1| wait x; close z }")));
  CHECK_FALSE(congruent(parseOrThrow("#l x; 0"), parseOrThrow("#r x; 0")));
}

TEST_CASE("flatten and unflatten are inverse up to congruence") {
  for (const char* src : {"cut { send a(y. close y); close a |a:1 * 1| recv a(x); wait x; wait a; 0 }",
                          "cut! { y. close y |!s:1| call s(a); wait a; 0 }", "(close a || 0)"}) {
    Process p = parseOrThrow(src);
    Net n = flatten(p);
    CHECK(congruent(unflatten(n), p));
    CHECK(canonical(n) == canonical(p));
  }
}

TEST_CASE("embedding polarizes every cut") {
  Net n = flatten(parseOrThrow("cut { wait x; 0 |x:bot| close x }"), FlattenMode::Embed);
  REQUIRE(n.edges.size() == 1);
  const Edge& e = n.edges.front();
  CHECK(e.kind == EdgeKind::Buffered);
  CHECK(e.queue.empty());
  CHECK(isPositive(e.end[e.writer].type));
}

TEST_CASE("servers and free names") {
  Net n = flatten(parseOrThrow("cut! { y. close y |!s:1| call s(a); wait a; wait z; 0 }"));
  CHECK(n.servers.size() == 1);
  NameSet fn = netFreeNames(n);
  CHECK(fn.count(Name("z")));
  CHECK_FALSE(fn.count(Name("s")));
}
