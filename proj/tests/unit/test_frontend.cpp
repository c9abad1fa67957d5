#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sessionvm/frontend.hpp"
#include "sessionvm/typecheck.hpp"

using namespace svm;

namespace {
std::string file(const std::string& rel) {
  std::ifstream in(std::string(SVM_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("pretty printing round-trips") {
  for (const char* src : {"cut { send a(y. close y); close a |a:1 * 1| recv a(x); wait x; wait a; 0 }",
                          "cut { #l x; close x |x:+{#l: 1, #r: bot}| case x { |#l: wait x; 0 |#r: close x } }",
                          "cut! { y. close y |!s:1| call s(w); wait w; 0 }",
                          "(close a || wait b; 0)", "send x(3); recv x(v:int); fwd x y",
                          "pcut { close x |x:1| wait x; 0 }"}) {
    Process p = parseOrThrow(src, false);
    Process q = parseOrThrow(prettyPrint(p), false);
    CHECK(alphaEqual(p, q));
  }
}

TEST_CASE("programs with definitions and substitutions") {
  auto r = parse({file("tests/programs/trace32.cll"), "trace32.cll"});
  REQUIRE(r.ok());
  CHECK(typechecks(*r.process));
  CHECK(r.process->kind() == ProcKind::Cut);
}

TEST_CASE("syntax errors carry a span") {
  auto r = parseProcess("cut { close x |x:1| wait x; ");
  CHECK_FALSE(r.ok());
  REQUIRE_FALSE(r.diagnostics.empty());
  CHECK(r.diagnostics.front().begin <= r.diagnostics.front().end);
}

TEST_CASE("runtime syntax is gated") {
  const char* buffered = "cut { close x |~x:1 [] y:bot| wait y; 0 }";
  CHECK_FALSE(parseProcess(buffered).ok());
  ParseOptions o;
  o.allowRuntimeSyntax = true;
  CHECK(parseProcess(buffered, o).ok());
}

TEST_CASE("type parsing") {
  CHECK(typeOrThrow("~int par 1") == Type::par(Type::dualLitInt(), Type::one()));
  CHECK(dual(typeOrThrow("!(1 * bot)")) == typeOrThrow("?(bot par 1)"));
  CHECK_FALSE(parseType("1 * ").type.has_value());
}
