// Acceptance run: one line per criterion, exit 1 if any fails.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sessionvm/frontend.hpp"
#include "sessionvm/harness.hpp"
#include "sessionvm/sam.hpp"

using namespace svm;

namespace {

// pinned tolerances
constexpr double kTraceMillis = 10.0;
constexpr double kSweepSeconds = 60.0;
constexpr std::size_t kSizeBound = 5;
constexpr std::size_t kRandomCount = 1000;
constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kPcutPrograms = 100;
constexpr std::size_t kPcutSeeds = 16;
constexpr std::size_t kExhaustiveSmallest = 20;
constexpr std::size_t kExhaustiveBound = 10000;

int failures = 0;

void report(int n, bool pass, const std::string& what) {
  std::printf("criterion %2d %s  %s\n", n, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

Process program(const std::string& rel) {
  std::ifstream in(std::string(SVM_SOURCE_DIR) + "/" + rel);
  std::stringstream ss;
  ss << in.rdbuf();
  return *parse({ss.str(), rel}).process;
}

double millis(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
  return s;
}

void closureTrace() {
  Process p = program("tests/programs/trace31.cll");
  auto t0 = std::chrono::steady_clock::now();
  SamRun run = runSam(p, {kSamBudget, true});
  double ms = millis(t0);
  const std::vector<std::string> want{"SCut", "S⊗", "S1", "S⅋−", "S1", "S⊥", "S⊥"};
  bool ok = run.outcome == SamRun::Outcome::Halted && run.rules == want && run.states.size() == 8 &&
            run.final.running.code.isInact() && run.final.pending.empty() && run.final.heap.empty() &&
            ms < kTraceMillis;
  char buf[200];
  std::snprintf(buf, sizeof buf, "closure trace: %zu states, final heap %s, %.3f ms (< %.0f)", run.states.size(),
                run.final.heap.empty() ? "empty" : "non-empty", ms, kTraceMillis);
  report(1, ok, std::string(buf) + ", rules [" + join(run.rules) + "]");
}

void forwardingTrace() {
  Process p = program("tests/programs/trace32.cll");
  auto t0 = std::chrono::steady_clock::now();
  SamRun run = runSam(p, {kSamBudget, true});
  double ms = millis(t0);
  const std::vector<std::string> want{"SCut", "SCut", "S⊗", "S⊗", "S−", "S⅋", "S⊗",
                                      "S−",   "Sfwd", "S⅋", "S⅋", "S1", "S⊥"};
  std::vector<std::string> ints;
  for (const auto& e : run.events.items)
    if (e.rfind("I:", 0) == 0) ints.push_back(e.substr(2));
  bool order = ints == std::vector<std::string>{"1", "3", "2"};
  bool ok = run.outcome == SamRun::Outcome::Halted && run.rules == want && run.states.size() == 14 &&
            run.final.heap.empty() && order && ms < kTraceMillis;
  char buf[200];
  std::snprintf(buf, sizeof buf, "forwarding trace: %zu states, dequeued [%s], %.3f ms (< %.0f)", run.states.size(),
                join(ints).c_str(), ms, kTraceMillis);
  report(2, ok, std::string(buf) + ", rules [" + join(run.rules) + "]");
}

std::string counts(const SweepSummary& s, const std::string& check) {
  auto f = s.failedChecks.find(check);
  auto i = s.items.find(check);
  std::size_t failed = f == s.failedChecks.end() ? 0 : f->second;
  std::size_t items = i == s.items.end() ? 0 : i->second;
  return std::to_string(s.programs - failed) + "/" + std::to_string(s.programs) + " programs, " +
         std::to_string(items) + " facts";
}

bool clean(const SweepSummary& s, const std::string& check) { return !s.failedChecks.count(check); }

void corpusSweep() {
  Corpus corpus = generate(kSizeBound, kSeed, kRandomCount);
  Corpus files = loadPrograms(std::string(SVM_SOURCE_DIR) + "/tests/programs");
  corpus.insert(corpus.end(), files.begin(), files.end());
  DiffOptions opt;
  opt.determinism = true;
  opt.samPar = true;
  SweepSummary s = sweep(corpus, opt, true);

  // budget hits and engine exceptions count as not making progress
  bool progress = clean(s, "progress") && clean(s, "internal") && clean(s, "confluence");
  char buf[160];
  std::snprintf(buf, sizeof buf, ", sweep %.1f s (< %.0f)", s.seconds, kSweepSeconds);
  report(3, progress && s.seconds < kSweepSeconds, "progress: " + counts(s, "progress") + buf);
  report(4, clean(s, "preservation"), "preservation: " + counts(s, "preservation"));
  report(5, clean(s, "readiness"), "readiness: " + counts(s, "readiness"));
  report(6, clean(s, "soundness"), "soundness: " + counts(s, "soundness"));
  std::string corr = "correspondence: " + counts(s, "correspondence");
  for (const auto& r : s.failures) {
    const CheckResult* c = r.find("correspondence");
    if (c && !c->pass) {
      corr += ", first failure " + r.id + ": " + r.program;
      break;
    }
  }
  report(7, clean(s, "correspondence"), corr);
  report(8, clean(s, "simulation"), "simulation: " + counts(s, "simulation"));
  report(9, clean(s, "determinism") && clean(s, "outcomes"),
         "determinism: " + counts(s, "determinism") + ", outcomes: " + counts(s, "outcomes"));
}

void concurrentConfluence() {
  Corpus c = pcutCorpus(kSeed, kPcutPrograms);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t i = 1; i <= kPcutSeeds; ++i) seeds.push_back(i);
  std::size_t passed = 0, leaks = 0, incomplete = 0, maxStates = 0;
  std::string first;
  for (std::size_t i = 0; i < c.size(); ++i) {
    ConfluenceReport r = confluence(c[i].program, seeds, i < kExhaustiveSmallest ? kExhaustiveBound : 0);
    leaks += r.leaks;
    if (i < kExhaustiveSmallest) {
      incomplete += !r.exhaustiveComplete;
      maxStates = std::max(maxStates, r.exhaustiveStates);
    }
    if (r.pass && r.exhaustiveComplete) ++passed;
    else if (first.empty()) first = ", first failure " + c[i].id + ": " + r.detail;
  }
  bool ok = c.size() == kPcutPrograms && passed == c.size() && leaks == 0 && incomplete == 0;
  report(10, ok,
         "confluence: " + std::to_string(passed) + "/" + std::to_string(c.size()) + " programs over " +
             std::to_string(kPcutSeeds) + " seeds, " + std::to_string(kExhaustiveSmallest) +
             " explored exhaustively (max " + std::to_string(maxStates) + " states, " + std::to_string(incomplete) +
             " incomplete), " + std::to_string(leaks) + " leaks" + first);
}

}  // namespace

int main() {
  closureTrace();
  forwardingTrace();
  corpusSweep();
  concurrentConfluence();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures ? 1 : 0;
}
