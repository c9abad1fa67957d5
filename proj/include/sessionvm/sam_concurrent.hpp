#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sessionvm/sam.hpp"

namespace svm {

// Threads share one heap. Records allocated by pcut are shared and fire the
// concurrent rules; all other records stay confined to one thread.
struct Pool {
  std::vector<Party> threads;
  Heap heap;
};

struct Scheduler {
  enum class Kind { RoundRobin, Random, Exhaustive } kind = Kind::RoundRobin;
  std::uint64_t seed = 0;
  std::size_t bound = 10000;

  static Scheduler roundRobin() { return {}; }
  static Scheduler randomSeeded(std::uint64_t s) { return {Kind::Random, s, 0}; }
  static Scheduler exhaustive(std::size_t b) { return {Kind::Exhaustive, 0, b}; }
};

// Pure function of (seed, step): the first thread tried at that step.
std::size_t schedulePick(std::uint64_t seed, std::size_t step, std::size_t threads);

Pool loadPool(const Process& p);

// Steps thread i. Returns nullopt when it is blocked. Threads left inert are
// retired within the same step.
std::optional<std::string> stepThread(Pool& pool, std::size_t i, Events* ev = nullptr);

struct ParStep {
  std::size_t thread = 0;
  std::string rule;
};

struct ParRun {
  enum class Outcome { Halted, AllBlocked, BudgetExceeded, Stuck } outcome = Outcome::Halted;
  std::vector<ParStep> steps;
  std::vector<std::uint64_t> hashes;  // hashes[0] is the start
  std::vector<Pool> states;           // only when keepStates
  Events events;
  std::uint64_t digest = 0;
  bool heapLeak = false;
  std::string error;
  Pool final;
};

std::string toString(ParRun::Outcome o);

struct ParOptions {
  std::size_t budget = kSamBudget;
  bool keepStates = false;
  bool checkFootprint = false;  // failures are reported as Stuck
};

ParRun runConcurrent(const Process& p, const Scheduler& s, const ParOptions& opt = {});

// One run per seed.
std::vector<ParRun> runConcurrent(const Process& p, const std::vector<std::uint64_t>& seeds,
                                  const ParOptions& opt = {});

// Every interleaving, deduplicated on (state, events so far), up to `bound`
// distinct states.
struct Exploration {
  std::set<std::uint64_t> digests;  // outcome digests of halted runs
  std::size_t states = 0;
  std::size_t halted = 0;
  std::size_t allBlocked = 0;
  std::size_t stuck = 0;
  std::size_t leaks = 0;
  bool complete = true;
  std::string firstError;
};
Exploration exploreConcurrent(const Process& p, std::size_t bound);

// Each thread-confined record is referenced by at most one thread.
std::optional<std::string> checkFootprint(const Pool& pool);

Net decodePool(const Pool& pool);
std::uint64_t poolHash(const Pool& pool);

std::string traceJsonl(const ParRun& run);

}  // namespace svm
