#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sessionvm/cllb.hpp"
#include "sessionvm/process.hpp"
#include "sessionvm/sam.hpp"
#include "sessionvm/typecheck.hpp"

namespace svm {

// ---- generation -----------------------------------------------------------

// The fixed constructor alphabet shared by the enumerator and its oracle.
struct Alphabet {
  std::vector<std::string> labels{"l", "r"};
  std::vector<std::int64_t> literals{1};
  std::size_t cutTypeSize = 3;  // cut annotations range over all types up to this size
};

// Every well-formed session type up to maxSize over the alphabet labels.
// int appears only as the left of a tensor, ~int only as the left of a par.
std::vector<Type> typeAlphabet(std::size_t maxSize, const std::vector<std::string>& labels);

// Closed well-typed processes of exactly `size` (processSize), up to alpha,
// sorted by alphaKey. Mix never has an inert operand.
std::vector<Process> enumerateExact(std::size_t size, const Alphabet& a = {});

// Independent brute force: every well-scoped term of that size, filtered by
// the typechecker. Slow; only used to pin the enumerator.
std::vector<Process> bruteForceExact(std::size_t size, const Alphabet& a = {});

struct RandomConfig {
  std::size_t fuel = 10;          // rough bound on constructors beyond what the types force
  std::size_t maxTypeSize = 4;
  std::vector<std::string> labels{"l", "r", "m"};
  std::int64_t maxLiteral = 9;
  double pcutRate = 0.0;          // probability that a generated cut is parallel
};

// A closed well-typed process, deterministic in the seed.
Process randomProgram(std::uint64_t seed, const RandomConfig& cfg = {});

struct CorpusEntry {
  std::string id;
  Process program;
  std::string origin;  // "enum", "random", "pcut" or "file"
};
using Corpus = std::vector<CorpusEntry>;

// Exhaustive enumeration up to sizeBound followed by `randomCount` seeded
// random programs.
Corpus generate(std::size_t sizeBound, std::uint64_t seed, std::size_t randomCount = 0,
                const Alphabet& a = {});

// Programs with at least one pcut, sorted by size (smallest first).
Corpus pcutCorpus(std::uint64_t seed, std::size_t count);

// Every *.cll file in dir, parsed and typechecked (throws on a bad file).
Corpus loadPrograms(const std::string& dir);

// ---- differential testing -------------------------------------------------

struct DiffOptions {
  bool samPar = false;
  std::vector<std::uint64_t> parSeeds{1, 2, 3, 4};
  bool determinism = false;   // five sequential SAM runs must agree on hashes
  bool correspondence = true;
  bool simulation = true;
  std::size_t searchBound = 20000;  // states per reachability search
};

struct Divergence {
  std::string check;
  std::size_t step = 0;
  std::string before;
  std::string after;
  std::string detail;
};

struct CheckResult {
  std::string name;
  bool pass = true;
  std::size_t items = 0;  // number of individual facts checked
  std::string detail;
};

struct DiffReport {
  std::string id;
  std::string program;
  std::vector<std::string> engines;
  bool pass = true;
  bool internal = false;  // an engine threw or hit its budget
  std::vector<CheckResult> checks;
  std::optional<Divergence> first;
  std::size_t samSteps = 0;
  std::map<std::string, std::string> digests;

  const CheckResult* find(const std::string& name) const;
  std::string json() const;
};

// Check names: typed, progress, preservation, readiness, soundness,
// correspondence, simulation, outcomes, determinism, confluence.
DiffReport diff(const Process& p, const DiffOptions& opt = {}, const std::string& id = "");

// Constructor-deletion shrinking: repeatedly replaces a subterm by 0 or by
// one of its children while the result still typechecks and `fails`.
Process shrink(const Process& p, const std::function<bool(const Process&)>& fails);

// One-step deletions of p, well-typedness not checked.
std::vector<Process> deletions(const Process& p);

struct SweepSummary {
  std::size_t programs = 0;
  std::size_t passed = 0;
  std::map<std::string, std::size_t> failedChecks;  // check name -> programs failing it
  std::map<std::string, std::size_t> items;         // check name -> facts checked
  std::vector<DiffReport> failures;
  double seconds = 0;
};

// parallel uses OpenMP when available; the serial path gives identical reports.
SweepSummary sweep(const Corpus& corpus, const DiffOptions& opt, bool parallel);

// Concurrent confluence for one program: digests over seeds and, when
// exhaustiveBound > 0, over every interleaving.
struct ConfluenceReport {
  bool pass = true;
  std::uint64_t expected = 0;  // sequential SAM digest
  std::size_t seedsRun = 0;
  std::size_t leaks = 0;
  bool exhaustiveComplete = true;
  std::size_t exhaustiveStates = 0;
  std::string detail;
};
ConfluenceReport confluence(const Process& p, const std::vector<std::uint64_t>& seeds,
                            std::size_t exhaustiveBound);

}  // namespace svm
