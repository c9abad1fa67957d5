#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sessionvm/net.hpp"

namespace svm {

enum class CllRule { Fwd, OneBot, TensorPar, WithPlus, BangQuest, Call };
std::string toString(CllRule r);

// A principal cut (or forwarder, or call) found in the static part of a net.
struct Redex {
  CllRule rule = CllRule::Fwd;
  std::size_t atom = 0;                  // leftmost participating atom
  std::optional<std::size_t> partner;    // the dual atom for principal cuts
  std::uint64_t edge = 0;                // edge id (0 for call)
  std::vector<Name> focus;

  std::string path() const;  // "edge#N" or "server:x"
  bool operator==(const Redex&) const = default;
};

class StaleRedex : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Observable events (used for cross-engine outcome digests).
struct Events {
  std::vector<std::string> items;
  void add(std::string e) { items.push_back(std::move(e)); }
  std::uint64_t digest() const;  // order-insensitive
};

std::vector<Redex> enumerateRedexes(const Net& n);
std::vector<Redex> enumerateRedexes(const Process& p);
Net reduceAt(const Net& n, const Redex& r, Events* ev = nullptr);
Process reduceAt(const Process& p, const Redex& r);

NameSet observables(const Net& n);
NameSet observables(const Process& p);
bool isLive(const Process& p);

struct Strategy {
  enum class Kind { First, Random, All } kind = Kind::First;
  std::uint64_t seed = 0;
  static Strategy first() { return {}; }
  static Strategy random(std::uint64_t s) { return {Kind::Random, s}; }
  static Strategy all() { return {Kind::All, 0}; }
  static std::optional<Strategy> parse(const std::string& text);
};

struct CllStep {
  Redex redex;
  Process result;
};

struct CllRun {
  enum class Outcome { Normal, BudgetExceeded } outcome = Outcome::Normal;
  std::vector<CllStep> steps;
  Process final;
  Events events;
};

constexpr std::size_t kCllBudget = 10000;

CllRun runCll(const Process& p, Strategy s = Strategy::first(), std::size_t budget = kCllBudget);

// Breadth-first exploration of every reduction path (dedup by congruence).
struct CllExploration {
  std::vector<std::string> normalForms;   // canonical strings, sorted, unique
  std::vector<std::uint64_t> digests;     // outcome digests per distinct path end
  std::size_t states = 0;
  bool exhausted = true;                  // false when the state bound was hit
};
CllExploration exploreCll(const Process& p, std::size_t stateBound = 20000);

}  // namespace svm
