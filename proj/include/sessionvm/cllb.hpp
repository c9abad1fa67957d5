#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sessionvm/cll.hpp"
#include "sessionvm/net.hpp"

namespace svm {

enum class BRule { Fwdp, One, Bot, Tensor, Par, Plus, With, Bang, Quest, Call };
enum class BClass { Positive, Negative, Forward };

std::string toString(BRule r);
std::string toString(BClass c);
BClass classOf(BRule r);

struct BStep {
  BRule rule = BRule::One;
  BClass cls = BClass::Positive;
  std::uint64_t edge = 0;  // focus cut id (0 for call)
  std::size_t atom = 0;
  int orientation = 0;     // fwdp: which forwarder name reads
  bool operator==(const BStep&) const = default;
};

// The dagger map: cuts become empty, polarized buffered cuts.
Process embed(const Process& p);
Net embedNet(const Process& p);

std::vector<BStep> enumerateB(const Net& n);
Net applyB(const Net& n, const BStep& s, Events* ev = nullptr);

std::vector<std::pair<Net, BStep>> stepBNet(const Net& n);
std::vector<std::pair<Process, BStep>> stepB(const Process& p);

// Maximal positive/forward bundles, each closed by the negative step that
// follows it (the last segment may be open).
struct Segment {
  std::vector<BStep> bundle;
  std::optional<BStep> negative;
};
std::vector<Segment> classifySequence(const std::vector<BStep>& steps);

struct BRun {
  enum class Outcome { Normal, BudgetExceeded } outcome = Outcome::Normal;
  std::vector<BStep> steps;
  std::vector<Net> states;  // states[0] is the start, states[i+1] after steps[i]
  Events events;
};

BRun runB(const Net& start, Strategy s = Strategy::first(), std::size_t budget = kCllBudget);

// Largest queue length seen on a run, versus the static bound from types.
std::size_t maxQueueLength(const BRun& run);

}  // namespace svm
