#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sessionvm/cll.hpp"
#include "sessionvm/net.hpp"
#include "sessionvm/process.hpp"

namespace svm {

struct ExpClosure;

// What a free name of running code stands for: a heap endpoint or a
// replicable closure.
struct Binding {
  enum class Kind : std::uint8_t { Ref, Exp } kind = Kind::Ref;
  std::uint64_t ref = 0;
  std::shared_ptr<const ExpClosure> exp;

  static Binding toRef(std::uint64_t r) { return {Kind::Ref, r, nullptr}; }
  static Binding toExp(std::shared_ptr<const ExpClosure> e) { return {Kind::Exp, 0, std::move(e)}; }
};

using Env = std::map<Name, Binding>;

struct ExpClosure {
  Name param;
  Env env;
  Process body;
  Type paramType;  // type of param inside body
};

// Queue values carry the environment of the code they close over.
struct SamValue {
  QueueValue::Kind kind = QueueValue::Kind::CloseToken;
  std::string label;
  std::int64_t value = 0;
  Name bound;
  Env env;
  Process body;
  Type paramType;  // ExpClos only
};

struct Party {
  Env env;
  Process code;
  bool inert() const { return code.isInact(); }
};

struct SessionRecord {
  std::uint64_t id = 0;
  std::uint64_t writer = 0;  // heap refs
  std::uint64_t reader = 0;
  std::vector<SamValue> queue;  // front() is the head
  Party suspended;
  Type writerType;
  Type readerType;
  bool concurrent = false;  // allocated from a pcut (shared in the concurrent machine)
};

struct Heap {
  std::map<std::uint64_t, SessionRecord> records;  // by record id
  std::map<std::uint64_t, std::uint64_t> owner;    // ref -> record id
  std::uint64_t nextRef = 1;
  std::uint64_t nextRecord = 1;

  SessionRecord& allocate(Type writerType, Type readerType, bool concurrent);
  SessionRecord* find(std::uint64_t ref);
  const SessionRecord* find(std::uint64_t ref) const;
  void release(std::uint64_t recordId);
  bool empty() const { return records.empty(); }
};

struct MachineState {
  Party running;
  std::vector<Party> pending;  // mix continuations, most recent last
  Heap heap;
};

class SamError : public std::runtime_error {
 public:
  enum class Kind { Stuck, MissingRecord, EmptyQueueOnRead, Unbound };
  SamError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

std::string toString(SamError::Kind k);

// One step of a single party against the heap; shared by both machines.
struct StepContext {
  bool concurrent = false;               // honour concurrent records and spawn on pcut/mix
  std::vector<Party>* pending = nullptr;  // sequential mix stack
  std::vector<Party>* spawned = nullptr;  // new threads (concurrent machine)
  Events* events = nullptr;
};

struct CoreStep {
  enum class Status { Stepped, Blocked } status = Status::Stepped;
  std::string rule;
};

// Running code must be an action or a static construct (not 0).
CoreStep stepParty(Party& running, Heap& heap, const StepContext& ctx);

// (empty env, P, empty heap)
MachineState load(const Process& p);
// load followed by every cut-allocation step (enc).
MachineState encode(const Process& p);

bool halted(const MachineState& s);
bool isAllocationRule(const std::string& rule);  // SCut, SCut!, SMix, S0 (and concurrent forms)

// Returns the rule name, or nullopt when the state is halted.
std::optional<std::string> step(MachineState& s, Events* ev = nullptr);

constexpr std::size_t kSamBudget = 1000000;

struct SamRun {
  enum class Outcome { Halted, BudgetExceeded, Stuck } outcome = Outcome::Halted;
  std::vector<std::string> rules;
  std::vector<std::uint64_t> hashes;  // hashes[0] is the start state
  std::vector<MachineState> states;   // only when keepStates
  MachineState final;
  Events events;
  std::string error;
};

struct SamOptions {
  std::size_t budget = kSamBudget;
  bool keepStates = false;
};

SamRun runSam(const Process& p, const SamOptions& opt = {});
std::string toString(SamRun::Outcome o);

// Decoding back to buffered processes (records become buffered cuts,
// exponential bindings become servers).
Net decodeNet(const MachineState& s);
Net decodeNet(const std::vector<Party>& pieces, const Heap& heap);
Process decode(const MachineState& s);

// Readiness. On failure the witness names the offending record and name.
struct ReadyReport {
  bool ready = true;
  std::uint64_t record = 0;
  std::string name;
  std::string clause;
};
ReadyReport checkReady(const MachineState& s);

// Reader endpoints negative; writer held by the suspended party negative;
// inert suspended party exactly when the writer is finished.
std::optional<std::string> checkHeapInvariant(const Heap& h, bool concurrentMachine = false);

// Every free name of every piece of code is bound, every ref is live.
std::optional<std::string> checkClosed(const MachineState& s);

std::uint64_t fnv1a(const std::string& s);
std::string hashHex(std::uint64_t h);
std::uint64_t stateHash(const MachineState& s);
std::string stateKey(const std::vector<Party>& threads, const Heap& heap);
std::string snapshotJson(const MachineState& s);  // one-line JSON object

// {step, rule, hash, state?} per line.
std::string traceJsonl(const SamRun& run, bool fullSnapshots);

}  // namespace svm
