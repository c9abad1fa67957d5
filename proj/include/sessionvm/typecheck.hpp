#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sessionvm/process.hpp"

namespace svm {

using Context = std::map<Name, Type>;

enum class TypeErrorKind {
  LinearityViolation,
  UnknownName,
  PolarityMismatch,
  EmptyContextRequired,
  TypeMismatch,
  LabelMismatch,
  QueueMalformed,
};

std::string toString(TypeErrorKind k);

struct TypeError {
  TypeErrorKind kind = TypeErrorKind::TypeMismatch;
  std::string rule;
  std::string message;
  std::string path;
};

struct RuleUse {
  std::string path;
  std::string rule;
};

struct TypeReport {
  bool accept = false;
  std::optional<TypeError> error;
  std::vector<RuleUse> rules;
  Context residual;  // linear names left unconsumed (empty on Accept)
  std::string json() const;
};

// P |- delta; gamma. Buffered cuts are checked with the inversion rules.
TypeReport check(const Process& p, const Context& delta = {}, const Context& gamma = {});
bool typechecks(const Process& p, const Context& delta = {}, const Context& gamma = {});

// One layer of a queue-value typing context E.
struct QueueValueType {
  enum class Kind { Hole, Full, Par, With };
  Kind kind = Kind::Hole;
  Type full;                // Full: the complete type (bot or ?A)
  Type left;                // Par: the left component of T par E
  Type::Branches branches;  // With: branch types of the reader type
  std::string selected;     // With: selected label

  std::string str() const;
};

struct QueueValueResult {
  std::optional<QueueValueType> type;
  std::optional<TypeError> error;
  Context residual;
};

// Types a queue value. For labels and closures the expected reader type at
// this position may be supplied; LinClos payload types are synthesized when
// it is absent.
QueueValueResult checkQueueValue(const QueueValue& v, const Context& gamma, const Context& delta,
                                 const std::optional<Type>& expected = std::nullopt);

struct BufCutInversion {
  bool ok = false;
  std::optional<TypeError> error;
  Type writerType;
  Type readerType;
  std::vector<QueueValueType> valueTypes;
  bool full = false;
  Type residualType;  // dual of the writer type in the non-full case
};

BufCutInversion invertBufferedCut(const Process& c, const Context& delta = {},
                                  const Context& gamma = {});

// Reader-type peeling without payload checks: the component types seen by
// each queue value, head first. Returns nullopt on shape mismatch.
std::optional<std::vector<QueueValueType>> peelReaderType(const Type& reader, const Queue& q,
                                                          Type* rest = nullptr);

// Synthesizes the session type of free name z in p, if determined by usage.
std::optional<Type> synthesizeType(const Process& p, const Name& z, const Context& delta,
                                   const Context& gamma);

}  // namespace svm
