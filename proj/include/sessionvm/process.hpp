#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sessionvm/name.hpp"
#include "sessionvm/types.hpp"

namespace svm {

enum class ProcKind {
  Inact,
  Mix,
  Fwd,
  Cut,
  BufCut,
  PCut,
  CutBang,
  Close,
  Wait,
  Send,
  Recv,
  Select,
  Case,
  Server,
  Quest,
  Call,
  SendLit,
  RecvLit
};

enum class Side : std::uint8_t { Left, Right };
inline Side other(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

struct ProcNode;
struct QueueValue;
using Queue = std::vector<QueueValue>;  // front() is the next value to be dequeued

class Process {
 public:
  using Branches = std::map<std::string, Process>;

  Process();  // inert

  static Process inact();
  static Process mix(Process p, Process q);
  static Process fwd(Name x, Name y);
  static Process cut(Process p, Name x, Type a, Process q);
  static Process pcut(Process p, Name x, Type a, Process q);
  static Process bufCut(Process p, Name x, Type a, Queue queue, Name y, Type b, Process q,
                        Side writer, bool concurrent = false);
  static Process cutBang(Name y, Process p, Name x, Type a, Process q);
  static Process close(Name x);
  static Process wait(Name x, Process p);
  static Process send(Name x, Name y, Process p, Process q);
  static Process recv(Name x, Name z, Process p);
  static Process select(std::string label, Name x, Process p);
  static Process caseOf(Name x, Branches bs);
  static Process server(Name x, Name y, Process p);
  static Process quest(Name x, Process p);
  static Process call(Name x, Name z, Process p);
  static Process sendLit(Name x, std::int64_t v, Process p);
  static Process recvLit(Name x, Name v, Process p);

  ProcKind kind() const;
  const ProcNode& node() const;

  // Field access; meaning depends on kind (see ProcNode).
  const Name& x() const;
  const Name& y() const;
  const Type& tx() const;
  const Type& ty() const;
  const Process& p() const;
  const Process& q() const;
  const Branches& branches() const;
  const std::string& label() const;
  std::int64_t lit() const;
  const Queue& queue() const;
  Side writer() const;
  bool concurrent() const;

  bool isInact() const { return kind() == ProcKind::Inact; }
  bool isStatic() const;  // Inact, Mix, cuts
  bool isAction() const { return !isStatic(); }

  bool operator==(const Process& o) const;
  bool operator!=(const Process& o) const { return !(*this == o); }
  const void* identity() const { return node_.get(); }

 private:
  explicit Process(std::shared_ptr<const ProcNode> n) : node_(std::move(n)) {}
  static Process build(ProcNode n);
  std::shared_ptr<const ProcNode> node_;
};

struct QueueValue {
  enum class Kind : std::uint8_t { CloseToken, Label, LinClos, ExpClos, Int };
  Kind kind = Kind::CloseToken;
  std::string label;
  std::int64_t value = 0;
  Name bound;
  Process body;

  static QueueValue closeToken() { return {}; }
  static QueueValue labelValue(std::string l) {
    QueueValue v;
    v.kind = Kind::Label;
    v.label = std::move(l);
    return v;
  }
  static QueueValue intValue(std::int64_t n) {
    QueueValue v;
    v.kind = Kind::Int;
    v.value = n;
    return v;
  }
  static QueueValue linClos(Name z, Process p) {
    QueueValue v;
    v.kind = Kind::LinClos;
    v.bound = std::move(z);
    v.body = std::move(p);
    return v;
  }
  static QueueValue expClos(Name z, Process p) {
    QueueValue v;
    v.kind = Kind::ExpClos;
    v.bound = std::move(z);
    v.body = std::move(p);
    return v;
  }
  bool isFinal() const { return kind == Kind::CloseToken || kind == Kind::ExpClos; }
  bool operator==(const QueueValue& o) const;
};

// Field conventions:
//   Mix(p,q)  Fwd(x,y)  Cut/PCut(p, x:tx, q)
//   BufCut(p, x:tx, queue, y:ty, q, writer, concurrent)
//   CutBang(y.p, x:tx, q)  -- p uses y:tx, q uses x:dual(tx) unrestricted
//   Close(x)  Wait(x,p)  Send(x, y.p, q)  Recv(x, y, p)  Select(label, x, p)
//   Case(x, branches)  Server(x, y, p)  Quest(x, p)  Call(x, y, p)
//   SendLit(x, lit, p)  RecvLit(x, y, p)
struct ProcNode {
  ProcKind kind = ProcKind::Inact;
  Name x, y;
  Type tx, ty;
  Process p, q;
  Process::Branches branches;
  std::string label;
  std::int64_t lit = 0;
  Queue queue;
  Side writer = Side::Left;
  bool concurrent = false;
};

using NameSet = std::set<Name>;

NameSet freeNames(const Process& p);
NameSet freeNames(const QueueValue& v);
bool occursFree(const Process& p, const Name& n);

// Simultaneous capture-avoiding renaming of free names.
using Renaming = std::map<Name, Name>;
Process rename(const Process& p, const Renaming& r, NameSupply& supply);
QueueValue rename(const QueueValue& v, const Renaming& r, NameSupply& supply);

// {x/y}P: replaces free y by x.
Process substitute(const Process& p, const Name& x, const Name& y, NameSupply& supply);
Process substitute(const Process& p, const Name& x, const Name& y);

// Largest fresh id occurring anywhere in the term (0 if none).
std::uint64_t maxFreshId(const Process& p);
NameSupply supplyAbove(const Process& p);

// Number of non-inert constructor nodes, at least 1.
std::size_t processSize(const Process& p);

// Alpha-equivalence via canonical binder renumbering.
std::string alphaKey(const Process& p);
bool alphaEqual(const Process& a, const Process& b);

// Whether the term contains buffered cuts.
bool containsBufCut(const Process& p);

}  // namespace svm
