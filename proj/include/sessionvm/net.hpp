#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sessionvm/process.hpp"

namespace svm {

// A process viewed modulo the static congruences: a multiset of action
// processes (atoms) wired together by cut edges, plus replicated servers.
// Commutation/association of mix and cut and the cut! conversions are
// absorbed by this representation.

enum class EdgeKind : std::uint8_t { Plain, Buffered };

struct EdgeEnd {
  Name name;
  Type type;
};

struct Edge {
  std::uint64_t id = 0;
  EdgeKind kind = EdgeKind::Plain;
  bool concurrent = false;
  EdgeEnd end[2];
  int writer = 0;  // Buffered only: index of the marked end
  Queue queue;
};

struct Server {
  std::uint64_t id = 0;
  Name name;
  Name param;
  Type paramType;
  Process body;
};

struct Atom {
  Process proc;
  NameSet fn;
};

enum class FlattenMode {
  Plain,  // cuts become plain edges
  Embed,  // cuts become empty, polarized buffered edges (the dagger map)
};

struct Holder {
  enum class Kind { None, Atom, Edge } kind = Kind::None;
  std::size_t index = 0;
};

struct Net {
  std::vector<Atom> atoms;
  std::vector<Edge> edges;  // ascending id
  std::vector<Server> servers;
  NameSet used;
  NameSupply supply;
  std::uint64_t nextId = 1;
  FlattenMode mode = FlattenMode::Plain;

  // Flattens p and splices its atoms in at position pos (default: append).
  void add(const Process& p, std::optional<std::size_t> pos = std::nullopt);
  Name claim(const Name& wanted);

  std::optional<std::pair<std::size_t, int>> endOf(const Name& n) const;
  std::optional<std::size_t> serverOf(const Name& n) const;
  Holder holderOf(const Name& n) const;
  std::size_t edgeIndex(std::uint64_t id) const;

  std::uint64_t addEdge(Edge e);
  std::uint64_t addServer(Server s);
  void removeEdge(std::size_t idx);
  void replaceAtom(std::size_t idx, const std::vector<Process>& conts);
  void renameInHolder(const Holder& h, const Name& from, const Name& to);
  void refreshAtom(std::size_t idx);
};

Net flatten(const Process& p, FlattenMode mode = FlattenMode::Plain);
Process unflatten(const Net& n);

// {x/y} within a queue value list.
Queue substituteQueue(const Queue& q, const Name& x, const Name& y, NameSupply& supply);
NameSet freeNames(const Queue& q);

// Canonical strings: equal iff congruent (for the implemented rule subset).
std::string canonical(const Net& n);
std::string canonical(const Process& p, FlattenMode mode = FlattenMode::Plain);
bool congruent(const Process& a, const Process& b);
bool congruentB(const Process& a, const Process& b);

// Polarity-setting operator on an empty buffered edge: mark the positive end.
void polarize(Edge& e);

// Names free in the whole net (not bound by an edge or server).
NameSet netFreeNames(const Net& n);

// The subject of an action process (x for every prefix; both for fwd).
std::vector<Name> subjects(const Process& p);

}  // namespace svm
