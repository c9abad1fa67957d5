#include "sessionvm/process.hpp"

#include <algorithm>

namespace svm {

namespace {

const ProcNode& inactNode() {
  static const ProcNode n;
  return n;
}

}  // namespace

Process::Process() = default;

Process Process::build(ProcNode n) { return Process(std::make_shared<const ProcNode>(std::move(n))); }

Process Process::inact() { return {}; }

Process Process::mix(Process p, Process q) {
  ProcNode n;
  n.kind = ProcKind::Mix;
  n.p = std::move(p);
  n.q = std::move(q);
  return build(std::move(n));
}

Process Process::fwd(Name x, Name y) {
  ProcNode n;
  n.kind = ProcKind::Fwd;
  n.x = std::move(x);
  n.y = std::move(y);
  return build(std::move(n));
}

Process Process::cut(Process p, Name x, Type a, Process q) {
  ProcNode n;
  n.kind = ProcKind::Cut;
  n.p = std::move(p);
  n.x = std::move(x);
  n.tx = std::move(a);
  n.q = std::move(q);
  return build(std::move(n));
}

Process Process::pcut(Process p, Name x, Type a, Process q) {
  ProcNode n;
  n.kind = ProcKind::PCut;
  n.p = std::move(p);
  n.x = std::move(x);
  n.tx = std::move(a);
  n.q = std::move(q);
  n.concurrent = true;
  return build(std::move(n));
}

Process Process::bufCut(Process p, Name x, Type a, Queue queue, Name y, Type b, Process q,
                        Side writer, bool concurrent) {
  ProcNode n;
  n.kind = ProcKind::BufCut;
  n.p = std::move(p);
  n.x = std::move(x);
  n.tx = std::move(a);
  n.queue = std::move(queue);
  n.y = std::move(y);
  n.ty = std::move(b);
  n.q = std::move(q);
  n.writer = writer;
  n.concurrent = concurrent;
  return build(std::move(n));
}

Process Process::cutBang(Name y, Process p, Name x, Type a, Process q) {
  ProcNode n;
  n.kind = ProcKind::CutBang;
  n.y = std::move(y);
  n.p = std::move(p);
  n.x = std::move(x);
  n.tx = std::move(a);
  n.q = std::move(q);
  return build(std::move(n));
}

Process Process::close(Name x) {
  ProcNode n;
  n.kind = ProcKind::Close;
  n.x = std::move(x);
  return build(std::move(n));
}

Process Process::wait(Name x, Process p) {
  ProcNode n;
  n.kind = ProcKind::Wait;
  n.x = std::move(x);
  n.p = std::move(p);
  return build(std::move(n));
}

Process Process::send(Name x, Name y, Process p, Process q) {
  ProcNode n;
  n.kind = ProcKind::Send;
  n.x = std::move(x);
  n.y = std::move(y);
  n.p = std::move(p);
  n.q = std::move(q);
  return build(std::move(n));
}

Process Process::recv(Name x, Name z, Process p) {
  ProcNode n;
  n.kind = ProcKind::Recv;
  n.x = std::move(x);
  n.y = std::move(z);
  n.p = std::move(p);
  return build(std::move(n));
}

Process Process::select(std::string label, Name x, Process p) {
  ProcNode n;
  n.kind = ProcKind::Select;
  n.label = std::move(label);
  n.x = std::move(x);
  n.p = std::move(p);
  return build(std::move(n));
}

Process Process::caseOf(Name x, Branches bs) {
  ProcNode n;
  n.kind = ProcKind::Case;
  n.x = std::move(x);
  n.branches = std::move(bs);
  return build(std::move(n));
}

Process Process::server(Name x, Name y, Process p) {
  ProcNode n;
  n.kind = ProcKind::Server;
  n.x = std::move(x);
  n.y = std::move(y);
  n.p = std::move(p);
  return build(std::move(n));
}

Process Process::quest(Name x, Process p) {
  ProcNode n;
  n.kind = ProcKind::Quest;
  n.x = std::move(x);
  n.p = std::move(p);
  return build(std::move(n));
}

Process Process::call(Name x, Name z, Process p) {
  ProcNode n;
  n.kind = ProcKind::Call;
  n.x = std::move(x);
  n.y = std::move(z);
  n.p = std::move(p);
  return build(std::move(n));
}

Process Process::sendLit(Name x, std::int64_t v, Process p) {
  ProcNode n;
  n.kind = ProcKind::SendLit;
  n.x = std::move(x);
  n.lit = v;
  n.p = std::move(p);
  return build(std::move(n));
}

Process Process::recvLit(Name x, Name v, Process p) {
  ProcNode n;
  n.kind = ProcKind::RecvLit;
  n.x = std::move(x);
  n.y = std::move(v);
  n.p = std::move(p);
  return build(std::move(n));
}

const ProcNode& Process::node() const { return node_ ? *node_ : inactNode(); }
ProcKind Process::kind() const { return node().kind; }
const Name& Process::x() const { return node().x; }
const Name& Process::y() const { return node().y; }
const Type& Process::tx() const { return node().tx; }
const Type& Process::ty() const { return node().ty; }
const Process& Process::p() const { return node().p; }
const Process& Process::q() const { return node().q; }
const Process::Branches& Process::branches() const { return node().branches; }
const std::string& Process::label() const { return node().label; }
std::int64_t Process::lit() const { return node().lit; }
const Queue& Process::queue() const { return node().queue; }
Side Process::writer() const { return node().writer; }
bool Process::concurrent() const { return node().concurrent; }

bool Process::isStatic() const {
  switch (kind()) {
    case ProcKind::Inact:
    case ProcKind::Mix:
    case ProcKind::Cut:
    case ProcKind::BufCut:
    case ProcKind::PCut:
    case ProcKind::CutBang: return true;
    default: return false;
  }
}

bool QueueValue::operator==(const QueueValue& o) const {
  return kind == o.kind && label == o.label && value == o.value && bound == o.bound && body == o.body;
}

bool Process::operator==(const Process& o) const {
  if (node_ == o.node_) return true;
  const ProcNode& a = node();
  const ProcNode& b = o.node();
  return a.kind == b.kind && a.x == b.x && a.y == b.y && a.tx == b.tx && a.ty == b.ty &&
         a.label == b.label && a.lit == b.lit && a.writer == b.writer &&
         a.concurrent == b.concurrent && a.p == b.p && a.q == b.q && a.branches == b.branches &&
         a.queue == b.queue;
}

// ----------------------------------------------------------------------------
// Free names

namespace {

void collectFree(const Process& p, NameSet& bound, NameSet& out);

void withBinder(const Name& b, NameSet& bound, const auto& f) {
  bool added = bound.insert(b).second;
  f();
  if (added) bound.erase(b);
}

void useName(const Name& n, const NameSet& bound, NameSet& out) {
  if (!bound.count(n)) out.insert(n);
}

void collectFreeValue(const QueueValue& v, NameSet& bound, NameSet& out) {
  if (v.kind == QueueValue::Kind::LinClos || v.kind == QueueValue::Kind::ExpClos)
    withBinder(v.bound, bound, [&] { collectFree(v.body, bound, out); });
}

void collectFree(const Process& p, NameSet& bound, NameSet& out) {
  const ProcNode& n = p.node();
  switch (n.kind) {
    case ProcKind::Inact: break;
    case ProcKind::Mix:
      collectFree(n.p, bound, out);
      collectFree(n.q, bound, out);
      break;
    case ProcKind::Fwd:
      useName(n.x, bound, out);
      useName(n.y, bound, out);
      break;
    case ProcKind::Cut:
    case ProcKind::PCut:
      withBinder(n.x, bound, [&] {
        collectFree(n.p, bound, out);
        collectFree(n.q, bound, out);
      });
      break;
    case ProcKind::BufCut:
      withBinder(n.x, bound, [&] { collectFree(n.p, bound, out); });
      withBinder(n.y, bound, [&] { collectFree(n.q, bound, out); });
      for (const auto& v : n.queue) collectFreeValue(v, bound, out);
      break;
    case ProcKind::CutBang:
      withBinder(n.y, bound, [&] { collectFree(n.p, bound, out); });
      withBinder(n.x, bound, [&] { collectFree(n.q, bound, out); });
      break;
    case ProcKind::Close: useName(n.x, bound, out); break;
    case ProcKind::Wait:
    case ProcKind::Select:
    case ProcKind::Quest:
    case ProcKind::SendLit:
      useName(n.x, bound, out);
      collectFree(n.p, bound, out);
      break;
    case ProcKind::Send:
      useName(n.x, bound, out);
      withBinder(n.y, bound, [&] { collectFree(n.p, bound, out); });
      collectFree(n.q, bound, out);
      break;
    case ProcKind::Recv:
    case ProcKind::Server:
    case ProcKind::Call:
    case ProcKind::RecvLit:
      useName(n.x, bound, out);
      withBinder(n.y, bound, [&] { collectFree(n.p, bound, out); });
      break;
    case ProcKind::Case:
      useName(n.x, bound, out);
      for (const auto& [l, b] : n.branches) collectFree(b, bound, out);
      break;
  }
}

}  // namespace

NameSet freeNames(const Process& p) {
  NameSet bound, out;
  collectFree(p, bound, out);
  return out;
}

NameSet freeNames(const QueueValue& v) {
  NameSet bound, out;
  collectFreeValue(v, bound, out);
  return out;
}

bool occursFree(const Process& p, const Name& n) { return freeNames(p).count(n) > 0; }

// ----------------------------------------------------------------------------
// Renaming

namespace {

struct Renamer {
  NameSupply& supply;

  Name apply(const Name& n, const Renaming& r) const {
    auto it = r.find(n);
    return it == r.end() ? n : it->second;
  }

  static bool inRange(const Name& b, const Renaming& r) {
    for (const auto& [k, v] : r)
      if (v == b && k != b) return true;
    return false;
  }

  // Renaming to use under binder b, and the binder's new name.
  std::pair<Renaming, Name> under(const Name& b, const Renaming& r) {
    Renaming inner = r;
    inner.erase(b);
    if (inRange(b, inner)) {
      Name nb = supply.fresh();
      inner[b] = nb;
      return {inner, nb};
    }
    return {inner, b};
  }

  QueueValue value(const QueueValue& v, const Renaming& r) {
    if (v.kind != QueueValue::Kind::LinClos && v.kind != QueueValue::Kind::ExpClos) return v;
    auto [inner, b] = under(v.bound, r);
    QueueValue out = v;
    out.bound = b;
    out.body = proc(v.body, inner);
    return out;
  }

  Process proc(const Process& p, const Renaming& r) {
    if (r.empty()) return p;
    const ProcNode& n = p.node();
    switch (n.kind) {
      case ProcKind::Inact: return p;
      case ProcKind::Mix: return Process::mix(proc(n.p, r), proc(n.q, r));
      case ProcKind::Fwd: return Process::fwd(apply(n.x, r), apply(n.y, r));
      case ProcKind::Cut:
      case ProcKind::PCut: {
        auto [inner, b] = under(n.x, r);
        auto pp = proc(n.p, inner);
        auto qq = proc(n.q, inner);
        return n.kind == ProcKind::Cut ? Process::cut(pp, b, n.tx, qq) : Process::pcut(pp, b, n.tx, qq);
      }
      case ProcKind::BufCut: {
        auto [il, bl] = under(n.x, r);
        auto [ir, br] = under(n.y, r);
        Queue q;
        for (const auto& v : n.queue) q.push_back(value(v, r));
        return Process::bufCut(proc(n.p, il), bl, n.tx, std::move(q), br, n.ty, proc(n.q, ir),
                               n.writer, n.concurrent);
      }
      case ProcKind::CutBang: {
        auto [ip, bp] = under(n.y, r);
        auto [iq, bq] = under(n.x, r);
        return Process::cutBang(bp, proc(n.p, ip), bq, n.tx, proc(n.q, iq));
      }
      case ProcKind::Close: return Process::close(apply(n.x, r));
      case ProcKind::Wait: return Process::wait(apply(n.x, r), proc(n.p, r));
      case ProcKind::Select: return Process::select(n.label, apply(n.x, r), proc(n.p, r));
      case ProcKind::Quest: return Process::quest(apply(n.x, r), proc(n.p, r));
      case ProcKind::SendLit: return Process::sendLit(apply(n.x, r), n.lit, proc(n.p, r));
      case ProcKind::Send: {
        auto [inner, b] = under(n.y, r);
        return Process::send(apply(n.x, r), b, proc(n.p, inner), proc(n.q, r));
      }
      case ProcKind::Recv:
      case ProcKind::Server:
      case ProcKind::Call:
      case ProcKind::RecvLit: {
        auto [inner, b] = under(n.y, r);
        Name x = apply(n.x, r);
        Process body = proc(n.p, inner);
        switch (n.kind) {
          case ProcKind::Recv: return Process::recv(x, b, body);
          case ProcKind::Server: return Process::server(x, b, body);
          case ProcKind::Call: return Process::call(x, b, body);
          default: return Process::recvLit(x, b, body);
        }
      }
      case ProcKind::Case: {
        Process::Branches bs;
        for (const auto& [l, b] : n.branches) bs.emplace(l, proc(b, r));
        return Process::caseOf(apply(n.x, r), std::move(bs));
      }
    }
    return p;
  }
};

void maxFresh(const Process& p, std::uint64_t& m);

void maxFreshName(const Name& n, std::uint64_t& m) {
  if (n.kind == Name::Kind::Fresh) m = std::max(m, n.id);
}

void maxFresh(const Process& p, std::uint64_t& m) {
  const ProcNode& n = p.node();
  if (n.kind == ProcKind::Inact) return;
  maxFreshName(n.x, m);
  maxFreshName(n.y, m);
  maxFresh(n.p, m);
  maxFresh(n.q, m);
  for (const auto& [l, b] : n.branches) maxFresh(b, m);
  for (const auto& v : n.queue) {
    maxFreshName(v.bound, m);
    maxFresh(v.body, m);
  }
}

}  // namespace

Process rename(const Process& p, const Renaming& r, NameSupply& supply) {
  Renaming eff;
  for (const auto& [k, v] : r)
    if (k != v) eff.emplace(k, v);
  for (const auto& [k, v] : eff) supply.bumpAbove(v);
  Renamer rn{supply};
  return rn.proc(p, eff);
}

QueueValue rename(const QueueValue& v, const Renaming& r, NameSupply& supply) {
  for (const auto& [k, n] : r) supply.bumpAbove(n);
  Renamer rn{supply};
  return rn.value(v, r);
}

Process substitute(const Process& p, const Name& x, const Name& y, NameSupply& supply) {
  if (x == y) return p;
  return rename(p, Renaming{{y, x}}, supply);
}

Process substitute(const Process& p, const Name& x, const Name& y) {
  NameSupply s = supplyAbove(p);
  s.bumpAbove(x);
  return substitute(p, x, y, s);
}

std::uint64_t maxFreshId(const Process& p) {
  std::uint64_t m = 0;
  maxFresh(p, m);
  return m;
}

NameSupply supplyAbove(const Process& p) { return NameSupply(maxFreshId(p) + 1); }

namespace {

std::size_t countNodes(const Process& p) {
  const ProcNode& n = p.node();
  if (n.kind == ProcKind::Inact) return 0;
  std::size_t s = 1 + countNodes(n.p) + countNodes(n.q);
  for (const auto& [l, b] : n.branches) s += countNodes(b);
  for (const auto& v : n.queue) s += countNodes(v.body);
  return s;
}

bool hasBufCut(const Process& p) {
  const ProcNode& n = p.node();
  if (n.kind == ProcKind::BufCut) return true;
  if (n.kind == ProcKind::Inact) return false;
  if (hasBufCut(n.p) || hasBufCut(n.q)) return true;
  for (const auto& [l, b] : n.branches)
    if (hasBufCut(b)) return true;
  return false;
}

// Canonical rendering with binders renumbered in traversal order.
struct AlphaPrinter {
  std::map<Name, std::vector<std::string>> scope;
  std::size_t counter = 0;
  std::string out;

  void name(const Name& n) {
    auto it = scope.find(n);
    if (it != scope.end() && !it->second.empty()) {
      out += it->second.back();
    } else {
      out += n.str();
    }
    out += ' ';
  }

  void bind(const Name& n, const auto& f) {
    std::string b = "$" + std::to_string(counter++);
    scope[n].push_back(b);
    out += b + ". ";
    f();
    scope[n].pop_back();
  }

  void value(const QueueValue& v) {
    switch (v.kind) {
      case QueueValue::Kind::CloseToken: out += "tick "; break;
      case QueueValue::Kind::Label: out += "#" + v.label + " "; break;
      case QueueValue::Kind::Int: out += std::to_string(v.value) + " "; break;
      case QueueValue::Kind::LinClos:
      case QueueValue::Kind::ExpClos:
        out += v.kind == QueueValue::Kind::LinClos ? "(clos " : "(!clos ";
        bind(v.bound, [&] { proc(v.body); });
        out += ") ";
        break;
    }
  }

  void proc(const Process& p) {
    const ProcNode& n = p.node();
    out += '(';
    out += std::to_string(static_cast<int>(n.kind));
    out += ' ';
    switch (n.kind) {
      case ProcKind::Inact: break;
      case ProcKind::Mix:
        proc(n.p);
        proc(n.q);
        break;
      case ProcKind::Fwd:
        name(n.x);
        name(n.y);
        break;
      case ProcKind::Cut:
      case ProcKind::PCut:
        out += n.tx.str() + " ";
        bind(n.x, [&] {
          proc(n.p);
          proc(n.q);
        });
        break;
      case ProcKind::BufCut:
        out += n.tx.str() + " " + n.ty.str() + (n.writer == Side::Left ? " L " : " R ") +
               (n.concurrent ? "c " : "s ");
        bind(n.x, [&] { proc(n.p); });
        bind(n.y, [&] { proc(n.q); });
        out += "[";
        for (const auto& v : n.queue) value(v);
        out += "] ";
        break;
      case ProcKind::CutBang:
        out += n.tx.str() + " ";
        bind(n.y, [&] { proc(n.p); });
        bind(n.x, [&] { proc(n.q); });
        break;
      case ProcKind::Close: name(n.x); break;
      case ProcKind::Wait:
      case ProcKind::Quest:
        name(n.x);
        proc(n.p);
        break;
      case ProcKind::Select:
        out += "#" + n.label + " ";
        name(n.x);
        proc(n.p);
        break;
      case ProcKind::SendLit:
        out += std::to_string(n.lit) + " ";
        name(n.x);
        proc(n.p);
        break;
      case ProcKind::Send:
        name(n.x);
        bind(n.y, [&] { proc(n.p); });
        proc(n.q);
        break;
      case ProcKind::Recv:
      case ProcKind::Server:
      case ProcKind::Call:
      case ProcKind::RecvLit:
        name(n.x);
        bind(n.y, [&] { proc(n.p); });
        break;
      case ProcKind::Case:
        name(n.x);
        for (const auto& [l, b] : n.branches) {
          out += "#" + l + " ";
          proc(b);
        }
        break;
    }
    out += ')';
  }
};

}  // namespace

std::size_t processSize(const Process& p) { return std::max<std::size_t>(1, countNodes(p)); }

std::string alphaKey(const Process& p) {
  AlphaPrinter ap;
  ap.proc(p);
  return std::move(ap.out);
}

bool alphaEqual(const Process& a, const Process& b) { return alphaKey(a) == alphaKey(b); }

bool containsBufCut(const Process& p) { return hasBufCut(p); }

}  // namespace svm
