#include "sessionvm/sam.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "json.hpp"
#include "sessionvm/frontend.hpp"
#include "sessionvm/typecheck.hpp"

namespace svm {

// Heap ----------------------------------------------------------------------

SessionRecord& Heap::allocate(Type writerType, Type readerType, bool concurrent) {
  SessionRecord r;
  r.id = nextRecord++;
  r.writer = nextRef++;
  r.reader = nextRef++;
  r.writerType = std::move(writerType);
  r.readerType = std::move(readerType);
  r.concurrent = concurrent;
  owner[r.writer] = r.id;
  owner[r.reader] = r.id;
  return records.emplace(r.id, std::move(r)).first->second;
}

SessionRecord* Heap::find(std::uint64_t ref) {
  auto it = owner.find(ref);
  if (it == owner.end()) return nullptr;
  auto r = records.find(it->second);
  return r == records.end() ? nullptr : &r->second;
}

const SessionRecord* Heap::find(std::uint64_t ref) const {
  auto it = owner.find(ref);
  if (it == owner.end()) return nullptr;
  auto r = records.find(it->second);
  return r == records.end() ? nullptr : &r->second;
}

void Heap::release(std::uint64_t recordId) {
  auto it = records.find(recordId);
  if (it == records.end()) return;
  owner.erase(it->second.writer);
  owner.erase(it->second.reader);
  records.erase(it);
}

std::string toString(SamError::Kind k) {
  switch (k) {
    case SamError::Kind::Stuck: return "StuckState";
    case SamError::Kind::MissingRecord: return "MissingRecord";
    case SamError::Kind::EmptyQueueOnRead: return "EmptyQueueOnRead";
    case SamError::Kind::Unbound: return "UnboundName";
  }
  return "?";
}

std::string toString(SamRun::Outcome o) {
  switch (o) {
    case SamRun::Outcome::Halted: return "halted";
    case SamRun::Outcome::BudgetExceeded: return "budget-exceeded";
    case SamRun::Outcome::Stuck: return "stuck";
  }
  return "?";
}

namespace {

[[noreturn]] void stuck(const std::string& msg) { throw SamError(SamError::Kind::Stuck, msg); }

Env restrictEnv(const Env& e, const NameSet& keep) {
  Env out;
  for (const Name& n : keep) {
    auto it = e.find(n);
    if (it != e.end()) out.emplace(n, it->second);
  }
  return out;
}

Party makeParty(const Env& e, const Process& code) { return {restrictEnv(e, freeNames(code)), code}; }

Env closureEnv(const Env& e, const Process& body, const Name& bound) {
  NameSet fn = freeNames(body);
  fn.erase(bound);
  return restrictEnv(e, fn);
}

std::uint64_t refOf(const Env& e, const Name& x) {
  auto it = e.find(x);
  if (it == e.end()) throw SamError(SamError::Kind::Unbound, "name " + x.str() + " is not bound");
  if (it->second.kind != Binding::Kind::Ref) stuck("linear action on exponential name " + x.str());
  return it->second.ref;
}

SessionRecord& recordOf(Heap& h, std::uint64_t ref) {
  SessionRecord* r = h.find(ref);
  if (!r) throw SamError(SamError::Kind::MissingRecord, "no record for %r" + std::to_string(ref));
  return *r;
}

// On a shared record the reader may drain the queue before the writer has
// finished its positive section; roles only flip once the writer turned negative.
void swapIfEmpty(SessionRecord& r, bool shared) {
  if (!r.queue.empty()) return;
  if (shared && (r.writerType.isVoid() || isPositive(r.writerType))) return;
  std::swap(r.writer, r.reader);
  std::swap(r.writerType, r.readerType);
}

SamValue fromSyntax(const QueueValue& v, const Env& env, const Type& paramType) {
  SamValue s;
  s.kind = v.kind;
  s.label = v.label;
  s.value = v.value;
  if (v.kind == QueueValue::Kind::LinClos || v.kind == QueueValue::Kind::ExpClos) {
    s.bound = v.bound;
    s.body = v.body;
    s.env = closureEnv(env, v.body, v.bound);
    s.paramType = paramType;
  }
  return s;
}

bool isPositiveAction(ProcKind k) {
  return k == ProcKind::Close || k == ProcKind::Send || k == ProcKind::SendLit || k == ProcKind::Select ||
         k == ProcKind::Server;
}

std::string withSuffix(const std::string& rule, bool conc) { return conc ? rule + "c" : rule; }

// Allocation of a record for a cut between (P, x:A) and (Q, y:B).
CoreStep allocateCut(Party& run, Heap& heap, const StepContext& ctx, const Process& p, const Name& x,
                     const Type& a, const Process& q, const Name& y, const Type& b, const Queue& queue,
                     bool leftWrites, bool concurrentFlag) {
  const Env env = run.env;
  const Type& wt = leftWrites ? a : b;
  const Type& rt = leftWrites ? b : a;
  SessionRecord& r = heap.allocate(wt, rt, concurrentFlag);

  if (!queue.empty()) {
    auto layers = peelReaderType(rt, queue);
    if (!layers) stuck("queue does not fit the reader type " + rt.str());
    for (std::size_t i = 0; i < queue.size(); ++i) {
      Type pt;
      const QueueValueType& l = (*layers)[i];
      if (queue[i].kind == QueueValue::Kind::ExpClos && l.kind == QueueValueType::Kind::Full &&
          l.full.kind() == TypeKind::Quest)
        pt = dual(l.full.left());
      r.queue.push_back(fromSyntax(queue[i], env, pt));
    }
  }

  Env le = env, re = env;
  le[x] = Binding::toRef(leftWrites ? r.writer : r.reader);
  re[y] = Binding::toRef(leftWrites ? r.reader : r.writer);
  Party left = makeParty(le, p), right = makeParty(re, q);
  Party& writer = leftWrites ? left : right;
  Party& reader = leftWrites ? right : left;

  if (ctx.concurrent && concurrentFlag) {
    run = writer;
    ctx.spawned->push_back(reader);
    return {CoreStep::Status::Stepped, "SCutp"};
  }
  if (queue.empty() || isPositive(wt)) {
    run = writer;
    r.suspended = reader;
  } else if (wt.isVoid()) {
    // the writer side no longer holds its end; it runs as an independent piece
    run = reader;
    if (!writer.inert()) {
      if (ctx.pending) ctx.pending->push_back(writer);
      else ctx.spawned->push_back(writer);
    }
  } else {
    run = reader;
    r.suspended = writer;
  }
  return {CoreStep::Status::Stepped, "SCut"};
}

CoreStep stepFwd(Party& run, Heap& heap, const StepContext& ctx) {
  const Process code = run.code;
  std::uint64_t bx = refOf(run.env, code.x()), by = refOf(run.env, code.y());
  SessionRecord& rx = recordOf(heap, bx);
  SessionRecord& ry = recordOf(heap, by);
  if (rx.id == ry.id) stuck("forwarder between the two ends of one session");

  SessionRecord* r1 = nullptr;  // the forwarder reads from r1 ...
  SessionRecord* r2 = nullptr;  // ... and writes to r2
  if (rx.reader == bx && ry.writer == by) {
    r1 = &rx;
    r2 = &ry;
  } else if (ry.reader == by && rx.writer == bx) {
    r1 = &ry;
    r2 = &rx;
  } else if (rx.writer == bx && ry.writer == by) {
    // acts negatively on whichever write end has a negative type
    SessionRecord& neg = isNegative(rx.writerType) ? rx : ry;
    if (!isNegative(neg.writerType)) stuck("forwarder between two positive write ends");
    if (ctx.concurrent && neg.concurrent) return {CoreStep::Status::Blocked, ""};
    if (neg.suspended.inert()) stuck("forwarder would resume an inert party");
    Party me = run;
    run = neg.suspended;
    neg.suspended = me;
    return {CoreStep::Status::Stepped, "S−"};
  } else {
    stuck("forwarder between two read ends");
  }

  bool c1 = ctx.concurrent && r1->concurrent, c2 = ctx.concurrent && r2->concurrent;
  std::vector<SamValue> merged = r2->queue;
  merged.insert(merged.end(), r1->queue.begin(), r1->queue.end());
  r1->queue = std::move(merged);
  std::uint64_t oldReader = r1->reader, oldWriter = r2->writer;
  r1->reader = r2->reader;
  r1->readerType = r2->readerType;
  r1->concurrent = r1->concurrent || r2->concurrent;
  Party resume = r2->suspended;
  std::uint64_t dropped = r2->id;
  heap.owner.erase(oldReader);
  heap.owner.erase(oldWriter);
  heap.owner[r1->reader] = r1->id;
  heap.records.erase(dropped);

  if (c1 && c2) {
    run = Party{};
    return {CoreStep::Status::Stepped, "SfwdPc"};
  }
  if (ctx.concurrent && r1->concurrent) {
    // a shared record holds no suspended party
    if (!r1->suspended.inert()) ctx.spawned->push_back(r1->suspended);
    r1->suspended = Party{};
    if (c1) {
      run = resume;
    } else {
      run = Party{};
      if (!resume.inert()) ctx.spawned->push_back(resume);
    }
    return {CoreStep::Status::Stepped, "Sfwd"};
  }
  run = resume;
  return {CoreStep::Status::Stepped, "Sfwd"};
}

CoreStep stepCall(Party& run, Heap& heap) {
  const Process code = run.code;
  auto it = run.env.find(code.x());
  if (it == run.env.end()) throw SamError(SamError::Kind::Unbound, "name " + code.x().str() + " is not bound");
  if (it->second.kind != Binding::Kind::Exp) stuck("call on linear name " + code.x().str());
  const ExpClosure c = *it->second.exp;
  Type clientType = dual(c.paramType);
  bool plus = isPositive(clientType);
  SessionRecord& r = heap.allocate(plus ? clientType : c.paramType, plus ? c.paramType : clientType, false);
  Env server = c.env, client = run.env;
  if (plus) {
    client[code.y()] = Binding::toRef(r.writer);
    server[c.param] = Binding::toRef(r.reader);
    r.suspended = makeParty(server, c.body);
    run = makeParty(client, code.p());
    return {CoreStep::Status::Stepped, "Scall+"};
  }
  server[c.param] = Binding::toRef(r.writer);
  client[code.y()] = Binding::toRef(r.reader);
  r.suspended = makeParty(client, code.p());
  run = makeParty(server, c.body);
  return {CoreStep::Status::Stepped, "Scall−"};
}

CoreStep stepPositive(Party& run, Heap& heap, const StepContext& ctx) {
  const Process code = run.code;
  const Env env = run.env;
  std::uint64_t a = refOf(env, code.x());
  SessionRecord& r = recordOf(heap, a);
  bool conc = ctx.concurrent && r.concurrent;
  if (r.writer != a) stuck("positive action on read endpoint " + code.x().str());
  if (r.writerType.isVoid()) stuck("write on a finished endpoint " + code.x().str());

  auto finish = [&](const std::string& rule) -> CoreStep {
    r.writerType = Type::voidType();
    if (conc) {
      run = Party{};
    } else {
      run = r.suspended;
      r.suspended = Party{};
    }
    return {CoreStep::Status::Stepped, withSuffix(rule, conc)};
  };

  switch (code.kind()) {
    case ProcKind::Close: {
      if (r.writerType.kind() != TypeKind::One) stuck("close on endpoint of type " + r.writerType.str());
      r.queue.push_back(SamValue{});
      return finish("S1");
    }
    case ProcKind::Server: {
      if (r.writerType.kind() != TypeKind::Bang) stuck("server on endpoint of type " + r.writerType.str());
      SamValue v;
      v.kind = QueueValue::Kind::ExpClos;
      v.bound = code.y();
      v.body = code.p();
      v.env = closureEnv(env, code.p(), code.y());
      v.paramType = r.writerType.left();
      r.queue.push_back(std::move(v));
      return finish("S!");
    }
    case ProcKind::Send: {
      if (r.writerType.kind() != TypeKind::Tensor) stuck("send on endpoint of type " + r.writerType.str());
      SamValue v;
      v.kind = QueueValue::Kind::LinClos;
      v.bound = code.y();
      v.body = code.p();
      v.env = closureEnv(env, code.p(), code.y());
      r.queue.push_back(std::move(v));
      r.writerType = r.writerType.right();
      run = makeParty(env, code.q());
      return {CoreStep::Status::Stepped, withSuffix("S⊗", conc)};
    }
    case ProcKind::SendLit: {
      if (r.writerType.kind() != TypeKind::Tensor) stuck("send on endpoint of type " + r.writerType.str());
      SamValue v;
      v.kind = QueueValue::Kind::Int;
      v.value = code.lit();
      r.queue.push_back(std::move(v));
      r.writerType = r.writerType.right();
      run = makeParty(env, code.p());
      return {CoreStep::Status::Stepped, withSuffix("S⊗", conc)};
    }
    case ProcKind::Select: {
      if (r.writerType.kind() != TypeKind::Plus || !r.writerType.branches().count(code.label()))
        stuck("select #" + code.label() + " on endpoint of type " + r.writerType.str());
      SamValue v;
      v.kind = QueueValue::Kind::Label;
      v.label = code.label();
      r.queue.push_back(std::move(v));
      r.writerType = r.writerType.branches().at(code.label());
      run = makeParty(env, code.p());
      return {CoreStep::Status::Stepped, withSuffix("S⊕", conc)};
    }
    default: break;
  }
  stuck("not a positive action");
}

CoreStep stepNegative(Party& run, Heap& heap, const StepContext& ctx) {
  const Process code = run.code;
  const Env env = run.env;
  std::uint64_t b = refOf(env, code.x());
  SessionRecord& r = recordOf(heap, b);
  bool conc = ctx.concurrent && r.concurrent;
  const CoreStep blocked{CoreStep::Status::Blocked, ""};

  if (r.writer == b) {
    if (conc) return blocked;
    if (r.suspended.inert()) stuck("negative action on a write end with no suspended party");
    Party me = run;
    run = r.suspended;
    r.suspended = me;
    return {CoreStep::Status::Stepped, "S−"};
  }
  if (r.queue.empty()) {
    if (conc) return blocked;
    throw SamError(SamError::Kind::EmptyQueueOnRead, "read on " + code.x().str() + " with an empty queue");
  }
  const SamValue head = r.queue.front();

  switch (code.kind()) {
    case ProcKind::Wait: {
      if (head.kind != QueueValue::Kind::CloseToken || r.queue.size() != 1) stuck("wait without a final close token");
      if (!conc && !r.suspended.inert()) stuck("wait while the writer is still suspended");
      if (ctx.events) ctx.events->add("C");
      heap.release(r.id);
      run = makeParty(env, code.p());
      return {CoreStep::Status::Stepped, withSuffix("S⊥", conc)};
    }
    case ProcKind::Quest: {
      if (head.kind != QueueValue::Kind::ExpClos || r.queue.size() != 1) stuck("? without a final server closure");
      if (!conc && !r.suspended.inert()) stuck("? while the writer is still suspended");
      auto clos = std::make_shared<ExpClosure>(ExpClosure{head.bound, head.env, head.body, head.paramType});
      heap.release(r.id);
      Env e = env;
      e[code.x()] = Binding::toExp(std::move(clos));
      run = makeParty(e, code.p());
      return {CoreStep::Status::Stepped, withSuffix("S?", conc)};
    }
    case ProcKind::Recv: {
      if (head.kind != QueueValue::Kind::LinClos) stuck("recv without a closure at the head");
      if (r.readerType.kind() != TypeKind::Par) stuck("recv on endpoint of type " + r.readerType.str());
      Type c = r.readerType.left();
      r.readerType = r.readerType.right();
      r.queue.erase(r.queue.begin());
      swapIfEmpty(r, conc);
      bool plus = isPositive(c);
      // w : c in the continuation, z : dual(c) in the received closure
      Type zt = dual(c);
      SessionRecord& nr = heap.allocate(plus ? c : zt, plus ? zt : c, false);
      Env ce = head.env, ke = env;
      if (plus) {
        ke[code.y()] = Binding::toRef(nr.writer);
        ce[head.bound] = Binding::toRef(nr.reader);
        nr.suspended = makeParty(ce, head.body);
        run = makeParty(ke, code.p());
        return {CoreStep::Status::Stepped, withSuffix("S⅋+", conc)};
      }
      ce[head.bound] = Binding::toRef(nr.writer);
      ke[code.y()] = Binding::toRef(nr.reader);
      nr.suspended = makeParty(ke, code.p());
      run = makeParty(ce, head.body);
      return {CoreStep::Status::Stepped, withSuffix("S⅋−", conc)};
    }
    case ProcKind::RecvLit: {
      if (head.kind != QueueValue::Kind::Int) stuck("integer recv without an integer at the head");
      if (r.readerType.kind() != TypeKind::Par) stuck("recv on endpoint of type " + r.readerType.str());
      r.readerType = r.readerType.right();
      r.queue.erase(r.queue.begin());
      swapIfEmpty(r, conc);
      if (ctx.events) ctx.events->add("I:" + std::to_string(head.value));
      run = makeParty(env, code.p());
      return {CoreStep::Status::Stepped, withSuffix("S⅋", conc)};
    }
    case ProcKind::Case: {
      if (head.kind != QueueValue::Kind::Label) stuck("case without a label at the head");
      if (r.readerType.kind() != TypeKind::With || !r.readerType.branches().count(head.label))
        stuck("label #" + head.label + " against type " + r.readerType.str());
      auto br = code.branches().find(head.label);
      if (br == code.branches().end()) stuck("no branch for #" + head.label);
      r.readerType = r.readerType.branches().at(head.label);
      r.queue.erase(r.queue.begin());
      swapIfEmpty(r, conc);
      if (ctx.events) ctx.events->add("L:" + head.label);
      run = makeParty(env, br->second);
      return {CoreStep::Status::Stepped, withSuffix("S&", conc)};
    }
    default: break;
  }
  stuck("not a negative action");
}

}  // namespace

CoreStep stepParty(Party& run, Heap& heap, const StepContext& ctx) {
  const Process code = run.code;
  const Env env = run.env;
  switch (code.kind()) {
    case ProcKind::Inact: stuck("stepParty on inert code");
    case ProcKind::Mix: {
      Party q = makeParty(env, code.q());
      run = makeParty(env, code.p());
      if (ctx.concurrent) {
        ctx.spawned->push_back(std::move(q));
        return {CoreStep::Status::Stepped, "SMixp"};
      }
      ctx.pending->push_back(std::move(q));
      return {CoreStep::Status::Stepped, "SMix"};
    }
    case ProcKind::Cut:
    case ProcKind::PCut:
      return allocateCut(run, heap, ctx, code.p(), code.x(), code.tx(), code.q(), code.x(), dual(code.tx()),
                         {}, isPositive(code.tx()), code.kind() == ProcKind::PCut);
    case ProcKind::BufCut:
      return allocateCut(run, heap, ctx, code.p(), code.x(), code.tx(), code.q(), code.y(), code.ty(),
                         code.queue(), code.writer() == Side::Left, code.concurrent());
    case ProcKind::CutBang: {
      auto clos = std::make_shared<ExpClosure>(
          ExpClosure{code.y(), closureEnv(env, code.p(), code.y()), code.p(), code.tx()});
      Env e = env;
      e[code.x()] = Binding::toExp(std::move(clos));
      run = makeParty(e, code.q());
      return {CoreStep::Status::Stepped, "SCut!"};
    }
    case ProcKind::Fwd: return stepFwd(run, heap, ctx);
    case ProcKind::Call: return stepCall(run, heap);
    default: break;
  }
  if (isPositiveAction(code.kind())) return stepPositive(run, heap, ctx);
  return stepNegative(run, heap, ctx);
}

// Sequential machine ----------------------------------------------------------

MachineState load(const Process& p) {
  MachineState s;
  s.running = Party{{}, p};
  return s;
}

bool halted(const MachineState& s) { return s.running.inert() && s.pending.empty(); }

bool isAllocationRule(const std::string& rule) {
  return rule == "SCut" || rule == "SCut!" || rule == "SMix" || rule == "S0" || rule == "SCutp" ||
         rule == "SMixp" || rule == "S0p";
}

std::optional<std::string> step(MachineState& s, Events* ev) {
  if (s.running.inert()) {
    if (s.pending.empty()) return std::nullopt;
    s.running = std::move(s.pending.back());
    s.pending.pop_back();
    return std::string("S0");
  }
  StepContext ctx;
  ctx.pending = &s.pending;
  ctx.events = ev;
  CoreStep r = stepParty(s.running, s.heap, ctx);
  if (r.status == CoreStep::Status::Blocked) stuck("sequential machine blocked");
  return r.rule;
}

MachineState encode(const Process& p) {
  MachineState s = load(p);
  while (!halted(s) && (s.running.inert() || s.running.code.isStatic())) step(s);
  return s;
}

SamRun runSam(const Process& p, const SamOptions& opt) {
  SamRun run;
  MachineState s = load(p);
  run.hashes.push_back(stateHash(s));
  if (opt.keepStates) run.states.push_back(s);
  try {
    while (!halted(s)) {
      if (run.rules.size() >= opt.budget) {
        run.outcome = SamRun::Outcome::BudgetExceeded;
        break;
      }
      auto rule = step(s, &run.events);
      run.rules.push_back(*rule);
      run.hashes.push_back(stateHash(s));
      if (opt.keepStates) run.states.push_back(s);
    }
    if (run.outcome == SamRun::Outcome::Halted && !s.heap.empty()) {
      run.outcome = SamRun::Outcome::Stuck;
      run.error = "halted with " + std::to_string(s.heap.records.size()) + " live session record(s)";
    }
  } catch (const SamError& e) {
    run.outcome = SamRun::Outcome::Stuck;
    run.error = toString(e.kind) + ": " + e.what();
  }
  run.final = std::move(s);
  return run;
}

// Decoding ------------------------------------------------------------------

namespace {

struct Decoder {
  Net net;
  const Heap& heap;
  std::map<const ExpClosure*, Name> servers;
  std::uint64_t maxFresh = 0;
  NameSupply supply{1u << 30};

  explicit Decoder(const Heap& h) : heap(h) { net.mode = FlattenMode::Embed; }

  Renaming renamingFor(const Env& env, const Process& body, const Name* except) {
    Renaming r;
    for (const Name& n : freeNames(body)) {
      if (except && n == *except) continue;
      auto it = env.find(n);
      if (it == env.end()) throw SamError(SamError::Kind::Unbound, "decode: " + n.str() + " is not bound");
      if (it->second.kind == Binding::Kind::Ref) {
        if (!heap.find(it->second.ref))
          throw SamError(SamError::Kind::MissingRecord, "decode: dangling %r" + std::to_string(it->second.ref));
        r[n] = Name::ref(it->second.ref);
      } else {
        r[n] = server(it->second.exp);
      }
    }
    return r;
  }

  Process code(const Env& env, const Process& body, const Name* except = nullptr) {
    maxFresh = std::max(maxFresh, maxFreshId(body));
    Renaming r = renamingFor(env, body, except);
    return r.empty() ? body : rename(body, r, supply);
  }

  Name server(const std::shared_ptr<const ExpClosure>& c) {
    auto it = servers.find(c.get());
    if (it != servers.end()) return it->second;
    Name name("!s" + std::to_string(servers.size() + 1));
    servers.emplace(c.get(), name);
    Server s;
    s.name = name;
    s.param = c->param;
    s.paramType = c->paramType;
    s.body = code(c->env, c->body, &c->param);
    net.addServer(std::move(s));
    return name;
  }

  QueueValue value(const SamValue& v) {
    switch (v.kind) {
      case QueueValue::Kind::CloseToken: return QueueValue::closeToken();
      case QueueValue::Kind::Label: return QueueValue::labelValue(v.label);
      case QueueValue::Kind::Int: return QueueValue::intValue(v.value);
      case QueueValue::Kind::LinClos: return QueueValue::linClos(v.bound, code(v.env, v.body, &v.bound));
      case QueueValue::Kind::ExpClos: return QueueValue::expClos(v.bound, code(v.env, v.body, &v.bound));
    }
    return {};
  }
};

}  // namespace

Net decodeNet(const std::vector<Party>& pieces, const Heap& heap) {
  Decoder d(heap);
  for (const auto& [id, r] : heap.records) {
    Edge e;
    e.id = id;
    e.kind = EdgeKind::Buffered;
    e.concurrent = r.concurrent;
    e.end[0] = {Name::ref(r.writer), r.writerType};
    e.end[1] = {Name::ref(r.reader), r.readerType};
    e.writer = 0;
    for (const auto& v : r.queue) e.queue.push_back(d.value(v));
    d.net.edges.push_back(std::move(e));
    d.net.used.insert(Name::ref(r.writer));
    d.net.used.insert(Name::ref(r.reader));
  }
  d.net.nextId = heap.nextRecord;
  std::vector<Process> codes;
  for (const auto& p : pieces)
    if (!p.inert()) codes.push_back(d.code(p.env, p.code));
  for (const auto& [id, r] : heap.records)
    if (!r.suspended.inert()) codes.push_back(d.code(r.suspended.env, r.suspended.code));
  d.net.supply.bumpAbove(Name::fresh(d.maxFresh));
  for (const auto& c : codes)
    for (const Name& n : freeNames(c)) d.net.used.insert(n);
  for (const auto& c : codes) d.net.add(c);
  return d.net;
}

Net decodeNet(const MachineState& s) {
  std::vector<Party> pieces{s.running};
  pieces.insert(pieces.end(), s.pending.begin(), s.pending.end());
  return decodeNet(pieces, s.heap);
}

Process decode(const MachineState& s) { return unflatten(decodeNet(s)); }

// Readiness and invariants ---------------------------------------------------

namespace {

// A party is ready unless it holds a read end whose writer is still positive.
std::optional<std::string> unreadyName(const Env& env, const Heap& heap, const Name* except,
                                       std::uint64_t* recordOut) {
  for (const auto& [n, b] : env) {
    if (except && n == *except) continue;
    if (b.kind != Binding::Kind::Ref) continue;
    const SessionRecord* r = heap.find(b.ref);
    if (!r || r->reader != b.ref) continue;
    if (r->writerType.isVoid() || isNegative(r->writerType)) continue;
    if (recordOut) *recordOut = r->id;
    return n.str();
  }
  return std::nullopt;
}

std::optional<Name> nameOfRef(const Env& env, std::uint64_t ref) {
  for (const auto& [n, b] : env)
    if (b.kind == Binding::Kind::Ref && b.ref == ref) return n;
  return std::nullopt;
}

}  // namespace

ReadyReport checkReady(const MachineState& s) {
  ReadyReport out;
  auto fail = [&](std::uint64_t rec, std::string name, std::string clause) {
    out.ready = false;
    out.record = rec;
    out.name = std::move(name);
    out.clause = std::move(clause);
    return out;
  };
  std::uint64_t rec = 0;
  if (auto n = unreadyName(s.running.env, s.heap, nullptr, &rec)) return fail(rec, *n, "running");
  for (const auto& p : s.pending)
    if (auto n = unreadyName(p.env, s.heap, nullptr, &rec)) return fail(rec, *n, "pending");
  for (const auto& [id, r] : s.heap.records) {
    const Env& se = r.suspended.env;
    if (auto y = nameOfRef(se, r.reader)) {
      if (auto n = unreadyName(se, s.heap, &*y, &rec)) return fail(rec, *n, "suspended reader");
    } else if (nameOfRef(se, r.writer)) {
      if (auto n = unreadyName(se, s.heap, nullptr, &rec)) return fail(rec, *n, "suspended writer");
    }
    for (const auto& v : r.queue) {
      if (v.kind != QueueValue::Kind::LinClos) continue;
      // the bound name is not yet in the closure environment
      if (auto n = unreadyName(v.env, s.heap, &v.bound, &rec)) return fail(rec, *n, "queued closure");
    }
  }
  return out;
}

std::optional<std::string> checkHeapInvariant(const Heap& h, bool concurrentMachine) {
  for (const auto& [id, r] : h.records) {
    std::string where = "record " + std::to_string(id) + ": ";
    if (r.readerType.isVoid() || !isNegative(r.readerType))
      return where + "reader type " + r.readerType.str() + " is not negative";
    bool shared = concurrentMachine && r.concurrent;
    if (shared) {
      if (!r.suspended.inert()) return where + "shared record holds a suspended party";
      continue;
    }
    if (r.suspended.inert() != r.writerType.isVoid())
      return where + "suspended party inert=" + std::to_string(r.suspended.inert()) + " with writer type " +
             r.writerType.str();
    if (nameOfRef(r.suspended.env, r.writer) && !isNegative(r.writerType))
      return where + "suspended writer has positive type " + r.writerType.str();
  }
  return std::nullopt;
}

namespace {

std::optional<std::string> closedParty(const Env& env, const Process& code, const Name* except, const Heap& heap,
                                       std::set<const ExpClosure*>& seen);

std::optional<std::string> closedEnv(const Env& env, const Heap& heap, std::set<const ExpClosure*>& seen) {
  for (const auto& [n, b] : env) {
    if (b.kind == Binding::Kind::Ref) {
      if (!heap.find(b.ref)) return n.str() + " refers to a released record";
    } else if (seen.insert(b.exp.get()).second) {
      if (auto e = closedParty(b.exp->env, b.exp->body, &b.exp->param, heap, seen)) return e;
    }
  }
  return std::nullopt;
}

std::optional<std::string> closedParty(const Env& env, const Process& code, const Name* except, const Heap& heap,
                                       std::set<const ExpClosure*>& seen) {
  for (const Name& n : freeNames(code))
    if ((!except || n != *except) && !env.count(n)) return n.str() + " is free but unbound";
  return closedEnv(env, heap, seen);
}

}  // namespace

std::optional<std::string> checkClosed(const MachineState& s) {
  std::set<const ExpClosure*> seen;
  if (auto e = closedParty(s.running.env, s.running.code, nullptr, s.heap, seen)) return "running: " + *e;
  for (const auto& p : s.pending)
    if (auto e = closedParty(p.env, p.code, nullptr, s.heap, seen)) return "pending: " + *e;
  for (const auto& [id, r] : s.heap.records) {
    std::string where = "record " + std::to_string(id) + ": ";
    if (auto e = closedParty(r.suspended.env, r.suspended.code, nullptr, s.heap, seen)) return where + *e;
    for (const auto& v : r.queue)
      if (v.kind == QueueValue::Kind::LinClos || v.kind == QueueValue::Kind::ExpClos)
        if (auto e = closedParty(v.env, v.body, &v.bound, s.heap, seen)) return where + *e;
  }
  return std::nullopt;
}

// Hashing and snapshots --------------------------------------------------------

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hashHex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 15];
  return out;
}

namespace {

std::string expKey(const ExpClosure& c);

// Free names replaced by what they are bound to, then alpha-normalized.
std::string codeKey(const Env& env, const Process& code, const Name* except) {
  Renaming r;
  for (const Name& n : freeNames(code)) {
    if (except && n == *except) {
      r[n] = Name("$param");
      continue;
    }
    auto it = env.find(n);
    if (it == env.end()) continue;
    if (it->second.kind == Binding::Kind::Ref) r[n] = Name::ref(it->second.ref);
    else r[n] = Name("!" + hashHex(fnv1a(expKey(*it->second.exp))));
  }
  NameSupply supply(1u << 30);
  return alphaKey(r.empty() ? code : rename(code, r, supply));
}

std::string expKey(const ExpClosure& c) { return c.paramType.str() + "|" + codeKey(c.env, c.body, &c.param); }

std::string valueKey(const SamValue& v) {
  switch (v.kind) {
    case QueueValue::Kind::CloseToken: return "#close";
    case QueueValue::Kind::Label: return "#" + v.label;
    case QueueValue::Kind::Int: return std::to_string(v.value);
    case QueueValue::Kind::LinClos: return "clos(" + codeKey(v.env, v.body, &v.bound) + ")";
    case QueueValue::Kind::ExpClos:
      return "!clos(" + v.paramType.str() + "|" + codeKey(v.env, v.body, &v.bound) + ")";
  }
  return "?";
}

// Display form: refs substituted, exponential names left as written.
std::string display(const Env& env, const Process& code, const Name* except) {
  Renaming r;
  for (const Name& n : freeNames(code)) {
    if (except && n == *except) continue;
    auto it = env.find(n);
    if (it != env.end() && it->second.kind == Binding::Kind::Ref) r[n] = Name::ref(it->second.ref);
  }
  NameSupply supply(1u << 30);
  return prettyPrint(r.empty() ? code : rename(code, r, supply));
}

nlohmann::ordered_json expJson(const Env& env, const Process& code) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const Name& n : freeNames(code)) {
    auto it = env.find(n);
    if (it == env.end() || it->second.kind != Binding::Kind::Exp) continue;
    const ExpClosure& c = *it->second.exp;
    nlohmann::ordered_json e;
    e["param"] = c.param.str();
    e["type"] = c.paramType.str();
    e["code"] = display(c.env, c.body, &c.param);
    auto inner = expJson(c.env, c.body);
    if (!inner.empty()) e["exp"] = inner;
    out[n.str()] = e;
  }
  return out;
}

nlohmann::ordered_json partyJson(const Party& p) {
  nlohmann::ordered_json j;
  j["code"] = display(p.env, p.code, nullptr);
  auto e = expJson(p.env, p.code);
  if (!e.empty()) j["exp"] = e;
  return j;
}

std::string valueDisplay(const SamValue& v) {
  switch (v.kind) {
    case QueueValue::Kind::LinClos: return "clos(" + v.bound.str() + ". " + display(v.env, v.body, &v.bound) + ")";
    case QueueValue::Kind::ExpClos: return "!clos(" + v.bound.str() + ". " + display(v.env, v.body, &v.bound) + ")";
    default: return valueKey(v);
  }
}

}  // namespace

std::string stateKey(const std::vector<Party>& threads, const Heap& heap) {
  std::string k;
  for (const auto& t : threads)
    if (!t.inert()) k += "T{" + codeKey(t.env, t.code, nullptr) + "}";
  for (const auto& [id, r] : heap.records) {
    k += "R" + std::to_string(id) + "<" + std::to_string(r.writer) + ":" + r.writerType.str() + "[";
    for (const auto& v : r.queue) k += valueKey(v) + ";";
    k += "]" + std::to_string(r.reader) + ":" + r.readerType.str() + (r.concurrent ? " c" : "") + "{" +
         codeKey(r.suspended.env, r.suspended.code, nullptr) + "}>";
  }
  return k;
}

std::uint64_t stateHash(const MachineState& s) {
  std::vector<Party> threads{s.running};
  threads.insert(threads.end(), s.pending.begin(), s.pending.end());
  return fnv1a(stateKey(threads, s.heap));
}

namespace {

nlohmann::ordered_json snapshot(const MachineState& s) {
  nlohmann::ordered_json j;
  j["running"] = partyJson(s.running);
  j["pending"] = nlohmann::ordered_json::array();
  for (const auto& p : s.pending) j["pending"].push_back(partyJson(p));
  j["heap"] = nlohmann::ordered_json::array();
  for (const auto& [id, r] : s.heap.records) {
    nlohmann::ordered_json rec;
    rec["id"] = id;
    rec["writer"] = Name::ref(r.writer).str();
    rec["writerType"] = r.writerType.str();
    rec["queue"] = nlohmann::ordered_json::array();
    for (const auto& v : r.queue) rec["queue"].push_back(valueDisplay(v));
    rec["suspended"] = partyJson(r.suspended);
    rec["reader"] = Name::ref(r.reader).str();
    rec["readerType"] = r.readerType.str();
    if (r.concurrent) rec["concurrent"] = true;
    j["heap"].push_back(rec);
  }
  return j;
}

}  // namespace

std::string snapshotJson(const MachineState& s) { return snapshot(s).dump(); }

std::string traceJsonl(const SamRun& run, bool fullSnapshots) {
  std::string out;
  for (std::size_t i = 0; i < run.hashes.size(); ++i) {
    nlohmann::ordered_json j;
    j["step"] = i;
    if (i == 0) j["rule"] = nullptr;
    else j["rule"] = run.rules[i - 1];
    j["hash"] = hashHex(run.hashes[i]);
    if (fullSnapshots && i < run.states.size()) j["state"] = snapshot(run.states[i]);
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace svm
