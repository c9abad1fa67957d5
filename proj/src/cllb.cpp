#include "sessionvm/cllb.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace svm {

std::string toString(BRule r) {
  switch (r) {
    case BRule::Fwdp: return "fwdp";
    case BRule::One: return "1";
    case BRule::Bot: return "⊥";
    case BRule::Tensor: return "⊗";
    case BRule::Par: return "⅋";
    case BRule::Plus: return "⊕";
    case BRule::With: return "&";
    case BRule::Bang: return "!";
    case BRule::Quest: return "?";
    case BRule::Call: return "call";
  }
  return "?";
}

std::string toString(BClass c) {
  switch (c) {
    case BClass::Positive: return "Positive";
    case BClass::Negative: return "Negative";
    case BClass::Forward: return "Forward";
  }
  return "?";
}

BClass classOf(BRule r) {
  switch (r) {
    case BRule::One:
    case BRule::Tensor:
    case BRule::Plus:
    case BRule::Bang: return BClass::Positive;
    case BRule::Fwdp: return BClass::Forward;
    default: return BClass::Negative;
  }
}

Net embedNet(const Process& p) { return flatten(p, FlattenMode::Embed); }
Process embed(const Process& p) { return unflatten(embedNet(p)); }

namespace {

std::optional<std::size_t> atomHolding(const Net& n, const Name& x) {
  for (std::size_t i = 0; i < n.atoms.size(); ++i)
    if (n.atoms[i].fn.count(x)) return i;
  return std::nullopt;
}

bool heldAnywhere(const Net& n, const Name& x) { return n.holderOf(x).kind != Holder::Kind::None; }

BStep make(BRule r, std::uint64_t edge, std::size_t atom, int orientation = 0) {
  return BStep{r, classOf(r), edge, atom, orientation};
}

}  // namespace

std::vector<BStep> enumerateB(const Net& n) {
  std::vector<BStep> out;
  for (const Edge& e : n.edges) {
    if (e.kind != EdgeKind::Buffered) continue;
    const Name& w = e.end[e.writer].name;
    const Name& r = e.end[1 - e.writer].name;
    std::vector<BStep> here;
    if (auto wi = atomHolding(n, w)) {
      const Process& a = n.atoms[*wi].proc;
      if (a.isAction() && a.kind() != ProcKind::Fwd && a.x() == w) {
        switch (a.kind()) {
          case ProcKind::Close: here.push_back(make(BRule::One, e.id, *wi)); break;
          case ProcKind::Send:
          case ProcKind::SendLit: here.push_back(make(BRule::Tensor, e.id, *wi)); break;
          case ProcKind::Select: here.push_back(make(BRule::Plus, e.id, *wi)); break;
          case ProcKind::Server: here.push_back(make(BRule::Bang, e.id, *wi)); break;
          default: break;
        }
      }
    }
    if (auto ri = atomHolding(n, r); ri && !e.queue.empty()) {
      const Process& a = n.atoms[*ri].proc;
      const QueueValue& head = e.queue.front();
      if (a.isAction() && a.kind() != ProcKind::Fwd && a.x() == r) {
        bool writerGone = !heldAnywhere(n, w);
        switch (a.kind()) {
          case ProcKind::Wait:
            if (e.queue.size() == 1 && head.kind == QueueValue::Kind::CloseToken && writerGone)
              here.push_back(make(BRule::Bot, e.id, *ri));
            break;
          case ProcKind::Recv:
            if (head.kind == QueueValue::Kind::LinClos) here.push_back(make(BRule::Par, e.id, *ri));
            break;
          case ProcKind::RecvLit:
            if (head.kind == QueueValue::Kind::Int) here.push_back(make(BRule::Par, e.id, *ri));
            break;
          case ProcKind::Case:
            if (head.kind == QueueValue::Kind::Label && a.branches().count(head.label))
              here.push_back(make(BRule::With, e.id, *ri));
            break;
          case ProcKind::Quest:
            if (e.queue.size() == 1 && head.kind == QueueValue::Kind::ExpClos && writerGone)
              here.push_back(make(BRule::Quest, e.id, *ri));
            break;
          default: break;
        }
      }
    }
    std::stable_sort(here.begin(), here.end(),
                     [](const BStep& a, const BStep& b) { return static_cast<int>(a.rule) < static_cast<int>(b.rule); });
    out.insert(out.end(), here.begin(), here.end());
  }
  // forwarders and calls, in atom order
  for (std::size_t i = 0; i < n.atoms.size(); ++i) {
    const Process& a = n.atoms[i].proc;
    if (a.kind() == ProcKind::Fwd) {
      for (int o = 0; o < 2; ++o) {
        const Name& x = o == 0 ? a.x() : a.y();
        const Name& y = o == 0 ? a.y() : a.x();
        auto ex = n.endOf(x);
        auto ey = n.endOf(y);
        if (!ex || !ey || ex->first == ey->first) continue;
        const Edge& e1 = n.edges[ex->first];
        const Edge& e2 = n.edges[ey->first];
        if (e1.kind != EdgeKind::Buffered || e2.kind != EdgeKind::Buffered) continue;
        if (e1.writer == ex->second || e2.writer != ey->second) continue;
        out.push_back(make(BRule::Fwdp, e1.id, i, o));
      }
    } else if (a.kind() == ProcKind::Call && n.serverOf(a.x())) {
      out.push_back(make(BRule::Call, 0, i));
    }
  }
  return out;
}

namespace {

Process bindFresh(Net& n, const Process& body, const Name& binder, Name& out) {
  out = n.claim(binder);
  return out == binder ? body : substitute(body, out, binder, n.supply);
}

}  // namespace

Net applyB(const Net& in, const BStep& s, Events* ev) {
  auto live = enumerateB(in);
  if (std::find(live.begin(), live.end(), s) == live.end())
    throw StaleRedex("step " + toString(s.rule) + " on cut #" + std::to_string(s.edge) + " is not enabled");
  Net n = in;
  const Process a = n.atoms[s.atom].proc;

  if (s.rule == BRule::Fwdp) {
    const Name& x = s.orientation == 0 ? a.x() : a.y();
    const Name& y = s.orientation == 0 ? a.y() : a.x();
    auto ex = *n.endOf(x);
    auto ey = *n.endOf(y);
    std::uint64_t id2 = n.edges[ey.first].id;
    Edge e2 = n.edges[ey.first];
    Edge& e1 = n.edges[ex.first];
    Queue merged = e2.queue;
    merged.insert(merged.end(), e1.queue.begin(), e1.queue.end());
    e1.queue = std::move(merged);
    e1.end[ex.second] = e2.end[1 - e2.writer];
    e1.concurrent = e1.concurrent || e2.concurrent;
    n.removeEdge(n.edgeIndex(id2));
    n.atoms.erase(n.atoms.begin() + static_cast<std::ptrdiff_t>(s.atom));
    return n;
  }
  if (s.rule == BRule::Call) {
    const Server sv = n.servers[*n.serverOf(a.x())];
    Name param, client;
    Process body = bindFresh(n, sv.body, sv.param, param);
    Process cont = bindFresh(n, a.p(), a.y(), client);
    Edge e;
    e.kind = EdgeKind::Buffered;
    e.end[0] = {param, sv.paramType};
    e.end[1] = {client, dual(sv.paramType)};
    polarize(e);
    n.addEdge(std::move(e));
    n.replaceAtom(s.atom, {cont, body});
    return n;
  }

  std::size_t ei = n.edgeIndex(s.edge);
  Edge& e = n.edges[ei];
  const int w = e.writer, r = 1 - e.writer;
  switch (s.rule) {
    case BRule::One:
      e.queue.push_back(QueueValue::closeToken());
      e.end[w].type = Type::voidType();
      n.replaceAtom(s.atom, {});
      return n;
    case BRule::Tensor:
      if (a.kind() == ProcKind::SendLit) {
        e.queue.push_back(QueueValue::intValue(a.lit()));
        e.end[w].type = e.end[w].type.right();
        n.replaceAtom(s.atom, {a.p()});
      } else {
        e.queue.push_back(QueueValue::linClos(a.y(), a.p()));
        e.end[w].type = e.end[w].type.right();
        n.replaceAtom(s.atom, {a.q()});
      }
      return n;
    case BRule::Plus:
      e.queue.push_back(QueueValue::labelValue(a.label()));
      e.end[w].type = e.end[w].type.branches().at(a.label());
      n.replaceAtom(s.atom, {a.p()});
      return n;
    case BRule::Bang:
      e.queue.push_back(QueueValue::expClos(a.y(), a.p()));
      e.end[w].type = Type::voidType();
      n.replaceAtom(s.atom, {});
      return n;
    case BRule::Bot:
      n.removeEdge(ei);
      if (ev) ev->add("C");
      n.replaceAtom(s.atom, {a.p()});
      return n;
    case BRule::Par: {
      QueueValue head = e.queue.front();
      e.queue.erase(e.queue.begin());
      Type rt = e.end[r].type;
      e.end[r].type = rt.right();
      polarize(e);
      if (head.kind == QueueValue::Kind::Int) {
        if (ev) ev->add("I:" + std::to_string(head.value));
        n.replaceAtom(s.atom, {a.p()});
        return n;
      }
      Name zb, wb;
      Process clos = bindFresh(n, head.body, head.bound, zb);
      Process cont = bindFresh(n, a.p(), a.y(), wb);
      Edge ne;
      ne.kind = EdgeKind::Buffered;
      ne.end[0] = {zb, dual(rt.left())};
      ne.end[1] = {wb, rt.left()};
      polarize(ne);
      n.addEdge(std::move(ne));
      n.replaceAtom(s.atom, {cont, clos});
      return n;
    }
    case BRule::With: {
      std::string l = e.queue.front().label;
      e.queue.erase(e.queue.begin());
      e.end[r].type = e.end[r].type.branches().at(l);
      polarize(e);
      if (ev) ev->add("L:" + l);
      n.replaceAtom(s.atom, {a.branches().at(l)});
      return n;
    }
    case BRule::Quest: {
      QueueValue head = e.queue.front();
      Server sv;
      sv.name = e.end[r].name;
      sv.param = head.bound;
      sv.paramType = dual(e.end[r].type.left());
      sv.body = head.body;
      n.removeEdge(ei);
      n.addServer(std::move(sv));
      n.replaceAtom(s.atom, {a.p()});
      return n;
    }
    default: break;
  }
  throw std::logic_error("unhandled buffered step");
}

std::vector<std::pair<Net, BStep>> stepBNet(const Net& n) {
  std::vector<std::pair<Net, BStep>> out;
  for (const auto& s : enumerateB(n)) out.emplace_back(applyB(n, s), s);
  return out;
}

std::vector<std::pair<Process, BStep>> stepB(const Process& p) {
  std::vector<std::pair<Process, BStep>> out;
  for (auto& [net, s] : stepBNet(flatten(p, FlattenMode::Embed))) out.emplace_back(unflatten(net), s);
  return out;
}

std::vector<Segment> classifySequence(const std::vector<BStep>& steps) {
  std::vector<Segment> out;
  Segment cur;
  for (const auto& s : steps) {
    if (s.cls == BClass::Negative) {
      cur.negative = s;
      out.push_back(std::move(cur));
      cur = {};
    } else {
      cur.bundle.push_back(s);
    }
  }
  if (!cur.bundle.empty()) out.push_back(std::move(cur));
  return out;
}

BRun runB(const Net& start, Strategy s, std::size_t budget) {
  BRun run;
  Net n = start;
  run.states.push_back(n);
  std::mt19937_64 rng(s.seed);
  for (std::size_t step = 0;; ++step) {
    auto ss = enumerateB(n);
    if (ss.empty()) break;
    if (step >= budget) {
      run.outcome = BRun::Outcome::BudgetExceeded;
      break;
    }
    std::size_t pick = 0;
    if (s.kind == Strategy::Kind::Random) pick = std::uniform_int_distribution<std::size_t>(0, ss.size() - 1)(rng);
    n = applyB(n, ss[pick], &run.events);
    run.steps.push_back(ss[pick]);
    run.states.push_back(n);
  }
  return run;
}

std::size_t maxQueueLength(const BRun& run) {
  std::size_t m = 0;
  for (const auto& st : run.states)
    for (const auto& e : st.edges) m = std::max(m, e.queue.size());
  return m;
}

}  // namespace svm
