#include "sessionvm/cll.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

namespace svm {

std::string toString(CllRule r) {
  switch (r) {
    case CllRule::Fwd: return "fwd";
    case CllRule::OneBot: return "1⊥";
    case CllRule::TensorPar: return "⊗⅋";
    case CllRule::WithPlus: return "&⊕";
    case CllRule::BangQuest: return "!?";
    case CllRule::Call: return "call";
  }
  return "?";
}

std::string Redex::path() const {
  if (rule == CllRule::Call) return "server:" + (focus.empty() ? std::string() : focus.front().str());
  return "edge#" + std::to_string(edge);
}

std::uint64_t Events::digest() const {
  std::vector<std::string> s = items;
  std::sort(s.begin(), s.end());
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& e : s) {
    for (unsigned char c : e) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  }
  return h;
}

std::optional<Strategy> Strategy::parse(const std::string& text) {
  if (text == "first") return first();
  if (text == "all") return all();
  if (text.rfind("random", 0) == 0) {
    std::string rest = text.substr(6);
    if (rest.size() >= 2 && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
    if (rest.empty()) return random(0);
    try {
      return random(std::stoull(rest));
    } catch (...) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

namespace {

std::optional<CllRule> pairRule(ProcKind a, ProcKind b) {
  auto is = [&](ProcKind x, ProcKind y) { return (a == x && b == y) || (a == y && b == x); };
  if (is(ProcKind::Close, ProcKind::Wait)) return CllRule::OneBot;
  if (is(ProcKind::Send, ProcKind::Recv)) return CllRule::TensorPar;
  if (is(ProcKind::SendLit, ProcKind::RecvLit)) return CllRule::TensorPar;
  if (is(ProcKind::Select, ProcKind::Case)) return CllRule::WithPlus;
  if (is(ProcKind::Server, ProcKind::Quest)) return CllRule::BangQuest;
  return std::nullopt;
}

std::optional<std::size_t> atomHolding(const Net& n, const Name& x) {
  for (std::size_t i = 0; i < n.atoms.size(); ++i)
    if (n.atoms[i].fn.count(x)) return i;
  return std::nullopt;
}

bool isPositiveAction(ProcKind k) {
  return k == ProcKind::Close || k == ProcKind::Send || k == ProcKind::SendLit || k == ProcKind::Select ||
         k == ProcKind::Server;
}

Type left(const Type& t) { return t.left(); }

}  // namespace

std::vector<Redex> enumerateRedexes(const Net& n) {
  std::vector<Redex> out;
  for (std::size_t i = 0; i < n.atoms.size(); ++i) {
    const Process& a = n.atoms[i].proc;
    std::vector<Redex> here;
    if (a.kind() == ProcKind::Fwd) {
      for (const Name& x : {a.x(), a.y()}) {
        auto end = n.endOf(x);
        if (!end || n.edges[end->first].kind != EdgeKind::Plain) continue;
        const Edge& e = n.edges[end->first];
        const Name& other = e.end[1 - end->second].name;
        if (other == a.x() || other == a.y()) continue;
        Redex r;
        r.rule = CllRule::Fwd;
        r.atom = i;
        r.edge = e.id;
        r.focus = {x, x == a.x() ? a.y() : a.x()};
        here.push_back(r);
        break;
      }
    } else if (a.kind() == ProcKind::Call) {
      if (n.serverOf(a.x())) {
        Redex r;
        r.rule = CllRule::Call;
        r.atom = i;
        r.focus = {a.x()};
        here.push_back(r);
      }
    } else if (a.isAction()) {
      auto end = n.endOf(a.x());
      if (end && n.edges[end->first].kind == EdgeKind::Plain) {
        const Edge& e = n.edges[end->first];
        const Name& other = e.end[1 - end->second].name;
        auto j = atomHolding(n, other);
        if (j && *j > i && n.atoms[*j].proc.isAction() && n.atoms[*j].proc.kind() != ProcKind::Fwd &&
            n.atoms[*j].proc.x() == other) {
          if (auto rule = pairRule(a.kind(), n.atoms[*j].proc.kind())) {
            Redex r;
            r.rule = *rule;
            r.atom = i;
            r.partner = *j;
            r.edge = e.id;
            r.focus = {a.x(), other};
            here.push_back(r);
          }
        }
      }
    }
    std::stable_sort(here.begin(), here.end(),
                     [](const Redex& x, const Redex& y) { return static_cast<int>(x.rule) < static_cast<int>(y.rule); });
    out.insert(out.end(), here.begin(), here.end());
  }
  return out;
}

std::vector<Redex> enumerateRedexes(const Process& p) { return enumerateRedexes(flatten(p)); }

namespace {

// Renames a bound name of a continuation to a net-unique name.
Process bindFresh(Net& n, const Process& body, const Name& binder, Name& out) {
  out = n.claim(binder);
  n.used.insert(out);
  return out == binder ? body : substitute(body, out, binder, n.supply);
}

void replaceTwo(Net& n, std::size_t i, std::vector<Process> ci, std::size_t j, std::vector<Process> cj) {
  if (i > j) {
    std::swap(i, j);
    std::swap(ci, cj);
  }
  n.replaceAtom(j, cj);
  n.replaceAtom(i, ci);
}

}  // namespace

Net reduceAt(const Net& in, const Redex& r, Events* ev) {
  auto live = enumerateRedexes(in);
  if (std::find(live.begin(), live.end(), r) == live.end())
    throw StaleRedex("redex " + toString(r.rule) + " at " + r.path() + " is not enabled");
  Net n = in;
  const Process a = n.atoms[r.atom].proc;

  switch (r.rule) {
    case CllRule::Fwd: {
      const Name& x = r.focus[0];
      const Name& y = r.focus[1];
      auto end = n.endOf(x);
      std::size_t ei = end->first;
      Name other = n.edges[ei].end[1 - end->second].name;
      n.removeEdge(ei);
      n.atoms.erase(n.atoms.begin() + static_cast<std::ptrdiff_t>(r.atom));
      Holder h = n.holderOf(other);
      n.renameInHolder(h, other, y);
      return n;
    }
    case CllRule::Call: {
      const Server s = n.servers[*n.serverOf(a.x())];
      Name param;
      Name client;
      Process body = bindFresh(n, s.body, s.param, param);
      Process cont = bindFresh(n, a.p(), a.y(), client);
      Edge e;
      e.kind = n.mode == FlattenMode::Embed ? EdgeKind::Buffered : EdgeKind::Plain;
      e.end[0] = {param, s.paramType};
      e.end[1] = {client, dual(s.paramType)};
      polarize(e);
      n.addEdge(std::move(e));
      n.replaceAtom(r.atom, {body, cont});
      return n;
    }
    default: break;
  }

  std::size_t ei = n.edgeIndex(r.edge);
  std::size_t i = r.atom, j = *r.partner;
  Process b = n.atoms[j].proc;
  // pos: the positive (sending) side, neg: the receiving side
  bool aPos = isPositiveAction(a.kind());
  std::size_t pi = aPos ? i : j, ni = aPos ? j : i;
  Process pos = aPos ? a : b, neg = aPos ? b : a;
  Edge& e = n.edges[ei];
  int pk = e.end[0].name == pos.x() ? 0 : 1;

  switch (r.rule) {
    case CllRule::OneBot: {
      n.removeEdge(ei);
      if (ev) ev->add("C");
      replaceTwo(n, pi, {}, ni, {neg.p()});
      return n;
    }
    case CllRule::TensorPar: {
      Type tp = e.end[pk].type;
      e.end[pk].type = tp.right();
      e.end[1 - pk].type = e.end[1 - pk].type.right();
      if (pos.kind() == ProcKind::SendLit) {
        if (ev) ev->add("I:" + std::to_string(pos.lit()));
        replaceTwo(n, pi, {pos.p()}, ni, {neg.p()});
        return n;
      }
      Name yb, zb;
      Process sent = bindFresh(n, pos.p(), pos.y(), yb);
      Process recvd = bindFresh(n, neg.p(), neg.y(), zb);
      Edge ne;
      ne.kind = n.mode == FlattenMode::Embed ? EdgeKind::Buffered : EdgeKind::Plain;
      ne.end[0] = {yb, left(tp)};
      ne.end[1] = {zb, dual(left(tp))};
      polarize(ne);
      n.addEdge(std::move(ne));
      replaceTwo(n, pi, {sent, pos.q()}, ni, {recvd});
      return n;
    }
    case CllRule::WithPlus: {
      const std::string& l = pos.label();
      e.end[pk].type = e.end[pk].type.branches().at(l);
      e.end[1 - pk].type = e.end[1 - pk].type.branches().at(l);
      if (ev) ev->add("L:" + l);
      replaceTwo(n, pi, {pos.p()}, ni, {neg.branches().at(l)});
      return n;
    }
    case CllRule::BangQuest: {
      Server s;
      s.name = e.end[1 - pk].name;
      s.param = pos.y();
      s.paramType = e.end[pk].type.left();
      s.body = pos.p();
      n.removeEdge(ei);
      n.addServer(std::move(s));
      replaceTwo(n, pi, {}, ni, {neg.p()});
      return n;
    }
    default: break;
  }
  throw std::logic_error("unhandled redex");
}

Process reduceAt(const Process& p, const Redex& r) { return unflatten(reduceAt(flatten(p), r)); }

NameSet observables(const Net& n) {
  NameSet out;
  for (const auto& a : n.atoms)
    for (const Name& x : subjects(a.proc))
      if (!n.endOf(x) && !n.serverOf(x)) out.insert(x);
  return out;
}

NameSet observables(const Process& p) { return observables(flatten(p)); }

bool isLive(const Process& p) { return !flatten(p).atoms.empty(); }

CllRun runCll(const Process& p, Strategy s, std::size_t budget) {
  CllRun run;
  Net n = flatten(p);
  std::mt19937_64 rng(s.seed);
  for (std::size_t step = 0;; ++step) {
    auto rs = enumerateRedexes(n);
    if (rs.empty()) break;
    if (step >= budget) {
      run.outcome = CllRun::Outcome::BudgetExceeded;
      break;
    }
    std::size_t pick = 0;
    if (s.kind == Strategy::Kind::Random) pick = std::uniform_int_distribution<std::size_t>(0, rs.size() - 1)(rng);
    n = reduceAt(n, rs[pick], &run.events);
    run.steps.push_back({rs[pick], unflatten(n)});
  }
  run.final = unflatten(n);
  return run;
}

CllExploration exploreCll(const Process& p, std::size_t stateBound) {
  CllExploration out;
  struct Item {
    Net net;
    Events ev;
  };
  std::deque<Item> work;
  std::set<std::string> seen;
  std::set<std::string> normals;
  std::set<std::uint64_t> digests;
  Net start = flatten(p);
  seen.insert(canonical(start));
  work.push_back({start, {}});
  while (!work.empty()) {
    Item it = std::move(work.front());
    work.pop_front();
    ++out.states;
    auto rs = enumerateRedexes(it.net);
    if (rs.empty()) {
      normals.insert(canonical(it.net));
      digests.insert(it.ev.digest());
      continue;
    }
    for (const auto& r : rs) {
      Item next{{}, it.ev};
      next.net = reduceAt(it.net, r, &next.ev);
      std::string key = canonical(next.net) + "/" + std::to_string(next.ev.digest());
      if (!seen.insert(key).second) continue;
      if (seen.size() > stateBound) {
        out.exhausted = false;
        continue;
      }
      work.push_back(std::move(next));
    }
  }
  out.normalForms.assign(normals.begin(), normals.end());
  out.digests.assign(digests.begin(), digests.end());
  return out;
}

}  // namespace svm
