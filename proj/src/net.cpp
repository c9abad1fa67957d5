#include "sessionvm/net.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace svm {

NameSet freeNames(const Queue& q) {
  NameSet out;
  for (const auto& v : q) {
    NameSet f = freeNames(v);
    out.insert(f.begin(), f.end());
  }
  return out;
}

Queue substituteQueue(const Queue& q, const Name& x, const Name& y, NameSupply& supply) {
  Queue out;
  out.reserve(q.size());
  Renaming r{{y, x}};
  for (const auto& v : q) out.push_back(rename(v, r, supply));
  return out;
}

void polarize(Edge& e) {
  if (e.kind != EdgeKind::Buffered || !e.queue.empty()) return;
  if (e.end[0].type.isVoid() || e.end[1].type.isVoid()) throw IllFormedType("cannot polarize a void endpoint");
  e.writer = isPositive(e.end[0].type) ? 0 : 1;
}

std::vector<Name> subjects(const Process& p) {
  switch (p.kind()) {
    case ProcKind::Inact:
    case ProcKind::Mix:
    case ProcKind::Cut:
    case ProcKind::PCut:
    case ProcKind::BufCut:
    case ProcKind::CutBang: return {};
    case ProcKind::Fwd: return {p.x(), p.y()};
    default: return {p.x()};
  }
}

// ---------------------------------------------------------------------------
// Net construction

Name Net::claim(const Name& wanted) {
  if (!wanted.empty() && !used.count(wanted)) {
    used.insert(wanted);
    supply.bumpAbove(wanted);
    return wanted;
  }
  Name f = supply.fresh();
  while (used.count(f)) f = supply.fresh();
  used.insert(f);
  return f;
}

std::uint64_t Net::addEdge(Edge e) {
  if (e.id == 0) e.id = nextId++;
  else nextId = std::max(nextId, e.id + 1);
  used.insert(e.end[0].name);
  used.insert(e.end[1].name);
  supply.bumpAbove(e.end[0].name);
  supply.bumpAbove(e.end[1].name);
  std::uint64_t id = e.id;
  auto it = std::lower_bound(edges.begin(), edges.end(), id,
                             [](const Edge& a, std::uint64_t v) { return a.id < v; });
  edges.insert(it, std::move(e));
  return id;
}

std::uint64_t Net::addServer(Server s) {
  if (s.id == 0) s.id = nextId++;
  else nextId = std::max(nextId, s.id + 1);
  used.insert(s.name);
  supply.bumpAbove(s.name);
  std::uint64_t id = s.id;
  servers.push_back(std::move(s));
  return id;
}

namespace {

void flattenInto(Net& n, const Process& p, std::vector<Process>& out) {
  const ProcNode& d = p.node();
  switch (d.kind) {
    case ProcKind::Inact: return;
    case ProcKind::Mix:
      flattenInto(n, d.p, out);
      flattenInto(n, d.q, out);
      return;
    case ProcKind::Cut:
    case ProcKind::PCut: {
      Name a = n.claim(d.x);
      Name b = n.claim(Name());
      Process left = a == d.x ? d.p : substitute(d.p, a, d.x, n.supply);
      Process right = substitute(d.q, b, d.x, n.supply);
      Edge e;
      e.kind = n.mode == FlattenMode::Embed ? EdgeKind::Buffered : EdgeKind::Plain;
      e.concurrent = d.kind == ProcKind::PCut;
      e.end[0] = {a, d.tx};
      e.end[1] = {b, dual(d.tx)};
      polarize(e);
      n.addEdge(std::move(e));
      flattenInto(n, left, out);
      flattenInto(n, right, out);
      return;
    }
    case ProcKind::BufCut: {
      Name a = n.claim(d.x);
      Name b = n.claim(d.y);
      Process left = a == d.x ? d.p : substitute(d.p, a, d.x, n.supply);
      Process right = b == d.y ? d.q : substitute(d.q, b, d.y, n.supply);
      Edge e;
      e.kind = EdgeKind::Buffered;
      e.concurrent = d.concurrent;
      e.end[0] = {a, d.tx};
      e.end[1] = {b, d.ty};
      e.writer = d.writer == Side::Left ? 0 : 1;
      e.queue = d.queue;
      n.addEdge(std::move(e));
      flattenInto(n, left, out);
      flattenInto(n, right, out);
      return;
    }
    case ProcKind::CutBang: {
      Name s = n.claim(d.x);
      Process rest = s == d.x ? d.q : substitute(d.q, s, d.x, n.supply);
      Server sv;
      sv.name = s;
      sv.param = d.y;
      sv.paramType = d.tx;
      sv.body = d.p;
      n.addServer(std::move(sv));
      flattenInto(n, rest, out);
      return;
    }
    default: out.push_back(p); return;
  }
}

}  // namespace

void Net::add(const Process& p, std::optional<std::size_t> pos) {
  NameSupply s = supplyAbove(p);
  if (s.peek() > supply.peek()) supply = s;
  std::vector<Process> out;
  flattenInto(*this, p, out);
  std::size_t at = pos ? std::min(*pos, atoms.size()) : atoms.size();
  std::vector<Atom> fresh;
  fresh.reserve(out.size());
  for (auto& q : out) fresh.push_back({q, freeNames(q)});
  atoms.insert(atoms.begin() + static_cast<std::ptrdiff_t>(at), fresh.begin(), fresh.end());
}

void Net::replaceAtom(std::size_t idx, const std::vector<Process>& conts) {
  atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(idx));
  std::size_t before = atoms.size();
  std::size_t at = idx;
  for (const auto& c : conts) {
    add(c, at);
    at += atoms.size() - before;
    before = atoms.size();
  }
}

void Net::refreshAtom(std::size_t idx) { atoms[idx].fn = freeNames(atoms[idx].proc); }

void Net::removeEdge(std::size_t idx) { edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(idx)); }

std::size_t Net::edgeIndex(std::uint64_t id) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (edges[i].id == id) return i;
  throw std::out_of_range("no edge with id " + std::to_string(id));
}

std::optional<std::pair<std::size_t, int>> Net::endOf(const Name& n) const {
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (int k = 0; k < 2; ++k)
      if (edges[i].end[k].name == n) return std::make_pair(i, k);
  return std::nullopt;
}

std::optional<std::size_t> Net::serverOf(const Name& n) const {
  for (std::size_t i = 0; i < servers.size(); ++i)
    if (servers[i].name == n) return i;
  return std::nullopt;
}

Holder Net::holderOf(const Name& n) const {
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i].fn.count(n)) return {Holder::Kind::Atom, i};
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (freeNames(edges[i].queue).count(n)) return {Holder::Kind::Edge, i};
  return {};
}

void Net::renameInHolder(const Holder& h, const Name& from, const Name& to) {
  if (h.kind == Holder::Kind::Atom) {
    atoms[h.index].proc = substitute(atoms[h.index].proc, to, from, supply);
    refreshAtom(h.index);
  } else if (h.kind == Holder::Kind::Edge) {
    edges[h.index].queue = substituteQueue(edges[h.index].queue, to, from, supply);
  }
}

Net flatten(const Process& p, FlattenMode mode) {
  Net n;
  n.mode = mode;
  n.used = freeNames(p);
  n.supply = supplyAbove(p);
  n.add(p);
  return n;
}

NameSet netFreeNames(const Net& n) {
  NameSet fn;
  for (const auto& a : n.atoms) fn.insert(a.fn.begin(), a.fn.end());
  for (const auto& e : n.edges) {
    NameSet q = freeNames(e.queue);
    fn.insert(q.begin(), q.end());
  }
  for (const auto& s : n.servers) {
    NameSet b = freeNames(s.body);
    b.erase(s.param);
    fn.insert(b.begin(), b.end());
  }
  for (const auto& e : n.edges) {
    fn.erase(e.end[0].name);
    fn.erase(e.end[1].name);
  }
  for (const auto& s : n.servers) fn.erase(s.name);
  return fn;
}

// ---------------------------------------------------------------------------
// Unflattening

Process unflatten(const Net& n) {
  struct Comp {
    Process p;
    NameSet fn;
  };
  std::vector<Comp> comps;
  for (const auto& a : n.atoms) comps.push_back({a.proc, a.fn});
  std::vector<const Edge*> pending;
  for (const auto& e : n.edges) pending.push_back(&e);
  NameSupply supply = n.supply;

  auto findComp = [&](const Name& x) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < comps.size(); ++i)
      if (comps[i].fn.count(x)) return i;
    return std::nullopt;
  };
  auto heldByPending = [&](const Name& x, const Edge* self) {
    for (const Edge* e : pending)
      if (e != self && freeNames(e->queue).count(x)) return true;
    return false;
  };

  while (!pending.empty()) {
    std::optional<std::size_t> pick;
    for (std::size_t i = pending.size(); i-- > 0;) {
      const Edge* e = pending[i];
      bool ok = true;
      for (int k = 0; k < 2 && ok; ++k) {
        const Name& nm = e->end[k].name;
        if (!findComp(nm) && heldByPending(nm, e)) ok = false;
      }
      if (ok) {
        pick = i;
        break;
      }
    }
    if (!pick) throw std::logic_error("net is cyclic; cannot rebuild a cut tree");
    const Edge& e = *pending[*pick];
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(*pick));

    auto c0 = findComp(e.end[0].name);
    auto c1 = findComp(e.end[1].name);
    if (c0 && c1 && *c0 == *c1) throw std::logic_error("both endpoints of a cut held by one component");
    Process p0 = c0 ? comps[*c0].p : Process::inact();
    Process p1 = c1 ? comps[*c1].p : Process::inact();
    NameSet fn;
    if (c0) fn.insert(comps[*c0].fn.begin(), comps[*c0].fn.end());
    if (c1) fn.insert(comps[*c1].fn.begin(), comps[*c1].fn.end());
    fn.erase(e.end[0].name);
    fn.erase(e.end[1].name);
    NameSet qfn = freeNames(e.queue);
    fn.insert(qfn.begin(), qfn.end());

    Process built;
    if (e.kind == EdgeKind::Plain) {
      const Name& a = e.end[0].name;
      Process right = substitute(p1, a, e.end[1].name, supply);
      built = e.concurrent ? Process::pcut(p0, a, e.end[0].type, right) : Process::cut(p0, a, e.end[0].type, right);
    } else {
      built = Process::bufCut(p0, e.end[0].name, e.end[0].type, e.queue, e.end[1].name, e.end[1].type, p1,
                              e.writer == 0 ? Side::Left : Side::Right, e.concurrent);
    }
    std::vector<std::size_t> gone;
    if (c0) gone.push_back(*c0);
    if (c1) gone.push_back(*c1);
    std::sort(gone.begin(), gone.end());
    std::size_t at = gone.empty() ? comps.size() : gone.front();
    for (std::size_t i = gone.size(); i-- > 0;) comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(gone[i]));
    at = std::min(at, comps.size());
    comps.insert(comps.begin() + static_cast<std::ptrdiff_t>(at), Comp{built, fn});
  }

  Process body;
  NameSet fn;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    body = i == 0 ? comps[i].p : Process::mix(body, comps[i].p);
    fn.insert(comps[i].fn.begin(), comps[i].fn.end());
  }

  // Keep servers reachable from the body, then wrap innermost-first.
  std::vector<const Server*> live;
  {
    NameSet need = fn;
    std::vector<bool> taken(n.servers.size(), false);
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < n.servers.size(); ++i) {
        if (taken[i] || !need.count(n.servers[i].name)) continue;
        taken[i] = true;
        grew = true;
        NameSet b = freeNames(n.servers[i].body);
        b.erase(n.servers[i].param);
        need.insert(b.begin(), b.end());
      }
    }
    for (std::size_t i = 0; i < n.servers.size(); ++i)
      if (taken[i]) live.push_back(&n.servers[i]);
  }
  while (!live.empty()) {
    std::optional<std::size_t> pick;
    for (std::size_t i = 0; i < live.size(); ++i) {
      bool needed = false;
      for (std::size_t j = 0; j < live.size() && !needed; ++j) {
        if (i == j) continue;
        NameSet b = freeNames(live[j]->body);
        b.erase(live[j]->param);
        needed = b.count(live[i]->name) > 0;
      }
      if (!needed && (!pick || live[i]->id > live[*pick]->id)) pick = i;
    }
    if (!pick) throw std::logic_error("servers depend on each other cyclically");
    const Server& s = *live[*pick];
    body = Process::cutBang(s.param, s.body, s.name, s.paramType, body);
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(*pick));
  }
  return body;
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

using TokMap = std::map<Name, std::string>;

class Encoder {
 public:
  explicit Encoder(FlattenMode mode) : mode_(mode) {}

  std::string process(const Process& p, const TokMap& tok, int depth) {
    Net n;
    n.mode = mode_;
    n.used = freeNames(p);
    for (const auto& [k, v] : tok) n.used.insert(k);
    n.supply = supplyAbove(p);
    n.add(p);
    return net(n, tok, depth);
  }

  std::string net(const Net& n, const TokMap& outer, int depth) {
    if (depth > 200) throw std::logic_error("canonical form nesting too deep");
    Frame f{n, outer, depth};
    buildServerTokens(f);
    const std::size_t na = n.atoms.size();
    const std::size_t total = na + n.edges.size();
    if (total == 0) return "0";

    // links: (edge, end) -> holder node or npos
    f.holderOfEnd.assign(n.edges.size() * 2, npos);
    f.adj.assign(total, {});
    for (std::size_t e = 0; e < n.edges.size(); ++e) {
      for (int k = 0; k < 2; ++k) {
        const Name& nm = n.edges[e].end[k].name;
        std::size_t h = npos;
        for (std::size_t i = 0; i < na && h == npos; ++i)
          if (n.atoms[i].fn.count(nm)) h = i;
        for (std::size_t j = 0; j < n.edges.size() && h == npos; ++j)
          if (j != e && freeNames(n.edges[j].queue).count(nm)) h = na + j;
        std::size_t link = e * 2 + static_cast<std::size_t>(k);
        f.holderOfEnd[link] = h;
        f.adj[na + e].push_back(link);
        if (h != npos) f.adj[h].push_back(link);
      }
    }

    // connected components
    std::vector<std::size_t> comp(total);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    for (std::size_t link = 0; link < f.holderOfEnd.size(); ++link) {
      std::size_t h = f.holderOfEnd[link];
      if (h == npos) continue;
      comp[find(h)] = find(na + link / 2);
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < total; ++i) groups[find(i)].push_back(i);

    std::vector<std::string> parts;
    for (const auto& [root, members] : groups) {
      std::string best;
      bool have = false;
      for (std::size_t c : centers(f, members)) {
        std::string s = encode(f, c, npos, 0);
        if (!have || s < best) {
          best = std::move(s);
          have = true;
        }
      }
      parts.push_back(std::move(best));
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " | " : "") + parts[i];
    return out;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  struct Frame {
    const Net& n;
    const TokMap& outer;
    int depth;
    TokMap base;
    std::vector<std::size_t> holderOfEnd;
    std::vector<std::vector<std::size_t>> adj;
  };

  FlattenMode mode_;

  std::string d(int depth) const { return std::to_string(depth); }

  void buildServerTokens(Frame& f) {
    f.base = f.outer;
    const Net& n = f.n;
    std::map<std::size_t, std::string> done;
    std::vector<bool> busy(n.servers.size(), false);
    std::function<std::string(std::size_t)> tokenFor = [&](std::size_t i) -> std::string {
      if (auto it = done.find(i); it != done.end()) return it->second;
      if (busy[i]) throw std::logic_error("cyclic server references");
      busy[i] = true;
      const Server& s = n.servers[i];
      NameSet b = freeNames(s.body);
      b.erase(s.param);
      TokMap t = f.outer;
      for (const auto& nm : b)
        if (auto j = n.serverOf(nm)) t[nm] = tokenFor(*j);
      t[s.param] = "$" + d(f.depth + 1);
      std::string tok = "!{" + s.paramType.str() + "|" + process(s.body, t, f.depth + 1) + "}";
      busy[i] = false;
      done[i] = tok;
      return tok;
    };
    for (std::size_t i = 0; i < n.servers.size(); ++i) f.base[n.servers[i].name] = tokenFor(i);
  }

  std::vector<std::size_t> centers(const Frame& f, const std::vector<std::size_t>& members) {
    if (members.size() <= 2) return members;
    std::map<std::size_t, std::size_t> degree;
    std::map<std::size_t, std::vector<std::size_t>> nb;
    for (std::size_t m : members) degree[m] = 0;
    const std::size_t na = f.n.atoms.size();
    for (std::size_t link = 0; link < f.holderOfEnd.size(); ++link) {
      std::size_t h = f.holderOfEnd[link];
      std::size_t e = na + link / 2;
      if (h == npos || !degree.count(e)) continue;
      nb[h].push_back(e);
      nb[e].push_back(h);
      ++degree[h];
      ++degree[e];
    }
    std::set<std::size_t> remaining(members.begin(), members.end());
    std::size_t edgesCount = 0;
    for (auto& [k, v] : degree) edgesCount += v;
    if (edgesCount / 2 + 1 != members.size()) return members;  // not a tree: try every root
    std::vector<std::size_t> leaves;
    for (std::size_t m : members)
      if (degree[m] <= 1) leaves.push_back(m);
    while (remaining.size() > 2) {
      std::vector<std::size_t> next;
      for (std::size_t l : leaves) {
        remaining.erase(l);
        for (std::size_t x : nb[l])
          if (remaining.count(x) && --degree[x] == 1) next.push_back(x);
      }
      leaves = std::move(next);
    }
    return {remaining.begin(), remaining.end()};
  }

  // Picks the minimal label over permutations of equally-encoded children.
  std::string bestLabel(std::vector<std::pair<Name, std::string>>& kids, const TokMap& base, int depth,
                        const std::function<std::string(const TokMap&)>& label) {
    std::sort(kids.begin(), kids.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    std::vector<std::pair<std::size_t, std::size_t>> groups;
    for (std::size_t i = 0; i < kids.size();) {
      std::size_t j = i;
      while (j < kids.size() && kids[j].second == kids[i].second) ++j;
      if (j - i > 1) groups.push_back({i, j});
      i = j;
    }
    std::size_t combos = 1;
    for (auto [a, b] : groups)
      for (std::size_t k = 2; k <= b - a && combos <= 5040; ++k) combos *= k;
    std::vector<std::size_t> order(kids.size());
    std::iota(order.begin(), order.end(), 0);
    auto render = [&]() {
      TokMap t = base;
      for (std::size_t slot = 0; slot < order.size(); ++slot)
        t[kids[order[slot]].first] = "#" + d(depth) + "." + std::to_string(slot);
      return label(t);
    };
    std::string best = render();
    if (groups.empty() || combos > 5040) return best;
    // odometer over per-group permutations
    std::function<void(std::size_t)> rec = [&](std::size_t g) {
      if (g == groups.size()) {
        std::string s = render();
        if (s < best) best = std::move(s);
        return;
      }
      auto [a, b] = groups[g];
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(a), order.begin() + static_cast<std::ptrdiff_t>(b));
      do {
        rec(g + 1);
      } while (std::next_permutation(order.begin() + static_cast<std::ptrdiff_t>(a),
                                     order.begin() + static_cast<std::ptrdiff_t>(b)));
    };
    rec(0);
    return best;
  }

  std::string encode(const Frame& f, std::size_t node, std::size_t parentLink, std::size_t guard) {
    if (guard > f.adj.size() + 1) return "CYCLE";
    const std::size_t na = f.n.atoms.size();
    TokMap base = f.base;
    std::vector<std::pair<Name, std::string>> kids;
    auto linkName = [&](std::size_t link) -> const Name& { return f.n.edges[link / 2].end[link % 2].name; };

    if (node < na) {
      for (std::size_t link : f.adj[node]) {
        if (link == parentLink) {
          base[linkName(link)] = "^" + d(f.depth);
          continue;
        }
        kids.push_back({linkName(link), encode(f, na + link / 2, link, guard + 1)});
      }
      const Process& a = f.n.atoms[node].proc;
      std::string label = bestLabel(kids, base, f.depth, [&](const TokMap& t) { return atomLabel(a, t, f.depth); });
      std::string out = "a(" + label + ")[";
      for (std::size_t i = 0; i < kids.size(); ++i) out += (i ? "," : "") + kids[i].second;
      return out + "]";
    }

    const std::size_t e = node - na;
    const Edge& edge = f.n.edges[e];
    std::string ends[2];
    for (int k = 0; k < 2; ++k) {
      std::size_t link = e * 2 + static_cast<std::size_t>(k);
      std::size_t h = f.holderOfEnd[link];
      std::string who = link == parentLink ? "^" : h == npos ? "0" : encode(f, h, link, guard + 1);
      bool mark = edge.kind == EdgeKind::Buffered && edge.writer == k;
      ends[k] = std::string(mark ? "~" : "") + edge.end[k].type.str() + "=" + who;
    }
    if (ends[1] < ends[0]) std::swap(ends[0], ends[1]);
    for (std::size_t link : f.adj[node]) {
      if (link / 2 == e) continue;  // own endpoints
      if (link == parentLink) {
        base[linkName(link)] = "^" + d(f.depth);
        continue;
      }
      kids.push_back({linkName(link), encode(f, na + link / 2, link, guard + 1)});
    }
    std::string label =
        bestLabel(kids, base, f.depth, [&](const TokMap& t) { return queueLabel(edge.queue, t, f.depth); });
    std::string out = std::string("e") + (edge.kind == EdgeKind::Buffered ? "B" : "P") + (edge.concurrent ? "c" : "") +
                      "{" + ends[0] + "," + ends[1] + "}q(" + label + ")[";
    for (std::size_t i = 0; i < kids.size(); ++i) out += (i ? "," : "") + kids[i].second;
    return out + "]";
  }

  static std::string tokOf(const Name& x, const TokMap& t) {
    auto it = t.find(x);
    return it == t.end() ? x.str() : it->second;
  }

  std::string bound(const Process& p, const Name& b, const TokMap& t, int depth) {
    TokMap inner = t;
    inner[b] = "$" + d(depth + 1);
    return process(p, inner, depth + 1);
  }

  std::string atomLabel(const Process& a, const TokMap& t, int depth) {
    const ProcNode& n = a.node();
    switch (n.kind) {
      case ProcKind::Fwd: {
        std::string x = tokOf(n.x, t), y = tokOf(n.y, t);
        if (y < x) std::swap(x, y);
        return "fwd " + x + " " + y;
      }
      case ProcKind::Close: return "close " + tokOf(n.x, t);
      case ProcKind::Wait: return "wait " + tokOf(n.x, t) + ";" + process(n.p, t, depth + 1);
      case ProcKind::Send:
        return "send " + tokOf(n.x, t) + "(" + bound(n.p, n.y, t, depth) + ");" + process(n.q, t, depth + 1);
      case ProcKind::Recv: return "recv " + tokOf(n.x, t) + ";" + bound(n.p, n.y, t, depth);
      case ProcKind::SendLit:
        return "sendi " + tokOf(n.x, t) + " " + std::to_string(n.lit) + ";" + process(n.p, t, depth + 1);
      case ProcKind::RecvLit: return "recvi " + tokOf(n.x, t) + ";" + bound(n.p, n.y, t, depth);
      case ProcKind::Select: return "#" + n.label + " " + tokOf(n.x, t) + ";" + process(n.p, t, depth + 1);
      case ProcKind::Case: {
        std::string s = "case " + tokOf(n.x, t) + "{";
        for (const auto& [l, b] : n.branches) s += "|#" + l + ":" + process(b, t, depth + 1);
        return s + "}";
      }
      case ProcKind::Server: return "serve " + tokOf(n.x, t) + ";" + bound(n.p, n.y, t, depth);
      case ProcKind::Quest: return "? " + tokOf(n.x, t) + ";" + process(n.p, t, depth + 1);
      case ProcKind::Call: return "call " + tokOf(n.x, t) + ";" + bound(n.p, n.y, t, depth);
      default: throw std::logic_error("static construct in atom position");
    }
  }

  std::string queueLabel(const Queue& q, const TokMap& t, int depth) {
    std::string s;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (i) s += "@";
      const QueueValue& v = q[i];
      switch (v.kind) {
        case QueueValue::Kind::CloseToken: s += "#close"; break;
        case QueueValue::Kind::Label: s += "#" + v.label; break;
        case QueueValue::Kind::Int: s += std::to_string(v.value); break;
        case QueueValue::Kind::LinClos: s += "clos(" + bound(v.body, v.bound, t, depth) + ")"; break;
        case QueueValue::Kind::ExpClos: s += "!clos(" + bound(v.body, v.bound, t, depth) + ")"; break;
      }
    }
    return s;
  }
};

}  // namespace

std::string canonical(const Net& n) {
  Encoder enc(n.mode);
  return enc.net(n, {}, 0);
}

std::string canonical(const Process& p, FlattenMode mode) { return canonical(flatten(p, mode)); }

bool congruent(const Process& a, const Process& b) { return canonical(a) == canonical(b); }

bool congruentB(const Process& a, const Process& b) {
  return canonical(a, FlattenMode::Embed) == canonical(b, FlattenMode::Embed);
}

}  // namespace svm
