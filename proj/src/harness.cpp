#include "sessionvm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <set>

#include "json.hpp"
#include "sessionvm/frontend.hpp"
#include "sessionvm/sam_concurrent.hpp"

namespace svm {

namespace {

std::string show(const Net& n) { return prettyPrint(unflatten(n)); }

// Negative and positive action nodes anywhere in a net, queued closures and
// servers included. Positive and forward B steps keep the first count and
// never raise the second, so R-dagger ->pf* Q needs neg(R) == neg(Q) and
// pos(R) >= pos(Q).
struct ActionCount {
  std::size_t neg = 0, pos = 0;
  // atoms headed by a negative action, as head kind and action counts; pf
  // steps leave these atoms alone apart from renaming
  std::multiset<std::string> negAtoms;
};

bool negativeHead(ProcKind k) {
  switch (k) {
    case ProcKind::Wait:
    case ProcKind::Recv:
    case ProcKind::RecvLit:
    case ProcKind::Case:
    case ProcKind::Quest:
    case ProcKind::Call: return true;
    default: return false;
  }
}


std::vector<Process> kids(const Process& p);
Process rebuild(const Process& p, const std::vector<Process>& k);

// Drops cut! whose server is not used by its scope, innermost first, the way
// canonical forms do.
Process collect(const Process& p) {
  const ProcNode& n = p.node();
  if (n.kind == ProcKind::CutBang) {
    Process q = collect(n.q);
    if (!occursFree(q, n.x)) return q;
    return Process::cutBang(n.y, collect(n.p), n.x, n.tx, q);
  }
  std::vector<Process> ks = kids(p);
  for (auto& k : ks) k = collect(k);
  if (n.kind == ProcKind::BufCut) {
    Queue queue = n.queue;
    for (auto& v : queue)
      if (!v.body.isInact()) v.body = collect(v.body);
    return Process::bufCut(ks[0], n.x, n.tx, std::move(queue), n.y, n.ty, ks[1], n.writer, n.concurrent);
  }
  return ks.empty() ? p : rebuild(p, ks);
}

void countActions(const Process& p, ActionCount& c) {
  const ProcNode& n = p.node();
  switch (n.kind) {
    case ProcKind::Wait:
    case ProcKind::Recv:
    case ProcKind::RecvLit:
    case ProcKind::Case:
    case ProcKind::Quest:
    case ProcKind::Call: ++c.neg; break;
    case ProcKind::Close:
    case ProcKind::Send:
    case ProcKind::SendLit:
    case ProcKind::Select:
    case ProcKind::Server: ++c.pos; break;
    default: break;
  }
  if (!n.p.isInact()) countActions(n.p, c);
  if (!n.q.isInact()) countActions(n.q, c);
  for (const auto& [l, b] : n.branches) countActions(b, c);
  for (const auto& v : n.queue)
    if (!v.body.isInact()) countActions(v.body, c);
}

ActionCount countActions(const Net& n) {
  ActionCount c;
  // only servers reachable from live code count; canonical forms drop the rest
  NameSet need;
  for (const auto& a : n.atoms) {
    Process p = collect(a.proc);
    countActions(p, c);
    NameSet fn = freeNames(p);
    need.insert(fn.begin(), fn.end());
    if (negativeHead(p.kind())) {
      // head and action counts only: both survive congruence and renaming
      ActionCount own;
      countActions(p, own);
      c.negAtoms.insert(std::to_string(static_cast<int>(p.kind())) + "/" + std::to_string(own.neg) + "/" +
                        std::to_string(own.pos));
    }
  }
  for (const auto& e : n.edges)
    for (const auto& v : e.queue) {
      if (v.body.isInact()) continue;
      Process b = collect(v.body);
      countActions(b, c);
      NameSet fn = freeNames(b);
      fn.erase(v.bound);
      need.insert(fn.begin(), fn.end());
    }
  std::vector<bool> taken(n.servers.size(), false);
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t i = 0; i < n.servers.size(); ++i) {
      if (taken[i] || !need.count(n.servers[i].name)) continue;
      taken[i] = grew = true;
      Process b = collect(n.servers[i].body);
      countActions(b, c);
      NameSet fn = freeNames(b);
      fn.erase(n.servers[i].param);
      need.insert(fn.begin(), fn.end());
    }
  }
  return c;
}

// Reachability searches shared by the correspondence check: CLL states by
// canonical form, and the positive/forward closure of their embeddings.
class Search {
 public:
  explicit Search(std::size_t bound) : bound_(bound) {}

  bool exceeded = false;

  std::string add(const Net& n) {
    std::string k = canonical(n);
    states_.emplace(k, n);
    return k;
  }

  const std::vector<std::string>& succ(const std::string& k) {
    if (auto it = succ_.find(k); it != succ_.end()) return it->second;
    std::vector<std::string> out;
    const Net n = states_.at(k);
    for (const auto& r : enumerateRedexes(n)) out.push_back(add(reduceAt(n, r)));
    return succ_.emplace(k, std::move(out)).first->second;
  }

  // States reachable from `from` in one or more CLL steps.
  std::set<std::string> reachPlus(const std::set<std::string>& from) {
    std::set<std::string> seen;
    std::deque<std::string> work;
    for (const auto& c : from)
      for (const auto& s : succ(c))
        if (seen.insert(s).second) work.push_back(s);
    while (!work.empty()) {
      std::string k = std::move(work.front());
      work.pop_front();
      for (const auto& s : succ(k)) {
        if (!seen.insert(s).second) continue;
        if (seen.size() > bound_) {
          exceeded = true;
          return seen;
        }
        work.push_back(s);
      }
    }
    return seen;
  }

  const ActionCount& counts(const std::string& k) {
    if (auto it = counts_.find(k); it != counts_.end()) return it->second;
    return counts_.emplace(k, countActions(embedNet(unflatten(states_.at(k))))).first->second;
  }

  // Canonical forms of every R' with R-dagger ->pf* R'.
  const std::set<std::string>& pf(const std::string& k) {
    if (auto it = pf_.find(k); it != pf_.end()) return it->second;
    Net start = embedNet(unflatten(states_.at(k)));
    std::set<std::string> seen{canonical(start)};
    std::deque<Net> work{start};
    while (!work.empty()) {
      Net cur = std::move(work.front());
      work.pop_front();
      for (auto& [next, st] : stepBNet(cur)) {
        if (st.cls == BClass::Negative) continue;
        if (!seen.insert(canonical(next)).second) continue;
        if (seen.size() > bound_) {
          exceeded = true;
          break;
        }
        work.push_back(std::move(next));
      }
    }
    return pf_.emplace(k, std::move(seen)).first->second;
  }

 private:
  std::size_t bound_;
  std::map<std::string, Net> states_;
  std::map<std::string, std::vector<std::string>> succ_;
  std::map<std::string, std::set<std::string>> pf_;
  std::map<std::string, ActionCount> counts_;
};

struct BTrace {
  std::vector<Net> after;  // state after each step
  std::vector<BClass> cls;
};

class Differ {
 public:
  Differ(const Process& p, const DiffOptions& opt, DiffReport& r) : p_(p), opt_(opt), r_(r) {}

  void run() {
    r_.engines = {"cll", "cllb", "sam"};
    if (opt_.samPar) r_.engines.push_back("sam-par");
    // created up front: check() hands out references into r_.checks
    std::vector<std::string> names{"typed",     "progress",       "preservation", "readiness",
                                   "soundness", "correspondence", "simulation",   "outcomes"};
    if (opt_.determinism) names.push_back("determinism");
    if (opt_.samPar) names.push_back("confluence");
    names.push_back("internal");
    r_.checks.reserve(names.size());
    for (const auto& n : names) r_.checks.push_back({n, true, 0, ""});
    if (!typechecks(p_)) {
      fail(check("typed"), {"typed", 0, prettyPrint(p_), "", "program does not typecheck"});
      return;
    }
    ++check("typed").items;
    try {
      cll();
      cllb();
      sam();
      if (opt_.samPar) samPar();
    } catch (const std::exception& e) {
      r_.internal = true;
      fail(check("internal"), {"internal", 0, prettyPrint(p_), "", e.what()});
    }
    outcomes();
  }

 private:
  CheckResult& check(const std::string& name) {
    for (auto& c : r_.checks)
      if (c.name == name) return c;
    throw std::logic_error("unknown check " + name);
  }

  void fail(CheckResult& c, Divergence d) {
    if (c.pass) c.detail = d.detail + (d.step ? " (step " + std::to_string(d.step) + ")" : "");
    c.pass = false;
    r_.pass = false;
    if (!r_.first) r_.first = std::move(d);
  }

  void typedState(const Process& q, std::size_t step, const std::string& engine) {
    CheckResult& c = check("preservation");
    ++c.items;
    auto rep = svm::check(q);
    if (!rep.accept)
      fail(c, {"preservation", step, "", prettyPrint(q),
               engine + ": " + (rep.error ? rep.error->message : std::string("rejected"))});
  }

  void cll() {
    CllRun run = runCll(p_);
    if (run.outcome != CllRun::Outcome::Normal) {
      r_.internal = true;
      fail(check("progress"), {"progress", run.steps.size(), "", prettyPrint(run.final), "cll: budget exceeded"});
      return;
    }
    ++check("progress").items;
    if (!flatten(run.final).atoms.empty())
      fail(check("progress"), {"progress", run.steps.size(), "", prettyPrint(run.final), "cll: stuck"});
    for (std::size_t i = 0; i < run.steps.size(); ++i) typedState(run.steps[i].result, i + 1, "cll");
    r_.digests["cll"] = hashHex(run.events.digest());
    cllDigest_ = run.events.digest();
    if (opt_.simulation) {
      simulate(run);
      CllRun other = runCll(p_, Strategy::random(fnv1a(alphaKey(p_))));
      if (other.outcome == CllRun::Outcome::Normal) simulate(other);
    }
  }

  // Each CLL step is matched by at most two B steps (one for a forwarder).
  void simulate(const CllRun& run) {
    CheckResult& c = check("simulation");
    Process before = p_;
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
      const Process& after = run.steps[i].result;
      ++c.items;
      std::string target = canonical(embedNet(after));
      bool fwd = run.steps[i].redex.rule == CllRule::Fwd;
      bool found = false;
      for (const auto& [n1, s1] : stepBNet(embedNet(before))) {
        if (canonical(n1) == target) {
          found = true;
          break;
        }
        if (fwd) continue;
        for (const auto& [n2, s2] : stepBNet(n1))
          if (canonical(n2) == target) {
            found = true;
            break;
          }
        if (found) break;
      }
      if (!found)
        fail(c, {"simulation", i + 1, prettyPrint(before), prettyPrint(after),
                 "cll step " + toString(run.steps[i].redex.rule) + " has no matching B reduction"});
      before = after;
    }
  }

  void cllb() {
    BRun run = runB(embedNet(p_));
    if (run.outcome != BRun::Outcome::Normal) {
      r_.internal = true;
      fail(check("progress"), {"progress", run.steps.size(), "", show(run.states.back()), "cllb: budget exceeded"});
      return;
    }
    ++check("progress").items;
    if (!run.states.back().atoms.empty())
      fail(check("progress"), {"progress", run.steps.size(), "", show(run.states.back()), "cllb: stuck"});
    for (std::size_t i = 1; i < run.states.size(); ++i) typedState(unflatten(run.states[i]), i, "cllb");
    r_.digests["cllb"] = hashHex(run.events.digest());
    bDigest_ = run.events.digest();
    if (opt_.correspondence) {
      BTrace t;
      for (std::size_t i = 0; i < run.steps.size(); ++i) {
        t.after.push_back(run.states[i + 1]);
        t.cls.push_back(run.steps[i].cls);
      }
      correspond(t, "cllb");
    }
  }

  // The negative skeleton of a B run embeds in order into a CLL run: keep the
  // set of CLL states R reachable so far with R-dagger ->pf* Q_k.
  void correspond(const BTrace& t, const std::string& engine) {
    CheckResult& c = check("correspondence");
    Search search(opt_.searchBound);
    std::set<std::string> cand{search.add(flatten(p_))};
    for (std::size_t i = 0; i < t.after.size(); ++i) {
      if (t.cls[i] != BClass::Negative) continue;
      ++c.items;
      std::string target = canonical(t.after[i]);
      ActionCount tc = countActions(t.after[i]);
      std::set<std::string> next;
      for (const auto& k : search.reachPlus(cand)) {
        const ActionCount& kc = search.counts(k);
        if (kc.neg != tc.neg || kc.pos < tc.pos) continue;
        if (!std::includes(tc.negAtoms.begin(), tc.negAtoms.end(), kc.negAtoms.begin(), kc.negAtoms.end())) continue;
        if (search.pf(k).count(target)) next.insert(k);
      }
      if (search.exceeded) {
        fail(c, {"correspondence", i + 1, "", show(t.after[i]), engine + ": search bound exceeded"});
        return;
      }
      if (next.empty()) {
        fail(c, {"correspondence", i + 1, "", show(t.after[i]),
                 engine + ": negative step has no matching CLL reduction"});
        return;
      }
      cand = std::move(next);
    }
  }

  void sam() {
    SamOptions so;
    so.keepStates = true;
    SamRun run = runSam(p_, so);
    r_.samSteps = run.rules.size();
    ++check("progress").items;
    if (run.outcome != SamRun::Outcome::Halted) {
      if (run.outcome == SamRun::Outcome::BudgetExceeded) r_.internal = true;
      fail(check("progress"), {"progress", run.rules.size(), "", prettyPrint(decode(run.final)),
                               "sam: " + toString(run.outcome) + (run.error.empty() ? "" : ": " + run.error)});
    }
    r_.digests["sam"] = hashHex(run.events.digest());
    samDigest_ = run.events.digest();

    CheckResult& ready = check("readiness");
    std::vector<Net> decoded;
    decoded.reserve(run.states.size());
    for (std::size_t i = 0; i < run.states.size(); ++i) {
      const MachineState& s = run.states[i];
      ++ready.items;
      ReadyReport rr = checkReady(s);
      if (!rr.ready)
        fail(ready, {"readiness", i, "", prettyPrint(decode(s)),
                     "record " + std::to_string(rr.record) + " name " + rr.name + ": " + rr.clause});
      if (auto e = checkHeapInvariant(s.heap)) fail(ready, {"readiness", i, "", prettyPrint(decode(s)), *e});
      if (auto e = checkClosed(s)) fail(ready, {"readiness", i, "", prettyPrint(decode(s)), *e});
      decoded.push_back(decodeNet(s));
      typedState(unflatten(decoded.back()), i, "sam");
    }

    // macro-steps: an action transition and the allocations that follow it
    CheckResult& sound = check("soundness");
    BTrace t;
    std::optional<std::size_t> prev;
    for (std::size_t i = 0; i < run.states.size(); ++i) {
      bool boundary = i == run.rules.size() || !isAllocationRule(run.rules[i]);
      if (!boundary) continue;
      if (prev) {
        ++sound.items;
        const Net& a = decoded[*prev];
        const Net& b = decoded[i];
        std::string cb = canonical(b);
        if (canonical(a) != cb) {
          bool found = false;
          for (const auto& [n, st] : stepBNet(a)) {
            if (canonical(n) != cb) continue;
            t.after.push_back(b);
            t.cls.push_back(st.cls);
            found = true;
            break;
          }
          if (!found)
            fail(sound, {"soundness", i, show(a), show(b),
                         "macro-step ending in " + run.rules[i - 1] + " is not a B reduction"});
        }
      }
      prev = i;
    }
    if (opt_.correspondence && sound.pass) correspond(t, "sam");

    if (opt_.determinism) {
      CheckResult& d = check("determinism");
      for (int k = 0; k < 5; ++k) {
        ++d.items;
        SamRun again = runSam(p_);
        if (again.hashes != run.hashes) {
          std::size_t j = 0;
          while (j < again.hashes.size() && j < run.hashes.size() && again.hashes[j] == run.hashes[j]) ++j;
          fail(d, {"determinism", j, "", "", "repeated run " + std::to_string(k + 1) + " diverges"});
        }
      }
    }
  }

  void samPar() {
    CheckResult& c = check("confluence");
    ParOptions po;
    po.checkFootprint = true;
    for (auto seed : opt_.parSeeds) {
      ++c.items;
      ParRun run = runConcurrent(p_, Scheduler::randomSeeded(seed), po);
      if (run.outcome != ParRun::Outcome::Halted) {
        if (run.outcome == ParRun::Outcome::BudgetExceeded) r_.internal = true;
        fail(check("progress"), {"progress", run.steps.size(), "", prettyPrint(unflatten(decodePool(run.final))),
                                 "sam-par seed " + std::to_string(seed) + ": " + toString(run.outcome) +
                                     (run.error.empty() ? "" : ": " + run.error)});
      }
      if (run.heapLeak) fail(c, {"confluence", run.steps.size(), "", "", "sam-par: heap leak"});
      parDigests_.push_back(run.digest);
      r_.digests["sam-par:" + std::to_string(seed)] = hashHex(run.digest);
    }
  }

  void outcomes() {
    if (r_.internal || !r_.digests.count("cll") || !r_.digests.count("cllb") || !r_.digests.count("sam"))
      return;
    CheckResult& c = check("outcomes");
    ++c.items;
    if (bDigest_ != cllDigest_ || samDigest_ != cllDigest_)
      fail(c, {"outcomes", 0, "", "", "cll " + hashHex(cllDigest_) + ", cllb " + hashHex(bDigest_) + ", sam " +
                                          hashHex(samDigest_)});
    for (auto d : parDigests_) {
      ++c.items;
      if (d != cllDigest_) fail(c, {"outcomes", 0, "", "", "sam-par digest " + hashHex(d)});
    }
  }

  const Process& p_;
  const DiffOptions& opt_;
  DiffReport& r_;
  std::uint64_t cllDigest_ = 0, bDigest_ = 0, samDigest_ = 0;
  std::vector<std::uint64_t> parDigests_;
};

std::vector<Process> kids(const Process& p) {
  const ProcNode& n = p.node();
  switch (n.kind) {
    case ProcKind::Mix:
    case ProcKind::Cut:
    case ProcKind::PCut:
    case ProcKind::BufCut:
    case ProcKind::CutBang:
    case ProcKind::Send: return {n.p, n.q};
    case ProcKind::Wait:
    case ProcKind::Recv:
    case ProcKind::Select:
    case ProcKind::Server:
    case ProcKind::Quest:
    case ProcKind::Call:
    case ProcKind::SendLit:
    case ProcKind::RecvLit: return {n.p};
    case ProcKind::Case: {
      std::vector<Process> out;
      for (const auto& [l, b] : n.branches) out.push_back(b);
      return out;
    }
    default: return {};
  }
}

Process rebuild(const Process& p, const std::vector<Process>& k) {
  const ProcNode& n = p.node();
  switch (n.kind) {
    case ProcKind::Mix: return Process::mix(k[0], k[1]);
    case ProcKind::Cut: return Process::cut(k[0], n.x, n.tx, k[1]);
    case ProcKind::PCut: return Process::pcut(k[0], n.x, n.tx, k[1]);
    case ProcKind::BufCut: return Process::bufCut(k[0], n.x, n.tx, n.queue, n.y, n.ty, k[1], n.writer, n.concurrent);
    case ProcKind::CutBang: return Process::cutBang(n.y, k[0], n.x, n.tx, k[1]);
    case ProcKind::Send: return Process::send(n.x, n.y, k[0], k[1]);
    case ProcKind::Wait: return Process::wait(n.x, k[0]);
    case ProcKind::Recv: return Process::recv(n.x, n.y, k[0]);
    case ProcKind::Select: return Process::select(n.label, n.x, k[0]);
    case ProcKind::Server: return Process::server(n.x, n.y, k[0]);
    case ProcKind::Quest: return Process::quest(n.x, k[0]);
    case ProcKind::Call: return Process::call(n.x, n.y, k[0]);
    case ProcKind::SendLit: return Process::sendLit(n.x, n.lit, k[0]);
    case ProcKind::RecvLit: return Process::recvLit(n.x, n.y, k[0]);
    case ProcKind::Case: {
      Process::Branches bs;
      std::size_t i = 0;
      for (const auto& [l, b] : n.branches) bs[l] = k[i++];
      return Process::caseOf(n.x, std::move(bs));
    }
    default: return p;
  }
}

}  // namespace

const CheckResult* DiffReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string DiffReport::json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["program"] = program;
  j["engines"] = engines;
  j["verdict"] = pass ? "Pass" : "Fail";
  j["internal"] = internal;
  j["samSteps"] = samSteps;
  auto cs = nlohmann::ordered_json::array();
  for (const auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"items", c.items}, {"detail", c.detail}});
  j["checks"] = cs;
  nlohmann::ordered_json ds = nlohmann::ordered_json::object();
  for (const auto& [k, v] : digests) ds[k] = v;
  j["digests"] = ds;
  if (first) {
    j["firstDivergence"] = {{"check", first->check},
                            {"step", first->step},
                            {"before", first->before},
                            {"after", first->after},
                            {"detail", first->detail}};
  } else {
    j["firstDivergence"] = nullptr;
  }
  return j.dump(2);
}

DiffReport diff(const Process& p, const DiffOptions& opt, const std::string& id) {
  DiffReport r;
  r.id = id;
  r.program = prettyPrint(p);
  Differ(p, opt, r).run();
  return r;
}

std::vector<Process> deletions(const Process& p) {
  std::vector<Process> out;
  if (p.isInact()) return out;
  out.push_back(Process::inact());
  std::vector<Process> ks = kids(p);
  for (const auto& k : ks) out.push_back(k);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (const auto& d : deletions(ks[i])) {
      auto copy = ks;
      copy[i] = d;
      out.push_back(rebuild(p, copy));
    }
  }
  return out;
}

Process shrink(const Process& p, const std::function<bool(const Process&)>& fails) {
  Process cur = p;
  std::set<std::string> tried;
  for (bool progress = true; progress;) {
    progress = false;
    auto cands = deletions(cur);
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Process& a, const Process& b) { return processSize(a) < processSize(b); });
    for (const auto& c : cands) {
      if (processSize(c) >= processSize(cur) && !(cur.isAction() && c.isInact())) continue;
      if (!tried.insert(alphaKey(c)).second) continue;
      if (!typechecks(c) || !fails(c)) continue;
      cur = c;
      progress = true;
      break;
    }
  }
  return cur;
}

SweepSummary sweep(const Corpus& corpus, const DiffOptions& opt, bool parallel) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<DiffReport> reports(corpus.size());
  const auto n = static_cast<std::ptrdiff_t>(corpus.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto& e = corpus[static_cast<std::size_t>(i)];
      reports[static_cast<std::size_t>(i)] = diff(e.program, opt, e.id);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto& e = corpus[static_cast<std::size_t>(i)];
      reports[static_cast<std::size_t>(i)] = diff(e.program, opt, e.id);
    }
  }
  SweepSummary s;
  s.programs = corpus.size();
  for (auto& r : reports) {
    for (const auto& c : r.checks) {
      s.items[c.name] += c.items;
      if (!c.pass) ++s.failedChecks[c.name];
    }
    if (r.pass) {
      ++s.passed;
    } else {
      s.failures.push_back(std::move(r));
    }
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

ConfluenceReport confluence(const Process& p, const std::vector<std::uint64_t>& seeds, std::size_t exhaustiveBound) {
  ConfluenceReport r;
  SamRun seq = runSam(p);
  r.expected = seq.events.digest();
  auto bad = [&](const std::string& why) {
    if (r.pass) r.detail = why;
    r.pass = false;
  };
  if (seq.outcome != SamRun::Outcome::Halted) bad("sequential sam: " + toString(seq.outcome));
  ParOptions po;
  po.checkFootprint = true;
  for (auto s : seeds) {
    ParRun run = runConcurrent(p, Scheduler::randomSeeded(s), po);
    ++r.seedsRun;
    if (run.heapLeak) ++r.leaks;
    if (run.outcome != ParRun::Outcome::Halted)
      bad("seed " + std::to_string(s) + ": " + toString(run.outcome) + (run.error.empty() ? "" : ": " + run.error));
    else if (run.digest != r.expected)
      bad("seed " + std::to_string(s) + ": digest " + hashHex(run.digest) + " != " + hashHex(r.expected));
  }
  if (exhaustiveBound > 0) {
    Exploration ex = exploreConcurrent(p, exhaustiveBound);
    r.exhaustiveComplete = ex.complete;
    r.exhaustiveStates = ex.states;
    r.leaks += ex.leaks;
    if (ex.stuck) bad("exhaustive: " + std::to_string(ex.stuck) + " stuck: " + ex.firstError);
    if (ex.allBlocked) bad("exhaustive: " + std::to_string(ex.allBlocked) + " all-blocked states");
    if (ex.digests.size() != 1 || *ex.digests.begin() != r.expected)
      bad("exhaustive: " + std::to_string(ex.digests.size()) + " distinct digests");
  }
  if (r.leaks) bad(std::to_string(r.leaks) + " heap leak(s)");
  return r;
}

}  // namespace svm
