#include "sessionvm/sam_concurrent.hpp"

#include <map>
#include <utility>

#include "json.hpp"

namespace svm {

std::string toString(ParRun::Outcome o) {
  switch (o) {
    case ParRun::Outcome::Halted: return "halted";
    case ParRun::Outcome::AllBlocked: return "all-blocked";
    case ParRun::Outcome::BudgetExceeded: return "budget-exceeded";
    case ParRun::Outcome::Stuck: return "stuck";
  }
  return "?";
}

std::size_t schedulePick(std::uint64_t seed, std::size_t step, std::size_t threads) {
  // splitmix64 over (seed, step)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (static_cast<std::uint64_t>(step) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return threads == 0 ? 0 : static_cast<std::size_t>(z % threads);
}

Pool loadPool(const Process& p) {
  Pool pool;
  if (!p.isInact()) pool.threads.push_back(Party{{}, p});
  return pool;
}

std::optional<std::string> stepThread(Pool& pool, std::size_t i, Events* ev) {
  std::vector<Party> spawned;
  StepContext ctx;
  ctx.concurrent = true;
  ctx.spawned = &spawned;
  ctx.events = ev;
  Party& t = pool.threads.at(i);
  CoreStep r = stepParty(t, pool.heap, ctx);
  if (r.status == CoreStep::Status::Blocked) return std::nullopt;
  if (pool.threads[i].inert()) pool.threads.erase(pool.threads.begin() + static_cast<std::ptrdiff_t>(i));
  for (auto& s : spawned)
    if (!s.inert()) pool.threads.push_back(std::move(s));
  return r.rule;
}

std::optional<std::string> checkFootprint(const Pool& pool) {
  std::map<std::uint64_t, std::size_t> holder;
  for (std::size_t i = 0; i < pool.threads.size(); ++i) {
    for (const auto& [n, b] : pool.threads[i].env) {
      if (b.kind != Binding::Kind::Ref) continue;
      const SessionRecord* r = pool.heap.find(b.ref);
      if (!r || r->concurrent) continue;
      auto [it, fresh] = holder.emplace(r->id, i);
      if (!fresh && it->second != i)
        return "record " + std::to_string(r->id) + " is referenced by threads " + std::to_string(it->second) +
               " and " + std::to_string(i);
    }
  }
  return std::nullopt;
}

Net decodePool(const Pool& pool) { return decodeNet(pool.threads, pool.heap); }

std::uint64_t poolHash(const Pool& pool) { return fnv1a(stateKey(pool.threads, pool.heap)); }

ParRun runConcurrent(const Process& p, const Scheduler& s, const ParOptions& opt) {
  ParRun run;
  Pool pool = loadPool(p);
  run.hashes.push_back(poolHash(pool));
  if (opt.keepStates) run.states.push_back(pool);
  std::size_t cursor = 0;
  try {
    while (!pool.threads.empty()) {
      if (run.steps.size() >= opt.budget) {
        run.outcome = ParRun::Outcome::BudgetExceeded;
        break;
      }
      std::size_t n = pool.threads.size();
      std::size_t start = s.kind == Scheduler::Kind::Random ? schedulePick(s.seed, run.steps.size(), n) : cursor % n;
      std::optional<std::string> rule;
      std::size_t chosen = 0;
      for (std::size_t k = 0; k < n && !rule; ++k) {
        chosen = (start + k) % n;
        rule = stepThread(pool, chosen, &run.events);
      }
      if (!rule) {
        run.outcome = ParRun::Outcome::AllBlocked;
        run.error = std::to_string(n) + " thread(s) blocked";
        break;
      }
      cursor = chosen + 1;
      run.steps.push_back({chosen, *rule});
      run.hashes.push_back(poolHash(pool));
      if (opt.keepStates) run.states.push_back(pool);
      if (opt.checkFootprint) {
        if (auto e = checkFootprint(pool)) {
          run.outcome = ParRun::Outcome::Stuck;
          run.error = "footprint: " + *e;
          break;
        }
      }
    }
  } catch (const SamError& e) {
    run.outcome = ParRun::Outcome::Stuck;
    run.error = toString(e.kind) + ": " + e.what();
  }
  run.heapLeak = pool.threads.empty() && !pool.heap.empty();
  run.digest = run.events.digest();
  run.final = std::move(pool);
  return run;
}

std::vector<ParRun> runConcurrent(const Process& p, const std::vector<std::uint64_t>& seeds,
                                  const ParOptions& opt) {
  std::vector<ParRun> out;
  out.reserve(seeds.size());
  for (auto seed : seeds) out.push_back(runConcurrent(p, Scheduler::randomSeeded(seed), opt));
  return out;
}

Exploration exploreConcurrent(const Process& p, std::size_t bound) {
  Exploration out;
  struct Item {
    Pool pool;
    Events ev;
  };
  std::vector<Item> stack;
  std::set<std::string> seen;
  auto key = [](const Item& it) { return stateKey(it.pool.threads, it.pool.heap) + "/" + hashHex(it.ev.digest()); };
  stack.push_back({loadPool(p), {}});
  seen.insert(key(stack.back()));
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    ++out.states;
    if (it.pool.threads.empty()) {
      ++out.halted;
      out.digests.insert(it.ev.digest());
      if (!it.pool.heap.empty()) ++out.leaks;
      continue;
    }
    bool any = false;
    for (std::size_t i = 0; i < it.pool.threads.size(); ++i) {
      Item next = it;
      std::optional<std::string> rule;
      try {
        rule = stepThread(next.pool, i, &next.ev);
      } catch (const SamError& e) {
        ++out.stuck;
        if (out.firstError.empty()) out.firstError = toString(e.kind) + ": " + e.what();
        any = true;
        continue;
      }
      if (!rule) continue;
      any = true;
      if (!seen.insert(key(next)).second) continue;
      if (seen.size() > bound) {
        out.complete = false;
        continue;
      }
      stack.push_back(std::move(next));
    }
    if (!any) ++out.allBlocked;
  }
  return out;
}

std::string traceJsonl(const ParRun& run) {
  std::string out;
  for (std::size_t i = 0; i < run.hashes.size(); ++i) {
    nlohmann::ordered_json j;
    j["step"] = i;
    if (i == 0) {
      j["rule"] = nullptr;
    } else {
      j["rule"] = run.steps[i - 1].rule;
      j["thread"] = run.steps[i - 1].thread;
    }
    j["hash"] = hashHex(run.hashes[i]);
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace svm
