#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sessionvm/frontend.hpp"
#include "sessionvm/harness.hpp"

namespace svm {

namespace {

// ---- types ----------------------------------------------------------------

// Nonempty label subsets in a fixed order.
std::vector<std::vector<std::string>> labelSubsets(const std::vector<std::string>& labels) {
  std::vector<std::vector<std::string>> out;
  std::size_t n = labels.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(labels[i]);
    out.push_back(std::move(s));
  }
  return out;
}

// Ways to write `total` as an ordered sum of k parts, each >= lo.
void compositions(std::size_t total, std::size_t k, std::size_t lo, std::vector<std::size_t>& cur,
                  std::vector<std::vector<std::size_t>>& out) {
  if (k == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (std::size_t v = lo; v + lo * (k - 1) <= total; ++v) {
    cur.push_back(v);
    compositions(total - v, k - 1, lo, cur, out);
    cur.pop_back();
  }
}

std::vector<std::vector<std::size_t>> compositions(std::size_t total, std::size_t k, std::size_t lo) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  compositions(total, k, lo, cur, out);
  return out;
}

class TypeTable {
 public:
  explicit TypeTable(std::vector<std::string> labels) : labels_(std::move(labels)) {}

  const std::vector<Type>& exact(std::size_t n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    std::vector<Type> out;
    if (n == 1) {
      out = {Type::one(), Type::bot()};
    } else if (n >= 2) {
      for (const auto& t : exact(n - 1)) out.push_back(Type::bang(t));
      for (const auto& t : exact(n - 1)) out.push_back(Type::quest(t));
      for (bool plus : {true, false}) {
        for (const auto& ls : labelSubsets(labels_)) {
          for (const auto& sizes : compositions(n - 1, ls.size(), 1)) {
            std::vector<Type::Branches> acc{{}};
            for (std::size_t i = 0; i < ls.size(); ++i) {
              std::vector<Type::Branches> next;
              for (const auto& b : acc)
                for (const auto& t : exact(sizes[i])) {
                  auto c = b;
                  c[ls[i]] = t;
                  next.push_back(std::move(c));
                }
              acc = std::move(next);
            }
            for (auto& b : acc) out.push_back(plus ? Type::plus(std::move(b)) : Type::with(std::move(b)));
          }
        }
      }
      if (n >= 3) {
        for (std::size_t l = 1; l <= n - 2; ++l) {
          std::size_t r = n - 1 - l;
          for (const auto& a : exact(l))
            for (const auto& b : exact(r)) out.push_back(Type::tensor(a, b));
          for (const auto& a : exact(l))
            for (const auto& b : exact(r)) out.push_back(Type::par(a, b));
        }
        for (const auto& b : exact(n - 2)) out.push_back(Type::tensor(Type::litInt(), b));
        for (const auto& b : exact(n - 2)) out.push_back(Type::par(Type::dualLitInt(), b));
      }
    }
    return memo_.emplace(n, std::move(out)).first->second;
  }

 private:
  std::vector<std::string> labels_;
  std::map<std::size_t, std::vector<Type>> memo_;
};

Name binder(std::size_t k) { return Name("b" + std::to_string(k)); }

std::vector<Process> dedupSorted(std::vector<Process> v) {
  std::map<std::string, Process> m;
  for (auto& p : v) m.emplace(alphaKey(p), std::move(p));
  std::vector<Process> out;
  out.reserve(m.size());
  for (auto& [k, p] : m) out.push_back(std::move(p));
  return out;
}

// ---- brute-force oracle ---------------------------------------------------

// Every term with m non-inert nodes whose free names lie in {b0..b(s-1)}.
// Binders are b(s). The only pruning is that a freshly bound linear name must
// occur in the subterm that has to consume it.
class RawTerms {
 public:
  RawTerms(const Alphabet& a) : a_(a), cutTypes_(typeAlphabet(a.cutTypeSize, a.labels)) {}

  const std::vector<Process>& get(std::size_t m, std::size_t s) {
    auto key = std::make_pair(m, s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Process> out;
    each(m, s, [&](Process p) { out.push_back(std::move(p)); });
    return memo_.emplace(key, std::move(out)).first->second;
  }

  template <class F>
  void each(std::size_t m, std::size_t s, F&& emit) {
    if (m == 0) {
      emit(Process::inact());
      return;
    }
    const Name b = binder(s);
    auto with = [&](std::size_t k, std::size_t scope, const Name* must) {
      std::vector<Process> v;
      for (const auto& p : get(k, scope))
        if (!must || occursFree(p, *must)) v.push_back(p);
      return v;
    };
    // mix
    for (std::size_t m1 = 1; m1 + 1 < m; ++m1) {
      const auto& ps = get(m1, s);
      const auto& qs = get(m - 1 - m1, s);
      for (const auto& p : ps)
        for (const auto& q : qs) emit(Process::mix(p, q));
    }
    // cut, cut!
    for (std::size_t m1 = 0; m1 + 1 <= m; ++m1) {
      std::size_t m2 = m - 1 - m1;
      auto ps = with(m1, s + 1, &b);
      if (ps.empty()) continue;
      auto qsCut = with(m2, s + 1, &b);
      auto qsBang = with(m2, s + 1, nullptr);
      for (const auto& t : cutTypes_) {
        for (const auto& p : ps)
          for (const auto& q : qsCut) emit(Process::cut(p, b, t, q));
        for (const auto& p : ps)
          for (const auto& q : qsBang) emit(Process::cutBang(b, p, b, t, q));
      }
    }
    for (std::size_t i = 0; i < s; ++i) {
      const Name x = binder(i);
      if (m == 1) {
        for (std::size_t j = 0; j < s; ++j) emit(Process::fwd(x, binder(j)));
        emit(Process::close(x));
      }
      for (const auto& p : get(m - 1, s)) {
        emit(Process::wait(x, p));
        emit(Process::quest(x, p));
        for (const auto& l : a_.labels) emit(Process::select(l, x, p));
      }
      for (const auto& p : get(m - 1, s + 1)) emit(Process::recvLit(x, b, p));
      for (auto k : a_.literals)
        for (const auto& p : get(m - 1, s)) emit(Process::sendLit(x, k, p));
      for (const auto& p : with(m - 1, s + 1, &b)) {
        emit(Process::recv(x, b, p));
        emit(Process::server(x, b, p));
        emit(Process::call(x, b, p));
      }
      for (std::size_t m1 = 1; m1 <= m - 1; ++m1) {
        auto ps = with(m1, s + 1, &b);
        const auto& qs = get(m - 1 - m1, s);
        for (const auto& p : ps)
          for (const auto& q : qs) emit(Process::send(x, b, p, q));
      }
      for (const auto& ls : labelSubsets(a_.labels)) {
        for (const auto& sizes : compositions(m - 1, ls.size(), 0)) {
          std::vector<Process::Branches> acc{{}};
          for (std::size_t k = 0; k < ls.size(); ++k) {
            std::vector<Process::Branches> next;
            for (const auto& br : acc)
              for (const auto& p : get(sizes[k], s)) {
                auto c = br;
                c[ls[k]] = p;
                next.push_back(std::move(c));
              }
            acc = std::move(next);
          }
          for (auto& br : acc) emit(Process::caseOf(x, std::move(br)));
        }
      }
    }
  }

 private:
  Alphabet a_;
  std::vector<Type> cutTypes_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Process>> memo_;
};

// ---- type-directed enumerator ---------------------------------------------

std::string ctxKey(const Context& c) {
  std::string s;
  for (const auto& [n, t] : c) s += n.str() + ":" + t.str() + ";";
  return s;
}

class Enumerator {
 public:
  explicit Enumerator(const Alphabet& a) : a_(a), cutTypes_(typeAlphabet(a.cutTypeSize, a.labels)) {}

  // P |- delta; gamma with exactly m non-inert nodes. Binders are b(s).
  const std::vector<Process>& gen(std::size_t m, const Context& delta, const Context& gamma, std::size_t s) {
    std::string key = std::to_string(m) + "/" + std::to_string(s) + "/" + ctxKey(delta) + "/" + ctxKey(gamma);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Process> out;
    build(m, delta, gamma, s, out);
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  static std::vector<std::pair<Context, Context>> splits(const Context& d) {
    std::vector<std::pair<Name, Type>> items(d.begin(), d.end());
    std::vector<std::pair<Context, Context>> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << items.size()); ++mask) {
      Context l, r;
      for (std::size_t i = 0; i < items.size(); ++i)
        (mask & (std::size_t{1} << i) ? l : r).insert(items[i]);
      out.emplace_back(std::move(l), std::move(r));
    }
    return out;
  }

  static Context plus(Context c, const Name& n, const Type& t) {
    c[n] = t;
    return c;
  }

  void build(std::size_t m, const Context& delta, const Context& gamma, std::size_t s, std::vector<Process>& out) {
    if (m == 0) {
      if (delta.empty()) out.push_back(Process::inact());
      return;
    }
    // every linear name needs a node, a forwarder takes two
    if (2 * m < delta.size()) return;
    const Name b = binder(s);

    for (std::size_t m1 = 1; m1 + 1 < m; ++m1) {
      for (const auto& [d1, d2] : splits(delta)) {
        const auto& ps = gen(m1, d1, gamma, s);
        if (ps.empty()) continue;
        const auto& qs = gen(m - 1 - m1, d2, gamma, s);
        for (const auto& p : ps)
          for (const auto& q : qs) out.push_back(Process::mix(p, q));
      }
    }
    if (m == 1 && delta.size() == 2) {
      auto it = delta.begin();
      auto [x, a] = *it++;
      auto [y, c] = *it;
      if (dual(a) == c) {
        out.push_back(Process::fwd(x, y));
        out.push_back(Process::fwd(y, x));
      }
    }
    for (const auto& t : cutTypes_) {
      Type dt = dual(t);
      for (std::size_t m1 = 1; m1 + 1 < m; ++m1) {
        for (const auto& [d1, d2] : splits(delta)) {
          const auto& ps = gen(m1, plus(d1, b, t), gamma, s + 1);
          if (ps.empty()) continue;
          const auto& qs = gen(m - 1 - m1, plus(d2, b, dt), gamma, s + 1);
          for (const auto& p : ps)
            for (const auto& q : qs) out.push_back(Process::cut(p, b, t, q));
        }
      }
      for (std::size_t m1 = 1; m1 <= m - 1; ++m1) {
        const auto& ps = gen(m1, {{b, t}}, gamma, s + 1);
        if (ps.empty()) continue;
        const auto& qs = gen(m - 1 - m1, delta, plus(gamma, b, dt), s + 1);
        for (const auto& p : ps)
          for (const auto& q : qs) out.push_back(Process::cutBang(b, p, b, t, q));
      }
    }
    for (const auto& [x, t] : gamma) {
      if (delta.count(x)) continue;
      for (const auto& p : gen(m - 1, plus(delta, b, t), gamma, s + 1)) out.push_back(Process::call(x, b, p));
    }
    for (const auto& [x, t] : delta) {
      Context rest = delta;
      rest.erase(x);
      switch (t.kind()) {
        case TypeKind::One:
          if (m == 1 && rest.empty()) out.push_back(Process::close(x));
          break;
        case TypeKind::Bot:
          for (const auto& p : gen(m - 1, rest, gamma, s)) out.push_back(Process::wait(x, p));
          break;
        case TypeKind::Tensor:
          if (t.left().kind() == TypeKind::Int)
            for (auto k : a_.literals)
              for (const auto& p : gen(m - 1, plus(rest, x, t.right()), gamma, s))
                out.push_back(Process::sendLit(x, k, p));
          for (std::size_t m1 = 1; m1 <= m - 1; ++m1) {
            for (const auto& [d1, d2] : splits(rest)) {
              const auto& ps = gen(m1, plus(d1, b, t.left()), gamma, s + 1);
              if (ps.empty()) continue;
              const auto& qs = gen(m - 1 - m1, plus(d2, x, t.right()), gamma, s);
              for (const auto& p : ps)
                for (const auto& q : qs) out.push_back(Process::send(x, b, p, q));
            }
          }
          break;
        case TypeKind::Par: {
          Context r2 = plus(rest, x, t.right());
          if (t.left().kind() == TypeKind::DualInt)
            for (const auto& p : gen(m - 1, r2, gamma, s + 1)) out.push_back(Process::recvLit(x, b, p));
          for (const auto& p : gen(m - 1, plus(r2, b, t.left()), gamma, s + 1))
            out.push_back(Process::recv(x, b, p));
          break;
        }
        case TypeKind::Plus:
          for (const auto& [l, a] : t.branches()) {
            if (std::find(a_.labels.begin(), a_.labels.end(), l) == a_.labels.end()) continue;
            for (const auto& p : gen(m - 1, plus(rest, x, a), gamma, s)) out.push_back(Process::select(l, x, p));
          }
          break;
        case TypeKind::With: {
          std::vector<std::pair<std::string, Type>> bs(t.branches().begin(), t.branches().end());
          for (const auto& sizes : compositions(m - 1, bs.size(), 0)) {
            std::vector<Process::Branches> acc{{}};
            for (std::size_t k = 0; k < bs.size() && !acc.empty(); ++k) {
              std::vector<Process::Branches> next;
              for (const auto& br : acc)
                for (const auto& p : gen(sizes[k], plus(rest, x, bs[k].second), gamma, s)) {
                  auto c = br;
                  c[bs[k].first] = p;
                  next.push_back(std::move(c));
                }
              acc = std::move(next);
            }
            for (auto& br : acc) out.push_back(Process::caseOf(x, std::move(br)));
          }
          break;
        }
        case TypeKind::Bang:
          if (rest.empty())
            for (const auto& p : gen(m - 1, {{b, t.left()}}, gamma, s + 1)) out.push_back(Process::server(x, b, p));
          break;
        case TypeKind::Quest:
          for (const auto& p : gen(m - 1, rest, plus(gamma, x, t.left()), s)) out.push_back(Process::quest(x, p));
          break;
        default: break;
      }
    }
  }

  Alphabet a_;
  std::vector<Type> cutTypes_;
  std::map<std::string, std::vector<Process>> memo_;
};

// ---- random typed programs ------------------------------------------------

class RandomGen {
 public:
  RandomGen(std::uint64_t seed, const RandomConfig& cfg) : rng_(seed), cfg_(cfg), fuel_(cfg.fuel) {}

  Process program() { return build({}, {}); }

 private:
  bool root_ = true;

  std::size_t roll(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(rng_() % n); }
  bool chance(std::size_t percent) { return roll(100) < percent; }
  Name fresh() { return Name("x" + std::to_string(counter_++)); }

  Type type(std::size_t budget) {
    if (budget < 2) return chance(50) ? Type::one() : Type::bot();
    std::size_t k = roll(budget >= 3 ? 10 : 6);
    switch (k) {
      case 0: return Type::one();
      case 1: return Type::bot();
      case 2: return Type::bang(type(budget - 1));
      case 3: return Type::quest(type(budget - 1));
      case 4:
      case 5: {
        std::size_t n = 1 + roll(std::min(cfg_.labels.size(), budget - 1));
        std::vector<std::string> ls = cfg_.labels;
        for (std::size_t i = ls.size(); i > 1; --i) std::swap(ls[i - 1], ls[roll(i)]);
        Type::Branches bs;
        for (std::size_t i = 0; i < n; ++i) bs[ls[i]] = type((budget - 1) / n);
        return k == 4 ? Type::plus(std::move(bs)) : Type::with(std::move(bs));
      }
      case 6:
      case 7: {
        std::size_t l = 1 + roll(budget - 2);
        Type a = type(l), c = type(budget - 1 - l);
        return k == 6 ? Type::tensor(a, c) : Type::par(a, c);
      }
      case 8: return Type::tensor(Type::litInt(), type(budget - 2));
      default: return Type::par(Type::dualLitInt(), type(budget - 2));
    }
  }

  Type cutType() { return type(1 + roll(cfg_.maxTypeSize)); }

  Process cut(Process p, const Name& x, const Type& a, Process q) {
    if (cfg_.pcutRate > 0 && roll(1000) < static_cast<std::size_t>(cfg_.pcutRate * 1000))
      return Process::pcut(std::move(p), x, a, std::move(q));
    return Process::cut(std::move(p), x, a, std::move(q));
  }

  std::pair<Context, Context> split(const Context& d, bool bothNonEmpty) {
    for (;;) {
      Context l, r;
      for (const auto& e : d) (chance(50) ? l : r).insert(e);
      if (!bothNonEmpty || (!l.empty() && !r.empty()) || d.size() < 2) return {l, r};
    }
  }

  static Context with(Context c, const Name& n, const Type& t) {
    c[n] = t;
    return c;
  }

  bool spend() {
    if (fuel_ == 0) return false;
    --fuel_;
    return true;
  }

  Process build(const Context& delta, const Context& gamma) {
    if (delta.empty()) {
      // the root is always a cut, otherwise a third of the corpus would be 0
      bool top = root_;
      root_ = false;
      std::size_t r = top ? 30 + roll(55) : roll(100);
      if (r < 30 || !spend()) return Process::inact();
      if (r < 70) {
        Name x = fresh();
        Type a = cutType();
        Process p = build({{x, a}}, gamma);
        Process q = build({{x, dual(a)}}, gamma);
        return cut(std::move(p), x, a, std::move(q));
      }
      if (r < 85 || gamma.empty()) {
        Name y = fresh(), x = fresh();
        Type a = cutType();
        Process p = build({{y, a}}, gamma);
        Process q = build({}, with(gamma, x, dual(a)));
        return Process::cutBang(y, std::move(p), x, a, std::move(q));
      }
      return call(delta, gamma);
    }
    if (chance(12) && spend()) {
      auto [d1, d2] = split(delta, false);
      Name x = fresh();
      Type a = cutType();
      Process p = build(with(d1, x, a), gamma);
      Process q = build(with(d2, x, dual(a)), gamma);
      return cut(std::move(p), x, a, std::move(q));
    }
    if (delta.size() >= 2 && chance(10)) {
      auto [d1, d2] = split(delta, true);
      return Process::mix(build(d1, gamma), build(d2, gamma));
    }
    if (delta.size() == 2 && chance(40)) {
      auto it = delta.begin();
      auto [x, a] = *it++;
      auto [y, c] = *it;
      if (dual(a) == c) return chance(50) ? Process::fwd(x, y) : Process::fwd(y, x);
    }
    if (!gamma.empty() && chance(10) && spend()) return call(delta, gamma);
    auto it = delta.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(roll(delta.size())));
    return act(it->first, it->second, delta, gamma);
  }

  Process call(const Context& delta, const Context& gamma) {
    auto it = gamma.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(roll(gamma.size())));
    Name z = fresh();
    return Process::call(it->first, z, build(with(delta, z, it->second), gamma));
  }

  Process act(const Name& x, const Type& t, const Context& delta, const Context& gamma) {
    Context rest = delta;
    rest.erase(x);
    auto alone = [&](Process p) {
      if (rest.empty()) return p;
      Process q = build(rest, gamma);
      return chance(50) ? Process::mix(std::move(p), std::move(q)) : Process::mix(std::move(q), std::move(p));
    };
    switch (t.kind()) {
      case TypeKind::One: return alone(Process::close(x));
      case TypeKind::Bot: return Process::wait(x, build(rest, gamma));
      case TypeKind::Tensor: {
        if (t.left().kind() == TypeKind::Int)
          return Process::sendLit(x, static_cast<std::int64_t>(roll(static_cast<std::size_t>(cfg_.maxLiteral) + 1)),
                                  build(with(rest, x, t.right()), gamma));
        auto [d1, d2] = split(rest, false);
        Name y = fresh();
        Process p = build(with(d1, y, t.left()), gamma);
        return Process::send(x, y, std::move(p), build(with(d2, x, t.right()), gamma));
      }
      case TypeKind::Par: {
        Name y = fresh();
        if (t.left().kind() == TypeKind::DualInt)
          return Process::recvLit(x, y, build(with(rest, x, t.right()), gamma));
        Context d = with(rest, x, t.right());
        d[y] = t.left();
        return Process::recv(x, y, build(d, gamma));
      }
      case TypeKind::Plus: {
        auto it = t.branches().begin();
        std::advance(it, static_cast<std::ptrdiff_t>(roll(t.branches().size())));
        return Process::select(it->first, x, build(with(rest, x, it->second), gamma));
      }
      case TypeKind::With: {
        Process::Branches bs;
        for (const auto& [l, a] : t.branches()) bs[l] = build(with(rest, x, a), gamma);
        return Process::caseOf(x, std::move(bs));
      }
      case TypeKind::Bang: {
        Name y = fresh();
        return alone(Process::server(x, y, build({{y, t.left()}}, gamma)));
      }
      case TypeKind::Quest: return Process::quest(x, build(rest, with(gamma, x, t.left())));
      default: throw std::logic_error("random generator: no action for " + t.str());
    }
  }

  std::mt19937_64 rng_;
  RandomConfig cfg_;
  std::size_t fuel_;
  std::uint64_t counter_ = 0;
};

bool hasPCut(const Process& p) {
  const ProcNode& n = p.node();
  if (n.kind == ProcKind::PCut) return true;
  if (!n.p.isInact() && hasPCut(n.p)) return true;
  if (!n.q.isInact() && hasPCut(n.q)) return true;
  for (const auto& [l, b] : n.branches)
    if (hasPCut(b)) return true;
  return false;
}

}  // namespace

std::vector<Type> typeAlphabet(std::size_t maxSize, const std::vector<std::string>& labels) {
  TypeTable t(labels);
  std::vector<Type> out;
  for (std::size_t n = 1; n <= maxSize; ++n)
    for (const auto& ty : t.exact(n)) out.push_back(ty);
  return out;
}

std::vector<Process> enumerateExact(std::size_t size, const Alphabet& a) {
  Enumerator e(a);
  std::vector<Process> out;
  if (size == 0) return out;
  if (size == 1) out.push_back(Process::inact());
  for (const auto& p : e.gen(size, {}, {}, 0)) out.push_back(p);
  return dedupSorted(std::move(out));
}

std::vector<Process> bruteForceExact(std::size_t size, const Alphabet& a) {
  RawTerms raw(a);
  std::vector<Process> out;
  if (size == 0) return out;
  if (size == 1) out.push_back(Process::inact());
  raw.each(size, 0, [&](Process p) {
    if (typechecks(p)) out.push_back(std::move(p));
  });
  return dedupSorted(std::move(out));
}

Process randomProgram(std::uint64_t seed, const RandomConfig& cfg) {
  RandomGen g(seed, cfg);
  Process p = g.program();
  if (!typechecks(p)) throw std::logic_error("random generator produced an ill-typed program: " + prettyPrint(p));
  return p;
}

Corpus generate(std::size_t sizeBound, std::uint64_t seed, std::size_t randomCount, const Alphabet& a) {
  Corpus c;
  Enumerator e(a);
  for (std::size_t n = 1; n <= sizeBound; ++n) {
    std::vector<Process> ps;
    if (n == 1) ps.push_back(Process::inact());
    for (const auto& p : e.gen(n, {}, {}, 0)) ps.push_back(p);
    ps = dedupSorted(std::move(ps));
    for (std::size_t i = 0; i < ps.size(); ++i)
      c.push_back({"enum-" + std::to_string(n) + "-" + std::to_string(i), ps[i], "enum"});
  }
  for (std::size_t i = 0; i < randomCount; ++i) {
    std::uint64_t s = seed + i;
    c.push_back({"rand-" + std::to_string(s), randomProgram(s), "random"});
  }
  return c;
}

Corpus pcutCorpus(std::uint64_t seed, std::size_t count) {
  RandomConfig cfg;
  cfg.pcutRate = 0.5;
  cfg.fuel = 8;
  Corpus c;
  std::set<std::string> seen;
  for (std::uint64_t s = seed; c.size() < count; ++s) {
    Process p = randomProgram(s, cfg);
    if (!hasPCut(p) || !seen.insert(alphaKey(p)).second) continue;
    c.push_back({"pcut-" + std::to_string(s), p, "pcut"});
  }
  std::stable_sort(c.begin(), c.end(), [](const CorpusEntry& a, const CorpusEntry& b) {
    return processSize(a.program) < processSize(b.program);
  });
  return c;
}

Corpus loadPrograms(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".cll") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  Corpus c;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    auto r = parse({ss.str(), f.filename().string()});
    if (!r.ok()) throw std::runtime_error(r.diagnostics.front().render(f.string(), ss.str()));
    if (!typechecks(*r.process)) throw std::runtime_error(f.string() + ": does not typecheck");
    c.push_back({"file-" + f.stem().string(), *r.process, "file"});
  }
  return c;
}

}  // namespace svm
