#include "sessionvm/typecheck.hpp"

#include <functional>

#include "json.hpp"


namespace svm {

std::string toString(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::LinearityViolation: return "LinearityViolation";
    case TypeErrorKind::UnknownName: return "UnknownName";
    case TypeErrorKind::PolarityMismatch: return "PolarityMismatch";
    case TypeErrorKind::EmptyContextRequired: return "EmptyContextRequired";
    case TypeErrorKind::TypeMismatch: return "TypeMismatch";
    case TypeErrorKind::LabelMismatch: return "LabelMismatch";
    case TypeErrorKind::QueueMalformed: return "QueueMalformed";
  }
  return "TypeError";
}

std::string QueueValueType::str() const {
  switch (kind) {
    case Kind::Hole: return "[]";
    case Kind::Full: return full.str();
    case Kind::Par: return left.str() + " par []";
    case Kind::With: {
      std::string s = "&{";
      bool first = true;
      for (const auto& [l, t] : branches) {
        if (!first) s += ", ";
        first = false;
        s += "#" + l + ": " + (l == selected ? std::string("[]") : t.str());
      }
      return s + "}";
    }
  }
  return "?";
}

std::string TypeReport::json() const {
  nlohmann::ordered_json j;
  j["verdict"] = accept ? "Accept" : "Reject";
  if (error) {
    j["error"] = {{"kind", toString(error->kind)},
                  {"rule", error->rule},
                  {"message", error->message},
                  {"path", error->path}};
  }
  auto rs = nlohmann::ordered_json::array();
  for (const auto& r : rules) rs.push_back({{"path", r.path}, {"rule", r.rule}});
  j["rules"] = rs;
  auto res = nlohmann::ordered_json::object();
  for (const auto& [n, t] : residual) res[n.str()] = t.str();
  j["residual"] = res;
  return j.dump(2);
}

namespace {

struct Failure {
  TypeError err;
};

[[noreturn]] void fail(TypeErrorKind k, std::string rule, std::string msg, std::string path) {
  throw Failure{TypeError{k, std::move(rule), std::move(msg), std::move(path)}};
}

class Checker {
 public:
  Context delta;
  std::vector<RuleUse> rules;
  NameSet consumed;
  bool recordRules = true;

  void proc(const Process& p, const Context& gamma, const std::string& path) {
    const ProcNode& n = p.node();
    switch (n.kind) {
      case ProcKind::Inact: use(path, "[T0]"); break;
      case ProcKind::Mix:
        use(path, "[Tmix]");
        proc(n.p, gamma, path + ".0");
        proc(n.q, gamma, path + ".1");
        break;
      case ProcKind::Fwd: {
        use(path, "[Tfwd]");
        Type a = take(n.x, gamma, "[Tfwd]", path);
        Type b = take(n.y, gamma, "[Tfwd]", path);
        if (a.isVoid() || b.isVoid() || dual(a) != b)
          fail(TypeErrorKind::TypeMismatch, "[Tfwd]",
               "forwarder endpoints " + n.x.str() + ":" + a.str() + " and " + n.y.str() + ":" +
                   b.str() + " are not dual",
               path);
        break;
      }
      case ProcKind::Cut:
      case ProcKind::PCut: {
        use(path, "[Tcut]");
        if (n.tx.isVoid()) fail(TypeErrorKind::TypeMismatch, "[Tcut]", "cut annotated void", path);
        Type da = dual(n.tx);
        scoped(n.x, n.tx, gamma, "[Tcut]", path, [&](const Context& g) { proc(n.p, g, path + ".0"); });
        scoped(n.x, da, gamma, "[Tcut]", path, [&](const Context& g) { proc(n.q, g, path + ".1"); });
        break;
      }
      case ProcKind::BufCut: bufCut(p, gamma, path, nullptr); break;
      case ProcKind::CutBang: {
        use(path, "[Tcut!]");
        if (n.tx.isVoid()) fail(TypeErrorKind::TypeMismatch, "[Tcut!]", "cut! annotated void", path);
        isolated(n.p, n.y, n.tx, gamma, "[Tcut!]", path + ".0");
        Context g = gamma;
        hideLinear(n.x);
        g[n.x] = dual(n.tx);
        proc(n.q, g, path + ".1");
        break;
      }
      case ProcKind::Close: {
        use(path, "[T1]");
        Type a = take(n.x, gamma, "[T1]", path);
        expectKind(a, TypeKind::One, n.x, "[T1]", path);
        break;
      }
      case ProcKind::Wait: {
        use(path, "[T⊥]");
        Type a = take(n.x, gamma, "[T⊥]", path);
        expectKind(a, TypeKind::Bot, n.x, "[T⊥]", path);
        proc(n.p, gamma, path + ".0");
        break;
      }
      case ProcKind::Send: {
        use(path, "[T⊗]");
        Type a = take(n.x, gamma, "[T⊗]", path);
        expectKind(a, TypeKind::Tensor, n.x, "[T⊗]", path);
        scoped(n.y, a.left(), gamma, "[T⊗]", path, [&](const Context& g) { proc(n.p, g, path + ".0"); });
        restore(n.x, a.right());
        proc(n.q, gamma, path + ".1");
        consumedBy(n.x, "[T⊗]", path);
        break;
      }
      case ProcKind::Recv: {
        use(path, "[T⅋]");
        Type a = take(n.x, gamma, "[T⅋]", path);
        expectKind(a, TypeKind::Par, n.x, "[T⅋]", path);
        restore(n.x, a.right());
        if (n.y == n.x)
          fail(TypeErrorKind::LinearityViolation, "[T⅋]", "received name shadows its channel", path);
        scoped(n.y, a.left(), gamma, "[T⅋]", path, [&](const Context& g) { proc(n.p, g, path + ".0"); });
        consumedBy(n.x, "[T⅋]", path);
        break;
      }
      case ProcKind::SendLit: {
        use(path, "[T⊗]");
        Type a = take(n.x, gamma, "[T⊗]", path);
        expectKind(a, TypeKind::Tensor, n.x, "[T⊗]", path);
        expectKind(a.left(), TypeKind::Int, n.x, "[T⊗]", path);
        restore(n.x, a.right());
        proc(n.p, gamma, path + ".0");
        consumedBy(n.x, "[T⊗]", path);
        break;
      }
      case ProcKind::RecvLit: {
        use(path, "[T⅋]");
        Type a = take(n.x, gamma, "[T⅋]", path);
        expectKind(a, TypeKind::Par, n.x, "[T⅋]", path);
        expectKind(a.left(), TypeKind::DualInt, n.x, "[T⅋]", path);
        restore(n.x, a.right());
        if (delta.count(n.y) || gamma.count(n.y) || n.y == n.x)
          fail(TypeErrorKind::LinearityViolation, "[T⅋]", "integer binder " + n.y.str() + " shadows a session name", path);
        proc(n.p, gamma, path + ".0");
        consumedBy(n.x, "[T⅋]", path);
        break;
      }
      case ProcKind::Select: {
        use(path, "[T⊕]");
        Type a = take(n.x, gamma, "[T⊕]", path);
        expectKind(a, TypeKind::Plus, n.x, "[T⊕]", path);
        auto it = a.branches().find(n.label);
        if (it == a.branches().end())
          fail(TypeErrorKind::LabelMismatch, "[T⊕]", "label #" + n.label + " not in " + a.str(), path);
        restore(n.x, it->second);
        proc(n.p, gamma, path + ".0");
        consumedBy(n.x, "[T⊕]", path);
        break;
      }
      case ProcKind::Case: {
        use(path, "[T&]");
        Type a = take(n.x, gamma, "[T&]", path);
        expectKind(a, TypeKind::With, n.x, "[T&]", path);
        if (a.branches().size() != n.branches.size())
          fail(TypeErrorKind::LabelMismatch, "[T&]", "case labels do not match " + a.str(), path);
        Context start = delta;
        NameSet startConsumed = consumed;
        std::optional<Context> result;
        NameSet unionConsumed = consumed;
        std::size_t i = 0;
        for (const auto& [l, b] : n.branches) {
          auto it = a.branches().find(l);
          if (it == a.branches().end())
            fail(TypeErrorKind::LabelMismatch, "[T&]", "label #" + l + " not in " + a.str(), path);
          delta = start;
          consumed = startConsumed;
          restore(n.x, it->second);
          proc(b, gamma, path + "." + std::to_string(i++));
          consumedBy(n.x, "[T&]", path);
          if (result && *result != delta)
            fail(TypeErrorKind::LinearityViolation, "[T&]", "case branches consume different names", path);
          result = delta;
          unionConsumed.insert(consumed.begin(), consumed.end());
        }
        delta = *result;
        consumed = unionConsumed;
        break;
      }
      case ProcKind::Server: {
        use(path, "[T!]");
        Type a = take(n.x, gamma, "[T!]", path);
        expectKind(a, TypeKind::Bang, n.x, "[T!]", path);
        isolated(n.p, n.y, a.left(), gamma, "[T!]", path + ".0");
        break;
      }
      case ProcKind::Quest: {
        use(path, "[T?]");
        Type a = take(n.x, gamma, "[T?]", path);
        expectKind(a, TypeKind::Quest, n.x, "[T?]", path);
        Context g = gamma;
        g[n.x] = a.left();
        proc(n.p, g, path + ".0");
        break;
      }
      case ProcKind::Call: {
        use(path, "[Tcall]");
        auto it = gamma.find(n.x);
        if (it == gamma.end() || delta.count(n.x)) {
          if (delta.count(n.x))
            fail(TypeErrorKind::LinearityViolation, "[Tcall]", "call on linear name " + n.x.str(), path);
          fail(TypeErrorKind::UnknownName, "[Tcall]", "unknown unrestricted name " + n.x.str(), path);
        }
        Type a = it->second;
        scoped(n.y, a, gamma, "[Tcall]", path, [&](const Context& g) { proc(n.p, g, path + ".0"); });
        break;
      }
    }
  }

  // Buffered cut via inversion; fills inv when given.
  void bufCut(const Process& c, const Context& gamma, const std::string& path, BufCutInversion* inv) {
    const ProcNode& n = c.node();
    const bool wl = n.writer == Side::Left;
    const Name& wn = wl ? n.x : n.y;
    const Type& wt = wl ? n.tx : n.ty;
    const Process& wp = wl ? n.p : n.q;
    const Name& rn = wl ? n.y : n.x;
    const Type& rt = wl ? n.ty : n.tx;
    const Process& rp = wl ? n.q : n.p;
    (void)rn;
    (void)rp;
    if (rt.isVoid()) fail(TypeErrorKind::PolarityMismatch, "[TcutB]", "reader endpoint typed void", path);
    if (!wt.isVoid() && n.queue.empty() && !isPositive(wt))
      fail(TypeErrorKind::PolarityMismatch, "[TcutB]",
           "empty buffered cut with writer mark on negative endpoint " + wn.str() + ":" + wt.str(), path);
    use(path, n.queue.empty() ? "[TcutB]" : "[TcutB]+inv");

    std::vector<QueueValueType> layers;
    Type cur = rt;
    bool full = false;
    for (std::size_t i = 0; i < n.queue.size(); ++i) {
      const QueueValue& v = n.queue[i];
      const bool last = i + 1 == n.queue.size();
      const std::string vpath = path + ".q" + std::to_string(i);
      switch (v.kind) {
        case QueueValue::Kind::CloseToken: {
          use(vpath, "[Tcut-1]");
          if (!last) fail(TypeErrorKind::QueueMalformed, "[Tcut-1]", "close token is not queue-final", vpath);
          if (!wt.isVoid()) fail(TypeErrorKind::QueueMalformed, "[Tcut-1]", "writer of a closed queue must be void", vpath);
          if (cur.kind() != TypeKind::Bot)
            fail(TypeErrorKind::TypeMismatch, "[Tcut-1]", "close token against " + cur.str(), vpath);
          QueueValueType qt;
          qt.kind = QueueValueType::Kind::Full;
          qt.full = Type::bot();
          layers.push_back(qt);
          full = true;
          break;
        }
        case QueueValue::Kind::ExpClos: {
          use(vpath, "[Tcut!]");
          if (!last) fail(TypeErrorKind::QueueMalformed, "[Tcut!]", "exponential closure is not queue-final", vpath);
          if (!wt.isVoid()) fail(TypeErrorKind::QueueMalformed, "[Tcut!]", "writer of a served queue must be void", vpath);
          if (cur.kind() != TypeKind::Quest)
            fail(TypeErrorKind::TypeMismatch, "[Tcut!]", "exponential closure against " + cur.str(), vpath);
          isolated(v.body, v.bound, dual(cur.left()), gamma, "[Tcut!]", vpath);
          QueueValueType qt;
          qt.kind = QueueValueType::Kind::Full;
          qt.full = cur;
          layers.push_back(qt);
          full = true;
          break;
        }
        case QueueValue::Kind::Label: {
          use(vpath, "[Tcut-⊕]");
          if (cur.kind() != TypeKind::With)
            fail(TypeErrorKind::TypeMismatch, "[Tcut-⊕]", "label against " + cur.str(), vpath);
          auto it = cur.branches().find(v.label);
          if (it == cur.branches().end())
            fail(TypeErrorKind::LabelMismatch, "[Tcut-⊕]", "label #" + v.label + " not in " + cur.str(), vpath);
          QueueValueType qt;
          qt.kind = QueueValueType::Kind::With;
          qt.branches = cur.branches();
          qt.selected = v.label;
          layers.push_back(qt);
          cur = it->second;
          break;
        }
        case QueueValue::Kind::LinClos: {
          use(vpath, "[Tcut-⊗]");
          if (cur.kind() != TypeKind::Par)
            fail(TypeErrorKind::TypeMismatch, "[Tcut-⊗]", "closure against " + cur.str(), vpath);
          if (cur.left().kind() == TypeKind::DualInt)
            fail(TypeErrorKind::TypeMismatch, "[Tcut-⊗]", "closure where an integer is expected", vpath);
          Type zt = dual(cur.left());
          scoped(v.bound, zt, gamma, "[Tcut-⊗]", vpath, [&](const Context& g) { proc(v.body, g, vpath); });
          QueueValueType qt;
          qt.kind = QueueValueType::Kind::Par;
          qt.left = cur.left();
          layers.push_back(qt);
          cur = cur.right();
          break;
        }
        case QueueValue::Kind::Int: {
          use(vpath, "[Tcut-⊗]");
          if (cur.kind() != TypeKind::Par || cur.left().kind() != TypeKind::DualInt)
            fail(TypeErrorKind::TypeMismatch, "[Tcut-⊗]", "integer against " + cur.str(), vpath);
          QueueValueType qt;
          qt.kind = QueueValueType::Kind::Par;
          qt.left = cur.left();
          layers.push_back(qt);
          cur = cur.right();
          break;
        }
      }
    }
    if (!full) {
      if (wt.isVoid())
        fail(TypeErrorKind::QueueMalformed, "[TcutB]",
             "void writer requires a queue ending in a close token or exponential closure (queue nonempty)", path);
      if (dual(wt) != cur)
        fail(TypeErrorKind::TypeMismatch, "[TcutB]",
             "writer type " + wt.str() + " does not match reader residual " + cur.str(), path);
    } else if (!wp.isInact()) {
      fail(TypeErrorKind::QueueMalformed, "[Tcut-1]", "terminated writer must be the inert process", path);
    }

    auto side = [&](bool left) {
      const Name& nm = left ? n.x : n.y;
      const Type& t = left ? n.tx : n.ty;
      const Process& sp = left ? n.p : n.q;
      std::string sub = path + (left ? ".0" : ".1");
      if (t.isVoid()) {
        if (!sp.isInact()) fail(TypeErrorKind::QueueMalformed, "[TcutB]", "void endpoint held by a live process", path);
        if (!occursFree(sp, nm)) proc(sp, gamma, sub);
        return;
      }
      scoped(nm, t, gamma, "[TcutB]", path, [&](const Context& g) { proc(sp, g, sub); });
    };
    side(true);
    side(false);

    if (inv) {
      inv->ok = true;
      inv->writerType = wt;
      inv->readerType = rt;
      inv->valueTypes = layers;
      inv->full = full;
      inv->residualType = full ? Type() : cur;
    }
  }

 private:
  void use(const std::string& path, const char* rule) {
    if (recordRules) rules.push_back({path, rule});
  }

  Type take(const Name& x, const Context& gamma, const char* rule, const std::string& path) {
    auto it = delta.find(x);
    if (it == delta.end()) {
      if (consumed.count(x))
        fail(TypeErrorKind::LinearityViolation, rule, "linear name " + x.str() + " used more than once", path);
      if (gamma.count(x))
        fail(TypeErrorKind::LinearityViolation, rule, "unrestricted name " + x.str() + " used linearly", path);
      fail(TypeErrorKind::UnknownName, rule, "unknown name " + x.str(), path);
    }
    Type t = it->second;
    delta.erase(it);
    consumed.insert(x);
    return t;
  }

  void restore(const Name& x, const Type& t) {
    delta[x] = t;
    consumed.erase(x);
  }

  void hideLinear(const Name&) {}

  // The continuation of a prefix on x must itself use up x.
  void consumedBy(const Name& x, const char* rule, const std::string& path) {
    if (delta.count(x))
      fail(TypeErrorKind::LinearityViolation, rule,
           "continuation does not consume " + x.str() + ":" + delta.at(x).str(), path);
  }

  static void expectKind(const Type& a, TypeKind k, const Name& x, const char* rule, const std::string& path) {
    if (a.kind() != k) fail(TypeErrorKind::TypeMismatch, rule, "name " + x.str() + " has type " + a.str(), path);
  }

  // Binds x:t (shadowing any outer binding) for the duration of f; x must be
  // consumed by f.
  template <class F>
  void scoped(const Name& x, const Type& t, const Context& gamma, const char* rule, const std::string& path, F f) {
    std::optional<Type> saved;
    if (auto it = delta.find(x); it != delta.end()) {
      saved = it->second;
      delta.erase(it);
    }
    bool wasConsumed = consumed.erase(x) > 0;
    delta[x] = t;
    Context g = gamma;
    g.erase(x);
    f(g);
    if (delta.count(x))
      fail(TypeErrorKind::LinearityViolation, rule, "linear name " + x.str() + " is never used", path);
    consumed.erase(x);
    if (saved) delta[x] = *saved;
    if (wasConsumed) consumed.insert(x);
  }

  // Checks p |- y:t; gamma with an otherwise empty linear context.
  void isolated(const Process& p, const Name& y, const Type& t, const Context& gamma, const char* rule,
                const std::string& path) {
    NameSet fn = freeNames(p);
    for (const auto& nm : fn) {
      if (nm != y && delta.count(nm))
        fail(TypeErrorKind::EmptyContextRequired, rule,
             "replicated body uses linear name " + nm.str(), path);
    }
    Context savedDelta = std::move(delta);
    NameSet savedConsumed = std::move(consumed);
    delta.clear();
    consumed.clear();
    scoped(y, t, gamma, rule, path, [&](const Context& g) { proc(p, g, path); });
    if (!delta.empty())
      fail(TypeErrorKind::EmptyContextRequired, rule, "replicated body leaves linear names", path);
    delta = std::move(savedDelta);
    consumed = std::move(savedConsumed);
  }
};

}  // namespace

TypeReport check(const Process& p, const Context& delta, const Context& gamma) {
  TypeReport r;
  Checker c;
  c.delta = delta;
  try {
    c.proc(p, gamma, "0");
    r.residual = c.delta;
    if (!c.delta.empty()) {
      std::string names;
      for (const auto& [n, t] : c.delta) names += (names.empty() ? "" : ", ") + n.str() + ":" + t.str();
      r.error = TypeError{TypeErrorKind::LinearityViolation, "[T0]", "unused linear names: " + names, "0"};
    } else {
      r.accept = true;
    }
  } catch (const Failure& f) {
    r.error = f.err;
    r.residual = c.delta;
  } catch (const IllFormedType& e) {
    r.error = TypeError{TypeErrorKind::TypeMismatch, "", e.what(), "0"};
  }
  r.rules = std::move(c.rules);
  return r;
}

bool typechecks(const Process& p, const Context& delta, const Context& gamma) {
  Checker c;
  c.delta = delta;
  c.recordRules = false;
  try {
    c.proc(p, gamma, "0");
    return c.delta.empty();
  } catch (const Failure&) {
    return false;
  } catch (const IllFormedType&) {
    return false;
  }
}

BufCutInversion invertBufferedCut(const Process& cutTerm, const Context& delta, const Context& gamma) {
  BufCutInversion inv;
  if (cutTerm.kind() != ProcKind::BufCut) {
    inv.error = TypeError{TypeErrorKind::TypeMismatch, "[TcutB]", "not a buffered cut", "0"};
    return inv;
  }
  Checker c;
  c.delta = delta;
  c.recordRules = false;
  try {
    c.bufCut(cutTerm, gamma, "0", &inv);
    if (!c.delta.empty()) {
      inv.ok = false;
      inv.error = TypeError{TypeErrorKind::LinearityViolation, "[TcutB]", "unused linear names", "0"};
    }
  } catch (const Failure& f) {
    inv.ok = false;
    inv.error = f.err;
  }
  return inv;
}

std::optional<std::vector<QueueValueType>> peelReaderType(const Type& reader, const Queue& q, Type* rest) {
  std::vector<QueueValueType> out;
  Type cur = reader;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const QueueValue& v = q[i];
    QueueValueType qt;
    switch (v.kind) {
      case QueueValue::Kind::CloseToken:
        if (cur.kind() != TypeKind::Bot) return std::nullopt;
        qt.kind = QueueValueType::Kind::Full;
        qt.full = cur;
        cur = Type();
        break;
      case QueueValue::Kind::ExpClos:
        if (cur.kind() != TypeKind::Quest) return std::nullopt;
        qt.kind = QueueValueType::Kind::Full;
        qt.full = cur;
        cur = Type();
        break;
      case QueueValue::Kind::Label: {
        if (cur.kind() != TypeKind::With) return std::nullopt;
        auto it = cur.branches().find(v.label);
        if (it == cur.branches().end()) return std::nullopt;
        qt.kind = QueueValueType::Kind::With;
        qt.branches = cur.branches();
        qt.selected = v.label;
        cur = it->second;
        break;
      }
      case QueueValue::Kind::LinClos:
      case QueueValue::Kind::Int:
        if (cur.kind() != TypeKind::Par) return std::nullopt;
        qt.kind = QueueValueType::Kind::Par;
        qt.left = cur.left();
        cur = cur.right();
        break;
    }
    out.push_back(qt);
  }
  if (rest) *rest = cur;
  return out;
}

namespace {

std::optional<Type> synth(const Process& p, const Name& z, const Context& delta, const Context& gamma);

std::optional<Type> synthIn(const Process& p, const Name& z, const Context& delta, const Context& gamma) {
  if (!occursFree(p, z)) return std::nullopt;
  return synth(p, z, delta, gamma);
}

std::optional<Type> synth(const Process& p, const Name& z, const Context& delta, const Context& gamma) {
  const ProcNode& n = p.node();
  auto under = [&](const Process& c, const Name& b) -> std::optional<Type> {
    if (b == z) return std::nullopt;
    return synthIn(c, z, delta, gamma);
  };
  auto both = [&](std::optional<Type> a, std::optional<Type> b) { return a ? a : b; };
  switch (n.kind) {
    case ProcKind::Inact: return std::nullopt;
    case ProcKind::Mix: return both(synthIn(n.p, z, delta, gamma), synthIn(n.q, z, delta, gamma));
    case ProcKind::Fwd: {
      const Name& other = n.x == z ? n.y : n.x;
      auto it = delta.find(other);
      if (it != delta.end() && !it->second.isVoid()) return dual(it->second);
      return std::nullopt;
    }
    case ProcKind::Cut:
    case ProcKind::PCut: return both(under(n.p, n.x), under(n.q, n.x));
    case ProcKind::BufCut: {
      auto r = both(under(n.p, n.x), under(n.q, n.y));
      for (const auto& v : n.queue)
        if (!r && (v.kind == QueueValue::Kind::LinClos || v.kind == QueueValue::Kind::ExpClos))
          r = under(v.body, v.bound);
      return r;
    }
    case ProcKind::CutBang: return both(under(n.p, n.y), under(n.q, n.x));
    default: break;
  }
  if (n.x != z) {
    switch (n.kind) {
      case ProcKind::Wait:
      case ProcKind::Select:
      case ProcKind::Quest:
      case ProcKind::SendLit: return synthIn(n.p, z, delta, gamma);
      case ProcKind::Send: return both(under(n.p, n.y), synthIn(n.q, z, delta, gamma));
      case ProcKind::Recv:
      case ProcKind::Server:
      case ProcKind::Call:
      case ProcKind::RecvLit: return under(n.p, n.y);
      case ProcKind::Case:
        for (const auto& [l, b] : n.branches)
          if (auto t = synthIn(b, z, delta, gamma)) return t;
        return std::nullopt;
      default: return std::nullopt;
    }
  }
  switch (n.kind) {
    case ProcKind::Close: return Type::one();
    case ProcKind::Wait: return Type::bot();
    case ProcKind::Send: {
      auto a = synthIn(n.p, n.y, delta, gamma);
      auto b = synthIn(n.q, z, delta, gamma);
      if (!a || !b) return std::nullopt;
      return Type::tensor(*a, *b);
    }
    case ProcKind::Recv: {
      auto a = synthIn(n.p, n.y, delta, gamma);
      auto b = n.y == z ? std::nullopt : synthIn(n.p, z, delta, gamma);
      if (!a || !b) return std::nullopt;
      return Type::par(*a, *b);
    }
    case ProcKind::SendLit: {
      auto b = synthIn(n.p, z, delta, gamma);
      if (!b) return std::nullopt;
      return Type::tensor(Type::litInt(), *b);
    }
    case ProcKind::RecvLit: {
      auto b = synthIn(n.p, z, delta, gamma);
      if (!b) return std::nullopt;
      return Type::par(Type::dualLitInt(), *b);
    }
    case ProcKind::Select: {
      auto b = synthIn(n.p, z, delta, gamma);
      if (!b) return std::nullopt;
      return Type::plus({{n.label, *b}});
    }
    case ProcKind::Case: {
      Type::Branches bs;
      for (const auto& [l, b] : n.branches) {
        auto t = synthIn(b, z, delta, gamma);
        if (!t) return std::nullopt;
        bs.emplace(l, *t);
      }
      return Type::with(std::move(bs));
    }
    case ProcKind::Server: {
      auto a = synthIn(n.p, n.y, delta, gamma);
      if (!a) return std::nullopt;
      return Type::bang(*a);
    }
    case ProcKind::Quest: {
      // The continuation uses z unrestricted: look for a call to learn the type.
      std::optional<Type> found;
      std::function<void(const Process&)> walk = [&](const Process& q) {
        if (found) return;
        const ProcNode& m = q.node();
        if (m.kind == ProcKind::Call && m.x == z) {
          if (auto t = synthIn(m.p, m.y, delta, gamma)) found = dual(*t);
          return;
        }
        if (m.kind == ProcKind::Inact) return;
        walk(m.p);
        walk(m.q);
        for (const auto& [l, b] : m.branches) walk(b);
      };
      walk(n.p);
      if (!found) return std::nullopt;
      return Type::quest(*found);
    }
    default: return std::nullopt;
  }
}

}  // namespace

std::optional<Type> synthesizeType(const Process& p, const Name& z, const Context& delta, const Context& gamma) {
  return synthIn(p, z, delta, gamma);
}

QueueValueResult checkQueueValue(const QueueValue& v, const Context& gamma, const Context& delta,
                                 const std::optional<Type>& expected) {
  QueueValueResult r;
  auto err = [&](TypeErrorKind k, const char* rule, std::string m) {
    r.error = TypeError{k, rule, std::move(m), "0"};
    return r;
  };
  switch (v.kind) {
    case QueueValue::Kind::CloseToken: {
      if (!delta.empty()) return err(TypeErrorKind::EmptyContextRequired, "[Tcut-1]", "close token under nonempty context");
      QueueValueType t;
      t.kind = QueueValueType::Kind::Full;
      t.full = Type::bot();
      r.type = t;
      return r;
    }
    case QueueValue::Kind::Int: {
      QueueValueType t;
      t.kind = QueueValueType::Kind::Par;
      t.left = Type::dualLitInt();
      r.type = t;
      r.residual = delta;
      return r;
    }
    case QueueValue::Kind::Label: {
      if (!expected || expected->kind() != TypeKind::With)
        return err(TypeErrorKind::TypeMismatch, "[Tcut-⊕]", "label needs an expected &-type");
      if (!expected->branches().count(v.label))
        return err(TypeErrorKind::LabelMismatch, "[Tcut-⊕]", "label #" + v.label + " not in " + expected->str());
      QueueValueType t;
      t.kind = QueueValueType::Kind::With;
      t.branches = expected->branches();
      t.selected = v.label;
      r.type = t;
      r.residual = delta;
      return r;
    }
    case QueueValue::Kind::LinClos: {
      std::optional<Type> zt;
      if (expected) {
        if (expected->kind() != TypeKind::Par)
          return err(TypeErrorKind::TypeMismatch, "[Tcut-⊗]", "closure against " + expected->str());
        zt = dual(expected->left());
      } else {
        zt = synthesizeType(v.body, v.bound, delta, gamma);
        if (!zt) return err(TypeErrorKind::TypeMismatch, "[Tcut-⊗]", "cannot determine closure parameter type");
      }
      Context d = delta;
      d[v.bound] = *zt;
      auto rep = check(v.body, d, gamma);
      if (!rep.accept && !(rep.error && rep.error->rule == "[T0]")) {
        r.error = rep.error;
        return r;
      }
      if (rep.residual.count(v.bound)) return err(TypeErrorKind::LinearityViolation, "[Tcut-⊗]", "closure parameter unused");
      QueueValueType t;
      t.kind = QueueValueType::Kind::Par;
      t.left = dual(*zt);
      r.type = t;
      r.residual = rep.residual;
      return r;
    }
    case QueueValue::Kind::ExpClos: {
      if (!delta.empty())
        return err(TypeErrorKind::EmptyContextRequired, "[Tcut!]", "exponential closure under nonempty context");
      std::optional<Type> zt;
      if (expected) {
        if (expected->kind() != TypeKind::Quest)
          return err(TypeErrorKind::TypeMismatch, "[Tcut!]", "exponential closure against " + expected->str());
        zt = dual(expected->left());
      } else {
        zt = synthesizeType(v.body, v.bound, {}, gamma);
        if (!zt) return err(TypeErrorKind::TypeMismatch, "[Tcut!]", "cannot determine closure parameter type");
      }
      auto rep = check(v.body, Context{{v.bound, *zt}}, gamma);
      if (!rep.accept) {
        r.error = rep.error;
        return r;
      }
      QueueValueType t;
      t.kind = QueueValueType::Kind::Full;
      t.full = Type::quest(dual(*zt));
      r.type = t;
      return r;
    }
  }
  return r;
}

}  // namespace svm
