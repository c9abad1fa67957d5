#include "sessionvm/frontend.hpp"

#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace svm {

std::string Diagnostic::render(const std::string& filename, const std::string& text) const {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < begin && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::string s = filename + ":" + std::to_string(line) + ":" + std::to_string(col) + ": ";
  s += severity == Severity::Error ? "error: " : "warning: ";
  s += message;
  if (!rule.empty()) s += " " + rule;
  return s;
}

namespace {

enum class Tok {
  End,
  Ident,   // lower-case or any identifier
  Fresh,   // %n
  RefName, // %rn
  Int,
  Sym,     // punctuation, text holds the symbol
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::uint64_t num = 0;
  std::int64_t value = 0;
  std::size_t begin = 0, end = 0;
};

struct SyntaxError {
  std::size_t begin, end;
  std::string message;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto isIdStart = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto isId = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < s.size() && s[i + 1] == '-') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    Token t;
    t.begin = i;
    if (isIdStart(c)) {
      std::size_t j = i;
      while (j < s.size() && isId(s[j])) ++j;
      t.kind = Tok::Ident;
      t.text = s.substr(i, j - i);
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      t.kind = Tok::Int;
      t.text = s.substr(i, j - i);
      if (t.text.size() > 18) throw SyntaxError{i, j, "integer literal too large"};
      t.value = std::stoll(t.text);
      i = j;
    } else if (c == '%') {
      std::size_t j = i + 1;
      bool ref = j < s.size() && s[j] == 'r';
      if (ref) ++j;
      std::size_t k = j;
      while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
      if (k == j || k - j > 18) throw SyntaxError{i, k == i ? i + 1 : k, "malformed generated name"};
      t.kind = ref ? Tok::RefName : Tok::Fresh;
      t.num = std::stoull(s.substr(j, k - j));
      t.text = s.substr(i, k - i);
      i = k;
    } else {
      static const char* two[] = {"||"};
      bool matched = false;
      for (const char* op : two) {
        if (s.compare(i, 2, op) == 0) {
          t.kind = Tok::Sym;
          t.text = op;
          i += 2;
          matched = true;
          break;
        }
      }
      if (!matched) {
        static const std::string single = "{}()[]|;:.~!?#@*+&,/=";
        if (single.find(c) == std::string::npos) {
          throw SyntaxError{i, i + 1, std::string("unexpected character '") + c + "'"};
        }
        t.kind = Tok::Sym;
        t.text = std::string(1, c);
        ++i;
      }
    }
    t.end = i;
    out.push_back(std::move(t));
  }
  Token e;
  e.kind = Tok::End;
  e.begin = e.end = s.size();
  out.push_back(e);
  return out;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"cut", "pcut", "fwd", "close", "wait", "send", "recv",
                                          "case", "call", "def", "main", "bot", "int", "par",
                                          "void", "clos"};
  return k;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const ParseOptions& opts) : t_(std::move(toks)), opts_(opts) {}

  Process program() {
    if (peekIdent("def") || peekIdent("main")) {
      std::optional<std::size_t> mainAt;
      while (!at(Tok::End)) {
        if (peekIdent("def")) {
          next();
          const Token& nm = expect(Tok::Ident, "definition name");
          if (!isDefName(nm.text)) throw SyntaxError{nm.begin, nm.end, "definition names start with an upper-case letter"};
          if (defs_.count(nm.text)) throw SyntaxError{nm.begin, nm.end, "duplicate definition '" + nm.text + "'"};
          expectSym("=");
          defs_[nm.text] = pos_;
          skipProcess();
        } else if (peekIdent("main")) {
          const Token& m = next();
          if (mainAt) throw SyntaxError{m.begin, m.end, "duplicate main"};
          expectSym("=");
          mainAt = pos_;
          skipProcess();
        } else {
          fail("expected 'def' or 'main'");
        }
      }
      if (!mainAt) throw SyntaxError{0, 0, "missing main"};
      pos_ = *mainAt;
      Process p = proc();
      return p;
    }
    Process p = proc();
    if (!at(Tok::End)) fail("unexpected trailing input");
    return p;
  }

  Type typeOnly() {
    Type t = type();
    if (!at(Tok::End)) fail("unexpected trailing input");
    return t;
  }

 private:
  std::vector<Token> t_;
  ParseOptions opts_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  std::map<std::string, std::size_t> defs_;
  std::map<std::string, Process> expanded_;
  std::vector<std::string> expanding_;

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& pp) : p(pp) {
      if (++p.depth_ > 400) p.fail("nesting too deep");
    }
    ~DepthGuard() { --p.depth_; }
  };

  static bool isDefName(const std::string& s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
  }

  const Token& cur() const { return t_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool peekSym(const char* s, std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, t_.size() - 1);
    return t_[i].kind == Tok::Sym && t_[i].text == s;
  }
  bool peekIdent(const char* s) const { return at(Tok::Ident) && cur().text == s; }
  const Token& next() {
    const Token& t = t_[pos_];
    if (pos_ + 1 < t_.size()) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError{cur().begin, std::max(cur().end, cur().begin), msg};
  }
  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail(std::string("expected ") + what);
    return next();
  }
  void expectSym(const char* s) {
    if (!peekSym(s)) fail(std::string("expected '") + s + "'");
    next();
  }

  // Skips a definition body: everything up to the next top-level def/main.
  void skipProcess() {
    int nest = 0;
    std::size_t start = pos_;
    while (!at(Tok::End)) {
      if (nest == 0 && pos_ > start && (peekIdent("def") || peekIdent("main"))) break;
      if (peekSym("{") || peekSym("(") || peekSym("[")) ++nest;
      if (peekSym("}") || peekSym(")") || peekSym("]")) --nest;
      next();
    }
    if (pos_ == start) fail("expected a process");
  }

  Name name() {
    const Token& t = cur();
    if (t.kind == Tok::Ident) {
      if (keywords().count(t.text) || isDefName(t.text)) fail("expected a name, found '" + t.text + "'");
      next();
      return Name(t.text);
    }
    if (t.kind == Tok::Fresh) {
      next();
      return Name::fresh(t.num);
    }
    if (t.kind == Tok::RefName) {
      next();
      return Name::ref(t.num);
    }
    fail("expected a name");
  }

  std::string label() {
    const Token& t = cur();
    if (t.kind != Tok::Ident) fail("expected a label");
    next();
    return t.text;
  }

  Process proc() {
    DepthGuard g(*this);
    Process p = seq();
    while (peekSym("||")) {
      next();
      Process q = seq();
      p = Process::mix(p, q);
    }
    return p;
  }

  Process seq() {
    DepthGuard g(*this);
    const Token& t = cur();
    if (t.kind == Tok::Int) {
      if (t.value != 0) fail("expected a process");
      next();
      return Process::inact();
    }
    if (peekSym("(")) {
      next();
      Process p = proc();
      expectSym(")");
      return p;
    }
    if (peekSym("{")) return renaming();
    if (peekSym("#")) {
      next();
      std::string l = label();
      Name x = name();
      expectSym(";");
      return Process::select(l, x, seq());
    }
    if (peekSym("!")) {
      next();
      Name x = name();
      expectSym("(");
      Name y = name();
      expectSym(")");
      expectSym(";");
      return Process::server(x, y, seq());
    }
    if (peekSym("?")) {
      next();
      Name x = name();
      expectSym(";");
      return Process::quest(x, seq());
    }
    if (t.kind == Tok::Ident) {
      const std::string kw = t.text;
      if (isDefName(kw)) return reference();
      if (kw == "fwd") {
        next();
        Name x = name();
        Name y = name();
        return Process::fwd(x, y);
      }
      if (kw == "close") {
        next();
        return Process::close(name());
      }
      if (kw == "wait") {
        next();
        Name x = name();
        expectSym(";");
        return Process::wait(x, seq());
      }
      if (kw == "send") {
        next();
        Name x = name();
        expectSym("(");
        if (at(Tok::Int)) {
          std::int64_t v = next().value;
          expectSym(")");
          expectSym(";");
          return Process::sendLit(x, v, seq());
        }
        Name y = name();
        expectSym(".");
        Process p = proc();
        expectSym(")");
        expectSym(";");
        return Process::send(x, y, p, seq());
      }
      if (kw == "recv") {
        next();
        Name x = name();
        expectSym("(");
        Name z = name();
        bool lit = false;
        if (peekSym(":")) {
          next();
          if (!peekIdent("int")) fail("expected 'int'");
          next();
          lit = true;
        }
        expectSym(")");
        expectSym(";");
        Process p = seq();
        return lit ? Process::recvLit(x, z, p) : Process::recv(x, z, p);
      }
      if (kw == "call") {
        next();
        Name x = name();
        expectSym("(");
        Name z = name();
        expectSym(")");
        expectSym(";");
        return Process::call(x, z, seq());
      }
      if (kw == "case") {
        next();
        Name x = name();
        expectSym("{");
        Process::Branches bs;
        if (!peekSym("|")) fail("expected '|#label:'");
        while (peekSym("|")) {
          next();
          expectSym("#");
          const Token& lt = cur();
          std::string l = label();
          expectSym(":");
          Process b = proc();
          if (!bs.emplace(l, b).second) throw SyntaxError{lt.begin, lt.end, "duplicate label '#" + l + "'"};
        }
        expectSym("}");
        return Process::caseOf(x, std::move(bs));
      }
      if (kw == "cut" && peekSym("!", 1)) {
        next();
        next();
        expectSym("{");
        Name y = name();
        expectSym(".");
        Process p = proc();
        expectSym("|");
        expectSym("!");
        Name x = name();
        expectSym(":");
        Type a = type();
        expectSym("|");
        Process q = proc();
        expectSym("}");
        return Process::cutBang(y, p, x, a, q);
      }
      if (kw == "cut" || kw == "pcut") {
        next();
        return cutBody(kw == "pcut");
      }
    }
    fail("expected a process");
  }

  Process reference() {
    const Token& t = next();
    auto it = defs_.find(t.text);
    if (it == defs_.end()) throw SyntaxError{t.begin, t.end, "unknown definition '" + t.text + "'"};
    auto done = expanded_.find(t.text);
    if (done != expanded_.end()) return done->second;
    for (const auto& e : expanding_)
      if (e == t.text) throw SyntaxError{t.begin, t.end, "cyclic definition '" + t.text + "'"};
    expanding_.push_back(t.text);
    std::size_t save = pos_;
    pos_ = it->second;
    Process body = proc();
    if (!(at(Tok::End) || peekIdent("def") || peekIdent("main"))) fail("unexpected input after definition body");
    pos_ = save;
    expanding_.pop_back();
    expanded_[t.text] = body;
    return body;
  }

  Process renaming() {
    expectSym("{");
    Renaming r;
    for (;;) {
      Name to = name();
      expectSym("/");
      Name from = name();
      r[from] = to;
      if (peekSym(",")) {
        next();
        continue;
      }
      break;
    }
    expectSym("}");
    Process p = seq();
    NameSupply s = supplyAbove(p);
    return rename(p, r, s);
  }

  Process cutBody(bool concurrent) {
    const Token& openTok = cur();
    expectSym("{");
    Process p = proc();
    expectSym("|");
    bool markL = false, markR = false;
    if (peekSym("~") && !peekIdentAt(1, "int")) {
      next();
      markL = true;
    }
    Name x = name();
    expectSym(":");
    Type a = type();
    bool buffered = markL;
    Queue q;
    if (peekSym("[")) {
      buffered = true;
      q = queue();
    }
    std::optional<Name> y;
    std::optional<Type> b;
    if (!peekSym("|")) {
      buffered = true;
      if (peekSym("~")) {
        next();
        markR = true;
      }
      y = name();
      if (peekSym(":")) {
        next();
        b = type();
      }
    }
    expectSym("|");
    Process r = proc();
    expectSym("}");
    if (!buffered) return concurrent ? Process::pcut(p, x, a, r) : Process::cut(p, x, a, r);
    if (!opts_.allowRuntimeSyntax)
      throw SyntaxError{openTok.begin, cur().begin, "buffered cut syntax requires --allow-runtime-syntax"};
    if (markL && markR) throw SyntaxError{openTok.begin, cur().begin, "buffered cut with two writer marks"};
    if (!y) y = x;
    if (!b) {
      if (a.isVoid()) throw SyntaxError{openTok.begin, cur().begin, "reader type required when writer is void"};
      b = dual(a);
    }
    Side w;
    if (markL) {
      w = Side::Left;
    } else if (markR) {
      w = Side::Right;
    } else {
      if (!q.empty()) throw SyntaxError{openTok.begin, cur().begin, "nonempty buffered cut needs a writer mark"};
      if (a.isVoid()) throw SyntaxError{openTok.begin, cur().begin, "cannot polarize a void endpoint"};
      w = isPositive(a) ? Side::Left : Side::Right;
    }
    return Process::bufCut(p, x, a, std::move(q), *y, *b, r, w, concurrent);
  }

  bool peekIdentAt(std::size_t ahead, const char* s) const {
    std::size_t i = std::min(pos_ + ahead, t_.size() - 1);
    return t_[i].kind == Tok::Ident && t_[i].text == s;
  }

  Queue queue() {
    expectSym("[");
    Queue q;
    if (peekSym("]")) {
      next();
      return q;
    }
    for (;;) {
      q.push_back(qval());
      if (peekSym("@")) {
        next();
        continue;
      }
      break;
    }
    expectSym("]");
    return q;
  }

  QueueValue qval() {
    if (at(Tok::Int)) return QueueValue::intValue(next().value);
    if (peekSym("#")) {
      next();
      std::string l = label();
      if (l == "close") return QueueValue::closeToken();
      return QueueValue::labelValue(l);
    }
    bool exp = false;
    if (peekSym("!")) {
      next();
      exp = true;
    }
    if (!peekIdent("clos")) fail("expected a queue value");
    next();
    expectSym("(");
    Name z = name();
    expectSym(".");
    Process p = proc();
    expectSym(")");
    return exp ? QueueValue::expClos(z, p) : QueueValue::linClos(z, p);
  }

  Type type() {
    DepthGuard g(*this);
    Type a = typePrefix();
    if (peekSym("*")) {
      next();
      return Type::tensor(a, type());
    }
    if (peekIdent("par")) {
      next();
      return Type::par(a, type());
    }
    return a;
  }

  Type typePrefix() {
    DepthGuard g(*this);
    if (peekSym("!")) {
      next();
      return Type::bang(typePrefix());
    }
    if (peekSym("?")) {
      next();
      return Type::quest(typePrefix());
    }
    if (at(Tok::Int)) {
      if (cur().value != 1) fail("expected a type");
      next();
      return Type::one();
    }
    if (peekIdent("bot")) {
      next();
      return Type::bot();
    }
    if (peekIdent("int")) {
      next();
      return Type::litInt();
    }
    if (peekIdent("void")) {
      next();
      return Type::voidType();
    }
    if (peekSym("~")) {
      next();
      if (!peekIdent("int")) fail("expected 'int' after '~'");
      next();
      return Type::dualLitInt();
    }
    if (peekSym("(")) {
      next();
      Type t = type();
      expectSym(")");
      return t;
    }
    if (peekSym("+") || peekSym("&")) {
      bool plus = peekSym("+");
      next();
      expectSym("{");
      Type::Branches bs;
      for (;;) {
        if (peekSym("#")) next();
        const Token& lt = cur();
        std::string l = label();
        expectSym(":");
        Type b = type();
        if (!bs.emplace(l, b).second) throw SyntaxError{lt.begin, lt.end, "duplicate label '#" + l + "'"};
        if (peekSym(",")) {
          next();
          continue;
        }
        break;
      }
      expectSym("}");
      return plus ? Type::plus(std::move(bs)) : Type::with(std::move(bs));
    }
    fail("expected a type");
  }
};

ParseResult runParser(const std::string& text, const ParseOptions& opts, bool wholeProgram) {
  ParseResult r;
  try {
    Parser p(lex(text), opts);
    r.process = wholeProgram ? p.program() : p.program();
  } catch (const SyntaxError& e) {
    Diagnostic d;
    d.begin = std::min(e.begin, text.size());
    d.end = std::min(std::max(e.end, d.begin), text.size());
    d.message = e.message;
    r.diagnostics.push_back(std::move(d));
  } catch (const IllFormedType& e) {
    Diagnostic d;
    d.message = e.what();
    r.diagnostics.push_back(std::move(d));
  }
  return r;
}

// ----------------------------------------------------------------------------
// Printer

void printProc(const Process& p, std::string& out);

void printSeq(const Process& p, std::string& out) {
  if (p.kind() == ProcKind::Mix) {
    out += '(';
    printProc(p, out);
    out += ')';
  } else {
    printProc(p, out);
  }
}

void printValue(const QueueValue& v, std::string& out) {
  switch (v.kind) {
    case QueueValue::Kind::CloseToken: out += "#close"; break;
    case QueueValue::Kind::Label: out += "#" + v.label; break;
    case QueueValue::Kind::Int: out += std::to_string(v.value); break;
    case QueueValue::Kind::LinClos:
    case QueueValue::Kind::ExpClos:
      out += v.kind == QueueValue::Kind::LinClos ? "clos(" : "!clos(";
      out += v.bound.str() + ". ";
      printProc(v.body, out);
      out += ')';
      break;
  }
}

void printQueue(const Queue& q, std::string& out) {
  out += '[';
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) out += " @ ";
    printValue(q[i], out);
  }
  out += ']';
}

void printProc(const Process& p, std::string& out) {
  const ProcNode& n = p.node();
  switch (n.kind) {
    case ProcKind::Inact: out += '0'; break;
    case ProcKind::Mix:
      printProc(n.p, out);
      out += " || ";
      printSeq(n.q, out);
      break;
    case ProcKind::Fwd: out += "fwd " + n.x.str() + " " + n.y.str(); break;
    case ProcKind::Cut:
    case ProcKind::PCut:
      out += n.kind == ProcKind::Cut ? "cut { " : "pcut { ";
      printProc(n.p, out);
      out += " |" + n.x.str() + ":" + n.tx.str() + "| ";
      printProc(n.q, out);
      out += " }";
      break;
    case ProcKind::BufCut:
      out += n.concurrent ? "pcut { " : "cut { ";
      printProc(n.p, out);
      out += " |";
      if (n.writer == Side::Left) out += '~';
      out += n.x.str() + ":" + n.tx.str() + " ";
      printQueue(n.queue, out);
      out += ' ';
      if (n.writer == Side::Right) out += '~';
      out += n.y.str() + ":" + n.ty.str() + "| ";
      printProc(n.q, out);
      out += " }";
      break;
    case ProcKind::CutBang:
      out += "cut! { " + n.y.str() + ". ";
      printProc(n.p, out);
      out += " |!" + n.x.str() + ":" + n.tx.str() + "| ";
      printProc(n.q, out);
      out += " }";
      break;
    case ProcKind::Close: out += "close " + n.x.str(); break;
    case ProcKind::Wait:
      out += "wait " + n.x.str() + "; ";
      printSeq(n.p, out);
      break;
    case ProcKind::Send:
      out += "send " + n.x.str() + "(" + n.y.str() + ". ";
      printProc(n.p, out);
      out += "); ";
      printSeq(n.q, out);
      break;
    case ProcKind::SendLit:
      out += "send " + n.x.str() + "(" + std::to_string(n.lit) + "); ";
      printSeq(n.p, out);
      break;
    case ProcKind::Recv:
      out += "recv " + n.x.str() + "(" + n.y.str() + "); ";
      printSeq(n.p, out);
      break;
    case ProcKind::RecvLit:
      out += "recv " + n.x.str() + "(" + n.y.str() + ":int); ";
      printSeq(n.p, out);
      break;
    case ProcKind::Select:
      out += "#" + n.label + " " + n.x.str() + "; ";
      printSeq(n.p, out);
      break;
    case ProcKind::Case:
      out += "case " + n.x.str() + " {";
      for (const auto& [l, b] : n.branches) {
        out += " |#" + l + ": ";
        printProc(b, out);
      }
      out += " }";
      break;
    case ProcKind::Server:
      out += "!" + n.x.str() + "(" + n.y.str() + "); ";
      printSeq(n.p, out);
      break;
    case ProcKind::Quest:
      out += "?" + n.x.str() + "; ";
      printSeq(n.p, out);
      break;
    case ProcKind::Call:
      out += "call " + n.x.str() + "(" + n.y.str() + "); ";
      printSeq(n.p, out);
      break;
  }
}

}  // namespace

ParseResult parse(const SourceProgram& src, const ParseOptions& opts) {
  return runParser(src.text, opts, true);
}

ParseResult parseProcess(const std::string& text, const ParseOptions& opts) {
  return runParser(text, opts, false);
}

TypeParseResult parseType(const std::string& text) {
  TypeParseResult r;
  try {
    Parser p(lex(text), {});
    r.type = p.typeOnly();
  } catch (const SyntaxError& e) {
    Diagnostic d;
    d.begin = std::min(e.begin, text.size());
    d.end = std::min(std::max(e.end, d.begin), text.size());
    d.message = e.message;
    r.diagnostics.push_back(std::move(d));
  } catch (const IllFormedType& e) {
    Diagnostic d;
    d.message = e.what();
    r.diagnostics.push_back(std::move(d));
  }
  return r;
}

Process parseOrThrow(const std::string& text, bool allowRuntimeSyntax) {
  ParseOptions o;
  o.allowRuntimeSyntax = allowRuntimeSyntax;
  auto r = parseProcess(text, o);
  if (!r.ok()) throw std::runtime_error("parse error: " + r.diagnostics.front().message + " in: " + text);
  return *r.process;
}

Type typeOrThrow(const std::string& text) {
  auto r = parseType(text);
  if (!r.type) throw std::runtime_error("type parse error: " + r.diagnostics.front().message);
  return *r.type;
}

std::string prettyPrint(const Process& p) {
  std::string s;
  printProc(p, s);
  return s;
}

std::string prettyPrint(const QueueValue& v) {
  std::string s;
  printValue(v, s);
  return s;
}

std::string prettyPrint(const Queue& q) {
  std::string s;
  printQueue(q, s);
  return s;
}

}  // namespace svm
