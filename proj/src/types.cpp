#include "sessionvm/types.hpp"

namespace svm {

namespace {

std::shared_ptr<const TypeNode> make(TypeKind k, Type a = {}, Type b = {}, Type::Branches bs = {}) {
  auto n = std::make_shared<TypeNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  n->branches = std::move(bs);
  return n;
}

const Type& voidRef() {
  static const Type v;
  return v;
}

const Type::Branches& noBranches() {
  static const Type::Branches b;
  return b;
}

}  // namespace

Type::Type() = default;

Type Type::one() {
  static const Type t(make(TypeKind::One));
  return t;
}
Type Type::bot() {
  static const Type t(make(TypeKind::Bot));
  return t;
}
Type Type::tensor(Type a, Type b) { return Type(make(TypeKind::Tensor, std::move(a), std::move(b))); }
Type Type::par(Type a, Type b) { return Type(make(TypeKind::Par, std::move(a), std::move(b))); }
Type Type::plus(Branches bs) {
  if (bs.empty()) throw IllFormedType("empty label set in +{}");
  return Type(make(TypeKind::Plus, {}, {}, std::move(bs)));
}
Type Type::with(Branches bs) {
  if (bs.empty()) throw IllFormedType("empty label set in &{}");
  return Type(make(TypeKind::With, {}, {}, std::move(bs)));
}
Type Type::bang(Type a) { return Type(make(TypeKind::Bang, std::move(a))); }
Type Type::quest(Type a) { return Type(make(TypeKind::Quest, std::move(a))); }
Type Type::litInt() {
  static const Type t(make(TypeKind::Int));
  return t;
}
Type Type::dualLitInt() {
  static const Type t(make(TypeKind::DualInt));
  return t;
}
Type Type::voidType() { return Type(); }

TypeKind Type::kind() const { return node_ ? node_->kind : TypeKind::Void; }
const Type& Type::left() const { return node_ ? node_->a : voidRef(); }
const Type& Type::right() const { return node_ ? node_->b : voidRef(); }
const Type::Branches& Type::branches() const { return node_ ? node_->branches : noBranches(); }

std::size_t Type::size() const {
  switch (kind()) {
    case TypeKind::Void: return 0;
    case TypeKind::Tensor:
    case TypeKind::Par: return 1 + left().size() + right().size();
    case TypeKind::Bang:
    case TypeKind::Quest: return 1 + left().size();
    case TypeKind::Plus:
    case TypeKind::With: {
      std::size_t s = 1;
      for (const auto& [l, t] : branches()) s += t.size();
      return s;
    }
    default: return 1;
  }
}

bool Type::operator==(const Type& o) const {
  if (node_ == o.node_) return true;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case TypeKind::Tensor:
    case TypeKind::Par: return left() == o.left() && right() == o.right();
    case TypeKind::Bang:
    case TypeKind::Quest: return left() == o.left();
    case TypeKind::Plus:
    case TypeKind::With: return branches() == o.branches();
    default: return true;
  }
}

bool Type::operator<(const Type& o) const { return str() < o.str(); }

namespace {

bool atomic(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Tensor:
    case TypeKind::Par: return false;
    default: return true;
  }
}

void print(const Type& t, std::string& out) {
  auto sub = [&](const Type& s) {
    if (atomic(s)) {
      print(s, out);
    } else {
      out += '(';
      print(s, out);
      out += ')';
    }
  };
  switch (t.kind()) {
    case TypeKind::One: out += "1"; break;
    case TypeKind::Bot: out += "bot"; break;
    case TypeKind::Int: out += "int"; break;
    case TypeKind::DualInt: out += "~int"; break;
    case TypeKind::Void: out += "void"; break;
    case TypeKind::Tensor:
    case TypeKind::Par:
      sub(t.left());
      out += t.kind() == TypeKind::Tensor ? " * " : " par ";
      print(t.right(), out);
      break;
    case TypeKind::Bang:
      out += '!';
      sub(t.left());
      break;
    case TypeKind::Quest:
      out += '?';
      sub(t.left());
      break;
    case TypeKind::Plus:
    case TypeKind::With: {
      out += t.kind() == TypeKind::Plus ? "+{" : "&{";
      bool first = true;
      for (const auto& [l, b] : t.branches()) {
        if (!first) out += ", ";
        first = false;
        out += '#';
        out += l;
        out += ": ";
        print(b, out);
      }
      out += '}';
      break;
    }
  }
}

}  // namespace

std::string Type::str() const {
  std::string s;
  print(*this, s);
  return s;
}

Type dual(const Type& a) {
  switch (a.kind()) {
    case TypeKind::One: return Type::bot();
    case TypeKind::Bot: return Type::one();
    case TypeKind::Int: return Type::dualLitInt();
    case TypeKind::DualInt: return Type::litInt();
    case TypeKind::Tensor: return Type::par(dual(a.left()), dual(a.right()));
    case TypeKind::Par: return Type::tensor(dual(a.left()), dual(a.right()));
    case TypeKind::Bang: return Type::quest(dual(a.left()));
    case TypeKind::Quest: return Type::bang(dual(a.left()));
    case TypeKind::Plus:
    case TypeKind::With: {
      Type::Branches bs;
      for (const auto& [l, t] : a.branches()) bs.emplace(l, dual(t));
      return a.kind() == TypeKind::Plus ? Type::with(std::move(bs)) : Type::plus(std::move(bs));
    }
    case TypeKind::Void: break;
  }
  throw IllFormedType("dual of void");
}

Polarity polarity(const Type& a) {
  switch (a.kind()) {
    case TypeKind::One:
    case TypeKind::Tensor:
    case TypeKind::Plus:
    case TypeKind::Bang:
    case TypeKind::Int: return Polarity::Positive;
    case TypeKind::Bot:
    case TypeKind::Par:
    case TypeKind::With:
    case TypeKind::Quest:
    case TypeKind::DualInt: return Polarity::Negative;
    case TypeKind::Void: break;
  }
  throw IllFormedType("polarity of void");
}

}  // namespace svm
