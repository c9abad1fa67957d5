#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace svm {

enum class TypeKind { One, Bot, Tensor, Par, Plus, With, Bang, Quest, Int, DualInt, Void };

enum class Polarity { Positive, Negative };

class IllFormedType : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TypeNode;

// Immutable, shared session type.
class Type {
 public:
  using Branches = std::map<std::string, Type>;

  Type();  // Void

  static Type one();
  static Type bot();
  static Type tensor(Type a, Type b);
  static Type par(Type a, Type b);
  static Type plus(Branches bs);
  static Type with(Branches bs);
  static Type bang(Type a);
  static Type quest(Type a);
  static Type litInt();
  static Type dualLitInt();
  static Type voidType();

  TypeKind kind() const;
  const Type& left() const;   // Tensor/Par left, Bang/Quest body
  const Type& right() const;  // Tensor/Par right
  const Branches& branches() const;

  bool isVoid() const { return kind() == TypeKind::Void; }
  std::size_t size() const;

  bool operator==(const Type& o) const;
  bool operator!=(const Type& o) const { return !(*this == o); }
  bool operator<(const Type& o) const;

  std::string str() const;

 private:
  explicit Type(std::shared_ptr<const TypeNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const TypeNode> node_;
};

struct TypeNode {
  TypeKind kind = TypeKind::Void;
  Type a, b;
  Type::Branches branches;
};

Type dual(const Type& a);
Polarity polarity(const Type& a);
inline bool isPositive(const Type& a) { return polarity(a) == Polarity::Positive; }
inline bool isNegative(const Type& a) { return polarity(a) == Polarity::Negative; }
inline Polarity flip(Polarity p) {
  return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

}  // namespace svm
