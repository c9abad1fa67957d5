#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace svm {

// Source identifiers, generated names (%n) and heap-reference names (%rN)
// live in disjoint namespaces.
struct Name {
  enum class Kind : std::uint8_t { Source, Fresh, Ref };

  Kind kind = Kind::Source;
  std::string text;
  std::uint64_t id = 0;

  Name() = default;
  Name(std::string s) : text(std::move(s)) {}  // NOLINT(google-explicit-constructor)
  Name(const char* s) : text(s) {}             // NOLINT(google-explicit-constructor)

  static Name fresh(std::uint64_t n) {
    Name r;
    r.kind = Kind::Fresh;
    r.id = n;
    return r;
  }
  static Name ref(std::uint64_t n) {
    Name r;
    r.kind = Kind::Ref;
    r.id = n;
    return r;
  }

  bool isSource() const { return kind == Kind::Source; }
  bool empty() const { return kind == Kind::Source && text.empty(); }

  std::string str() const {
    switch (kind) {
      case Kind::Fresh: return "%" + std::to_string(id);
      case Kind::Ref: return "%r" + std::to_string(id);
      default: return text;
    }
  }

  auto operator<=>(const Name&) const = default;
  bool operator==(const Name&) const = default;
};

// Monotonic fresh-name source, scoped to one run.
class NameSupply {
 public:
  explicit NameSupply(std::uint64_t start = 1) : next_(start) {}
  Name fresh() { return Name::fresh(next_++); }
  std::uint64_t peek() const { return next_; }
  void bumpAbove(const Name& n) {
    if (n.kind == Name::Kind::Fresh && n.id >= next_) next_ = n.id + 1;
  }

 private:
  std::uint64_t next_;
};

}  // namespace svm

template <>
struct std::hash<svm::Name> {
  std::size_t operator()(const svm::Name& n) const noexcept {
    return std::hash<std::string>{}(n.text) ^ (std::hash<std::uint64_t>{}(n.id) * 31u) ^
           static_cast<std::size_t>(n.kind);
  }
};
