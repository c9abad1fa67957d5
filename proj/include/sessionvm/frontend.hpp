#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sessionvm/process.hpp"

namespace svm {

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string message;
  std::string rule;

  std::string render(const std::string& filename, const std::string& text) const;
};

struct SourceProgram {
  std::string text;
  std::string filename = "<input>";
};

struct ParseOptions {
  bool allowRuntimeSyntax = false;
};

struct ParseResult {
  std::optional<Process> process;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return process.has_value(); }
};

ParseResult parse(const SourceProgram& src, const ParseOptions& opts = {});
ParseResult parseProcess(const std::string& text, const ParseOptions& opts = {});

struct TypeParseResult {
  std::optional<Type> type;
  std::vector<Diagnostic> diagnostics;
};
TypeParseResult parseType(const std::string& text);

// Convenience for tests and tools: throws std::runtime_error on failure.
Process parseOrThrow(const std::string& text, bool allowRuntimeSyntax = true);
Type typeOrThrow(const std::string& text);

std::string prettyPrint(const Process& p);
std::string prettyPrint(const QueueValue& v);
std::string prettyPrint(const Queue& q);

}  // namespace svm
