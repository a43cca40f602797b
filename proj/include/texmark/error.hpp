#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace texmark {

/// 1-based line and column in a source file.
struct SourcePos {
  int line = 0;
  int column = 0;

  bool valid() const { return line > 0; }
  auto operator<=>(const SourcePos&) const = default;
};

enum class ErrorCode {
  StructureConflict,
  AppendixOverflow,
  IncorrectLabel,
  ParseError,
  AlphaOverflow,
  UnbalancedMath,
  UnbalancedGroup,
  MissingDelimiter,
  NonAscii,
  MalformedLabLine,
  UnrecognisedReference,
  MalformedRange,
  DuplicateField,
  DuplicateKey,
  MalformedEntry,
  MissingField,
  UndefinedReference,
  InvalidCitation,
  NotConverged,
  Config,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::optional<SourcePos> pos = std::nullopt);

  ErrorCode code() const { return code_; }
  const std::optional<SourcePos>& pos() const { return pos_; }
  const std::string& detail() const { return detail_; }

  /// Returns a copy carrying `pos` unless a position is already attached.
  Error at(SourcePos pos) const;

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<SourcePos> pos_;
};

}  // namespace texmark
