#include "texmark/error.hpp"

namespace texmark {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::StructureConflict: return "StructureConflict";
    case ErrorCode::AppendixOverflow: return "AppendixOverflow";
    case ErrorCode::IncorrectLabel: return "IncorrectLabel";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AlphaOverflow: return "AlphaOverflow";
    case ErrorCode::UnbalancedMath: return "UnbalancedMath";
    case ErrorCode::UnbalancedGroup: return "UnbalancedGroup";
    case ErrorCode::MissingDelimiter: return "MissingDelimiter";
    case ErrorCode::NonAscii: return "NonAscii";
    case ErrorCode::MalformedLabLine: return "MalformedLabLine";
    case ErrorCode::UnrecognisedReference: return "UnrecognisedReference";
    case ErrorCode::MalformedRange: return "MalformedRange";
    case ErrorCode::DuplicateField: return "DuplicateField";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::MalformedEntry: return "MalformedEntry";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::UndefinedReference: return "UndefinedReference";
    case ErrorCode::InvalidCitation: return "InvalidCitation";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::Config: return "Config";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    const std::optional<SourcePos>& pos) {
  std::string out;
  if (pos && pos->valid()) {
    out += std::to_string(pos->line) + ":" + std::to_string(pos->column) + ": ";
  }
  out += to_string(code);
  if (!message.empty()) {
    out += ": ";
    out += message;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::optional<SourcePos> pos)
    : std::runtime_error(compose(code, message, pos)),
      code_(code),
      detail_(std::move(message)),
      pos_(pos) {}

Error Error::at(SourcePos pos) const {
  if (pos_ && pos_->valid()) return *this;
  return Error(code_, detail_, pos);
}

}  // namespace texmark
