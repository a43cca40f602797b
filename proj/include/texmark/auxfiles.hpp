#pragma once

// Encoders and decoders for the auxiliary streams written during a build:
// table of contents (.toc), label checkpoint (.lab) and index (.inx).
// Every encoder returns one line without its terminating newline.

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "texmark/numbering.hpp"

namespace texmark {

/// A string split at its `$` math delimiters.  Math segments are carried
/// verbatim; text segments pass through unchanged.
struct ProtectedString {
  struct Segment {
    enum class Kind { Text, Math };
    Kind kind = Kind::Text;
    std::string text;

    bool operator==(const Segment&) const = default;
  };

  std::vector<Segment> segments;

  std::string render() const;
  bool operator==(const ProtectedString&) const = default;
};

ProtectedString protect_math(std::string_view raw);

struct TocEntry {
  std::string label;
  ProtectedString title;
  std::string page;
};

struct IndexEntry {
  ProtectedString term;
  std::string page;
};

struct LabDefine {
  std::string csname;
  std::string value;
  bool operator==(const LabDefine&) const = default;
};
struct LabCounterSave {
  std::string reg;
  long long value = 0;
  bool operator==(const LabCounterSave&) const = default;
};
struct LabAdvancePage {
  bool operator==(const LabAdvancePage&) const = default;
};
using LabLine = std::variant<LabDefine, LabCounterSave, LabAdvancePage>;

std::string emit_toc_header();
std::string emit_toc_line(const TocEntry& entry);
std::string emit_index_line(const IndexEntry& entry);

std::string serialize(const LabLine& line);

/// The six checkpoint lines: five register saves then the page advance.
std::vector<LabLine> emit_checkpoint(const CounterState& state);

/// Define lines for every binding in `labels.history()`; empty values are
/// skipped.
std::vector<LabLine> emit_label_defines(const LabelTable& labels);

/// Result of re-reading a label file on top of a base state.
struct LabReplay {
  CounterState state;
  LabelTable labels;
  std::vector<std::string> warnings;
};

/// Replays `lines` in order.  Blank lines are ignored.  Throws
/// MalformedLabLine carrying the 1-based line number.
LabReplay parse_lab(std::span<const std::string> lines, const CounterState& base = {});

/// Reads one `<term> @<page>.` line (the term may itself contain " @").
IndexEntry parse_index_line(std::string_view line);

/// Merges index lines by term into `<term> @<p1>, <p2>.` lines.  Terms are
/// ordered case-insensitively (ties by bytes); roman folios precede arabic
/// ones and duplicate pages collapse.  Throws ParseError naming the line.
std::vector<std::string> sort_index(std::span<const std::string> lines);

/// Splits file contents into lines (a trailing newline does not start a line).
std::vector<std::string> split_lines(std::string_view text);

/// Joins lines, terminating each with '\n'.
std::string join_lines(std::span<const std::string> lines);

}  // namespace texmark
